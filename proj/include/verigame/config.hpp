#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "verigame/agents.hpp"
#include "verigame/economics.hpp"
#include "verigame/protocol.hpp"
#include "verigame/types.hpp"

namespace verigame::sim {

// Flat dotted-key configuration text: one `key = value` per line, `#`
// comments. Lists are comma-separated; integer spans may use `lo..hi`.
class FlatConfig {
 public:
  static FlatConfig parse(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated values; integer items may be `lo..hi` spans.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<Amount> get_amount_list(const std::string& key) const;

  // Keys of the form `prefix.N.suffix`; returns the distinct N in order.
  std::vector<int> indexed_groups(const std::string& prefix) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct AgentSpec {
  agents::AgentProfile profile;  // id holds the group label
  int count = 1;
  Amount initial_balance = 0;
  double honest_error_rate = 0.0;  // accidental mistakes for honest solvers
};

struct ScenarioConfig {
  std::uint64_t seed = 42;
  Tick horizon = 1'000'000'000;
  double beta = 0.5;

  int task_count = 1;
  Amount task_fee = 0;
  Amount solver_bond = 0;  // 0 means derive via min_solver_bond
  double bond_margin = 0.0;
  double bond_reference_prior = 0.5;
  Tick challenge_window = 3;
  Tick ruling_window = 3;
  Tick commit_window = 2;
  Tick reveal_window = 2;
  int quorum_size = 3;
  int max_depth = 3;
  protocol::SelectionPolicy selection = protocol::SelectionPolicy::UniformRandom;
  std::optional<std::string> escalation_target;

  Amount falsification_cost = 2;  // F_0, the default detection cost
  double cost_growth = 1.0;       // per-depth challenge cost factor
  double discount = 1.0;
  // Inputs for the analytic deviation flags attached to sweeps and reports.
  double reference_prior = 0.5;
  Amount reference_gain = 3;
  Amount reference_fee = 1;

  econ::BondSizingPolicy sizing{0.5, 1, 0.1, 1.0};
  double challenger_visibility = 1.0;

  std::vector<AgentSpec> agents;

  // Resolved solver bond (explicit or derived).
  Amount effective_solver_bond() const;
  void validate() const;

  static ScenarioConfig from_flat(const FlatConfig& flat);
  static ScenarioConfig parse(const std::string& text);
};

}  // namespace verigame::sim
