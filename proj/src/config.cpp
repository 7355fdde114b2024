#include "verigame/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace verigame::sim {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    fail(ErrorCode::InvalidConfig, key + ": not an integer: " + value);
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    fail(ErrorCode::InvalidConfig, key + ": not a number: " + value);
  return v;
}

}  // namespace

FlatConfig FlatConfig::parse(const std::string& text) {
  FlatConfig config;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::InvalidConfig,
           "line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::InvalidConfig,
           "line " + std::to_string(line_no) + ": empty key");
    config.values_[key] = value;
  }
  return config;
}

void FlatConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t FlatConfig::get_int(const std::string& key,
                                 std::int64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(key, it->second);
}

std::uint64_t FlatConfig::get_uint(const std::string& key,
                                   std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (errno != 0 || end == it->second.c_str() || *end != '\0')
    fail(ErrorCode::InvalidConfig, key + ": not an unsigned integer");
  return v;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  fail(ErrorCode::InvalidConfig, key + ": not a boolean: " + it->second);
}

std::vector<std::string> FlatConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  auto it = values_.find(key);
  if (it == values_.end()) return out;
  std::istringstream stream(it->second);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t dots = item.find("..");
    if (dots != std::string::npos) {
      std::int64_t lo = parse_int(key, trim(item.substr(0, dots)));
      std::int64_t hi = parse_int(key, trim(item.substr(dots + 2)));
      if (hi < lo) fail(ErrorCode::InvalidConfig, key + ": empty span " + item);
      for (std::int64_t v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
    } else {
      out.push_back(item);
    }
  }
  return out;
}

std::vector<double> FlatConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_list(key)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<Amount> FlatConfig::get_amount_list(const std::string& key) const {
  std::vector<Amount> out;
  for (const auto& item : get_list(key)) out.push_back(parse_int(key, item));
  return out;
}

std::vector<int> FlatConfig::indexed_groups(const std::string& prefix) const {
  std::set<int> seen;
  std::string want = prefix + ".";
  for (const auto& [key, value] : values_) {
    if (key.rfind(want, 0) != 0) continue;
    std::size_t dot = key.find('.', want.size());
    if (dot == std::string::npos) continue;
    std::string index = key.substr(want.size(), dot - want.size());
    if (index.empty() ||
        !std::all_of(index.begin(), index.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      continue;
    seen.insert(int(parse_int(key, index)));
  }
  return {seen.begin(), seen.end()};
}

Amount ScenarioConfig::effective_solver_bond() const {
  if (solver_bond > 0) return solver_bond;
  auto derived = econ::min_solver_bond(falsification_cost,
                                       bond_reference_prior, bond_margin);
  if (!derived)
    fail(ErrorCode::InvalidConfig,
         "task.solver_bond: cannot derive a bond when task.bond_pe = 0");
  return *derived;
}

void ScenarioConfig::validate() const {
  if (task_count < 0) fail(ErrorCode::InvalidConfig, "task.count: negative");
  if (task_fee < 0) fail(ErrorCode::InvalidConfig, "task.fee: negative");
  if (!(beta >= 0.0 && beta <= 1.0))
    fail(ErrorCode::InvalidConfig, "burn.beta: outside [0, 1]");
  if (challenge_window <= 0)
    fail(ErrorCode::InvalidConfig, "task.challenge_window: must be positive");
  if (ruling_window <= 0)
    fail(ErrorCode::InvalidConfig, "task.ruling_window: must be positive");
  if (commit_window <= 0)
    fail(ErrorCode::InvalidConfig, "task.commit_window: must be positive");
  if (reveal_window <= 0)
    fail(ErrorCode::InvalidConfig, "task.reveal_window: must be positive");
  if (quorum_size < 1 || quorum_size % 2 == 0)
    fail(ErrorCode::InvalidConfig, "task.quorum: must be odd and positive");
  if (max_depth < 1)
    fail(ErrorCode::InvalidConfig, "task.max_depth: must be at least 1");
  if (falsification_cost < 0)
    fail(ErrorCode::InvalidConfig, "econ.falsification_cost: negative");
  if (!(cost_growth > 0.0))
    fail(ErrorCode::InvalidConfig, "econ.cost_growth: must be positive");
  if (!(discount > 0.0 && discount <= 1.0))
    fail(ErrorCode::InvalidConfig, "econ.discount: outside (0, 1]");
  if (!(challenger_visibility >= 0.0 && challenger_visibility <= 1.0))
    fail(ErrorCode::InvalidConfig, "challenger.visibility: outside [0, 1]");
  if (!(sizing.challenger_multiplier > 0.0))
    fail(ErrorCode::InvalidConfig, "bonds.challenger_multiplier: must be positive");
  if (sizing.verifier_floor < 0)
    fail(ErrorCode::InvalidConfig, "bonds.verifier_floor: negative");
  if (!(sizing.verifier_fraction > 0.0 && sizing.verifier_fraction <= 1.0))
    fail(ErrorCode::InvalidConfig, "bonds.verifier_fraction: outside (0, 1]");
  if (!(sizing.depth_share_growth >= 1.0))
    fail(ErrorCode::InvalidConfig, "bonds.depth_share_growth: must be >= 1");
  effective_solver_bond();

  if (task_count > 0) {
    bool any_solver = false, any_verifier = false;
    for (const auto& spec : agents) {
      if (spec.count > 0 && spec.profile.can_solve) any_solver = true;
      if (spec.count > 0 && spec.profile.can_verify) any_verifier = true;
    }
    if (!any_solver)
      fail(ErrorCode::InvalidConfig, "agent: no solver-capable profile");
    if (!any_verifier)
      fail(ErrorCode::InvalidConfig, "agent: no verifier-capable profile");
  }
  for (const auto& spec : agents) {
    if (spec.count < 0)
      fail(ErrorCode::InvalidConfig, "agent." + spec.profile.id + ".count: negative");
    if (spec.initial_balance < 0)
      fail(ErrorCode::InvalidConfig,
           "agent." + spec.profile.id + ".balance: negative");
    if (!(spec.honest_error_rate >= 0.0 && spec.honest_error_rate <= 1.0))
      fail(ErrorCode::InvalidConfig,
           "agent." + spec.profile.id + ".error_rate: outside [0, 1]");
    spec.profile.validate();
  }
}

namespace {

protocol::SelectionPolicy parse_selection(const std::string& value) {
  if (value == "first") return protocol::SelectionPolicy::FirstQualified;
  if (value == "uniform") return protocol::SelectionPolicy::UniformRandom;
  fail(ErrorCode::InvalidConfig, "task.selection: unknown policy " + value);
}

agents::SolverStrategy parse_solver_strategy(const std::string& key,
                                             const std::string& value) {
  if (value == "rational") return agents::SolverStrategy::Rational;
  if (value == "honest") return agents::SolverStrategy::AlwaysHonest;
  if (value == "cheat") return agents::SolverStrategy::AlwaysCheat;
  fail(ErrorCode::InvalidConfig, key + ": unknown strategy " + value);
}

agents::ChallengerStrategy parse_challenger_strategy(const std::string& key,
                                                     const std::string& value) {
  if (value == "rational") return agents::ChallengerStrategy::Rational;
  if (value == "subsidized") return agents::ChallengerStrategy::Subsidized;
  if (value == "passive") return agents::ChallengerStrategy::Passive;
  fail(ErrorCode::InvalidConfig, key + ": unknown strategy " + value);
}

agents::VerifierStrategy parse_verifier_strategy(const std::string& key,
                                                 const std::string& value) {
  if (value == "rational") return agents::VerifierStrategy::Rational;
  if (value == "correct") return agents::VerifierStrategy::AlwaysCorrect;
  if (value == "corrupt") return agents::VerifierStrategy::Corrupt;
  if (value == "lazy") return agents::VerifierStrategy::Lazy;
  fail(ErrorCode::InvalidConfig, key + ": unknown strategy " + value);
}

}  // namespace

ScenarioConfig ScenarioConfig::from_flat(const FlatConfig& flat) {
  ScenarioConfig config;
  config.seed = flat.get_uint("seed", config.seed);
  config.horizon = flat.get_int("ticks.horizon", config.horizon);
  config.beta = flat.get_double("burn.beta", config.beta);

  config.task_count = int(flat.get_int("task.count", config.task_count));
  config.task_fee = flat.get_int("task.fee", config.task_fee);
  config.solver_bond = flat.get_int("task.solver_bond", config.solver_bond);
  config.bond_margin = flat.get_double("task.bond_margin", config.bond_margin);
  config.bond_reference_prior =
      flat.get_double("task.bond_pe", config.bond_reference_prior);
  config.challenge_window =
      flat.get_int("task.challenge_window", config.challenge_window);
  config.ruling_window = flat.get_int("task.ruling_window", config.ruling_window);
  config.commit_window = flat.get_int("task.commit_window", config.commit_window);
  config.reveal_window = flat.get_int("task.reveal_window", config.reveal_window);
  config.quorum_size = int(flat.get_int("task.quorum", config.quorum_size));
  config.max_depth = int(flat.get_int("task.max_depth", config.max_depth));
  config.selection =
      parse_selection(flat.get_string("task.selection", "uniform"));
  std::string target = flat.get_string("task.escalation_target", "");
  if (!target.empty()) config.escalation_target = target;

  config.falsification_cost =
      flat.get_int("econ.falsification_cost", config.falsification_cost);
  config.cost_growth = flat.get_double("econ.cost_growth", config.cost_growth);
  config.discount = flat.get_double("econ.discount", config.discount);
  config.reference_prior =
      flat.get_double("econ.reference_prior", config.reference_prior);
  config.reference_gain = flat.get_int("econ.reference_gain", config.reference_gain);
  config.reference_fee = flat.get_int("econ.reference_fee", config.reference_fee);

  config.sizing.challenger_multiplier = flat.get_double(
      "bonds.challenger_multiplier", config.sizing.challenger_multiplier);
  config.sizing.verifier_floor =
      flat.get_int("bonds.verifier_floor", config.sizing.verifier_floor);
  config.sizing.verifier_fraction = flat.get_double(
      "bonds.verifier_fraction", config.sizing.verifier_fraction);
  config.sizing.depth_share_growth = flat.get_double(
      "bonds.depth_share_growth", config.sizing.depth_share_growth);

  config.challenger_visibility =
      flat.get_double("challenger.visibility", config.challenger_visibility);

  for (int index : flat.indexed_groups("agent")) {
    std::string prefix = "agent." + std::to_string(index) + ".";
    AgentSpec spec;
    spec.profile.id = "g" + std::to_string(index);
    spec.count = int(flat.get_int(prefix + "count", 1));
    spec.initial_balance = flat.get_int(prefix + "balance", 1'000'000);
    spec.honest_error_rate = flat.get_double(prefix + "error_rate", 0.0);

    for (const auto& role : flat.get_list(prefix + "roles")) {
      if (role == "solver") spec.profile.can_solve = true;
      else if (role == "challenger") spec.profile.can_challenge = true;
      else if (role == "verifier") spec.profile.can_verify = true;
      else fail(ErrorCode::InvalidConfig, prefix + "roles: unknown role " + role);
    }
    spec.profile.solver = parse_solver_strategy(
        prefix + "solver", flat.get_string(prefix + "solver", "honest"));
    spec.profile.challenger = parse_challenger_strategy(
        prefix + "challenger", flat.get_string(prefix + "challenger", "passive"));
    spec.profile.verifier = parse_verifier_strategy(
        prefix + "verifier", flat.get_string(prefix + "verifier", "correct"));
    spec.profile.lazy_no_reveal_p = flat.get_double(prefix + "lazy_p", 0.5);
    spec.profile.subjective_error_prior = flat.get_double(prefix + "prior", 0.5);
    spec.profile.detection_cost =
        flat.get_int(prefix + "detect_cost", config.falsification_cost);
    spec.profile.stake = flat.get_int(prefix + "stake", 100);
    spec.profile.subsidy_budget = flat.get_int(prefix + "budget", 0);
    spec.profile.cheat_gain = flat.get_int(prefix + "cheat_gain", 0);
    config.agents.push_back(std::move(spec));
  }

  config.validate();
  return config;
}

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
  return from_flat(FlatConfig::parse(text));
}

}  // namespace verigame::sim
