#pragma once

#include <map>
#include <string>
#include <vector>

#include "verigame/agents.hpp"
#include "verigame/config.hpp"
#include "verigame/protocol.hpp"
#include "verigame/types.hpp"

namespace verigame::sim {

struct RunMetrics {
  int tasks_requested = 0;
  int tasks_started = 0;
  int tasks_finalized = 0;
  int stood_correct = 0;
  int stood_incorrect = 0;  // incorrect results finalized as correct
  int overturned_correct = 0;
  int overturned_incorrect = 0;
  double incorrect_finalized_rate = 0.0;
  double correct_overturned_rate = 0.0;
  int challenges_issued = 0;
  int challenges_won = 0;
  int cheat_episodes = 0;
  double mean_solver_loss_on_cheat = 0.0;
  int investigations = 0;
  double mean_challenger_profit = 0.0;  // per dispute, detection costs included
  int max_recursion_reached = 0;        // deepest dispute depth + 1
  int escalations = 0;
  Amount total_burned = 0;
  Amount total_deposited = 0;
  double payoff_solvers = 0.0;
  double payoff_challengers = 0.0;
  double payoff_verifiers = 0.0;
  double payoff_originator = 0.0;
  double subsidy_spent = 0.0;
  std::string balance_digest;
  std::size_t log_records = 0;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<std::string> log_lines;
  std::map<AgentId, Amount> final_balances;
  Amount final_burned = 0;
};

// Deterministic function of (config, seed): drives every task through the
// engine tick by tick, injecting ground truth from agent strategies.
RunResult run(const ScenarioConfig& config);

struct MonteCarloParams {
  double error_probability = 0.0;
  Amount solver_bond = 0;
  Amount falsification_cost = 0;
  Amount challenger_bond = 0;
  double beta = 1.0;
};

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

// Sample-mean payoff of the single-episode stake game for a role:
// a challenger stakes against a result that is wrong with probability P_e;
// a solver submits a wrong result that is surfaced with probability P_e.
MonteCarloResult monte_carlo_ev(agents::Role role, const MonteCarloParams& p,
                                int trials, std::uint64_t seed);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepRow {
  std::size_t cell = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
  RunMetrics metrics;
  agents::DeviationReport solver_deviation;
};

// Cartesian product of the axes over the base config; each cell runs with a
// seed derived from (base seed, cell index).
std::vector<SweepRow> sweep(const FlatConfig& base,
                            const std::vector<SweepAxis>& axes);
std::vector<SweepAxis> sweep_axes_from_config(const FlatConfig& flat);

struct ReplayState {
  std::map<AgentId, Amount> balances;
  Amount burned = 0;
  Amount deposited = 0;
  std::map<ProcessId, std::string> final_phases;
  std::size_t records = 0;
  std::string head_hash;
  std::string balance_digest;
};

// Verifies the digest chain and reconstructs balances and process outcomes.
ReplayState replay(const std::vector<std::string>& lines);

struct CheckEqRow {
  double error_prior = 0.0;
  Amount solver_bond = 0;
  agents::Role role = agents::Role::Solver;
  double honest_payoff = 0.0;
  double deviating_payoff = 0.0;
  bool equilibrium = false;
  double challenger_ev = 0.0;
  bool falsification_holds = false;
};

struct CheckEqParams {
  std::vector<double> priors;
  std::vector<Amount> solver_bonds;
  Amount falsification_cost = 2;
  Amount challenger_bond = 0;
  double beta = 1.0;
  Amount cheat_gain = 3;
  Amount task_fee = 1;
  std::vector<agents::Role> roles{agents::Role::Solver,
                                  agents::Role::Challenger};
};

CheckEqParams check_eq_params_from_config(const FlatConfig& flat);
std::vector<CheckEqRow> check_equilibrium(const CheckEqParams& params);

// Stable CSV encodings shared by the CLI and tests.
std::string metrics_csv_header();
std::string metrics_csv_row(std::uint64_t seed, const RunMetrics& m);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string check_eq_csv(const std::vector<CheckEqRow>& rows);

std::string balances_digest(const std::map<AgentId, Amount>& balances,
                            Amount burned, Amount deposited);

}  // namespace verigame::sim
