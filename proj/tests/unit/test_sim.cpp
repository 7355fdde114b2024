#include <doctest.h>

#include <cmath>
#include <string>

#include "verigame/sim.hpp"

using namespace verigame;

namespace {

// A population with rational cheat-prone solvers, one rational challenger,
// and honest verifiers; pieces are switched off per test.
std::string base_config(int tasks, bool challengers, const std::string& extra = "") {
  std::string text = R"(
seed = 11
burn.beta = 0.5
task.count = )" + std::to_string(tasks) + R"(
task.fee = 1
task.solver_bond = 10
task.quorum = 3
task.max_depth = 3
econ.falsification_cost = 2

agent.0.roles = solver
agent.0.count = 3
agent.0.solver = rational
agent.0.prior = 0.5
agent.0.cheat_gain = 6

agent.1.roles = verifier
agent.1.count = 9
agent.1.verifier = correct
)";
  if (challengers)
    text += R"(
agent.2.roles = challenger
agent.2.count = 2
agent.2.challenger = rational
agent.2.prior = 0.8
agent.2.detect_cost = 2
)";
  return text + extra;
}

void check_consistency(const sim::RunMetrics& m) {
  CHECK(m.tasks_finalized == m.stood_correct + m.stood_incorrect +
                                 m.overturned_correct + m.overturned_incorrect);
}

}  // namespace

TEST_CASE("config parsing applies defaults and names bad fields") {
  auto config = sim::ScenarioConfig::parse(base_config(5, true));
  CHECK(config.seed == 11);
  CHECK(config.task_count == 5);
  CHECK(config.quorum_size == 3);
  CHECK(config.agents.size() == 3);
  CHECK(config.agents[0].profile.can_solve);
  CHECK(config.agents[2].profile.can_challenge);

  try {
    sim::ScenarioConfig::parse("task.quorum = 2\nagent.0.roles = solver\n"
                               "agent.1.roles = verifier\n");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    CHECK(std::string(e.what()).find("task.quorum") != std::string::npos);
  }
  try {
    sim::ScenarioConfig::parse("agent.0.roles = wizard\n");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("agent.0.roles") != std::string::npos);
  }
  // Tasks without any verifier-capable profile are refused.
  try {
    sim::ScenarioConfig::parse("task.count = 1\nagent.0.roles = solver\n");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
}

TEST_CASE("flat config lists and spans") {
  auto flat = sim::FlatConfig::parse("a = 1,2,3\nb = 5..8\nc = x, y\n# note\n");
  CHECK(flat.get_amount_list("a") == std::vector<Amount>{1, 2, 3});
  CHECK(flat.get_amount_list("b") == std::vector<Amount>{5, 6, 7, 8});
  CHECK(flat.get_list("c") == std::vector<std::string>{"x", "y"});
  CHECK_THROWS_AS(sim::FlatConfig::parse("broken line\n"), Error);
}

TEST_CASE("honest population finalizes everything untouched") {
  std::string text = R"(
seed = 3
task.count = 100
task.fee = 1
task.solver_bond = 10
agent.0.roles = solver
agent.0.count = 2
agent.0.solver = honest
agent.1.roles = verifier
agent.1.count = 3
agent.1.verifier = correct
agent.2.roles = challenger
agent.2.challenger = passive
)";
  auto result = sim::run(sim::ScenarioConfig::parse(text));
  check_consistency(result.metrics);
  CHECK(result.metrics.tasks_finalized == 100);
  CHECK(result.metrics.stood_incorrect == 0);
  CHECK(result.metrics.incorrect_finalized_rate == 0.0);
  CHECK(result.metrics.challenges_issued == 0);
  CHECK(result.metrics.total_burned == 0);
}

TEST_CASE("unwatched rational cheaters finalize every incorrect result") {
  auto result = sim::run(sim::ScenarioConfig::parse(base_config(50, false)));
  check_consistency(result.metrics);
  CHECK(result.metrics.tasks_finalized == 50);
  CHECK(result.metrics.incorrect_finalized_rate == 1.0);
  CHECK(result.metrics.cheat_episodes == 50);
  CHECK(result.metrics.challenges_issued == 0);
}

TEST_CASE("watched rational cheaters always get overturned") {
  auto result = sim::run(sim::ScenarioConfig::parse(base_config(50, true)));
  check_consistency(result.metrics);
  CHECK(result.metrics.tasks_finalized == 50);
  CHECK(result.metrics.incorrect_finalized_rate == 0.0);
  CHECK(result.metrics.overturned_incorrect == 50);
  CHECK(result.metrics.challenges_issued == 50);
  CHECK(result.metrics.challenges_won == 50);
  CHECK(result.metrics.mean_solver_loss_on_cheat == doctest::Approx(10.0));
  CHECK(result.metrics.total_burned > 0);
}

TEST_CASE("runs are deterministic and sensitive to the seed") {
  auto a = sim::run(sim::ScenarioConfig::parse(base_config(20, true)));
  auto b = sim::run(sim::ScenarioConfig::parse(base_config(20, true)));
  CHECK(a.log_lines == b.log_lines);
  CHECK(a.metrics.balance_digest == b.metrics.balance_digest);

  std::string reseeded = base_config(20, true);
  reseeded.replace(reseeded.find("seed = 11"), 9, "seed = 12");
  auto c = sim::run(sim::ScenarioConfig::parse(reseeded));
  CHECK(a.log_lines != c.log_lines);
}

TEST_CASE("realized losses and rewards track the analytic values") {
  // Partial visibility makes the challenge probability the error-surfacing
  // probability of the loss formula.
  std::string text = R"(
seed = 29
burn.beta = 1.0
task.count = 4000
task.fee = 0
task.solver_bond = 10
task.quorum = 1
challenger.visibility = 0.25
agent.0.roles = solver
agent.0.count = 1
agent.0.solver = cheat
agent.1.roles = verifier
agent.1.count = 3
agent.1.verifier = correct
agent.1.stake = 10
agent.2.roles = challenger
agent.2.count = 1
agent.2.challenger = rational
agent.2.prior = 0.5
agent.2.detect_cost = 2
)";
  auto result = sim::run(sim::ScenarioConfig::parse(text));
  check_consistency(result.metrics);
  CHECK(result.metrics.cheat_episodes == 4000);

  double visibility = 0.25;
  double expected_loss = visibility * 10.0;
  double se = std::sqrt(visibility * (1 - visibility)) * 10.0 / std::sqrt(4000.0);
  CHECK(std::abs(result.metrics.mean_solver_loss_on_cheat - expected_loss) <=
        3 * se);

  // Every filed challenge wins: beta=1 hands over the whole bond.
  CHECK(result.metrics.mean_challenger_profit == doctest::Approx(10.0 - 2.0));
}

TEST_CASE("subsidized challengers restore deterrence") {
  std::string blind = base_config(40, true);
  blind.replace(blind.find("agent.2.prior = 0.8"), 19, "agent.2.prior = .05");
  auto broken = sim::run(sim::ScenarioConfig::parse(blind));
  check_consistency(broken.metrics);
  CHECK(broken.metrics.incorrect_finalized_rate > 0.0);
  CHECK(broken.metrics.challenges_issued == 0);

  std::string subsidized = blind + R"(
agent.3.roles = challenger
agent.3.challenger = subsidized
agent.3.budget = 200
agent.3.detect_cost = 2
)";
  auto fixed = sim::run(sim::ScenarioConfig::parse(subsidized));
  check_consistency(fixed.metrics);
  CHECK(fixed.metrics.incorrect_finalized_rate == 0.0);
  CHECK(fixed.metrics.subsidy_spent > 0.0);
}

TEST_CASE("monte carlo estimates match the closed forms") {
  SUBCASE("challenger value") {
    sim::MonteCarloParams params{0.5, 10, 2, 0, 1.0};
    auto r = sim::monte_carlo_ev(agents::Role::Challenger, params, 100000, 9);
    CHECK(std::abs(r.mean - 3.0) <= 3 * r.std_error);
    CHECK(r.std_error > 0.0);
  }
  SUBCASE("bond forfeiture term") {
    sim::MonteCarloParams params{0.5, 10, 2, 4, 1.0};
    auto r = sim::monte_carlo_ev(agents::Role::Challenger, params, 100000, 10);
    CHECK(std::abs(r.mean - 1.0) <= 3 * r.std_error);
  }
  SUBCASE("deterministic limits") {
    sim::MonteCarloParams certain{1.0, 10, 0, 0, 1.0};
    auto solver = sim::monte_carlo_ev(agents::Role::Solver, certain, 5000, 11);
    CHECK(solver.mean == -10.0);
    CHECK(solver.std_error == 0.0);

    sim::MonteCarloParams hopeless{0.0, 10, 2, 0, 1.0};
    auto challenger =
        sim::monte_carlo_ev(agents::Role::Challenger, hopeless, 5000, 12);
    CHECK(challenger.mean == -2.0);
  }
}

TEST_CASE("sweep grids derive their seeds and flag the boundary") {
  std::string text = base_config(5, true) + R"(
burn.beta = 1.0
sweep.0.key = task.solver_bond
sweep.0.values = 3..8
)";
  auto flat = sim::FlatConfig::parse(text);
  auto rows = sim::sweep(flat, sim::sweep_axes_from_config(flat));
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    Amount bond = std::stoll(row.params.at("task.solver_bond"));
    CAPTURE(bond);
    // With F=2 and the reference prior 0.5, cheating stays profitable for
    // bonds up to 4.
    CHECK(row.solver_deviation.equilibrium == (bond > 4));
    CHECK(row.seed != 11);
    check_consistency(row.metrics);
  }

  auto again = sim::sweep(flat, sim::sweep_axes_from_config(flat));
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].metrics.balance_digest == again[i].metrics.balance_digest);

  // No axes: one cell with the base config.
  auto flat_plain = sim::FlatConfig::parse(base_config(2, true));
  CHECK(sim::sweep(flat_plain, {}).size() == 1);
}

TEST_CASE("replay rebuilds the run from its log alone") {
  auto result = sim::run(sim::ScenarioConfig::parse(base_config(10, true)));
  auto state = sim::replay(result.log_lines);
  CHECK(state.balances == result.final_balances);
  CHECK(state.burned == result.final_burned);
  CHECK(state.records == result.log_lines.size());
  CHECK(state.balance_digest == result.metrics.balance_digest);

  SUBCASE("one flipped byte is caught") {
    auto lines = result.log_lines;
    std::size_t target = lines.size() / 2;
    char& c = lines[target][lines[target].size() / 2];
    c = c == 'a' ? 'b' : 'a';
    try {
      sim::replay(lines);
      FAIL("expected BrokenChain");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BrokenChain);
    }
  }

  SUBCASE("empty log is the empty state") {
    auto state_empty = sim::replay({});
    CHECK(state_empty.records == 0);
    CHECK(state_empty.balances.empty());
    CHECK(state_empty.deposited == 0);
  }
}

TEST_CASE("check-eq reports the falsification boundary") {
  sim::CheckEqParams params;
  params.priors = {0.5};
  for (Amount b = 3; b <= 8; ++b) params.solver_bonds.push_back(b);
  params.roles = {agents::Role::Solver};
  auto rows = sim::check_equilibrium(params);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    CHECK(row.equilibrium == (row.solver_bond > 4));
    CHECK(row.falsification_holds == (row.solver_bond > 4));
    CHECK(row.equilibrium == (row.challenger_ev > 0));
  }
  auto csv = sim::check_eq_csv(rows);
  CHECK(csv.find("pe,solver_bond,role") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("lazy and corrupt populations keep the ledger conserved") {
  std::string text = R"(
seed = 77
burn.beta = 0.25
task.count = 25
task.fee = 2
task.solver_bond = 10
task.quorum = 3
task.max_depth = 2
agent.0.roles = solver
agent.0.count = 2
agent.0.solver = cheat
agent.1.roles = solver
agent.1.count = 1
agent.1.solver = honest
agent.1.error_rate = 0.3
agent.2.roles = verifier
agent.2.count = 6
agent.2.verifier = lazy
agent.2.lazy_p = 0.6
agent.3.roles = verifier
agent.3.count = 6
agent.3.verifier = corrupt
agent.4.roles = challenger
agent.4.count = 2
agent.4.challenger = rational
agent.4.prior = 0.6
agent.4.detect_cost = 1
)";
  // run() checks conservation after every operation and throws on violation.
  auto result = sim::run(sim::ScenarioConfig::parse(text));
  check_consistency(result.metrics);
  CHECK(result.metrics.tasks_finalized + result.metrics.escalations ==
        result.metrics.tasks_started);
}

TEST_CASE("the tick horizon stops the task stream") {
  std::string text = base_config(1000, false) + "ticks.horizon = 40\n";
  auto result = sim::run(sim::ScenarioConfig::parse(text));
  CHECK(result.metrics.tasks_requested == 1000);
  CHECK(result.metrics.tasks_started < 1000);
  CHECK(result.metrics.tasks_started > 0);
  check_consistency(result.metrics);
}

TEST_CASE("metrics csv stays aligned with its header") {
  auto result = sim::run(sim::ScenarioConfig::parse(base_config(3, true)));
  std::string header = sim::metrics_csv_header();
  std::string row = sim::metrics_csv_row(11, result.metrics);
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(row.begin(), row.end(), ','));
}
