#pragma once

#include <optional>

#include "verigame/economics.hpp"
#include "verigame/protocol.hpp"
#include "verigame/types.hpp"

namespace verigame::agents {

enum class SolverStrategy { Rational, AlwaysHonest, AlwaysCheat };
enum class ChallengerStrategy { Rational, Subsidized, Passive };
enum class VerifierStrategy { Rational, AlwaysCorrect, Corrupt, Lazy };

const char* solver_strategy_name(SolverStrategy s);
const char* challenger_strategy_name(ChallengerStrategy s);
const char* verifier_strategy_name(VerifierStrategy s);

struct AgentProfile {
  AgentId id;
  bool can_solve = false;
  bool can_challenge = false;
  bool can_verify = false;
  SolverStrategy solver = SolverStrategy::AlwaysHonest;
  ChallengerStrategy challenger = ChallengerStrategy::Passive;
  VerifierStrategy verifier = VerifierStrategy::AlwaysCorrect;
  double lazy_no_reveal_p = 0.0;      // Lazy verifiers withhold at this rate
  double subjective_error_prior = 0.0;  // the agent's P_e estimate
  Amount detection_cost = 0;            // F this agent pays to verify a claim
  Amount stake = 0;                     // feeds fractional verifier bonds
  Amount subsidy_budget = 0;            // Subsidized challengers only
  Amount cheat_gain = 0;  // private benefit of submitting an incorrect result

  void validate() const;
};

enum class SolverAction { SubmitCorrect, SubmitIncorrect };
enum class ChallengerAction { Challenge, Pass };

// Cheat only when the private gain strictly beats the expected slash; ties
// resolve to honesty.
SolverAction solver_decide(const AgentProfile& profile, Amount solver_bond,
                           Amount task_fee);

// Rational: challenge iff the expected value is strictly positive (exact
// sign). Subsidized: challenge while the budget covers cost plus bond.
// Passive: never.
ChallengerAction challenger_decide(const AgentProfile& profile,
                                   Amount solver_bond, Amount challenger_bond,
                                   Amount detection_cost, double beta);

// nullopt means the verifier withholds its reveal. `lazy_draw` is a uniform
// [0,1) sample supplied by the caller so decisions stay pure.
std::optional<protocol::Verdict> verifier_decide(
    const AgentProfile& profile, protocol::Verdict ground_truth,
    Amount exposure, Amount next_falsification_cost, double next_error_prior,
    double lazy_draw);

enum class Role { Solver, Challenger, Verifier };

struct DeviationParams {
  Amount solver_bond = 0;
  Amount challenger_bond = 0;
  Amount detection_cost = 0;
  double error_prior = 0.0;  // P_e faced by the deviation
  double beta = 1.0;
  Amount cheat_gain = 0;  // solver only
  Amount task_fee = 0;    // solver only
  Amount verifier_exposure = 0;          // verifier only
  Amount next_falsification_cost = 0;    // verifier only
  double next_error_prior = 0.0;         // verifier only
};

struct DeviationReport {
  double honest_payoff = 0.0;
  double deviating_payoff = 0.0;
  bool equilibrium = false;  // honest >= deviating
};

// Analytic best-response check with all other agents held rational: the
// equilibrium flag says whether the role's honest action weakly dominates
// its best deviation under the settlement rules.
DeviationReport deviation_test(Role role, const DeviationParams& params);

}  // namespace verigame::agents
