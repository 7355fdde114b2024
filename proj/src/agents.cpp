#include "verigame/agents.hpp"

namespace verigame::agents {

const char* solver_strategy_name(SolverStrategy s) {
  switch (s) {
    case SolverStrategy::Rational: return "rational";
    case SolverStrategy::AlwaysHonest: return "honest";
    case SolverStrategy::AlwaysCheat: return "cheat";
  }
  return "unknown";
}

const char* challenger_strategy_name(ChallengerStrategy s) {
  switch (s) {
    case ChallengerStrategy::Rational: return "rational";
    case ChallengerStrategy::Subsidized: return "subsidized";
    case ChallengerStrategy::Passive: return "passive";
  }
  return "unknown";
}

const char* verifier_strategy_name(VerifierStrategy s) {
  switch (s) {
    case VerifierStrategy::Rational: return "rational";
    case VerifierStrategy::AlwaysCorrect: return "correct";
    case VerifierStrategy::Corrupt: return "corrupt";
    case VerifierStrategy::Lazy: return "lazy";
  }
  return "unknown";
}

void AgentProfile::validate() const {
  if (id.empty()) fail(ErrorCode::InvalidArgument, "empty agent id");
  if (!(subjective_error_prior >= 0.0 && subjective_error_prior <= 1.0))
    fail(ErrorCode::InvalidArgument, "error prior outside [0, 1]");
  if (!(lazy_no_reveal_p >= 0.0 && lazy_no_reveal_p <= 1.0))
    fail(ErrorCode::InvalidArgument, "lazy probability outside [0, 1]");
  if (detection_cost < 0 || stake < 0 || subsidy_budget < 0 || cheat_gain < 0)
    fail(ErrorCode::InvalidArgument, "negative token field");
}

SolverAction solver_decide(const AgentProfile& profile, Amount solver_bond,
                           Amount /*task_fee*/) {
  switch (profile.solver) {
    case SolverStrategy::AlwaysHonest:
      return SolverAction::SubmitCorrect;
    case SolverStrategy::AlwaysCheat:
      return SolverAction::SubmitIncorrect;
    case SolverStrategy::Rational: {
      double expected_loss = econ::expected_loss_incorrect(
          profile.subjective_error_prior, solver_bond);
      return double(profile.cheat_gain) > expected_loss
                 ? SolverAction::SubmitIncorrect
                 : SolverAction::SubmitCorrect;
    }
  }
  return SolverAction::SubmitCorrect;
}

ChallengerAction challenger_decide(const AgentProfile& profile,
                                   Amount solver_bond, Amount challenger_bond,
                                   Amount detection_cost, double beta) {
  switch (profile.challenger) {
    case ChallengerStrategy::Passive:
      return ChallengerAction::Pass;
    case ChallengerStrategy::Subsidized:
      return profile.subsidy_budget >= detection_cost + challenger_bond
                 ? ChallengerAction::Challenge
                 : ChallengerAction::Pass;
    case ChallengerStrategy::Rational:
      return econ::challenger_ev_positive(profile.subjective_error_prior,
                                          solver_bond, detection_cost,
                                          challenger_bond, beta)
                 ? ChallengerAction::Challenge
                 : ChallengerAction::Pass;
  }
  return ChallengerAction::Pass;
}

std::optional<protocol::Verdict> verifier_decide(
    const AgentProfile& profile, protocol::Verdict ground_truth,
    Amount exposure, Amount next_falsification_cost, double next_error_prior,
    double lazy_draw) {
  switch (profile.verifier) {
    case VerifierStrategy::AlwaysCorrect:
      return ground_truth;
    case VerifierStrategy::Corrupt:
      return ground_truth == protocol::Verdict::UpholdTarget
                 ? protocol::Verdict::OverturnTarget
                 : protocol::Verdict::UpholdTarget;
    case VerifierStrategy::Lazy:
      if (lazy_draw < profile.lazy_no_reveal_p) return std::nullopt;
      return ground_truth;
    case VerifierStrategy::Rational: {
      // With its own exposure at stake under the next level of review,
      // judging correctly dominates; otherwise the cheap status-quo vote.
      auto check = econ::verifier_condition_holds(
          exposure, next_falsification_cost, next_error_prior);
      if (check.holds) return ground_truth;
      return protocol::Verdict::UpholdTarget;
    }
  }
  return ground_truth;
}

DeviationReport deviation_test(Role role, const DeviationParams& params) {
  DeviationReport report;
  switch (role) {
    case Role::Solver: {
      // Honest submission banks the fee. A cheat banks the private gain and
      // faces the expected slash only when a rational challenger is watching.
      report.honest_payoff = double(params.task_fee);
      bool challenged = econ::challenger_ev_positive(
          params.error_prior, params.solver_bond, params.detection_cost,
          params.challenger_bond, params.beta);
      report.deviating_payoff =
          challenged ? double(params.cheat_gain) -
                           econ::expected_loss_incorrect(params.error_prior,
                                                         params.solver_bond)
                     : double(params.cheat_gain);
      break;
    }
    case Role::Challenger: {
      double ev = econ::challenger_ev(params.error_prior, params.solver_bond,
                                      params.detection_cost,
                                      params.challenger_bond, params.beta);
      bool would_challenge = econ::challenger_ev_positive(
          params.error_prior, params.solver_bond, params.detection_cost,
          params.challenger_bond, params.beta);
      report.honest_payoff = would_challenge ? ev : 0.0;
      report.deviating_payoff = would_challenge ? 0.0 : ev;
      break;
    }
    case Role::Verifier: {
      // Ruling correctly never risks the exposure. Misjudging pays nothing
      // here and loses the exposure whenever a rational challenger would
      // take the ruling to the next level.
      report.honest_payoff = 0.0;
      bool next_challenge = econ::challenger_ev_positive(
          params.next_error_prior, params.verifier_exposure,
          params.next_falsification_cost, params.challenger_bond, params.beta);
      report.deviating_payoff =
          next_challenge ? -params.next_error_prior *
                               double(params.verifier_exposure)
                         : 0.0;
      break;
    }
  }
  report.equilibrium = report.honest_payoff >= report.deviating_payoff;
  return report;
}

}  // namespace verigame::agents
