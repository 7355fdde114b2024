#include "verigame/economics.hpp"

#include <cmath>

#include "verigame/exact.hpp"

namespace verigame::econ {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::InvalidArgument, "error probability outside [0, 1]");
}

}  // namespace

FalsificationCheck falsification_holds(const FalsificationParams& p) {
  check_probability(p.error_probability);
  if (p.falsification_cost < 0)
    fail(ErrorCode::InvalidArgument, "negative falsification cost");
  if (p.error_probability == 0.0) return {false, true};
  // B > F / P_e  <=>  B * P_e > F  (P_e > 0)
  exact::Rational lhs =
      exact::of_amount(p.bond) * exact::of_double(p.error_probability);
  return {lhs > exact::of_amount(p.falsification_cost), false};
}

double expected_loss_incorrect(double error_probability, Amount solver_bond) {
  check_probability(error_probability);
  return error_probability * double(solver_bond);
}

double challenger_ev(double error_probability, Amount solver_bond,
                     Amount falsification_cost, Amount challenger_bond,
                     double beta) {
  check_probability(error_probability);
  return error_probability * beta * double(solver_bond) -
         double(falsification_cost) -
         (1.0 - error_probability) * double(challenger_bond);
}

bool challenger_ev_positive(double error_probability, Amount solver_bond,
                            Amount falsification_cost, Amount challenger_bond,
                            double beta) {
  check_probability(error_probability);
  exact::Rational pe = exact::of_double(error_probability);
  exact::Rational ev = pe * exact::of_double(beta) *
                           exact::of_amount(solver_bond) -
                       exact::of_amount(falsification_cost) -
                       (exact::Rational(1) - pe) *
                           exact::of_amount(challenger_bond);
  return ev > 0;
}

FalsificationCheck verifier_condition_holds(Amount verifier_bond,
                                            Amount falsification_cost,
                                            double error_probability) {
  return falsification_holds(
      {verifier_bond, falsification_cost, error_probability});
}

ViabilityResult recursive_viability(const RecursionSchedule& s) {
  if (s.horizon < 0) fail(ErrorCode::InvalidArgument, "negative horizon");
  if (!(s.discount > 0.0 && s.discount <= 1.0))
    fail(ErrorCode::InvalidArgument, "discount outside (0, 1]");
  if (!(s.cost_growth > 0.0))
    fail(ErrorCode::InvalidArgument, "cost growth must be positive");
  if (s.per_depth.size() != std::size_t(s.horizon) + 1)
    fail(ErrorCode::InvalidArgument, "per-depth list must have horizon+1 entries");

  double value = 0.0;
  double discount_t = 1.0;
  double cost_t = double(s.base_cost);
  for (int t = 0; t <= s.horizon; ++t) {
    const DepthTerm& term = s.per_depth[std::size_t(t)];
    check_probability(term.error_probability);
    value += discount_t *
             (term.error_probability * double(term.bond) - cost_t);
    discount_t *= s.discount;
    cost_t *= s.cost_growth;
  }
  return {value, value > 0.0};
}

Amount challenger_bond_from_solver(Amount solver_bond,
                                   const BondSizingPolicy& policy) {
  if (solver_bond <= 0) fail(ErrorCode::InvalidArgument, "solver bond must be positive");
  if (!(policy.challenger_multiplier > 0.0))
    fail(ErrorCode::InvalidArgument, "challenger multiplier must be positive");
  Amount bond = std::llround(policy.challenger_multiplier * double(solver_bond));
  return bond < 1 ? 1 : bond;
}

Amount verifier_exposure(Amount stake, int depth,
                         const BondSizingPolicy& policy) {
  if (depth < 0) fail(ErrorCode::InvalidArgument, "negative depth");
  if (stake < 0) fail(ErrorCode::InvalidArgument, "negative stake");
  double scaled = policy.verifier_fraction *
                  std::pow(policy.depth_share_growth, double(depth)) *
                  double(stake);
  Amount share = std::llround(scaled);
  Amount exposure = policy.verifier_floor + share;
  Amount cap = stake + policy.verifier_floor;
  return exposure > cap ? cap : exposure;
}

std::optional<Amount> min_solver_bond(Amount falsification_cost,
                                      double error_probability, double margin) {
  check_probability(error_probability);
  if (margin < 0.0) fail(ErrorCode::InvalidArgument, "negative margin");
  if (falsification_cost < 0)
    fail(ErrorCode::InvalidArgument, "negative falsification cost");
  if (error_probability == 0.0) return std::nullopt;

  // Smallest integer strictly above (1 + margin) * F / P_e.
  exact::Rational threshold = (exact::Rational(1) + exact::of_double(margin)) *
                              exact::of_amount(falsification_cost) /
                              exact::of_double(error_probability);
  boost::multiprecision::cpp_int floor_q =
      boost::multiprecision::numerator(threshold) /
      boost::multiprecision::denominator(threshold);
  Amount bond = Amount(floor_q) + 1;
  return bond < 1 ? 1 : bond;
}

}  // namespace verigame::econ
