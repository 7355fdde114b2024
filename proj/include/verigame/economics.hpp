#pragma once

#include <optional>
#include <vector>

#include "verigame/types.hpp"

namespace verigame::econ {

struct FalsificationParams {
  Amount bond = 0;                // B
  Amount falsification_cost = 0;  // F
  double error_probability = 0.0; // P_e in [0, 1]
};

struct FalsificationCheck {
  bool holds = false;
  // P_e = 0: no finite bond makes exposing the claim profitable.
  bool unfalsifiable = false;
};

// B > F / P_e, decided in exact rational arithmetic.
FalsificationCheck falsification_holds(const FalsificationParams& p);

// P_e * B_S: what an incorrect submission is expected to cost the solver.
double expected_loss_incorrect(double error_probability, Amount solver_bond);

// P_e * beta * B_S - F - (1 - P_e) * B_C. With beta = 1 and B_C = 0 this is
// the bare challenge value; the bond term prices a failed challenge and beta
// scales the reward to the slash split.
double challenger_ev(double error_probability, Amount solver_bond,
                     Amount falsification_cost, Amount challenger_bond,
                     double beta);

// Same expression decided exactly; the sign must not depend on rounding.
bool challenger_ev_positive(double error_probability, Amount solver_bond,
                            Amount falsification_cost, Amount challenger_bond,
                            double beta);

// B_V > F / P_e for the adjudicator's own exposure.
FalsificationCheck verifier_condition_holds(Amount verifier_bond,
                                            Amount falsification_cost,
                                            double error_probability);

struct DepthTerm {
  double error_probability = 0.0; // P_e,t
  Amount bond = 0;                // B_t
};

struct RecursionSchedule {
  int horizon = 0;        // T >= 0
  double discount = 1.0;  // delta in (0, 1]
  double cost_growth = 1.0; // gamma > 0; cost at depth t is gamma^t * base_cost
  Amount base_cost = 0;   // F_0
  std::vector<DepthTerm> per_depth; // exactly horizon + 1 entries
};

struct ViabilityResult {
  double value = 0.0;
  bool viable = false; // value > 0
};

// Sum over t of discount^t * (P_e,t * B_t - cost_growth^t * base_cost).
ViabilityResult recursive_viability(const RecursionSchedule& s);

struct BondSizingPolicy {
  double challenger_multiplier = 1.0; // mu > 0
  Amount verifier_floor = 0;
  double verifier_fraction = 1.0;  // in (0, 1]
  double depth_share_growth = 1.0; // >= 1; deepens quorum exposure per round
};

// round(mu * B_S), half away from zero, never below one token.
Amount challenger_bond_from_solver(Amount solver_bond,
                                   const BondSizingPolicy& policy);

// floor + round(fraction * growth^depth * stake), capped at stake + floor.
Amount verifier_exposure(Amount stake, int depth,
                         const BondSizingPolicy& policy);

// Smallest integer bond strictly greater than (1 + margin) * F / P_e.
// nullopt when P_e = 0 (unfalsifiable).
std::optional<Amount> min_solver_bond(Amount falsification_cost,
                                      double error_probability, double margin);

}  // namespace verigame::econ
