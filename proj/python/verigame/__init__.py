"""Collateralized verification game: protocol engine, economics, simulator."""

from ._core import (  # noqa: F401
    Engine,
    Outcome,
    Phase,
    ProtocolError,
    Role,
    Verdict,
    challenger_bond_from_solver,
    challenger_ev,
    challenger_ev_positive,
    content_hash,
    deviation_test,
    expected_loss_incorrect,
    falsification_holds,
    min_solver_bond,
    monte_carlo_ev,
    recursive_viability,
    replay,
    result_commitment,
    run_scenario,
    verdict_commitment,
    verifier_condition_holds,
    verifier_exposure,
)

__all__ = [
    "Engine",
    "Outcome",
    "Phase",
    "ProtocolError",
    "Role",
    "Verdict",
    "challenger_bond_from_solver",
    "challenger_ev",
    "challenger_ev_positive",
    "content_hash",
    "deviation_test",
    "expected_loss_incorrect",
    "falsification_holds",
    "min_solver_bond",
    "monte_carlo_ev",
    "recursive_viability",
    "replay",
    "result_commitment",
    "run_scenario",
    "verdict_commitment",
    "verifier_condition_holds",
    "verifier_exposure",
]
