"""Dynamic-TDD mode scheduling: equilibrium solver, payoffs and baselines."""

from ._dtdd import (
    DtddError,
    channels,
    dbm_to_watts,
    expected_payoff,
    indifference_residuals,
    opt_schedule,
    payoff_tables,
    run_experiment,
    signaling_overhead,
    solve_msne,
    stdd_schedule,
    water_fill,
)

__all__ = [
    "DtddError",
    "channels",
    "dbm_to_watts",
    "expected_payoff",
    "indifference_residuals",
    "opt_schedule",
    "payoff_tables",
    "run_experiment",
    "signaling_overhead",
    "solve_msne",
    "stdd_schedule",
    "water_fill",
]
