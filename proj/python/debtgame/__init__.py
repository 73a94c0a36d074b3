"""Python bindings for the debt ceiling game solver.

Parameter sets are plain dicts keyed like the JSON config
(r, g, sigma, rho, lambda, alpha, kappa, m, c1, c2); missing keys
fall back to the reference values.
"""

from ._core import (
    DebtgameError,
    F,
    G,
    H,
    U1,
    U2,
    a_bar,
    a_of_b,
    b0,
    b_of_a,
    char_roots,
    params,
    qtilde,
    reference_params,
    regime,
    regime_boundary,
    run_check,
    run_nash,
    run_roots,
    simulate,
    solve_nash,
    std_normal_cdf,
    sweep,
    validate,
)

__all__ = [
    "DebtgameError",
    "F",
    "G",
    "H",
    "U1",
    "U2",
    "a_bar",
    "a_of_b",
    "b0",
    "b_of_a",
    "char_roots",
    "params",
    "qtilde",
    "reference_params",
    "regime",
    "regime_boundary",
    "run_check",
    "run_nash",
    "run_roots",
    "simulate",
    "solve_nash",
    "std_normal_cdf",
    "sweep",
    "validate",
]
