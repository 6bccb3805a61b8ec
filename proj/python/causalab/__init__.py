"""Python interface to the causalab core.

The heavy lifting lives in the compiled ``_causalab`` module; this package
re-exports it and adds a small convenience wrapper around the batch runner.
"""

import json as _json

from _causalab import (  # noqa: F401
    NumericalError,
    PropertyError,
    ValidationError,
    beta,
    convergence_scan,
    energy_density,
    epsilon_for_delta,
    kernel_pair,
    ladder_commutator_defect,
    momentum_spectrum_twisted,
    omega_c,
    run_command,
    scaling_residual,
    solve_ll,
    solve_spectrum,
    tail_probability,
    two_point_ratio,
    verify_lemma2,
    weyl_relation_residual,
    __version__,
)


def run(command, params=None, seed=0, jobs=1):
    """Run a batch command in-process.

    Returns a dict with the parsed JSON summary, the CSV body, and the number
    of failed property assertions.
    """
    raw = run_command(command, _json.dumps(params or {}), seed, jobs)
    return {
        "summary": _json.loads(raw["summary"]),
        "csv": raw["csv"],
        "property_failures": raw["property_failures"],
    }
