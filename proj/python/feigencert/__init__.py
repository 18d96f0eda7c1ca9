"""Certified digits of the Feigenbaum fixed point g and alpha = 1/g(1)."""

import json

from ._core import (
    CertificationError,
    CheckpointError,
    alpha,
    constants,
    run,
    steps_for_precision,
    suite_names,
    taylor,
)

__all__ = [
    "CertificationError",
    "CheckpointError",
    "alpha",
    "constants",
    "run",
    "steps_for_precision",
    "suite_names",
    "taylor",
    "verify",
]


def verify(suite="all", seed=42, samples=100, m=50):
    """Run a verification suite; returns {"passed": bool, "checks": [...]}."""
    from ._core import verify_json

    return json.loads(verify_json(suite, seed, samples, m))
