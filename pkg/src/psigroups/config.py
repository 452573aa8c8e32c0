"""Run-time limits shared by every module.

The CLI replaces :data:`LIMITS` from its global flags; library code reads the
current value at call time, so tests can use :func:`override` to tighten caps.
"""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    table_cap: int = 5000  # largest Cayley table a construction may produce
    lattice_cap: int = 256  # largest group whose full subgroup lattice is built
    exhaustive_cap: int = 14  # largest order handed to the Cayley-table enumerator
    factor_bound: int = 10**12
    full_assoc_check: int = 512  # above this order associativity is sampled
    assoc_samples: int = 100_000
    iso_node_budget: int = 2_000_000
    time_budget: float | None = None  # seconds, enumerator only
    node_budget: int | None = None  # search nodes, enumerator only
    workers: int = 1
    seed: int = 0


LIMITS = Limits()


def set_limits(**changes) -> Limits:
    global LIMITS
    LIMITS = dataclasses.replace(LIMITS, **changes)
    return LIMITS


@contextlib.contextmanager
def override(**changes):
    global LIMITS
    saved = LIMITS
    LIMITS = dataclasses.replace(LIMITS, **changes)
    try:
        yield LIMITS
    finally:
        LIMITS = saved
