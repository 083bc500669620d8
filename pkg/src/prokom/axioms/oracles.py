"""Exhaustive oracles over F_2 for tiny instances.

They share no code with the linear solvers beyond map enumeration and
composition: every candidate is built and tested directly.
"""
from __future__ import annotations

import itertools

from ..certificates import certified, morphism_equation, refuted, well_defined_claim
from ..errors import RingUnsupported, TooLarge
from ..exactbase.solve import enumerate_maps

MAX_TOTAL_DIM = 4


def _check_small(ring, dims, max_total_dim):
    if not (ring.kind == "F" and ring.p == 2):
        raise RingUnsupported("brute-force oracles run over F_2 only")
    if sum(dims) > max_total_dim:
        raise TooLarge(f"total dimension {sum(dims)} exceeds {max_total_dim}")


def _exhausted(predicate, ring, count):
    # no finite witness of infeasibility; the scope records the exhaustive search
    return refuted(predicate, ring, [], scope={"method": "exhaustive", "candidates": count},
                   reason=f"none of {count} candidates works")


def brute_force_homotopy_oracle(C, D, f, max_total_dim=MAX_TOTAL_DIM):
    """Enumerate every degree-one ``h: C -> D`` and test ``d h + h d = f``."""
    _check_small(C.ring, C.dims + D.dims, max_total_dim)
    H0 = list(enumerate_maps(C[0], D[1]))
    H1 = list(enumerate_maps(C[1], D[0]))
    count = 0
    for h0, h1 in itertools.product(H0, H1):
        count += 1
        h = (h0, h1)
        if all(D.d[k + 1] @ h[k] + h[1 - k] @ C.d[k] == f[k] for k in (0, 1)):
            claims = [well_defined_claim(h[k], f"h{k}") for k in (0, 1)]
            claims += [morphism_equation([(1, [D.d[k + 1], h[k]]), (1, [h[1 - k], C.d[k]])], f[k], f"homotopy{k}")
                       for k in (0, 1)]
            return certified("homotopy", C.ring, claims, witness={"h0": h0, "h1": h1},
                             scope={"method": "exhaustive"})
    return _exhausted("homotopy", C.ring, count)


def brute_force_lift_oracle(p, f, max_total_dim=MAX_TOTAL_DIM):
    """Enumerate every ``h`` with ``p h = f``."""
    _check_small(p.ring, (f.source.dim, p.source.dim, p.target.dim), max_total_dim)
    count = 0
    for h in enumerate_maps(f.source, p.source):
        count += 1
        if p @ h == f:
            return certified("lift", p.ring, [well_defined_claim(h, "h"), morphism_equation([(1, [p, h])], f, "p h = f")],
                             witness={"h": h}, scope={"method": "exhaustive"})
    return _exhausted("lift", p.ring, count)
