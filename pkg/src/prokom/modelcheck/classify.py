"""Cofibrations, weak equivalences and fibrations of levelwise morphisms.

* cofibration: a degreewise inflation, i.e. levelwise injective with a
  pro-locally split completed extension;
* weak equivalence: the mapping cone is locally contractible;
* fibration: a degreewise deflation whose kernel carries the injectivity
  flag.  An unflagged kernel gives an inconclusive verdict.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..certificates import Verdict, inconclusive, morphism_equation, nonzero_claim, refuted
from ..exactbase.modules import BaseMorphism, cokernel, kernel
from ..indpro.extensions import ExtensionTriple, is_pro_locally_split
from .local import as_pro_map, is_local_equivalence_via_cone


@dataclass
class MorphismClass:
    cofibration: Verdict
    weak_equivalence: Verdict
    fibration: Verdict

    @property
    def trivial_cofibration(self):
        return self.cofibration.certified and self.weak_equivalence.certified

    @property
    def trivial_fibration(self):
        return self.fibration.certified and self.weak_equivalence.certified

    def summary(self):
        return {name: getattr(self, name).outcome.name
                for name in ("cofibration", "weak_equivalence", "fibration")}


def _components(f):
    for n, row in enumerate(f.components):
        for i, c in enumerate(row.components):
            for k in (0, 1):
                yield (n, i, k), c.f[k]


def _at_colimit(f, n, i):
    """Is ``(n, i)`` the last stored level, with stabilizing tails on both sides?"""
    X, Y = f.source, f.target
    return (n == X.last and i == X.levels[n].last and X.window.stabilizing and Y.window.stabilizing
            and X.levels[n].window.stabilizing and Y.levels[n].window.stabilizing)


def _levelwise_failure(f, predicate, test):
    """First level where ``test`` fails, as a verdict; ``None`` if it never fails."""
    for (n, i, k), m in _components(f):
        claims = test(m, f"level ({n},{i}) degree {k}")
        if claims is None:
            continue
        if _at_colimit(f, n, i):
            return refuted(predicate, f.ring, claims, witness={"level": (n, i), "degree": k},
                           reason=f"fails at the last level ({n},{i}) in degree {k}")
        return inconclusive(predicate, f"not levelwise at ({n},{i}) degree {k}; no levelwise representation found",
                            witness={"level": (n, i), "degree": k})
    return None


def _not_injective(m, label):
    K, incl = kernel(m)
    if K.is_zero():
        return None
    return [morphism_equation([(1, [m, incl])], BaseMorphism.zero(incl.source, m.target), f"{label}: f k = 0"),
            nonzero_claim(incl.matrix, incl.target.orders, f"{label}: k != 0")]


def _not_surjective(m, label):
    Qm, proj = cokernel(m)
    if Qm.is_zero():
        return None
    return [morphism_equation([(1, [proj, m])], BaseMorphism.zero(m.source, proj.target), f"{label}: q f = 0"),
            nonzero_claim(proj.matrix, proj.target.orders, f"{label}: q != 0")]


def is_cofibration(f) -> Verdict:
    f = as_pro_map(f)
    bad = _levelwise_failure(f, "cofibration", _not_injective)
    if bad is not None:
        return bad
    v = is_pro_locally_split(ExtensionTriple.from_inclusion(f))
    return _renamed(v, "cofibration")


def is_fibration(f, kernel_injective=None) -> Verdict:
    """``kernel_injective`` overrides the kernel's automatic injectivity flag."""
    f = as_pro_map(f)
    bad = _levelwise_failure(f, "fibration", _not_surjective)
    if bad is not None:
        return bad
    ext = ExtensionTriple.from_projection(f)
    v = _renamed(is_pro_locally_split(ext), "fibration")
    if not v.certified:
        return v
    flagged = ext.K.injective if kernel_injective is None else kernel_injective
    if not flagged:
        return inconclusive("fibration", "deflation certified, but the kernel is not flagged injective",
                            witness={"deflation": v})
    return v


def _renamed(v, predicate):
    v.predicate = predicate
    if v.certificate is not None:
        v.certificate.predicate = predicate
    return v


def classify(f, kernel_injective=None) -> MorphismClass:
    """The three class verdicts, computed independently."""
    f = as_pro_map(f)
    return MorphismClass(is_cofibration(f), is_local_equivalence_via_cone(f),
                         is_fibration(f, kernel_injective))

