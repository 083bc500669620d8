"""Hom modules between ind-systems and pro-towers.

``Hom(X, Y) = lim_i colim_j Hom(X_i, Y_j)`` for ind-systems and
``lim_n colim_m Hom(X_m, Y_n)`` for pro-towers.  Inside a window the colimit
is taken at the last stored level and the limit is the module of
compatible families, computed as the solution module of one linear problem.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import RingMismatch, WindowTooShort
from ..exactbase.modules import BaseObject
from ..exactbase.solve import LinearProblem
from ..supercomplex import ChainMap
from .systems import IndComplex, IndMorphism, ProIndComplex


@dataclass
class HomResult:
    """A Hom module: its presentation and one representative per generator."""

    module: BaseObject
    generators: list
    problem: LinearProblem
    scope: dict

    @property
    def rank(self):
        return self.module.dim


def tail_reached(X) -> bool:
    """Stabilizing tail, or an unknown tail whose last stored transition is an identity."""
    if X.window.stabilizing:
        return True
    if X.length < 2:
        return False
    t = X.transitions[-1]
    if isinstance(t, ChainMap):
        return t.source == t.target and t == ChainMap.identity(t.source)
    return t.source == t.target and t == IndMorphism.identity(t.source)


def _require(*systems):
    for X in systems:
        if not tail_reached(X):
            raise WindowTooShort("unknown tail and no stabilization inside the window")


def _scope(*systems):
    return {"windows": [X.window.to_json() for X in systems]}


def into_last(Y: IndComplex, beta: IndMorphism | None = None):
    """Chain map ``Y_last -> Y'_last`` induced by an ind-morphism into ``Y'`` (or the identity)."""
    if beta is None:
        return ChainMap.identity(Y.levels[-1])
    return beta.pushed(beta.source.last)


def _add_chain_unknown(prob, A, B, name):
    u0 = prob.unknown(A[0], B[0], f"{name}.0")
    u1 = prob.unknown(A[1], B[1], f"{name}.1")
    for k, u in ((0, u0), (1, u1)):
        # dB_k f_k - f_{k+1} dA_k = 0
        prob.equation(A[k], B[k + 1], [(1, B.d[k], u, None), (-1, None, u1 if k == 0 else u0, A.d[k])],
                      None, f"{name} commutes {k}")
    return u0, u1


def ind_family_problem(X: IndComplex, targets):
    """Unknown chain maps ``X_i -> T`` for each ``i`` with ``f_{i+1} x_i = f_i``.

    ``targets`` is one SuperComplex (the colimit level); returns the
    problem and the unknown ids per level.
    """
    T = targets
    prob = LinearProblem(X.ring)
    ids = [_add_chain_unknown(prob, X.levels[i], T, f"f{i}") for i in range(X.length)]
    for i in range(X.last):
        x = X.transitions[i]
        for k in (0, 1):
            prob.equation(X.levels[i][k], T[k], [(1, None, ids[i + 1][k], x[k]), (-1, None, ids[i][k], None)],
                          None, f"compatible {i}.{k}")
    return prob, ids


def ind_hom(X: IndComplex, Y: IndComplex) -> HomResult:
    if X.ring != Y.ring:
        raise RingMismatch("ind-systems over different rings")
    _require(X, Y)
    T = Y.levels[-1]
    prob, ids = ind_family_problem(X, T)
    M, gens = prob.homogeneous_module()
    reps = []
    for g in gens:
        comps = [ChainMap(X.levels[i], T, g[ids[i][0]], g[ids[i][1]]) for i in range(X.length)]
        reps.append(IndMorphism(X, Y, [Y.last] * X.length, comps))
    return HomResult(M, reps, prob, _scope(X, Y))


def pro_family_problem(X: IndComplex, Y: ProIndComplex):
    """Unknown ind-morphisms ``X -> Y_n`` (into last ind levels), compatible along ``Y``."""
    prob = LinearProblem(Y.ring)
    ids = []
    for n in range(Y.length):
        T = Y.levels[n].levels[-1]
        row = [_add_chain_unknown(prob, X.levels[i], T, f"f{n},{i}") for i in range(X.length)]
        for i in range(X.last):
            x = X.transitions[i]
            for k in (0, 1):
                prob.equation(X.levels[i][k], T[k], [(1, None, row[i + 1][k], x[k]), (-1, None, row[i][k], None)],
                              None, f"ind compatible {n},{i}.{k}")
        ids.append(row)
    for n in range(Y.last):
        B = into_last(Y.levels[n + 1], Y.transitions[n])
        T = Y.levels[n].levels[-1]
        for i in range(X.length):
            for k in (0, 1):
                prob.equation(X.levels[i][k], T[k], [(1, B[k], ids[n + 1][i][k], None), (-1, None, ids[n][i][k], None)],
                              None, f"pro compatible {n},{i}.{k}")
    return prob, ids


def pro_hom(X: ProIndComplex, Y: ProIndComplex) -> HomResult:
    """Generators are returned as lists of IndMorphisms ``X_last -> Y_n``, one per ``n``."""
    if X.ring != Y.ring:
        raise RingMismatch("pro-systems over different rings")
    _require(X, Y, *X.levels, *Y.levels)
    Xl = X.levels[-1]
    prob, ids = pro_family_problem(Xl, Y)
    M, gens = prob.homogeneous_module()
    reps = []
    for g in gens:
        fam = []
        for n in range(Y.length):
            Yn = Y.levels[n]
            T = Yn.levels[-1]
            comps = [ChainMap(Xl.levels[i], T, g[ids[n][i][0]], g[ids[n][i][1]]) for i in range(Xl.length)]
            fam.append(IndMorphism(Xl, Yn, [Yn.last] * Xl.length, comps))
        reps.append(fam)
    return HomResult(M, reps, prob, _scope(X, Y))

