"""Levelwise constructions on ind-systems: sums, kernels, cokernels, induced transitions."""
from __future__ import annotations

from ..errors import ShapeMismatch
from ..exactbase.modules import block_morphism
from ..supercomplex import (ChainMap, chain_cokernel, chain_kernel, direct_sum_complex,
                            solve_extend_plain, solve_lift_plain)
from .systems import IndComplex, IndMorphism, Window


def chain_block(sources, targets, blocks) -> ChainMap:
    """Block chain map between direct sums of supercomplexes (``None`` = zero block)."""
    S = direct_sum_complex(*sources)
    T = direct_sum_complex(*targets)
    comps = []
    for k in (0, 1):
        comps.append(block_morphism([s[k] for s in sources], [t[k] for t in targets],
                                    [[None if b is None else b[k] for b in row] for row in blocks]))
    return ChainMap(S, T, comps[0], comps[1])


def sum_ind(*xs: IndComplex) -> IndComplex:
    """Levelwise direct sum (equal windows)."""
    w = xs[0].window
    if any(x.window.length != w.length for x in xs):
        raise ShapeMismatch("levelwise sums need equal windows")
    tail = w.tail if all(x.window.tail == w.tail for x in xs) else "unknown"
    levels = [direct_sum_complex(*[x.levels[i] for x in xs]) for i in range(w.length)]
    trans = []
    for i in range(w.length - 1):
        n = len(xs)
        trans.append(chain_block([x.levels[i] for x in xs], [x.levels[i + 1] for x in xs],
                                 [[xs[a].transitions[i] if a == b else None for b in range(n)] for a in range(n)]))
    return IndComplex(levels, trans, Window(w.length, tail))


def sub_ind(ambient: IndComplex, incls) -> tuple[IndComplex, IndMorphism]:
    """Subsystem given by monic chain maps ``S_i -> A_i`` stable under the transitions."""
    trans = []
    for i in range(ambient.last):
        a = ambient.transitions[i]
        comps = [solve_lift_plain(incls[i + 1][k], a[k] @ incls[i][k]) for k in (0, 1)]
        trans.append(ChainMap(incls[i].source, incls[i + 1].source, comps[0], comps[1]))
    S = IndComplex([c.source for c in incls], trans, ambient.window)
    return S, IndMorphism.levelwise(S, ambient, incls)


def quotient_ind(ambient: IndComplex, projs) -> tuple[IndComplex, IndMorphism]:
    """Quotient system given by epic chain maps ``A_i -> Q_i`` whose kernels are stable."""
    trans = []
    for i in range(ambient.last):
        a = ambient.transitions[i]
        comps = [solve_extend_plain(projs[i][k], projs[i + 1][k] @ a[k]) for k in (0, 1)]
        trans.append(ChainMap(projs[i].target, projs[i + 1].target, comps[0], comps[1]))
    Q = IndComplex([p.target for p in projs], trans, ambient.window)
    return Q, IndMorphism.levelwise(ambient, Q, projs)


def kernel_ind(f: IndMorphism):
    """Levelwise kernel of a levelwise ind-morphism."""
    pairs = [chain_kernel(c) for c in f.components]
    return sub_ind(f.source, [p[1] for p in pairs])


def cokernel_ind(f: IndMorphism):
    pairs = [chain_cokernel(c) for c in f.components]
    return quotient_ind(f.target, [p[1] for p in pairs])

