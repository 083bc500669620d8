"""Seeded random instances: modules, maps, supercomplexes and systems of them.

Everything is drawn from one ``random.Random`` so a seed reproduces the
same instances bit for bit.  Maps are random elements of Hom modules with
half of the blocks zero, so differentials are small but rarely vacuous.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
import random

from ..exactbase.modules import BaseMorphism, BaseObject, hom_module
from ..exactbase.rings import ScalarRing, ring_from_name
from ..exactbase.solve import LinearProblem
from ..supercomplex import ChainMap, SuperComplex, direct_sum_complex

STABILIZING = "stabilizing"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class GeneratorConfig:
    ring: ScalarRing
    max_dim: int = 3
    window_length: int = 3
    tail: str = STABILIZING
    seed: int = 0
    torsion: tuple = (0, 2, 3, 4)
    zero_prob: float = 0.5

    def __post_init__(self):
        if isinstance(self.ring, str):
            object.__setattr__(self, "ring", ring_from_name(self.ring))
        if self.max_dim < 1 or self.window_length < 1:
            raise ValueError("max_dim and window_length must be positive")
        if self.tail not in (STABILIZING, UNKNOWN):
            raise ValueError(f"unknown tail kind {self.tail!r}")

    def with_seed(self, seed):
        return replace(self, seed=seed)


class Generator:
    def __init__(self, cfg: GeneratorConfig):
        self.cfg = cfg
        self.ring = cfg.ring
        self.rng = random.Random(cfg.seed)

    # modules and maps -----------------------------------------------------
    def scalar(self, spread=3):
        v = self.rng.randint(-spread, spread)
        return self.ring.coerce(v)

    def obj(self, max_dim=None, min_dim=0):
        n = self.rng.randint(min_dim, self.cfg.max_dim if max_dim is None else max_dim)
        if self.ring.is_field:
            return BaseObject.free(self.ring, n)
        return BaseObject(self.ring, [self.rng.choice(self.cfg.torsion) for _ in range(n)])

    def morphism(self, X, Y, zero_prob=None):
        p = self.cfg.zero_prob if zero_prob is None else zero_prob
        if self.rng.random() < p:
            return BaseMorphism.zero(X, Y)
        H, gens = hom_module(X, Y)
        f = BaseMorphism.zero(X, Y)
        for order, g in zip(H.orders, gens):
            k = self.rng.randrange(order) if order else self.rng.randint(-2, 2)
            if k:
                f = f + g.scale(k)
        return f

    def automorphism(self, X, steps=None):
        """A random automorphism and its inverse, as products of elementary moves."""
        A = BaseMorphism.identity(X)
        Ainv = BaseMorphism.identity(X)
        n = X.dim
        if n == 0:
            return A, Ainv
        for _ in range(steps if steps is not None else 2 * n):
            i, j = self.rng.randrange(n), self.rng.randrange(n)
            if self.ring.is_field and (i == j or self.rng.random() < 0.3):
                c = self.ring.coerce(self.rng.randint(1, 5))
                if self.ring.kind == "F":
                    c = c or 1
                E = _scale_gen(X, i, c)
                Einv = _scale_gen(X, i, self.ring.inv(c))
            elif i != j:
                c = self.rng.randint(-2, 2)
                E = _transvection(X, i, j, c)
                if E is None:
                    continue
                Einv = _transvection(X, i, j, -c)
            else:
                continue
            A = E @ A
            Ainv = Ainv @ Einv
        return A, Ainv

    def solve_random(self, prob: LinearProblem):
        return prob.random_solution(self.rng)

    # complexes ------------------------------------------------------------
    def supercomplex(self, max_dim=None):
        """Random ``d_k`` freely, the other differential from the square-zero constraints."""
        C0, C1 = self.obj(max_dim), self.obj(max_dim)
        k = self.rng.randrange(2)
        objs = (C0, C1)
        free = self.morphism(objs[k], objs[1 - k])
        prob = LinearProblem(self.ring)
        prob.unknown(objs[1 - k], objs[k], "d")
        prob.equation(objs[k], objs[k], [(1, None, 0, free)], None, "d free = 0")
        prob.equation(objs[1 - k], objs[1 - k], [(1, free, 0, None)], None, "free d = 0")
        other = self.solve_random(prob)[0]
        if self.rng.random() < self.cfg.zero_prob / 2:
            other = BaseMorphism.zero(other.source, other.target)
        ds = (free, other) if k == 0 else (other, free)
        return SuperComplex(C0, C1, ds[0], ds[1])

    def contractible(self, max_dim=None):
        """A conjugated sum of elementary contractible pieces ``X --id--> X``."""
        pieces = []
        cap = self.cfg.max_dim if max_dim is None else max_dim
        budget = self.rng.randint(0, max(1, cap // 2 + 1))
        for _ in range(budget):
            X = self.obj(1, 1)
            pieces.append(SuperComplex.elementary(X, self.rng.randrange(2)))
        if not pieces:
            return SuperComplex.zero(self.ring)
        return self.conjugate(direct_sum_complex(*pieces))

    def conjugate(self, C: SuperComplex):
        """An isomorphic copy of ``C`` (and the isomorphism ``C -> C'``)."""
        A0, A0i = self.automorphism(C[0])
        A1, A1i = self.automorphism(C[1])
        A, Ai = (A0, A1), (A0i, A1i)
        ds = [A[1 - k] @ C.d[k] @ Ai[k] for k in (0, 1)]
        return SuperComplex(C[0], C[1], ds[0], ds[1])

    def conjugate_with_iso(self, C: SuperComplex):
        A0, A0i = self.automorphism(C[0])
        A1, A1i = self.automorphism(C[1])
        D = SuperComplex(C[0], C[1], A1 @ C.d[0] @ A0i, A0 @ C.d[1] @ A1i)
        return D, ChainMap(C, D, A0, A1), ChainMap(D, C, A0i, A1i)

    def chain_map(self, C: SuperComplex, D: SuperComplex):
        """A random chain map, drawn from the solution module of the commutation equations."""
        prob = chain_map_problem(C, D)
        sol = self.solve_random(prob)
        if self.rng.random() < self.cfg.zero_prob / 2:
            return ChainMap.zero(C, D)
        return ChainMap(C, D, sol[0], sol[1])

    def equivalence(self, max_dim=None, source=None):
        """A homotopy equivalence ``C -> C' (+) E`` or its retraction; ``C' ~= C``, ``E`` contractible.

        With ``source`` given, the inclusion form out of ``source`` is returned.
        """
        from ..indpro.levelwise import chain_block
        C = self.supercomplex(max_dim) if source is None else source
        D, iso, inv = self.conjugate_with_iso(C)
        E = self.contractible(max_dim)
        if source is not None or self.rng.random() < 0.5:
            return chain_block([C], [D, E], [[iso], [None]])
        return chain_block([D, E], [C], [[inv, None]])

    # systems --------------------------------------------------------------
    def window(self, length=None):
        from ..indpro.systems import Window
        return Window(self.cfg.window_length if length is None else length, self.cfg.tail)

    def ind(self, length=None, max_dim=None):
        """Random levels and random chain-map transitions."""
        from ..indpro.systems import IndComplex
        w = self.window(length)
        levels = [self.supercomplex(max_dim) for _ in range(w.length)]
        trans = [self.chain_map(levels[i], levels[i + 1]) for i in range(w.length - 1)]
        return IndComplex(levels, trans, w)

    def ind_morphism(self, X, Y):
        """A random levelwise morphism between ind-systems with equal windows."""
        from ..indpro.systems import IndMorphism
        prob, ids = levelwise_ind_problem(X, Y)
        sol = self.solve_random(prob)
        return IndMorphism.levelwise(X, Y, [ChainMap(X.levels[i], Y.levels[i], sol[a], sol[b])
                                            for i, (a, b) in enumerate(ids)])

    def pro(self, length=None, ind_length=None, max_dim=None):
        """A levelwise grid: random ind levels, random levelwise pro transitions."""
        from ..indpro.systems import ProIndComplex
        w = self.window(length)
        inds = [self.ind(ind_length, max_dim) for _ in range(w.length)]
        alphas = [self.ind_morphism(inds[n + 1], inds[n]) for n in range(w.length - 1)]
        return ProIndComplex(inds, alphas, w)

    def pro_morphism(self, X, Y):
        from ..indpro.systems import ProIndMorphism
        prob, ids = levelwise_pro_problem(X, Y)
        sol = self.solve_random(prob)
        comps = [[ChainMap(X.levels[n].levels[i], Y.levels[n].levels[i], sol[a], sol[b])
                  for i, (a, b) in enumerate(row)] for n, row in enumerate(ids)]
        return ProIndMorphism(X, Y, comps)

    def extension(self, level="base", **kw):
        """A random extension: the kernel of a random levelwise map, completed by its cokernel."""
        from ..indpro.extensions import ExtensionTriple
        from ..supercomplex import chain_kernel
        if level == "base":
            E, F = self.supercomplex(kw.get("max_dim")), self.supercomplex(kw.get("max_dim"))
            return ExtensionTriple.from_inclusion(chain_kernel(self.chain_map(E, F))[1])
        if level == "ind":
            from ..indpro.levelwise import kernel_ind
            E = self.ind(kw.get("length"), kw.get("max_dim"))
            F = self.ind(E.length, kw.get("max_dim"))
            return ExtensionTriple.from_inclusion(kernel_ind(self.ind_morphism(E, F))[1])
        if level == "pro":
            E = self.pro(kw.get("length"), kw.get("ind_length"), kw.get("max_dim"))
            F = self.pro(E.length, E.levels[0].length, kw.get("max_dim"))
            incl = ExtensionTriple.from_projection(self.pro_morphism(E, F)).incl
            return ExtensionTriple.from_inclusion(incl)
        raise ValueError(f"unknown level {level!r}")


def gen_supercomplex(cfg: GeneratorConfig) -> SuperComplex:
    return Generator(cfg).supercomplex()


def gen_ind(cfg: GeneratorConfig):
    return Generator(cfg).ind()


def gen_pro(cfg: GeneratorConfig):
    return Generator(cfg).pro()


def gen_extension(cfg: GeneratorConfig, level="base"):
    return Generator(cfg).extension(level)


def chain_map_problem(C: SuperComplex, D: SuperComplex) -> LinearProblem:
    prob = LinearProblem(C.ring)
    prob.unknown(C[0], D[0], "f0")
    prob.unknown(C[1], D[1], "f1")
    for k in (0, 1):
        # dD_k f_k - f_{k+1} dC_k = 0
        prob.equation(C[k], D[k + 1], [(1, D.d[k], k, None), (-1, None, 1 - k, C.d[k])], None, f"commute{k}")
    return prob


def _scale_gen(X, i, c):
    rows = [[0] * X.dim for _ in range(X.dim)]
    for k in range(X.dim):
        rows[k][k] = c if k == i else 1
    return BaseMorphism.from_rows(X, X, rows)


def _transvection(X, i, j, c):
    """``e_j -> e_j + c e_i`` when that is a well-defined automorphism."""
    if c == 0:
        return None
    rows = [[1 if r == k else 0 for k in range(X.dim)] for r in range(X.dim)]
    rows[i][j] = c
    a_j, a_i = X.orders[j], X.orders[i]
    # need a_j * c = 0 in Z/a_i; the inverse has the same condition
    if X.ring.kind == "Z" and a_j and (a_i == 0 or (a_j * c) % a_i):
        return None
    return BaseMorphism.from_rows(X, X, rows)


def levelwise_ind_problem(X, Y):
    """Unknown chain maps ``X_i -> Y_i`` commuting with the ind transitions."""
    from ..indpro.homs import _add_chain_unknown
    prob = LinearProblem(X.ring)
    ids = [_add_chain_unknown(prob, X.levels[i], Y.levels[i], f"f{i}") for i in range(X.length)]
    for i in range(X.last):
        for k in (0, 1):
            prob.equation(X.levels[i][k], Y.levels[i + 1][k],
                          [(1, Y.transitions[i][k], ids[i][k], None), (-1, None, ids[i + 1][k], X.transitions[i][k])],
                          None, f"ind {i}.{k}")
    return prob, ids


def levelwise_pro_problem(X, Y):
    """Unknown levelwise maps ``X_{n,i} -> Y_{n,i}`` commuting with both kinds of transitions."""
    from ..indpro.homs import _add_chain_unknown
    prob = LinearProblem(X.ring)
    ids = []
    for n in range(X.length):
        Xn, Yn = X.levels[n], Y.levels[n]
        row = [_add_chain_unknown(prob, Xn.levels[i], Yn.levels[i], f"f{n},{i}") for i in range(Xn.length)]
        for i in range(Xn.last):
            for k in (0, 1):
                prob.equation(Xn.levels[i][k], Yn.levels[i + 1][k],
                              [(1, Yn.transitions[i][k], row[i][k], None),
                               (-1, None, row[i + 1][k], Xn.transitions[i][k])], None, f"ind {n},{i}.{k}")
        ids.append(row)
    for n in range(X.last):
        a, b = X.transitions[n], Y.transitions[n]
        for i in range(X.levels[n].length):
            for k in (0, 1):
                prob.equation(X.levels[n + 1].levels[i][k], Y.levels[n].levels[i][k],
                              [(1, b.components[i][k], ids[n + 1][i][k], None),
                               (-1, None, ids[n][i][k], a.components[i][k])], None, f"pro {n},{i}.{k}")
    return prob, ids

