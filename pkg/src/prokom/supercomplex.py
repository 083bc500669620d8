"""Z/2-graded chain complexes ("supercomplexes") over presented modules.

A supercomplex has objects ``C_0, C_1`` and differentials
``d_k: C_k -> C_{k+1}`` (indices mod 2) with ``d_1 d_0 = 0`` and
``d_0 d_1 = 0``.

Sign conventions:

* ``shift(C)_k = C_{k+1}`` with differential ``-d_{k+1}``;
* ``cone(f)_k = C_{k+1} (+) D_k`` with differential
  ``[[-dC_{k+1}, 0], [f_{k+1}, dD_k]]``, so the inclusion of ``D`` and the
  projection onto ``C[1]`` carry no signs;
* ``HOM(C, D)_n = Hom(C_0, D_n) x Hom(C_1, D_{1+n})`` with
  ``delta(f)_k = dD_{k+n} f_k - (-1)^n f_{k-1} dC_k``.  Under Z/2 grading
  ``k - 1 = k + 1``.
"""
from __future__ import annotations

from .certificates import (certified, infeasible_claim, morphism_equation, refuted)
from .errors import DataInvalid, NotChainMap, RingMismatch, ShapeMismatch
from .exactbase.matrix import Matrix
from .exactbase.modules import (BaseMorphism, BaseObject, block_morphism, cokernel, direct_sum,
                                hom_coordinates, hom_generators, kernel)
from .exactbase.solve import (_extend_problem, _lift_problem, solve_graded_homotopy)


class _Pair(tuple):
    """A pair indexed mod 2."""

    def __getitem__(self, k):
        return tuple.__getitem__(self, k % 2)


class SuperComplex:
    __slots__ = ("objects", "d")

    def __init__(self, c0: BaseObject, c1: BaseObject, d0: BaseMorphism, d1: BaseMorphism, *, check=True):
        if c0.ring != c1.ring:
            raise RingMismatch("degrees over different rings")
        if d0.source != c0 or d0.target != c1 or d1.source != c1 or d1.target != c0:
            raise ShapeMismatch("differentials do not match the graded objects")
        if check and not ((d1 @ d0).is_zero() and (d0 @ d1).is_zero()):
            raise DataInvalid("differential does not square to zero")
        self.objects = _Pair((c0, c1))
        self.d = _Pair((d0, d1))

    @classmethod
    def from_matrices(cls, ring, c0, c1, d0, d1):
        """Build from orders (or BaseObjects) and row lists."""
        C0 = c0 if isinstance(c0, BaseObject) else BaseObject(ring, c0)
        C1 = c1 if isinstance(c1, BaseObject) else BaseObject(ring, c1)
        return cls(C0, C1, BaseMorphism.from_rows(C0, C1, d0), BaseMorphism.from_rows(C1, C0, d1))

    @classmethod
    def zero(cls, ring):
        Z = BaseObject.zero(ring)
        z = BaseMorphism.zero(Z, Z)
        return cls(Z, Z, z, z)

    @classmethod
    def concentrated(cls, obj: BaseObject, degree=0):
        """``obj`` in one degree, zero in the other."""
        Z = BaseObject.zero(obj.ring)
        objs = (obj, Z) if degree == 0 else (Z, obj)
        return cls(objs[0], objs[1], BaseMorphism.zero(objs[0], objs[1]), BaseMorphism.zero(objs[1], objs[0]))

    @classmethod
    def unit(cls, ring):
        return cls.concentrated(BaseObject.free(ring, 1))

    @classmethod
    def elementary(cls, obj: BaseObject, degree=0):
        """The contractible complex ``obj --id--> obj`` starting in ``degree``."""
        I = BaseMorphism.identity(obj)
        Z = BaseMorphism.zero(obj, obj)
        return cls(obj, obj, I, Z) if degree == 0 else cls(obj, obj, Z, I)

    @property
    def ring(self):
        return self.objects[0].ring

    def __getitem__(self, k):
        return self.objects[k % 2]

    def is_zero(self):
        return self.objects[0].is_zero() and self.objects[1].is_zero()

    @property
    def dims(self):
        return (self.objects[0].dim, self.objects[1].dim)

    def __eq__(self, other):
        return isinstance(other, SuperComplex) and self.objects == other.objects and self.d == other.d

    def __hash__(self):
        return hash((self.objects, self.d))

    def __repr__(self):
        return f"SuperComplex({self.objects[0]!r} <-> {self.objects[1]!r})"

    def to_json(self):
        return {"ring": self.ring.name, "c0": self.objects[0].to_json(), "c1": self.objects[1].to_json(),
                "d0": self.d[0].matrix.to_json(), "d1": self.d[1].matrix.to_json()}

    @classmethod
    def from_json(cls, obj, ring=None):
        from .exactbase.rings import ring_from_name
        ring = ring or ring_from_name(obj["ring"])
        C0, C1 = BaseObject(ring, obj["c0"]), BaseObject(ring, obj["c1"])
        return cls(C0, C1, BaseMorphism(C0, C1, Matrix.from_json(ring, obj["d0"])),
                   BaseMorphism(C1, C0, Matrix.from_json(ring, obj["d1"])))


class GradedMap:
    """Components ``f_k: C_k -> D_{k+degree}`` with no commutation requirement."""

    __slots__ = ("source", "target", "degree", "f")

    def __init__(self, source: SuperComplex, target: SuperComplex, f0: BaseMorphism, f1: BaseMorphism, degree=0):
        degree %= 2
        for k, fk in enumerate((f0, f1)):
            if fk.source != source[k] or fk.target != target[k + degree]:
                raise ShapeMismatch(f"component {k} has the wrong source/target for degree {degree}")
        self.source = source
        self.target = target
        self.degree = degree
        self.f = _Pair((f0, f1))

    @property
    def ring(self):
        return self.source.ring

    def __getitem__(self, k):
        return self.f[k % 2]

    def is_zero(self):
        return self.f[0].is_zero() and self.f[1].is_zero()

    def __add__(self, other):
        return type(self)._make(self.source, self.target, self.f[0] + other.f[0], self.f[1] + other.f[1], self.degree)

    def __sub__(self, other):
        return type(self)._make(self.source, self.target, self.f[0] - other.f[0], self.f[1] - other.f[1], self.degree)

    def __neg__(self):
        return type(self)._make(self.source, self.target, -self.f[0], -self.f[1], self.degree)

    def __matmul__(self, other):
        """Composition ``self o other``; degrees add."""
        if other.target != self.source:
            raise ShapeMismatch("graded maps do not compose")
        a = other.degree
        comps = [self.f[(k + a) % 2] @ other.f[k] for k in (0, 1)]
        cls = ChainMap if isinstance(self, ChainMap) and isinstance(other, ChainMap) else GradedMap
        return cls._make(other.source, self.target, comps[0], comps[1], (self.degree + a) % 2)

    @classmethod
    def _make(cls, source, target, f0, f1, degree):
        if cls is ChainMap:
            return ChainMap(source, target, f0, f1, check=False)
        return GradedMap(source, target, f0, f1, degree)

    def __eq__(self, other):
        return (isinstance(other, GradedMap) and self.source == other.source and self.target == other.target
                and self.degree == other.degree and self.f == other.f)

    def __hash__(self):
        return hash((self.source, self.target, self.degree, self.f))

    def __repr__(self):
        return f"{type(self).__name__}(deg {self.degree}: {self.f[0].matrix.rows()}, {self.f[1].matrix.rows()})"

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(), "degree": self.degree,
                "f0": self.f[0].matrix.to_json(), "f1": self.f[1].matrix.to_json()}


class ChainMap(GradedMap):
    """A degree-zero graded map commuting with the differentials."""

    __slots__ = ()

    def __init__(self, source, target, f0, f1, *, check=True):
        super().__init__(source, target, f0, f1, 0)
        if check and not commutes(self):
            raise NotChainMap("map does not commute with the differentials")

    @classmethod
    def identity(cls, C):
        return cls(C, C, BaseMorphism.identity(C[0]), BaseMorphism.identity(C[1]), check=False)

    @classmethod
    def zero(cls, C, D):
        return cls(C, D, BaseMorphism.zero(C[0], D[0]), BaseMorphism.zero(C[1], D[1]), check=False)

    def to_json(self):
        out = super().to_json()
        del out["degree"]
        return out

    @classmethod
    def from_json(cls, obj, ring=None):
        C = SuperComplex.from_json(obj["source"], ring)
        D = SuperComplex.from_json(obj["target"], ring or C.ring)
        ring = C.ring
        return cls(C, D, BaseMorphism(C[0], D[0], Matrix.from_json(ring, obj["f0"])),
                   BaseMorphism(C[1], D[1], Matrix.from_json(ring, obj["f1"])))


def commutes(f: GradedMap) -> bool:
    C, D = f.source, f.target
    return all(D.d[k] @ f.f[k] == f.f[(k + 1) % 2] @ C.d[k] for k in (0, 1))


def as_chain_map(f: GradedMap) -> ChainMap:
    if f.degree != 0:
        raise NotChainMap("only degree-zero maps can be chain maps")
    return ChainMap(f.source, f.target, f.f[0], f.f[1])


# ---------------------------------------------------------------------------
# constructions


def shift(C: SuperComplex) -> SuperComplex:
    return SuperComplex(C[1], C[0], -C.d[1], -C.d[0], check=False)


def shift_map(f: GradedMap) -> GradedMap:
    return type(f)._make(shift(f.source), shift(f.target), f.f[1], f.f[0], f.degree)


def direct_sum_complex(*cs: SuperComplex) -> SuperComplex:
    ring = cs[0].ring
    objs = [direct_sum(*[c[k] for c in cs]) if cs else BaseObject.zero(ring) for k in (0, 1)]
    ds = []
    for k in (0, 1):
        n = len(cs)
        blocks = [[cs[i].d[k] if i == j else None for j in range(n)] for i in range(n)]
        ds.append(block_morphism([c[k] for c in cs], [c[k + 1] for c in cs], blocks))
    return SuperComplex(objs[0], objs[1], ds[0], ds[1], check=False)


def cone(f: ChainMap):
    """Return ``(cone(f), incl: D -> cone, proj: cone -> C[1])``."""
    if not isinstance(f, ChainMap):
        f = as_chain_map(f)
    C, D = f.source, f.target
    objs = [direct_sum(C[k + 1], D[k]) for k in (0, 1)]
    ds = []
    for k in (0, 1):
        ds.append(block_morphism([C[k + 1], D[k]], [C[k], D[k + 1]],
                                 [[-C.d[k + 1], None], [f[k + 1], D.d[k]]]))
    K = SuperComplex(objs[0], objs[1], ds[0], ds[1])
    incl = ChainMap(D, K, *[block_morphism([D[k]], [C[k + 1], D[k]], [[None], [BaseMorphism.identity(D[k])]])
                            for k in (0, 1)])
    proj = ChainMap(K, shift(C), *[block_morphism([C[k + 1], D[k]], [C[k + 1]],
                                                  [[BaseMorphism.identity(C[k + 1]), None]]) for k in (0, 1)])
    return K, incl, proj


def compose(*maps):
    """``compose(f, g, h) = f @ g @ h``."""
    out = maps[0]
    for m in maps[1:]:
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# the mapping complex


class HomComplex:
    """``HOM(C, D)`` with coordinates for its elements.

    ``complex`` is the SuperComplex whose degree ``n`` object presents the
    graded maps of degree ``n``; :meth:`to_map` and :meth:`coordinates`
    translate between coordinate vectors and GradedMaps.
    """

    def __init__(self, C: SuperComplex, D: SuperComplex):
        if C.ring != D.ring:
            raise RingMismatch("HOM between complexes over different rings")
        self.C, self.D = C, D
        self.gens = {}
        objs = []
        for n in (0, 1):
            parts = []
            for k in (0, 1):
                g = hom_generators(C[k], D[k + n])
                self.gens[n, k] = g
                parts.append(BaseObject(C.ring, [o for *_, o in g]))
            objs.append(direct_sum(*parts))
        ds = []
        for n in (0, 1):
            cols = []
            for vec in _unit_vectors(objs[n].dim):
                cols.append(self.coordinates(self.delta(self.to_map(n, vec))))
            M = Matrix(C.ring, objs[1 - n].dim, objs[n].dim,
                       [[cols[j][i] for j in range(objs[n].dim)] for i in range(objs[1 - n].dim)])
            ds.append(BaseMorphism(objs[n], objs[1 - n], M))
        self.complex = SuperComplex(objs[0], objs[1], ds[0], ds[1])

    def to_map(self, n, vec) -> GradedMap:
        n %= 2
        comps = []
        pos = 0
        for k in (0, 1):
            src, tgt = self.C[k], self.D[k + n]
            rows = [[0] * src.dim for _ in range(tgt.dim)]
            for r, c, step, _ in self.gens[n, k]:
                rows[r][c] += vec[pos] * step
                pos += 1
            comps.append(BaseMorphism.from_rows(src, tgt, rows))
        return GradedMap(self.C, self.D, comps[0], comps[1], n)

    def coordinates(self, f: GradedMap):
        n = f.degree
        return hom_coordinates(f.f[0], self.gens[n, 0]) + hom_coordinates(f.f[1], self.gens[n, 1])

    def delta(self, f: GradedMap) -> GradedMap:
        """``delta(f)_k = dD_{k+n} f_k - (-1)^n f_{k-1} dC_k``."""
        n = f.degree
        sign = -1 if n % 2 else 1
        comps = [self.D.d[k + n] @ f.f[k] - (f.f[(k - 1) % 2] @ self.C.d[k]).scale(sign) for k in (0, 1)]
        return GradedMap(self.C, self.D, comps[0], comps[1], n + 1)


def _unit_vectors(n):
    for i in range(n):
        v = [0] * n
        v[i] = 1
        yield v


def hom_complex(C: SuperComplex, D: SuperComplex) -> SuperComplex:
    return HomComplex(C, D).complex


# ---------------------------------------------------------------------------
# homology, kernels and cokernels of complexes


def cycles(C: SuperComplex, k):
    return kernel(C.d[k % 2])


def homology(C: SuperComplex, k) -> BaseObject:
    """``H_k = ker d_k / im d_{k+1}`` as a presented module."""
    K, i = cycles(C, k)
    v = solve_lift_plain(i, C.d[(k + 1) % 2])
    Hq, _ = cokernel(v)
    return Hq


def solve_lift_plain(p: BaseMorphism, f: BaseMorphism) -> BaseMorphism:
    """A lift ``h`` with ``p @ h == f``; raises if none exists."""
    sol, _ = _lift_problem(p, f).solve()
    if sol is None:
        raise ValueError("map does not factor")
    return sol[0]


def solve_extend_plain(i: BaseMorphism, f: BaseMorphism) -> BaseMorphism:
    sol, _ = _extend_problem(i, f).solve()
    if sol is None:
        raise ValueError("map does not factor")
    return sol[0]


def chain_kernel(f: ChainMap):
    """Degreewise kernel with the induced differential: ``(K, incl)``."""
    C = f.source
    ks = [kernel(f[k]) for k in (0, 1)]
    ds = [solve_lift_plain(ks[(k + 1) % 2][1], C.d[k] @ ks[k][1]) for k in (0, 1)]
    K = SuperComplex(ks[0][0], ks[1][0], ds[0], ds[1])
    return K, ChainMap(K, C, ks[0][1], ks[1][1])


def chain_cokernel(f: ChainMap):
    """Degreewise cokernel with the induced differential: ``(Q, proj)``."""
    D = f.target
    qs = [cokernel(f[k]) for k in (0, 1)]
    ds = [solve_extend_plain(qs[k][1], qs[(k + 1) % 2][1] @ D.d[k]) for k in (0, 1)]
    Q = SuperComplex(qs[0][0], qs[1][0], ds[0], ds[1])
    return Q, ChainMap(D, Q, qs[0][1], qs[1][1])


# ---------------------------------------------------------------------------
# predicates


def solve_homotopy(f: GradedMap):
    """Search ``h`` of degree one with ``dD h + h dC = f``."""
    if f.degree != 0:
        raise ShapeMismatch("only degree-zero maps can be null-homotopic")
    return solve_graded_homotopy(f.source.d, f.target.d, f.f)


def is_contractible(C: SuperComplex):
    v = solve_homotopy(ChainMap.identity(C))
    v.predicate = "contractible"
    if v.certificate is not None:
        v.certificate.predicate = "contractible"
    return v


def exactness_data(C: SuperComplex, k):
    """``(i, p, d)`` for the sequence ``ker d_k --i--> C_k --p--> ker d_{k+1}``."""
    K, i = cycles(C, k)
    K1, i1 = cycles(C, k + 1)
    p = solve_lift_plain(i1, C.d[k % 2])
    return i, p, i1


def is_exact_split(C: SuperComplex):
    """Is ``ker d -> C -> ker d[1]`` a split conflation in both degrees?

    The certificate records, per degree, the section ``s`` of the
    deflation and the retraction ``r`` of the inflation with
    ``i r + s p = id``; a refutation is an infeasibility certificate for
    the section.
    """
    ring = C.ring
    claims = []
    witness = {}
    for k in (0, 1):
        i, p, i1 = exactness_data(C, k)
        K1 = p.target
        prob = _lift_problem(p, BaseMorphism.identity(K1))
        sol, y = prob.solve()
        if sol is None:
            return refuted("exact", ring, [infeasible_claim(prob, y, f"no section in degree {k}")],
                           reason=f"degree {k} deflation does not split")
        s = sol[0]
        r = solve_lift_plain(i, BaseMorphism.identity(C[k]) - s @ p)
        witness[f"s{k}"], witness[f"r{k}"] = s, r
        claims += [
            morphism_equation([(1, [i1, p])], C.d[k % 2], f"d{k} factors through cycles"),
            morphism_equation([(1, [C.d[k % 2], i])], BaseMorphism.zero(i.source, C[k + 1]), f"d{k} kills cycles"),
            morphism_equation([(1, [p, s])], BaseMorphism.identity(K1), f"section {k}"),
            morphism_equation([(1, [r, i])], BaseMorphism.identity(i.source), f"retraction {k}"),
            morphism_equation([(1, [i, r]), (1, [s, p])], BaseMorphism.identity(C[k]), f"splitting {k}"),
        ]
    return certified("exact", ring, claims, witness)


def is_quasi_iso(f: ChainMap):
    K, _, _ = cone(f)
    v = is_exact_split(K)
    v.predicate = "quasi_iso"
    v.certificate.predicate = "quasi_iso"
    return v
