"""Finitely generated modules given by diagonal presentations, and their maps."""
from __future__ import annotations

from math import gcd

from .linalg import diagonalize, nullspace, present_quotient, invariant_factors
from .matrix import Matrix
from .rings import ScalarRing
from ..errors import NotWellDefined, RingMismatch, ShapeMismatch


class BaseObject:
    """``ring^n / diag(orders)``: generator ``k`` has order ``orders[k]``.

    An order of 0 means a free generator.  Over a field all orders are 0, so
    the object is just ``ring^n``.  Orders of 1 are rejected (such a
    generator is zero and should be dropped).
    """

    __slots__ = ("ring", "orders")

    def __init__(self, ring: ScalarRing, orders=()):
        orders = tuple(int(o) for o in orders)
        if ring.is_field and any(orders):
            raise ValueError("objects over a field are free: all orders must be 0")
        if any(o < 0 or o == 1 for o in orders):
            raise ValueError(f"orders must be 0 or >= 2, got {orders}")
        self.ring = ring
        self.orders = orders

    @classmethod
    def free(cls, ring, n):
        return cls(ring, (0,) * n)

    @classmethod
    def zero(cls, ring):
        return cls(ring, ())

    @property
    def dim(self):
        return len(self.orders)

    def is_zero(self):
        return not self.orders

    @property
    def presentation(self) -> Matrix:
        return Matrix.diag(self.ring, list(self.orders))

    def invariants(self):
        """Isomorphism invariant: (sorted invariant factors > 1, free rank)."""
        tors = [o for o in self.orders if o]
        free = self.dim - len(tors)
        if not tors:
            return ((), free)
        facs = invariant_factors(Matrix.diag(self.ring, tors))
        return (tuple(f for f in facs if f != 1), free)

    def __eq__(self, other):
        return isinstance(other, BaseObject) and self.ring == other.ring and self.orders == other.orders

    def __hash__(self):
        return hash((self.ring, self.orders))

    def __repr__(self):
        if self.ring.is_field:
            return f"{self.ring.name}^{self.dim}"
        parts = ["Z" if o == 0 else f"Z/{o}" for o in self.orders]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return list(self.orders)

    @classmethod
    def from_json(cls, ring, obj):
        return cls(ring, obj)


def direct_sum(*objs: BaseObject) -> BaseObject:
    ring = objs[0].ring
    return BaseObject(ring, sum((o.orders for o in objs), ()))


def _reduce(ring, data, orders):
    if ring.kind != "Z":
        return data
    return tuple(tuple(x % m for x in row) if m else row for row, m in zip(data, orders))


def well_defined(matrix: Matrix, source: BaseObject, target: BaseObject) -> bool:
    """``matrix`` carries the relations of ``source`` into those of ``target``."""
    if matrix.shape != (target.dim, source.dim):
        return False
    if matrix.ring.kind != "Z":
        return True
    for r, b in enumerate(target.orders):
        row = matrix.data[r]
        for c, a in enumerate(source.orders):
            if a == 0:
                continue
            v = a * row[c]
            if (v % b if b else v) != 0:
                return False
    return True


class BaseMorphism:
    """A module map given by its matrix on generators, reduced mod target orders."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: BaseObject, target: BaseObject, matrix: Matrix, *, check=True):
        if source.ring != target.ring or matrix.ring != source.ring:
            raise RingMismatch("morphism between different rings")
        if matrix.shape != (target.dim, source.dim):
            raise ShapeMismatch(f"matrix {matrix.shape} for {source.dim} -> {target.dim}")
        if check and not well_defined(matrix, source, target):
            raise NotWellDefined(f"matrix does not define a map {source} -> {target}")
        if source.ring.kind == "Z" and any(target.orders):
            matrix = Matrix(matrix.ring, matrix.nrows, matrix.ncols,
                            _reduce(matrix.ring, matrix.data, target.orders), _trusted=True)
        self.source = source
        self.target = target
        self.matrix = matrix

    @property
    def ring(self):
        return self.source.ring

    @classmethod
    def from_rows(cls, source, target, rows):
        return cls(source, target, Matrix(source.ring, target.dim, source.dim, rows))

    @classmethod
    def identity(cls, obj):
        return cls(obj, obj, Matrix.identity(obj.ring, obj.dim), check=False)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, Matrix.zeros(source.ring, target.dim, source.dim), check=False)

    def __matmul__(self, other: "BaseMorphism") -> "BaseMorphism":
        if other.target != self.source:
            raise ShapeMismatch(f"cannot compose {other.source}->{other.target} with {self.source}->{self.target}")
        return BaseMorphism(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other):
        self._same(other)
        return BaseMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        self._same(other)
        return BaseMorphism(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return BaseMorphism(self.source, self.target, -self.matrix, check=False)

    def scale(self, c):
        return BaseMorphism(self.source, self.target, self.matrix.scale(c), check=False)

    def _same(self, other):
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("morphisms with different source/target")

    def is_zero(self):
        return self.matrix.is_zero()

    def __eq__(self, other):
        return (isinstance(other, BaseMorphism) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"BaseMorphism({self.source} -> {self.target}, {self.matrix.rows()})"

    def to_json(self):
        return self.matrix.to_json()


def block_morphism(sources, targets, blocks) -> BaseMorphism:
    """Morphism ``(+) sources -> (+) targets`` from a grid of BaseMorphisms or None."""
    ring = (sources or targets)[0].ring
    mats = [[None if b is None else b.matrix for b in row] for row in blocks]
    M = Matrix.block(ring, mats, [t.dim for t in targets], [s.dim for s in sources])
    return BaseMorphism(direct_sum(*sources) if sources else BaseObject.zero(ring),
                        direct_sum(*targets) if targets else BaseObject.zero(ring), M, check=False)


def injection(objs, k) -> BaseMorphism:
    row = [[BaseMorphism.identity(objs[k]) if j == k else None] for j in range(len(objs))]
    return block_morphism([objs[k]], objs, row)


def projection(objs, k) -> BaseMorphism:
    row = [[BaseMorphism.identity(objs[k]) if j == k else None for j in range(len(objs))]]
    return block_morphism(objs, [objs[k]], row)


# ---------------------------------------------------------------------------
# kernels and cokernels


def kernel(f: BaseMorphism):
    """Return ``(K, incl)`` with ``incl: K -> source(f)`` a kernel of ``f``."""
    X, Y = f.source, f.target
    ring = f.ring
    n = X.dim
    if ring.is_field:
        vecs = nullspace(ring, f.matrix.data, Y.dim, n)
        K = BaseObject.free(ring, len(vecs))
        M = Matrix(ring, n, len(vecs), [[v[i] for v in vecs] for i in range(n)])
        return K, BaseMorphism(K, X, M, check=False)
    # x is in the kernel iff M x = D_Y y for some integer y
    tors = [(r, b) for r, b in enumerate(Y.orders) if b]
    cols = n + len(tors)
    rows = []
    for r in range(Y.dim):
        row = list(f.matrix.data[r]) + [0] * len(tors)
        rows.append(row)
    for k, (r, b) in enumerate(tors):
        rows[r][n + k] = -b
    sols = nullspace(ring, rows, Y.dim, cols)
    gens = [s[:n] for s in sols]
    rel = []
    for c, a in enumerate(X.orders):
        if a:
            v = [0] * n
            v[c] = a
            rel.append(v)
    orders, basis = present_quotient(ring, n, gens + rel, rel)
    K = BaseObject(ring, orders)
    M = Matrix(ring, n, len(basis), [[v[i] for v in basis] for i in range(n)])
    return K, BaseMorphism(K, X, M)


def cokernel(f: BaseMorphism):
    """Return ``(Q, proj)`` with ``proj: target(f) -> Q`` a cokernel of ``f``."""
    X, Y = f.source, f.target
    ring = f.ring
    m = Y.dim
    rels = [list(r) for r in f.matrix.data]
    extra = [(r, b) for r, b in enumerate(Y.orders) if b]
    for row in rels:
        row.extend([0] * len(extra))
    for k, (r, b) in enumerate(extra):
        rels[r][X.dim + k] = b
    ncols = X.dim + len(extra)
    dg = diagonalize(ring, rels, m, ncols, want_u=True, want_v=False, chain=True)
    diag = list(dg.diag) + [0] * (m - dg.rank)
    keep = [k for k in range(m) if diag[k] != 1]
    if ring.is_field:
        keep = [k for k in range(m) if k >= dg.rank]
        orders = [0] * len(keep)
    else:
        orders = [diag[k] for k in keep]
    Q = BaseObject(ring, orders)
    P = Matrix(ring, len(keep), m, [dg.U[k] for k in keep])
    return Q, BaseMorphism(Y, Q, P)


def image_contained(f: BaseMorphism, g: BaseMorphism) -> bool:
    """Whether ``im f`` lies inside ``im g`` (same target)."""
    _, p = cokernel(g)
    return (p @ f).is_zero()


# ---------------------------------------------------------------------------
# Hom modules


def hom_generators(X: BaseObject, Y: BaseObject):
    """Generators of ``Hom(X, Y)``: list of ``(r, c, step, order)``.

    The morphism with ``step`` at entry ``(r, c)`` and zeros elsewhere
    generates a cyclic summand of the given order (0 = free).
    """
    ring = X.ring
    out = []
    for r, b in enumerate(Y.orders):
        for c, a in enumerate(X.orders):
            if ring.is_field:
                out.append((r, c, 1, 0))
            elif b == 0:
                if a == 0:
                    out.append((r, c, 1, 0))
            else:
                g = gcd(a, b)
                if g != 1:
                    out.append((r, c, b // g, g))
    return out


def hom_module(X: BaseObject, Y: BaseObject):
    """``Hom(X, Y)`` as a presented module plus its generator morphisms."""
    gens = hom_generators(X, Y)
    H = BaseObject(X.ring, [o for *_, o in gens])
    mors = []
    for r, c, step, _ in gens:
        rows = [[0] * X.dim for _ in range(Y.dim)]
        rows[r][c] = step
        mors.append(BaseMorphism.from_rows(X, Y, rows))
    return H, mors


def hom_coordinates(phi: BaseMorphism, gens=None):
    """Coordinates of ``phi`` with respect to :func:`hom_generators`."""
    if gens is None:
        gens = hom_generators(phi.source, phi.target)
    ring = phi.ring
    out = []
    for r, c, step, order in gens:
        v = phi.matrix[r, c]
        if ring.is_field:
            out.append(v)
            continue
        if v % step:
            raise NotWellDefined("entry is not a multiple of the Hom generator")
        q = v // step
        out.append(q % order if order else q)
    return out
