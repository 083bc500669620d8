"""Diagonalization, Smith normal form and exact linear solving.

Everything here works on plain row lists of ring scalars; the public
wrappers take and return :class:`Matrix` values.  One routine,
:func:`diagonalize`, is shared by all three rings: over a field the pivots
are normalized to 1, over Z pivots are reduced by the Euclidean algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .matrix import Matrix
from .rings import ScalarRing
from ..errors import RingUnsupported


def _ident(n, ring):
    z, o = ring.zero, ring.one
    return [[o if i == j else z for j in range(n)] for i in range(n)]


@dataclass
class Diagonalization:
    """``U A V = D`` with ``D`` diagonal (stored as ``diag``, length ``rank``)."""

    U: list | None
    Uinv: list | None
    V: list | None
    diag: list
    rank: int
    nrows: int
    ncols: int


class _Elim:
    def __init__(self, ring, rows, m, n, want_u, want_uinv, want_v):
        self.ring = ring
        self.p = ring.p if ring.kind == "F" else None
        self.M = [list(r) for r in rows]
        self.m, self.n = m, n
        self.U = _ident(m, ring) if want_u else None
        self.Uinv = _ident(m, ring) if want_uinv else None
        self.V = _ident(n, ring) if want_v else None

    # elementary operations, mirrored on the transforms
    def swap_rows(self, i, j):
        if i == j:
            return
        M = self.M
        M[i], M[j] = M[j], M[i]
        if self.U is not None:
            self.U[i], self.U[j] = self.U[j], self.U[i]
        if self.Uinv is not None:
            for r in self.Uinv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for r in self.M:
            r[i], r[j] = r[j], r[i]
        if self.V is not None:
            for r in self.V:
                r[i], r[j] = r[j], r[i]

    def add_row(self, src, dst, c):
        """row_dst += c * row_src"""
        p = self.p
        rs, rd = self.M[src], self.M[dst]
        for k in range(len(rd)):
            if rs[k]:
                rd[k] = rd[k] + c * rs[k]
                if p:
                    rd[k] %= p
        if self.U is not None:
            us, ud = self.U[src], self.U[dst]
            for k in range(len(ud)):
                if us[k]:
                    ud[k] = ud[k] + c * us[k]
                    if p:
                        ud[k] %= p
        if self.Uinv is not None:
            # inverse column operation: col_src -= c * col_dst
            for r in self.Uinv:
                if r[dst]:
                    r[src] = r[src] - c * r[dst]
                    if p:
                        r[src] %= p

    def add_col(self, src, dst, c):
        """col_dst += c * col_src"""
        p = self.p
        for r in self.M:
            if r[src]:
                r[dst] = r[dst] + c * r[src]
                if p:
                    r[dst] %= p
        if self.V is not None:
            for r in self.V:
                if r[src]:
                    r[dst] = r[dst] + c * r[src]
                    if p:
                        r[dst] %= p

    def scale_row(self, i, c):
        # c must be a unit
        p = self.p
        inv = self.ring.inv(c)
        self.M[i] = [(x * c) % p if p else x * c for x in self.M[i]]
        if self.U is not None:
            self.U[i] = [(x * c) % p if p else x * c for x in self.U[i]]
        if self.Uinv is not None:
            for r in self.Uinv:
                r[i] = (r[i] * inv) % p if p else r[i] * inv


def diagonalize(ring: ScalarRing, rows, m: int, n: int, *, want_u=True, want_uinv=False,
                want_v=True, chain=False) -> Diagonalization:
    """Reduce an ``m x n`` matrix to diagonal form by unimodular row/column ops."""
    E = _Elim(ring, rows, m, n, want_u, want_uinv, want_v)
    M = E.M
    t = 0
    field = ring.is_field
    while t < m and t < n:
        # pivot: smallest absolute value over Z, first nonzero over a field
        best = None
        for i in range(t, m):
            Mi = M[i]
            for j in range(t, n):
                x = Mi[j]
                if x:
                    if field:
                        best = (i, j)
                        break
                    a = abs(x)
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if field and best is not None:
                break
            if not field and best is not None and best[0] == 1:
                break
        if best is None:
            break
        i, j = best if field else best[1:]
        E.swap_rows(t, i)
        E.swap_cols(t, j)
        if field:
            E.scale_row(t, ring.inv(M[t][t]))
            for i in range(t + 1, m):
                if M[i][t]:
                    E.add_row(t, i, -M[i][t])
            for j in range(t + 1, n):
                if M[t][j]:
                    E.add_col(t, j, -M[t][j])
        else:
            while True:
                piv = M[t][t]
                for i in range(t + 1, m):
                    if M[i][t]:
                        E.add_row(t, i, -(M[i][t] // piv))
                for j in range(t + 1, n):
                    if M[t][j]:
                        E.add_col(t, j, -(M[t][j] // piv))
                # remainders smaller than the pivot move into pivot position
                cand = None
                for i in range(t + 1, m):
                    if M[i][t] and (cand is None or abs(M[i][t]) < cand[0]):
                        cand = (abs(M[i][t]), "r", i)
                for j in range(t + 1, n):
                    if M[t][j] and (cand is None or abs(M[t][j]) < cand[0]):
                        cand = (abs(M[t][j]), "c", j)
                if cand is None:
                    break
                if cand[1] == "r":
                    E.swap_rows(t, cand[2])
                else:
                    E.swap_cols(t, cand[2])
            if M[t][t] < 0:
                E.scale_row(t, -1)
        t += 1
    rank = t
    if chain and not field:
        _fix_divisibility(E, rank)
    diag = [M[k][k] for k in range(rank)]
    return Diagonalization(E.U, E.Uinv, E.V, diag, rank, m, n)


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _fix_divisibility(E: _Elim, rank: int):
    """Turn a positive integer diagonal into a divisibility chain."""
    M = E.M
    changed = True
    while changed:
        changed = False
        for i in range(rank):
            for j in range(i + 1, rank):
                a, b = M[i][i], M[j][j]
                if b % a == 0:
                    continue
                g, s, t = _xgcd(a, b)
                # rows by [[s, t], [-b/g, a/g]], columns by [[1, -t b/g], [1, s a/g]]
                _row_combo(E, i, j, s, t, -(b // g), a // g)
                E.add_col(j, i, 1)
                E.add_col(i, j, -(t * (b // g)))
                changed = True


def _row_combo(E: _Elim, i, j, a11, a12, a21, a22):
    """Replace rows (i, j) by [[a11, a12], [a21, a22]] @ (row_i, row_j); det must be 1."""
    M = E.M
    ri, rj = M[i], M[j]
    M[i] = [a11 * x + a12 * y for x, y in zip(ri, rj)]
    M[j] = [a21 * x + a22 * y for x, y in zip(ri, rj)]
    if E.U is not None:
        ui, uj = E.U[i], E.U[j]
        E.U[i] = [a11 * x + a12 * y for x, y in zip(ui, uj)]
        E.U[j] = [a21 * x + a22 * y for x, y in zip(ui, uj)]
    if E.Uinv is not None:
        # inverse of [[a11, a12], [a21, a22]] is [[a22, -a12], [-a21, a11]]
        for r in E.Uinv:
            x, y = r[i], r[j]
            r[i] = x * a22 - y * a21
            r[j] = -x * a12 + y * a11


# ---------------------------------------------------------------------------
# public matrix-level wrappers


def smith_normal_form(A: Matrix):
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` over Z, D in Smith form."""
    if A.ring.is_field:
        raise RingUnsupported("Smith normal form is computed over Z only; use elimination over fields")
    ring = A.ring
    dg = diagonalize(ring, A.data, A.nrows, A.ncols, chain=True)
    D = [[0] * A.ncols for _ in range(A.nrows)]
    for k, d in enumerate(dg.diag):
        D[k][k] = d
    return (Matrix(ring, A.nrows, A.nrows, dg.U), Matrix(ring, A.nrows, A.ncols, D),
            Matrix(ring, A.ncols, A.ncols, dg.V))


def invariant_factors(A: Matrix):
    _, D, _ = smith_normal_form(A)
    return [D[k, k] for k in range(min(A.shape)) if D[k, k]]


@dataclass
class Infeasible:
    """Row vector ``y`` proving ``A z = b`` has no solution.

    Over a field: ``y A = 0`` and ``y b != 0``.  Over Z: ``y`` is rational,
    ``y A`` is integral and ``y b`` is not.
    """

    y: list


def _matvec(ring, U, b):
    p = ring.p if ring.kind == "F" else None
    out = []
    for row in U:
        s = ring.zero
        for a, x in zip(row, b):
            if a and x:
                s += a * x
        out.append(s % p if p else s)
    return out


def solve_system(ring: ScalarRing, rows, m: int, n: int, b, dg: Diagonalization | None = None):
    """Solve ``A z = b``; return ``(z, None)`` or ``(None, Infeasible)``."""
    if dg is None:
        dg = diagonalize(ring, rows, m, n)
    c = _matvec(ring, dg.U, b)
    w = [ring.zero] * n
    for k in range(dg.rank):
        d = dg.diag[k]
        if ring.is_field:
            w[k] = c[k]  # pivots are normalized to 1
        else:
            if c[k] % d:
                y = [Fraction(u, d) for u in dg.U[k]]
                return None, Infeasible(y)
            w[k] = c[k] // d
    for k in range(dg.rank, m):
        if c[k]:
            if ring.kind == "Z":
                y = [Fraction(u, 2 * c[k]) for u in dg.U[k]]
            else:
                y = list(dg.U[k])
            return None, Infeasible(y)
    z = _matvec(ring, dg.V, w)
    return z, None


def check_infeasible(ring: ScalarRing, rows, m, n, b, cert: Infeasible) -> bool:
    """Independent re-check of an infeasibility certificate."""
    y = cert.y
    if len(y) != m:
        return False
    if ring.kind == "Z":
        y = [Fraction(v) for v in y]
        for j in range(n):
            s = sum((y[i] * rows[i][j] for i in range(m) if rows[i][j]), Fraction(0))
            if s.denominator != 1:
                return False
        s = sum((y[i] * b[i] for i in range(m)), Fraction(0))
        return s.denominator != 1
    p = ring.p if ring.kind == "F" else None
    for j in range(n):
        s = sum((y[i] * rows[i][j] for i in range(m)), ring.zero)
        if (s % p if p else s) != 0:
            return False
    s = sum((y[i] * b[i] for i in range(m)), ring.zero)
    return (s % p if p else s) != 0


def nullspace(ring: ScalarRing, rows, m: int, n: int, dg: Diagonalization | None = None):
    """Basis (a Z-basis over Z) of ``{z : A z = 0}`` as a list of column vectors."""
    if dg is None:
        dg = diagonalize(ring, rows, m, n, want_u=False)
    V = dg.V
    return [[V[i][k] for i in range(n)] for k in range(dg.rank, n)]


def present_quotient(ring: ScalarRing, n: int, gens, rel):
    """Present ``span(gens) / span(rel)`` inside ``ring^n``.

    ``rel`` must lie in ``span(gens)``.  Returns ``(orders, basis)`` where
    ``basis`` is a list of column vectors in ``ring^n`` generating the
    quotient with the given orders (0 = free); generators of order 1 are
    dropped.
    """
    g = len(gens)
    if g == 0:
        return [], []
    G = [[gens[k][i] for k in range(g)] for i in range(n)]
    dg = diagonalize(ring, G, n, g, want_u=True, want_uinv=True, want_v=False)
    r = dg.rank
    if r == 0:
        return [], []
    # lattice basis of span(gens): columns of Uinv[:, :r] scaled by the diagonal
    basis = [[dg.Uinv[i][k] * dg.diag[k] for i in range(n)] for k in range(r)]
    h = len(rel)
    if h == 0:
        return [0] * r, basis if ring.kind == "Z" else basis
    UN = [_matvec(ring, dg.U, v) for v in rel]  # each is U @ rel_col
    T = [[ring.zero] * h for _ in range(r)]
    for c, col in enumerate(UN):
        for k in range(r):
            d = dg.diag[k]
            x = col[k]
            if ring.is_field:
                T[k][c] = x
            else:
                if x % d:
                    raise ValueError("relations are not contained in the generated submodule")
                T[k][c] = x // d
        if any(col[k] for k in range(r, n)):
            raise ValueError("relations are not contained in the generated submodule")
    dt = diagonalize(ring, T, r, h, want_u=False, want_uinv=True, want_v=False, chain=True)
    orders = list(dt.diag) + [0] * (r - dt.rank)
    # new generators: basis @ Uinv_T
    new = []
    for k in range(r):
        vec = [ring.zero] * n
        for j in range(r):
            c = dt.Uinv[j][k]
            if c:
                bj = basis[j]
                for i in range(n):
                    vec[i] += c * bj[i]
        if ring.kind == "F":
            vec = [x % ring.p for x in vec]
        new.append(vec)
    keep = [k for k in range(r) if orders[k] != 1]
    if ring.is_field:
        keep = [k for k in range(r) if orders[k] == 0]
    return [orders[k] if not ring.is_field else 0 for k in keep], [new[k] for k in keep]
