"""Strictification of pro-systems carrying an R-action only up to reindexing.

Here ``R`` is the ring generated by ``g`` and ``d`` with ``g^2 = 1``,
``gd + dg = 0`` and ``d^2 = 0``.  The grading (``g``) is strict: the input is
a tower of graded objects ``X_n`` with degree-zero transitions.  The odd
operator ``d`` is only a pro-morphism, given by maps
``d_n: X_{m(n)} -> X_n`` of odd degree.

Level ``n`` of the output is the free R-module ``F(X_n)`` modulo the
relations ``d (x) sigma x - 1 (x) d_n x`` for ``x`` in ``X_{m(n)}``.  Here
``F(V)_k = V_k (+) V_{k+1}`` holds the pairs ``1 (x) v + d (x) w``, with
differential ``(v, w) -> (0, v)``.  The comparison maps are
``iota_n(x) = [1 (x) x]`` and ``pi_n[v, w] = sigma v + d_n sigma w``, the
latter defined on level ``p(n)``, the smallest level on which it kills the
relations.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..certificates import certified, morphism_equation, well_defined_claim
from ..errors import DataInvalid, ShapeMismatch, WindowTooShort
from ..exactbase.modules import BaseMorphism, block_morphism, direct_sum
from ..indpro.systems import STABILIZING, UNKNOWN, IndComplex, IndMorphism, ProIndComplex, Window
from ..supercomplex import ChainMap, GradedMap, SuperComplex, chain_cokernel, shift, solve_extend_plain


def graded(C: SuperComplex) -> SuperComplex:
    """``C`` with its differential forgotten."""
    z = [BaseMorphism.zero(C[k], C[k + 1]) for k in (0, 1)]
    return SuperComplex(C[0], C[1], z[0], z[1], check=False)


class RActionTower:
    """Graded levels ``X_n``, transitions ``sigma_n: X_{n+1} -> X_n`` and odd maps ``d_n``.

    ``d[n]`` is ``(m, d_n)`` with ``d_n: X_m -> X_n`` a degree-one GradedMap,
    or ``None`` when it is not known inside the window.
    """

    def __init__(self, levels, sigma, d, window: Window | None = None):
        self.levels = tuple(graded(X) for X in levels)
        self.sigma = tuple(sigma)
        self.d = tuple(d)
        self.window = window or Window(len(self.levels))
        N = self.window.length
        if len(self.levels) != N or len(self.sigma) != N - 1 or len(self.d) != N:
            raise ShapeMismatch("window length does not match the stored data")
        for n, s in enumerate(self.sigma):
            if s.degree != 0 or s.source != self.levels[n + 1] or s.target != self.levels[n]:
                raise ShapeMismatch(f"sigma_{n} has the wrong shape")
        for n, item in enumerate(self.d):
            if item is None:
                if self.window.tail == STABILIZING:
                    raise DataInvalid(f"d_{n} missing under a stabilizing tail")
                continue
            m, dn = item
            if m < n:
                raise DataInvalid(f"d_{n} must start at a level m >= {n}")
            if dn.degree != 1 or dn.source != self.level(m) or dn.target != self.levels[n]:
                raise ShapeMismatch(f"d_{n} has the wrong shape")
        self.ring = self.levels[0].ring

    @property
    def length(self):
        return self.window.length

    @property
    def last(self):
        return self.window.last

    def level(self, n):
        if n < self.length:
            return self.levels[n]
        if self.window.stabilizing:
            return self.levels[-1]
        raise WindowTooShort(f"level {n} lies past the window of length {self.length}")

    def structure(self, n, k) -> GradedMap:
        """The composite ``X_k -> X_n``; identities past a stabilizing tail."""
        self.level(k)
        k = min(k, self.last)
        n = min(n, self.last)
        X = self.levels[k]
        f = GradedMap(X, X, BaseMorphism.identity(X[0]), BaseMorphism.identity(X[1]))
        for j in range(k - 1, n - 1, -1):
            f = self.sigma[j] @ f
        return f

    def action(self, n):
        """``(m, d_n)``, clamped to the last level past a stabilizing tail."""
        if n > self.last:
            self.level(n)
            n = self.last
        return self.d[n]

    def is_strict(self):
        """``m(n) = n``, ``d_n^2 = 0`` and ``sigma`` commutes with ``d`` on the nose."""
        for n, item in enumerate(self.d):
            if item is None or item[0] != n or not (item[1] @ item[1]).is_zero():
                return False
        return all(self.sigma[n] @ self.d[n + 1][1] == self.d[n][1] @ self.sigma[n] for n in range(self.last))


def forget(X: ProIndComplex) -> RActionTower:
    """The underlying tower of a pro-system of supercomplexes (ind length one)."""
    if any(L.length != 1 for L in X.levels):
        raise ShapeMismatch("forget expects pro-systems of supercomplexes (ind length one)")
    Cs = [L.levels[0] for L in X.levels]
    Gs = [graded(C) for C in Cs]
    sigma = [GradedMap(Gs[n + 1], Gs[n], *X.transitions[n].components[0].f) for n in range(X.last)]
    d = [(n, GradedMap(Gs[n], Gs[n], C.d[0], C.d[1], 1)) for n, C in enumerate(Cs)]
    return RActionTower(Gs, sigma, d, X.window)


def shift_action(T: RActionTower, steps=1) -> RActionTower:
    """Replace ``d_n`` by ``d_n sigma: X_{m(n)+steps} -> X_n`` (clamped past a stabilizing tail)."""
    d = []
    for n, item in enumerate(T.d):
        if item is None:
            d.append(None)
            continue
        m, dn = item
        m2 = m + steps
        if m2 > T.last:
            if not T.window.stabilizing:
                d.append(None)
                continue
            m2 = max(m, T.last)
        d.append((m2, dn @ T.structure(m, m2)))
    return RActionTower(T.levels, T.sigma, d, T.window)


@dataclass
class StrictifyResult:
    tower: ProIndComplex
    iota: list      # iota[n]: X_n -> Y_n, degree zero
    pi: list        # pi[n]: Y_{p(n)} -> X_n, degree zero; may be shorter than the tower
    reindex: list   # p(n)
    verdict: object

    def level(self, n) -> SuperComplex:
        return self.tower.levels[n].levels[0]


# ---------------------------------------------------------------------------
# the construction


def _free(V: SuperComplex) -> SuperComplex:
    ds = [block_morphism([V[k], V[k + 1]], [V[k + 1], V[k]],
                         [[None, None], [BaseMorphism.identity(V[k]), None]]) for k in (0, 1)]
    return SuperComplex(direct_sum(V[0], V[1]), direct_sum(V[1], V[0]), ds[0], ds[1])


def _relations(T, n):
    """``Phi: F(W) -> F(X_n)`` whose image is the submodule of relations at level ``n``."""
    m, dn = T.action(n)
    Xm, Xn = T.level(m), T.levels[n]
    s = T.structure(n, m)
    FW, FX = _free(shift(Xm)), _free(Xn)
    comps = []
    for k in (0, 1):
        comps.append(block_morphism([Xm[k + 1], Xm[k]], [Xn[k], Xn[k + 1]],
                                    [[-dn[k + 1], None], [s[k + 1], -dn[k]]]))
    return ChainMap(FW, FX, comps[0], comps[1])


def _check_compatible(T):
    for n in range(T.last):
        a, b = T.d[n], T.d[n + 1]
        if a is None or b is None:
            continue
        if b[0] < a[0]:
            raise DataInvalid(f"m({n + 1}) < m({n})")
        if T.sigma[n] @ b[1] != a[1] @ T.structure(a[0], b[0]):
            raise DataInvalid(f"d is not a pro-morphism: sigma_{n} d_{n + 1} != d_{n} sigma")


def _psi(T, n, p, phi_p):
    """``(v, w) -> sigma v + d_n sigma w`` on ``F(X_p)``; ``None`` unless it kills the relations."""
    m, dn = T.action(n)
    Xp = T.level(p)
    s, t = T.structure(n, p), T.structure(m, p)
    out = []
    for k in (0, 1):
        psi = block_morphism([Xp[k], Xp[k + 1]], [T.levels[n][k]], [[s[k], dn[k + 1] @ t[k + 1]]])
        if not (psi @ phi_p[k]).is_zero():
            return None
        out.append(psi)
    return out


def strictify(T: RActionTower) -> StrictifyResult:
    """A tower of supercomplexes isomorphic, as a pro-system, to ``T``."""
    _check_compatible(T)
    if T.is_strict():
        return _strict(T)
    N = T.length
    phis, Y, q = [], [], []
    for n in range(N):
        if T.d[n] is None or (T.d[n][0] > T.last and not T.window.stabilizing):
            break
        phi = _relations(T, n)
        Yn, qn = chain_cokernel(phi)
        phis.append(phi)
        Y.append(Yn)
        q.append(qn)
    L = len(Y)
    pis, reindex = [], []
    for n in range(L):
        found = None
        for p in range(max(n, T.d[n][0], reindex[-1] if reindex else 0), L):
            psi = _psi(T, n, p, phis[p])
            if psi is not None:
                found = p, psi
                break
        if found is None:
            if T.window.stabilizing:
                raise DataInvalid(f"d^2 does not vanish as a pro-morphism at level {n}")
            break
        p, psi = found
        comps = [solve_extend_plain(q[p][k], psi[k]) for k in (0, 1)]
        pis.append(GradedMap(Y[p], T.levels[n], comps[0], comps[1]))
        reindex.append(p)
    if not pis:
        raise WindowTooShort("the window is too short to strictify any level")
    taus = []
    for n in range(L - 1):
        s = T.sigma[n]
        Fs = [block_morphism([T.levels[n + 1][k], T.levels[n + 1][k + 1]], [T.levels[n][k], T.levels[n][k + 1]],
                             [[s[k], None], [None, s[k + 1]]]) for k in (0, 1)]
        comps = [solve_extend_plain(q[n + 1][k], q[n][k] @ Fs[k]) for k in (0, 1)]
        taus.append(ChainMap(Y[n + 1], Y[n], comps[0], comps[1]))
    iotas = []
    for n in range(L):
        Xn = T.levels[n]
        first = [block_morphism([Xn[k]], [Xn[k], Xn[k + 1]], [[BaseMorphism.identity(Xn[k])], [None]])
                 for k in (0, 1)]
        iotas.append(GradedMap(Xn, Y[n], q[n][0] @ first[0], q[n][1] @ first[1]))
    tail = T.window.tail if L == N else UNKNOWN
    return _finish(T, Y, taus, iotas, pis, reindex, Window(L, tail))


def _strict(T):
    Y = [SuperComplex(X[0], X[1], dn[0], dn[1]) for X, (_, dn) in zip(T.levels, T.d)]
    taus = [ChainMap(Y[n + 1], Y[n], *T.sigma[n].f) for n in range(T.last)]
    ids = [GradedMap(X, Y[n], BaseMorphism.identity(X[0]), BaseMorphism.identity(X[1]))
           for n, X in enumerate(T.levels)]
    pis = [GradedMap(Y[n], X, BaseMorphism.identity(X[0]), BaseMorphism.identity(X[1]))
           for n, X in enumerate(T.levels)]
    return _finish(T, Y, taus, ids, pis, list(range(T.length)), T.window)


def _finish(T, Y, taus, iotas, pis, reindex, window):
    inds = [IndComplex.constant(C, 1, T.window.tail) for C in Y]
    tower = ProIndComplex(inds, [IndMorphism.levelwise(inds[n + 1], inds[n], [t]) for n, t in enumerate(taus)],
                          window)
    claims = _claims(T, Y, taus, iotas, pis, reindex)
    verdict = certified("strictify", T.ring, claims, witness={"reindex": list(reindex)},
                        scope={"levels": len(Y)})
    return StrictifyResult(tower, iotas, pis, list(reindex), verdict)


def _tau(Y, taus, n, p):
    """Composite ``Y_p -> Y_n`` as a pair of base morphisms."""
    f = [BaseMorphism.identity(Y[p][k]) for k in (0, 1)]
    for j in range(p - 1, n - 1, -1):
        f = [taus[j][k] @ f[k] for k in (0, 1)]
    return f


def _claims(T, Y, taus, iotas, pis, reindex):
    claims = []
    for n, C in enumerate(Y):
        claims.extend(_r_relations(C, f"Y_{n}"))
    for n, t in enumerate(taus):
        for k in (0, 1):
            claims.append(well_defined_claim(t[k], f"tau_{n}[{k}]"))
            claims.append(morphism_equation([(1, [Y[n].d[k], t[k]]), (-1, [t[k + 1], Y[n + 1].d[k]])],
                                            BaseMorphism.zero(Y[n + 1][k], Y[n][k + 1]), f"tau_{n} chain map [{k}]"))
            claims.append(morphism_equation([(1, [t[k], iotas[n + 1][k]])], iotas[n][k] @ T.sigma[n][k],
                                            f"tau iota = iota sigma at {n} [{k}]"))
    for n, (pi, p) in enumerate(zip(pis, reindex)):
        m, dn = T.action(n)
        s = T.structure(n, p)
        tau = _tau(Y, taus, n, p)
        for k in (0, 1):
            claims.append(well_defined_claim(iotas[n][k], f"iota_{n}[{k}]"))
            claims.append(well_defined_claim(pi[k], f"pi_{n}[{k}]"))
            claims.append(morphism_equation([(1, [pi[k], iotas[p][k]])], s[k], f"pi_{n} iota_{p} = sigma [{k}]"))
            claims.append(morphism_equation([(1, [iotas[n][k], pi[k]])], tau[k], f"iota_{n} pi_{n} = tau [{k}]"))
            claims.append(morphism_equation([(1, [pi[k + 1], Y[p].d[k], iotas[p][k]])],
                                            dn[k] @ T.structure(m, p)[k], f"pi d iota = d_{n} sigma [{k}]"))
    return claims


def _r_relations(C: SuperComplex, name):
    """``g^2 = 1``, ``gd + dg = 0`` and ``d^2 = 0`` on the total object ``C_0 (+) C_1``."""
    objs = [C[0], C[1]]
    tot = direct_sum(*objs)
    g = block_morphism(objs, objs, [[BaseMorphism.identity(C[0]), None], [None, -BaseMorphism.identity(C[1])]])
    d = block_morphism(objs, objs, [[None, C.d[1]], [C.d[0], None]])
    zero = BaseMorphism.zero(tot, tot)
    return [well_defined_claim(d, f"{name}: d"),
            morphism_equation([(1, [g, g])], BaseMorphism.identity(tot), f"{name}: g^2 = 1"),
            morphism_equation([(1, [g, d]), (1, [d, g])], zero, f"{name}: gd + dg = 0"),
            morphism_equation([(1, [d, d])], zero, f"{name}: d^2 = 0")]
