"""Linear equations whose unknowns are module maps.

A :class:`LinearProblem` has unknown morphisms ``h_u: S_u -> T_u`` and
equations ``sum_k c_k * L_k @ h_{u_k} @ R_k = F`` between maps ``S -> T``.
Each unknown is parametrized by the generators of ``Hom(S_u, T_u)`` (so every
assignment is automatically well defined), and each equation holds modulo
the orders of ``T``, which over Z becomes one slack column per torsion row.
The result is one matrix system handed to :func:`solve_system`.
"""
from __future__ import annotations

from dataclasses import dataclass
import itertools
import random

from .linalg import Infeasible, check_infeasible, nullspace, present_quotient, solve_system
from .matrix import Matrix
from .modules import BaseMorphism, BaseObject, hom_generators
from .rings import ScalarRing, ring_from_name
from ..errors import ShapeMismatch, TooLarge


@dataclass
class _Unknown:
    source: BaseObject
    target: BaseObject
    name: str


@dataclass
class _Equation:
    source: BaseObject
    target: BaseObject
    terms: list  # (coef, L: Matrix | None, u, R: Matrix | None)
    rhs: Matrix
    name: str


class LinearProblem:
    def __init__(self, ring: ScalarRing):
        self.ring = ring
        self.unknowns: list[_Unknown] = []
        self.equations: list[_Equation] = []
        self._system = None

    # building -------------------------------------------------------------
    def unknown(self, source: BaseObject, target: BaseObject, name="") -> int:
        self.unknowns.append(_Unknown(source, target, name or f"h{len(self.unknowns)}"))
        self._system = None
        return len(self.unknowns) - 1

    def equation(self, source: BaseObject, target: BaseObject, terms, rhs=None, name=""):
        """Add ``sum coef * L @ h_u @ R == rhs`` as maps ``source -> target``.

        ``terms`` holds ``(coef, L, u, R)`` where ``L``/``R`` are BaseMorphisms,
        Matrices or None (identity).  ``rhs`` is a BaseMorphism, a Matrix or
        None (zero).
        """
        ring = self.ring
        norm = []
        for coef, L, u, R in terms:
            unk = self.unknowns[u]
            Lm = L.matrix if isinstance(L, BaseMorphism) else L
            Rm = R.matrix if isinstance(R, BaseMorphism) else R
            rows_ok = (Lm.shape == (target.dim, unk.target.dim)) if Lm is not None else unk.target.dim == target.dim
            cols_ok = (Rm.shape == (unk.source.dim, source.dim)) if Rm is not None else unk.source.dim == source.dim
            if not (rows_ok and cols_ok):
                raise ShapeMismatch(f"term for {unk.name} does not fit equation {name!r}")
            norm.append((ring.coerce(coef), Lm, u, Rm))
        if rhs is None:
            rhs = Matrix.zeros(ring, target.dim, source.dim)
        elif isinstance(rhs, BaseMorphism):
            rhs = rhs.matrix
        if rhs.shape != (target.dim, source.dim):
            raise ShapeMismatch(f"right-hand side of {name!r} has shape {rhs.shape}")
        self.equations.append(_Equation(source, target, norm, rhs, name))
        self._system = None

    # the matrix system ----------------------------------------------------
    def _layout(self):
        cols = []  # (u, r, c, step, order)
        offsets = []
        for u, unk in enumerate(self.unknowns):
            offsets.append(len(cols))
            for r, c, step, order in hom_generators(unk.source, unk.target):
                cols.append((u, r, c, step, order))
        return cols, offsets

    def system(self):
        """Return ``(rows, m, n, b, cols)``; the first ``len(cols)`` columns are the unknowns."""
        if self._system is not None:
            return self._system
        ring = self.ring
        cols, _ = self._layout()
        by_unknown = {}
        for j, (u, r, c, step, _) in enumerate(cols):
            by_unknown.setdefault(u, []).append((j, r, c, step))
        nx = len(cols)
        eq_rows = []
        b = []
        slack_rows = []
        for eq in self.equations:
            base = len(eq_rows)
            for r in range(eq.target.dim):
                for c in range(eq.source.dim):
                    eq_rows.append({})
                    b.append(eq.rhs.data[r][c])
            S = eq.source.dim
            for coef, L, u, R in eq.terms:
                for j, a, bb, step in by_unknown.get(u, ()):
                    lcol = [(r, L.data[r][a]) for r in range(eq.target.dim) if L.data[r][a]] if L is not None else [(a, 1)]
                    rrow = [(c, R.data[bb][c]) for c in range(S) if R.data[bb][c]] if R is not None else [(bb, 1)]
                    for r, lv in lcol:
                        for c, rv in rrow:
                            row = eq_rows[base + r * S + c]
                            row[j] = row.get(j, 0) + coef * lv * step * rv
            if ring.kind == "Z":
                for r, t in enumerate(eq.target.orders):
                    if t:
                        for c in range(S):
                            slack_rows.append((base + r * S + c, t))
        n = nx + len(slack_rows)
        m = len(eq_rows)
        rows = [[ring.zero] * n for _ in range(m)]
        for i, row in enumerate(eq_rows):
            for j, v in row.items():
                rows[i][j] = ring.coerce(v)
        for k, (i, t) in enumerate(slack_rows):
            rows[i][nx + k] = -t
        self._system = (rows, m, n, [ring.coerce(x) for x in b], cols)
        return self._system

    # solving --------------------------------------------------------------
    def _assemble(self, x):
        """Turn unknown coordinates into BaseMorphisms."""
        cols, _ = self._layout()
        mats = [[[0] * unk.source.dim for _ in range(unk.target.dim)] for unk in self.unknowns]
        for v, (u, r, c, step, _) in zip(x, cols):
            mats[u][r][c] += v * step
        return [BaseMorphism.from_rows(unk.source, unk.target, mats[u]) for u, unk in enumerate(self.unknowns)]

    def solve(self):
        """Return ``(solution, None)`` with one BaseMorphism per unknown, or ``(None, y)``."""
        rows, m, n, b, cols = self.system()
        z, cert = solve_system(self.ring, rows, m, n, b)
        if cert is not None:
            return None, cert.y
        return self._assemble(z[:len(cols)]), None

    def check_refutation(self, y) -> bool:
        rows, m, n, b, _ = self.system()
        return check_infeasible(self.ring, rows, m, n, b, Infeasible(list(y)))

    def residuals(self, values):
        """``lhs - rhs`` of every equation (as BaseMorphisms) for given unknown values."""
        out = []
        for eq in self.equations:
            total = Matrix.zeros(self.ring, eq.target.dim, eq.source.dim)
            for coef, L, u, R in eq.terms:
                t = values[u].matrix
                if L is not None:
                    t = L @ t
                if R is not None:
                    t = t @ R
                total = total + t.scale(coef)
            out.append(BaseMorphism(eq.source, eq.target, total - eq.rhs, check=False))
        return out

    def holds(self, values) -> bool:
        return all(r.is_zero() for r in self.residuals(values))

    def homogeneous_module(self):
        """Solutions of the homogeneous system as a presented module.

        Returns ``(M, gens)`` where ``gens[k]`` is the list of unknown values
        of the ``k``-th generator, whose order is ``M.orders[k]``.
        """
        rows, m, n, _, cols = self.system()
        ring = self.ring
        nx = len(cols)
        sols = [s[:nx] for s in nullspace(ring, rows, m, n)]
        rel = []
        if ring.kind == "Z":
            for j, (*_, order) in enumerate(cols):
                if order:
                    v = [0] * nx
                    v[j] = order
                    rel.append(v)
        orders, basis = present_quotient(ring, nx, sols + rel, rel)
        return BaseObject(ring, orders), [self._assemble(v) for v in basis]

    def random_solution(self, rng: random.Random, spread=2):
        """A random solution (particular plus random homogeneous part), or None."""
        sol, _ = self.solve()
        if sol is None:
            return None
        M, gens = self.homogeneous_module()
        for order, g in zip(M.orders, gens):
            k = rng.randrange(order) if order else rng.randint(-spread, spread)
            if self.ring.kind == "F":
                k %= self.ring.p
            if k:
                sol = [s + h.scale(k) for s, h in zip(sol, g)]
        return sol

    # serialization --------------------------------------------------------
    def to_json(self):
        ring = self.ring
        return {
            "ring": ring.name,
            "unknowns": [{"name": u.name, "source": list(u.source.orders), "target": list(u.target.orders)}
                         for u in self.unknowns],
            "equations": [{
                "name": e.name,
                "source": list(e.source.orders),
                "target": list(e.target.orders),
                "terms": [{"coef": ring.format(c), "unknown": u,
                           "left": None if L is None else L.to_json(),
                           "right": None if R is None else R.to_json()} for c, L, u, R in e.terms],
                "rhs": e.rhs.to_json(),
            } for e in self.equations],
        }

    @classmethod
    def from_json(cls, obj):
        ring = ring_from_name(obj["ring"])
        p = cls(ring)
        for u in obj["unknowns"]:
            p.unknown(BaseObject(ring, u["source"]), BaseObject(ring, u["target"]), u["name"])
        for e in obj["equations"]:
            terms = [(ring.parse(t["coef"]),
                      None if t["left"] is None else Matrix.from_json(ring, t["left"]),
                      int(t["unknown"]),
                      None if t["right"] is None else Matrix.from_json(ring, t["right"]))
                     for t in e["terms"]]
            p.equation(BaseObject(ring, e["source"]), BaseObject(ring, e["target"]), terms,
                       Matrix.from_json(ring, e["rhs"]), e["name"])
        return p


# ---------------------------------------------------------------------------
# brute force over small finite rings


def enumerate_maps(source: BaseObject, target: BaseObject, limit=1 << 16):
    """Every map ``source -> target`` over F_p (or Z with all-torsion target)."""
    ring = source.ring
    gens = hom_generators(source, target)
    if ring.kind == "F":
        sizes = [ring.p] * len(gens)
    else:
        if any(o == 0 for *_, o in gens):
            raise TooLarge("Hom module is infinite")
        sizes = [o for *_, o in gens]
    total = 1
    for s in sizes:
        total *= s
    if total > limit:
        raise TooLarge(f"{total} maps to enumerate")
    for coeffs in itertools.product(*[range(s) for s in sizes]):
        rows = [[0] * source.dim for _ in range(target.dim)]
        for k, (r, c, step, _) in zip(coeffs, gens):
            rows[r][c] += k * step
        yield BaseMorphism.from_rows(source, target, rows)


def brute_force(problem: LinearProblem, limit=1 << 16):
    """Count solutions by exhaustive search; returns ``(count, first_solution)``."""
    spaces = [enumerate_maps(u.source, u.target, limit) for u in problem.unknowns]
    spaces = [list(s) for s in spaces]
    total = 1
    for s in spaces:
        total *= len(s)
    if total > limit:
        raise TooLarge(f"{total} assignments to enumerate")
    count, first = 0, None
    for values in itertools.product(*spaces):
        if problem.holds(list(values)):
            count += 1
            if first is None:
                first = list(values)
    return count, first


# ---------------------------------------------------------------------------
# convenience solvers


def _lift_problem(p: BaseMorphism, f: BaseMorphism):
    if p.target != f.target:
        raise ShapeMismatch("solve_lift needs maps with a common target")
    prob = LinearProblem(p.ring)
    prob.unknown(f.source, p.source, "h")
    prob.equation(f.source, f.target, [(1, p, 0, None)], f, "p h = f")
    return prob


def _extend_problem(i: BaseMorphism, f: BaseMorphism):
    if i.source != f.source:
        raise ShapeMismatch("solve_extend needs maps with a common source")
    prob = LinearProblem(i.ring)
    prob.unknown(i.target, f.target, "h")
    prob.equation(f.source, f.target, [(1, None, 0, i)], f, "h i = f")
    return prob


def _verdict(prob, predicate, claims_for):
    from ..certificates import certified, infeasible_claim, refuted, well_defined_claim
    sol, y = prob.solve()
    if sol is None:
        return refuted(predicate, prob.ring, [infeasible_claim(prob, y, predicate)],
                       reason="linear system is inconsistent")
    claims = [well_defined_claim(h, name) for h, name in zip(sol, [u.name for u in prob.unknowns])]
    claims += claims_for(sol)
    return certified(predicate, prob.ring, claims, witness={u.name: h for u, h in zip(prob.unknowns, sol)})


def solve_lift(p: BaseMorphism, f: BaseMorphism):
    """Find ``h`` with ``p @ h == f``."""
    from ..certificates import morphism_equation
    prob = _lift_problem(p, f)
    return _verdict(prob, "lift", lambda s: [morphism_equation([(1, [p, s[0]])], f, "p h = f")])


def solve_extend(i: BaseMorphism, f: BaseMorphism):
    """Find ``h`` with ``h @ i == f``."""
    from ..certificates import morphism_equation
    prob = _extend_problem(i, f)
    return _verdict(prob, "extend", lambda s: [morphism_equation([(1, [s[0], i])], f, "h i = f")])


def solve_graded_homotopy(dC, dD, f, degree_of_f=0):
    """Solve ``dD h + h dC = f`` for a degree-one ``h`` between supercomplexes.

    ``dC = (dC0, dC1)`` with ``dCk: C_k -> C_{k+1}`` (and likewise ``dD``),
    ``f = (f0, f1)`` with ``fk: C_k -> D_k``; all BaseMorphisms.  ``h_k``
    maps ``C_k -> D_{k+1}``.
    """
    from ..certificates import morphism_equation
    if degree_of_f != 0:
        raise ShapeMismatch("a null-homotopy only exists for maps of even degree")
    C = (dC[0].source, dC[1].source)
    D = (dD[0].source, dD[1].source)
    for k in (0, 1):
        if f[k].source != C[k] or f[k].target != D[k]:
            raise ShapeMismatch(f"graded map component {k} does not match the complexes")
        if dC[k].target != C[1 - k] or dD[k].target != D[1 - k]:
            raise ShapeMismatch("differentials do not alternate between the two degrees")
    prob = LinearProblem(f[0].ring)
    prob.unknown(C[0], D[1], "h0")
    prob.unknown(C[1], D[0], "h1")
    for k in (0, 1):
        # (dD h + h dC)_k = dD_{k+1} h_k + h_{k+1} dC_k
        prob.equation(C[k], D[k], [(1, dD[1 - k], k, None), (1, None, 1 - k, dC[k])], f[k], f"homotopy{k}")

    def claims(s):
        return [morphism_equation([(1, [dD[1 - k], s[k]]), (1, [s[1 - k], dC[k]])], f[k], f"homotopy{k}")
                for k in (0, 1)]
    return _verdict(prob, "homotopy", claims)


def solution_count(problem: LinearProblem):
    """Number of solutions over a finite field (None if infinite or over Q)."""
    ring = problem.ring
    if ring.kind != "F":
        return None
    sol, _ = problem.solve()
    if sol is None:
        return 0
    M, _ = problem.homogeneous_module()
    return ring.p ** M.dim
