"""Extensions ``K -> E -> Q`` and the locally split exact structures.

Extensions are always given levelwise.  Splitting questions are asked
degreewise (as graded modules), not as chain maps: an extension of
complexes is a conflation when each degree is one.

* base level: split;
* ind level: every canonical map ``Q_j -> Q`` lifts through ``E``, i.e. for
  each ``j`` there is ``j' >= j`` and ``h: Q_j -> E_j'`` with
  ``p_j' h = q_{j,j'}``;
* pro level: for every ``n`` some level ``k >= n`` is ind-locally split
  (levelwise route), or every map from a test object into ``Q`` lifts to
  ``E`` (direct route).

Under a stabilizing tail both pro routes reduce to the last level, so they
agree; under an unknown tail failures are inconclusive.
"""
from __future__ import annotations

from ..certificates import (certified, inconclusive, infeasible_claim, morphism_equation, refuted,
                            well_defined_claim)
from ..errors import CertificateMissing, DataInvalid, ShapeMismatch
from ..exactbase.modules import BaseMorphism, BaseObject, cokernel, image_contained, kernel
from ..exactbase.solve import LinearProblem, _lift_problem
from ..supercomplex import (ChainMap, SuperComplex, chain_cokernel, chain_kernel, solve_extend_plain,
                            solve_lift_plain)
from .homs import into_last
from .levelwise import chain_block, kernel_ind, quotient_ind, sub_ind, sum_ind, cokernel_ind
from .systems import IndComplex, IndMorphism, ProIndComplex, ProIndMorphism, Window

BASE, IND, PRO = "base", "ind", "pro"


def kernel_cokernel_status(i: BaseMorphism, p: BaseMorphism):
    """``None`` if ``i`` is a kernel of ``p`` and ``p`` a cokernel of ``i``, else a reason."""
    if i.target != p.source:
        return "maps do not compose"
    if not (p @ i).is_zero():
        return "proj o incl != 0"
    if not kernel(i)[0].is_zero():
        return "incl is not injective"
    if not cokernel(p)[0].is_zero():
        return "proj is not surjective"
    _, kp = kernel(p)
    if not image_contained(kp, i):
        return "kernel of proj is larger than the image of incl"
    return None


class ExtensionTriple:
    def __init__(self, level, K, E, Q, incl, proj, *, check=False):
        if level not in (BASE, IND, PRO):
            raise DataInvalid(f"unknown extension level {level!r}")
        self.level = level
        self.K, self.E, self.Q = K, E, Q
        self.incl, self.proj = incl, proj
        if incl.source != K or incl.target != E or proj.source != E or proj.target != Q:
            raise ShapeMismatch("incl and proj do not match K, E, Q")
        if level == IND and not (incl.is_levelwise() and proj.is_levelwise()):
            raise DataInvalid("ind extensions must be levelwise")
        if check:
            problems = self.problems()
            if problems:
                raise DataInvalid("; ".join(problems))

    @property
    def ring(self):
        return self.E.ring

    def __eq__(self, other):
        return (isinstance(other, ExtensionTriple) and self.level == other.level
                and (self.K, self.E, self.Q, self.incl, self.proj) == (other.K, other.E, other.Q, other.incl, other.proj))

    __hash__ = None

    # constructors ---------------------------------------------------------
    @classmethod
    def from_inclusion(cls, incl):
        """Complete an inflation with its levelwise cokernel."""
        if isinstance(incl, ChainMap):
            Q, p = chain_cokernel(incl)
            return cls(BASE, incl.source, incl.target, Q, incl, p)
        if isinstance(incl, IndMorphism):
            Q, p = cokernel_ind(incl)
            return cls(IND, incl.source, incl.target, Q, incl, p)
        if isinstance(incl, ProIndMorphism):
            rows = [cokernel_ind(c) for c in incl.components]
            Q, p = _assemble_pro_quotient(incl.target, [r[1] for r in rows])
            return cls(PRO, incl.source, incl.target, Q, incl, p)
        raise TypeError("expected a chain map, ind- or pro-ind morphism")

    @classmethod
    def from_projection(cls, proj):
        """Complete a deflation with its levelwise kernel."""
        if isinstance(proj, ChainMap):
            K, i = chain_kernel(proj)
            return cls(BASE, K, proj.source, proj.target, i, proj)
        if isinstance(proj, IndMorphism):
            K, i = kernel_ind(proj)
            return cls(IND, K, proj.source, proj.target, i, proj)
        if isinstance(proj, ProIndMorphism):
            rows = [kernel_ind(c) for c in proj.components]
            K, i = _assemble_pro_sub(proj.source, [r[1] for r in rows])
            return cls(PRO, K, proj.source, proj.target, i, proj)
        raise TypeError("expected a chain map, ind- or pro-ind morphism")

    # views ----------------------------------------------------------------
    def as_ind(self) -> "ExtensionTriple":
        if self.level == IND:
            return self
        if self.level == BASE:
            one = Window(1)
            K, E, Q = (IndComplex([X], [], one) for X in (self.K, self.E, self.Q))
            return ExtensionTriple(IND, K, E, Q, IndMorphism.levelwise(K, E, [self.incl]),
                                   IndMorphism.levelwise(E, Q, [self.proj]))
        raise ShapeMismatch("a pro extension has one ind extension per level; use ind_level(n)")

    def ind_level(self, n) -> "ExtensionTriple":
        if self.level != PRO:
            raise ShapeMismatch("ind_level only applies to pro extensions")
        return ExtensionTriple(IND, self.K.levels[n], self.E.levels[n], self.Q.levels[n],
                               self.incl.components[n], self.proj.components[n])

    def degreewise(self):
        """Yield ``(label, incl_k, proj_k)`` for every stored level and degree."""
        if self.level == BASE:
            for k in (0, 1):
                yield (k,), self.incl[k], self.proj[k]
        elif self.level == IND:
            for j in range(self.E.length):
                for k in (0, 1):
                    yield (j, k), self.incl.components[j][k], self.proj.components[j][k]
        else:
            for n in range(self.E.length):
                for label, i, p in self.ind_level(n).degreewise():
                    yield (n,) + label, i, p

    def problems(self):
        return [f"{label}: {why}" for label, i, p in self.degreewise()
                if (why := kernel_cokernel_status(i, p)) is not None]

    def is_kernel_cokernel_pair(self):
        return not self.problems()

    # serialization --------------------------------------------------------
    def to_json(self):
        return {"level": self.level, "K": self.K.to_json(), "E": self.E.to_json(), "Q": self.Q.to_json(),
                "incl": _map_json(self.incl), "proj": _map_json(self.proj)}

    @classmethod
    def from_json(cls, obj, ring=None):
        from ..exactbase.matrix import Matrix
        level = obj["level"]
        loader = {BASE: SuperComplex, IND: IndComplex, PRO: ProIndComplex}[level]
        K, E, Q = (loader.from_json(obj[x], ring) for x in ("K", "E", "Q"))
        ring = E.ring

        def chain(A, B, c):
            return ChainMap(A, B, BaseMorphism(A[0], B[0], Matrix.from_json(ring, c["f0"])),
                            BaseMorphism(A[1], B[1], Matrix.from_json(ring, c["f1"])))

        if level == BASE:
            return cls(level, K, E, Q, chain(K, E, obj["incl"]), chain(E, Q, obj["proj"]))
        if level == IND:
            inc = IndMorphism.levelwise(K, E, [chain(a, b, c) for a, b, c in
                                                zip(K.levels, E.levels, obj["incl"]["components"])])
            prj = IndMorphism.levelwise(E, Q, [chain(a, b, c) for a, b, c in
                                                zip(E.levels, Q.levels, obj["proj"]["components"])])
            return cls(level, K, E, Q, inc, prj)
        inc = ProIndMorphism(K, E, [[chain(a, b, c) for a, b, c in zip(Kn.levels, En.levels, row)]
                                    for Kn, En, row in zip(K.levels, E.levels, obj["incl"]["components"])])
        prj = ProIndMorphism(E, Q, [[chain(a, b, c) for a, b, c in zip(En.levels, Qn.levels, row)]
                                    for En, Qn, row in zip(E.levels, Q.levels, obj["proj"]["components"])])
        return cls(level, K, E, Q, inc, prj)


def _map_json(f):
    if isinstance(f, ChainMap):
        return {"f0": f[0].matrix.to_json(), "f1": f[1].matrix.to_json()}
    if isinstance(f, IndMorphism):
        return f.to_json()
    return {"components": [[{"f0": c[0].matrix.to_json(), "f1": c[1].matrix.to_json()} for c in row.components]
                           for row in f.components]}


def _assemble_pro_sub(ambient: ProIndComplex, incls):
    """Pro subsystem from levelwise ind inclusions; pro transitions induced by lifting."""
    subs = [i.source for i in incls]
    alphas = []
    for n in range(ambient.last):
        a = ambient.transitions[n]
        if not a.is_levelwise():
            raise ShapeMismatch("levelwise pro constructions need identity level maps")
        comps = []
        for j in range(subs[n + 1].length):
            inner = a.components[j] @ incls[n + 1].components[j]
            ks = [solve_lift_plain(incls[n].components[j][k], inner[k]) for k in (0, 1)]
            comps.append(ChainMap(subs[n + 1].levels[j], subs[n].levels[j], ks[0], ks[1]))
        alphas.append(IndMorphism.levelwise(subs[n + 1], subs[n], comps))
    S = ProIndComplex(subs, alphas, ambient.window)
    return S, ProIndMorphism(S, ambient, [list(i.components) for i in incls])


def _assemble_pro_quotient(ambient: ProIndComplex, projs):
    from ..supercomplex import solve_extend_plain
    quots = [p.target for p in projs]
    alphas = []
    for n in range(ambient.last):
        a = ambient.transitions[n]
        if not a.is_levelwise():
            raise ShapeMismatch("levelwise pro constructions need identity level maps")
        comps = []
        for j in range(quots[n + 1].length):
            inner = projs[n].components[j] @ a.components[j]
            ks = [solve_extend_plain(projs[n + 1].components[j][k], inner[k]) for k in (0, 1)]
            comps.append(ChainMap(quots[n + 1].levels[j], quots[n].levels[j], ks[0], ks[1]))
        alphas.append(IndMorphism.levelwise(quots[n + 1], quots[n], comps))
    Q = ProIndComplex(quots, alphas, ambient.window)
    return Q, ProIndMorphism(ambient, Q, [list(p.components) for p in projs])


# ---------------------------------------------------------------------------
# locally split predicates


def is_split(ext: ExtensionTriple):
    """Base level: a section of ``proj`` in each degree."""
    if ext.level != BASE:
        raise ShapeMismatch("is_split is the base-level predicate")
    v = is_ind_locally_split(ext.as_ind())
    v.predicate = "split"
    if v.certificate:
        v.certificate.predicate = "split"
    return v


def _lift_claims(ext, j, k, j2, h):
    p = ext.proj.components[j2][k]
    q = ext.Q.transition(j, j2)[k]
    return [well_defined_claim(h, f"lift {j}->{j2} deg {k}"),
            morphism_equation([(1, [p, h])], q, f"p_{j2} h = q_{j},{j2} deg {k}")]


def is_ind_locally_split(ext: ExtensionTriple):
    """For each level ``j`` and degree ``k``, lift ``Q_j -> Q`` through ``E`` (smallest ``j'`` first).

    The witness ``lifts`` maps ``(j, k)`` to ``(j', h)``.
    """
    if ext.level == BASE:
        ext = ext.as_ind()
    if ext.level != IND:
        raise ShapeMismatch("is_ind_locally_split needs an ind extension")
    E, Q = ext.E, ext.Q
    N = E.length
    definitive = E.window.stabilizing and Q.window.stabilizing
    lifts, claims = {}, []
    for j in range(N):
        for k in (0, 1):
            failure = None
            for j2 in range(j, N):
                prob = _lift_problem(ext.proj.components[j2][k], Q.transition(j, j2)[k])
                sol, y = prob.solve()
                if sol is not None:
                    lifts[j, k] = (j2, sol[0])
                    claims += _lift_claims(ext, j, k, j2, sol[0])
                    break
                failure = (prob, y)
            else:
                if definitive:
                    prob, y = failure
                    return refuted("ind_locally_split", ext.ring,
                                   [infeasible_claim(prob, y, f"no lift of Q_{j} (deg {k}) at the last level")],
                                   witness={"level": j, "degree": k},
                                   scope={"window": E.window.to_json()},
                                   reason=f"Q_{j} in degree {k} has no lift")
                return inconclusive("ind_locally_split", f"no lift of Q_{j} (deg {k}) inside the window",
                                    witness={"level": j, "degree": k})
    return certified("ind_locally_split", ext.ring, claims, witness={"lifts": lifts},
                     scope={"window": E.window.to_json()})


def is_pro_locally_split(ext: ExtensionTriple):
    """Levelwise route: for each ``n`` the smallest ``k >= n`` whose ind extension is locally split."""
    if ext.level != PRO:
        raise ShapeMismatch("is_pro_locally_split needs a pro extension")
    N = ext.E.length
    cache = {}

    def level_verdict(k):
        if k not in cache:
            cache[k] = is_ind_locally_split(ext.ind_level(k))
        return cache[k]

    chosen, claims = {}, []
    definitive = ext.E.window.stabilizing and ext.Q.window.stabilizing
    for n in range(N):
        last_refutation = None
        for k in range(n, N):
            v = level_verdict(k)
            if v.certified:
                chosen[n] = k
                break
            if v.refuted:
                last_refutation = v
        else:
            if definitive and last_refutation is not None and last_refutation is level_verdict(N - 1):
                return refuted("pro_locally_split", ext.ring, last_refutation.certificate.claims,
                               witness={"level": n, "ind": last_refutation.witness},
                               scope={"window": ext.E.window.to_json()},
                               reason=f"no level k >= {n} is ind-locally split")
            return inconclusive("pro_locally_split", f"no ind-locally split level above {n} inside the window",
                                witness={"level": n})
    for k in sorted(set(chosen.values())):
        claims += [dict(c, label=f"level {k}: {c['label']}") for c in level_verdict(k).certificate.claims]
    return certified("pro_locally_split", ext.ring, claims,
                     witness={"levels": chosen, "ind": {k: level_verdict(k) for k in set(chosen.values())}},
                     scope={"window": ext.E.window.to_json()})


def _pro_test_family_problem(T: BaseObject, X: ProIndComplex, k):
    """Families ``T -> X_{n,last}`` in degree ``k`` compatible along the pro transitions."""
    prob = LinearProblem(T.ring)
    ids = [prob.unknown(T, X.levels[n].levels[-1][k], f"phi{n}") for n in range(X.length)]
    for n in range(X.last):
        B = into_last(X.levels[n + 1], X.transitions[n])[k]
        prob.equation(T, X.levels[n].levels[-1][k], [(1, B, ids[n + 1], None), (-1, None, ids[n], None)],
                      None, f"compatible {n}")
    return prob, ids


def is_pro_locally_split_direct(ext: ExtensionTriple):
    """Direct route: every map from a test object ``Q_{n,i}`` (each degree) into ``Q`` lifts to ``E``.

    ``Hom(T, Q) = lim_n Hom(T, Q_n)`` is computed as a module of compatible
    families; each generator family is lifted to a compatible family into
    ``E``.  Lifting is linear, so generators suffice.
    """
    if ext.level != PRO:
        raise ShapeMismatch("needs a pro extension")
    E, Q = ext.E, ext.Q
    definitive = E.window.stabilizing and Q.window.stabilizing and all(
        X.window.stabilizing for X in (*E.levels, *Q.levels))
    tests = []
    for n in range(Q.length):
        for L in Q.levels[n].levels:
            for k in (0, 1):
                if (L[k], k) not in tests:
                    tests.append((L[k], k))
    claims = []
    for T, k in tests:
        fam_prob, ids = _pro_test_family_problem(T, Q, k)
        _, gens = fam_prob.homogeneous_module()
        for g in gens:
            phi = [g[u] for u in ids]
            prob = LinearProblem(ext.ring)
            psi = [prob.unknown(T, E.levels[n].levels[-1][k], f"psi{n}") for n in range(E.length)]
            for n in range(E.length):
                p = ext.proj.components[n].components[-1][k]
                prob.equation(T, Q.levels[n].levels[-1][k], [(1, p, psi[n], None)], phi[n], f"lift {n}")
            for n in range(E.last):
                B = into_last(E.levels[n + 1], E.transitions[n])[k]
                prob.equation(T, E.levels[n].levels[-1][k], [(1, B, psi[n + 1], None), (-1, None, psi[n], None)],
                              None, f"compatible {n}")
            sol, y = prob.solve()
            if sol is None:
                if definitive:
                    return refuted("pro_locally_split_direct", ext.ring,
                                   [infeasible_claim(prob, y, f"test object {T} deg {k}")],
                                   witness={"test": T, "degree": k, "family": phi},
                                   reason="a map from a test object does not lift")
                return inconclusive("pro_locally_split_direct", "a test map does not lift inside the window")
            for n in range(E.length):
                p = ext.proj.components[n].components[-1][k]
                claims.append(morphism_equation([(1, [p, sol[n]])], phi[n], f"test {T} deg {k} level {n}"))
    return certified("pro_locally_split_direct", ext.ring, claims, scope={"window": E.window.to_json()})


def is_locally_split(ext: ExtensionTriple):
    if ext.level == BASE:
        return is_split(ext)
    if ext.level == IND:
        return is_ind_locally_split(ext)
    return is_pro_locally_split(ext)


# ---------------------------------------------------------------------------
# exact-structure axioms, constructively


def _need(cert, predicate=None):
    if cert is None or not cert.certified:
        raise CertificateMissing("input extension carries no locally split certificate")
    return cert


def _ind_cert_from_lifts(ext, lifts, predicate="ind_locally_split"):
    claims = []
    for (j, k), (j2, h) in sorted(lifts.items(), key=lambda t: t[0]):
        claims += _lift_claims(ext, j, k, j2, h)
    return certified(predicate, ext.ring, claims, witness={"lifts": lifts},
                     scope={"window": ext.E.window.to_json()})


def _ind_pullback(ext: ExtensionTriple, g: IndMorphism, lifts):
    """Pullback of the deflation of ``ext`` along a levelwise ``g: Q' -> Q``.

    Returns ``(new_ext, P -> E, new_lifts, P -> E (+) Q')``.
    """
    E, Q, Qp, K = ext.E, ext.Q, g.source, ext.K
    S = sum_ind(E, Qp)
    incls = [chain_kernel(chain_block([E.levels[j], Qp.levels[j]], [Q.levels[j]],
                                      [[ext.proj.components[j], -g.components[j]]]))[1]
             for j in range(E.length)]
    P, iota = sub_ind(S, incls)
    to_e, to_q, k_in = [], [], []
    for j in range(E.length):
        Ej, Qj = E.levels[j], Qp.levels[j]
        pr1 = chain_block([Ej, Qj], [Ej], [[ChainMap.identity(Ej), None]])
        pr2 = chain_block([Ej, Qj], [Qj], [[None, ChainMap.identity(Qj)]])
        to_e.append(pr1 @ iota.components[j])
        to_q.append(pr2 @ iota.components[j])
        pair = chain_block([K.levels[j]], [Ej, Qj], [[ext.incl.components[j]], [None]])
        k_in.append(ChainMap(K.levels[j], P.levels[j],
                             *[solve_lift_plain(iota.components[j][d], pair[d]) for d in (0, 1)]))
    new = ExtensionTriple(IND, K, P, Qp, IndMorphism.levelwise(K, P, k_in), IndMorphism.levelwise(P, Qp, to_q))
    # Q'_j -> E_j' (h g) paired with Q'_j -> Q'_j', factored through P_j'
    new_lifts = {}
    for (j, d), (j2, h) in lifts.items():
        a = h @ g.components[j][d]
        b = Qp.transition(j, j2)[d]
        stacked = BaseMorphism.from_rows(a.source, iota.components[j2][d].target, a.matrix.rows() + b.matrix.rows())
        new_lifts[j, d] = (j2, solve_lift_plain(iota.components[j2][d], stacked))
    return new, IndMorphism.levelwise(P, E, to_e), new_lifts, iota


def _ind_pushout(ext: ExtensionTriple, g: IndMorphism, lifts):
    """Pushout of the inflation of ``ext`` along a levelwise ``g: K -> L``.

    Returns ``(new_ext, E -> P, new_lifts, E (+) L -> P)``.
    """
    K, E, Q, L = ext.K, ext.E, ext.Q, g.target
    S = sum_ind(E, L)
    projs = [chain_cokernel(chain_block([K.levels[j]], [E.levels[j], L.levels[j]],
                                        [[ext.incl.components[j]], [-g.components[j]]]))[1]
             for j in range(E.length)]
    P, pi = quotient_ind(S, projs)
    from_e, from_l, to_q = [], [], []
    for j in range(E.length):
        Ej, Lj = E.levels[j], L.levels[j]
        in1 = chain_block([Ej], [Ej, Lj], [[ChainMap.identity(Ej)], [None]])
        in2 = chain_block([Lj], [Ej, Lj], [[None], [ChainMap.identity(Lj)]])
        from_e.append(pi.components[j] @ in1)
        from_l.append(pi.components[j] @ in2)
        qmap = chain_block([Ej, Lj], [Q.levels[j]], [[ext.proj.components[j], None]])
        to_q.append(ChainMap(P.levels[j], Q.levels[j],
                             *[solve_extend_plain(pi.components[j][d], qmap[d]) for d in (0, 1)]))
    new = ExtensionTriple(IND, L, P, Q, IndMorphism.levelwise(L, P, from_l), IndMorphism.levelwise(P, Q, to_q))
    new_lifts = {(j, d): (j2, from_e[j2][d] @ h) for (j, d), (j2, h) in lifts.items()}
    return new, IndMorphism.levelwise(E, P, from_e), new_lifts, pi


def _ind_compose(ext1: ExtensionTriple, ext2: ExtensionTriple, lifts1, lifts2):
    """Composite deflation ``E --p1--> F --p2--> G`` with its levelwise kernel."""
    if ext1.Q != ext2.E:
        raise ShapeMismatch("deflations do not compose")
    comp = IndMorphism.levelwise(ext1.E, ext2.Q, [b @ a for a, b in
                                                   zip(ext1.proj.components, ext2.proj.components)])
    new = ExtensionTriple.from_projection(comp)
    new_lifts = {}
    for (j, d), (j2, h2) in lifts2.items():
        j3, h1 = lifts1[j2, d]
        new_lifts[j, d] = (j3, h1 @ h2)
    return new, new_lifts


def _to_base(ext: ExtensionTriple) -> ExtensionTriple:
    """Inverse of ``as_ind`` for one-level ind extensions."""
    return ExtensionTriple(BASE, ext.K.levels[0], ext.E.levels[0], ext.Q.levels[0],
                           ext.incl.components[0], ext.proj.components[0])


def _lifts_of(verdict):
    return _need(verdict).witness["lifts"]


def _as_ind_map(g):
    if isinstance(g, IndMorphism):
        return g
    one = Window(1)
    A, B = IndComplex([g.source], [], one), IndComplex([g.target], [], one)
    return IndMorphism.levelwise(A, B, [g])


def _pro_cert(ext, levels, per_level):
    claims = []
    for k in sorted(per_level):
        claims += [dict(c, label=f"level {k}: {c['label']}") for c in per_level[k].certificate.claims]
    return certified("pro_locally_split", ext.ring, claims, witness={"levels": levels, "ind": per_level},
                     scope={"window": ext.E.window.to_json()})


def sum_pro(A: ProIndComplex, B: ProIndComplex) -> ProIndComplex:
    """Levelwise sum of two levelwise grids."""
    levels = [sum_ind(a, b) for a, b in zip(A.levels, B.levels)]
    alphas = []
    for n in range(A.last):
        a, b = A.transitions[n], B.transitions[n]
        if not (a.is_levelwise() and b.is_levelwise()):
            raise ShapeMismatch("levelwise pro constructions need identity level maps")
        comps = [chain_block([a.source.levels[j], b.source.levels[j]], [a.target.levels[j], b.target.levels[j]],
                             [[a.components[j], None], [None, b.components[j]]]) for j in range(levels[n].length)]
        alphas.append(IndMorphism.levelwise(levels[n + 1], levels[n], comps))
    return ProIndComplex(levels, alphas, A.window)


def _pro_apply(ext, g, certificate, ind_op):
    """Run an ind construction at every pro level, reassemble, and certify on the chosen levels."""
    N = ext.E.length
    chosen = certificate.witness["levels"]
    ind = certificate.witness["ind"]
    rows = []
    for n in range(N):
        lifts = ind[n].witness["lifts"] if n in ind else {}
        rows.append(ind_op(ext.ind_level(n), g.components[n], lifts))
    if ind_op is _ind_pullback:
        P, _ = _assemble_pro_sub(sum_pro(ext.E, g.source), [r[3] for r in rows])
        K, Qn = ext.K, g.source
    else:
        P, _ = _assemble_pro_quotient(sum_pro(ext.E, g.target), [r[3] for r in rows])
        K, Qn = g.target, ext.Q
    new = ExtensionTriple(PRO, K, P, Qn, ProIndMorphism(K, P, [list(r[0].incl.components) for r in rows]),
                          ProIndMorphism(P, Qn, [list(r[0].proj.components) for r in rows]))
    if ind_op is _ind_pullback:
        connect = ProIndMorphism(P, ext.E, [list(r[1].components) for r in rows])
    else:
        connect = ProIndMorphism(ext.E, P, [list(r[1].components) for r in rows])
    per_level = {k: _ind_cert_from_lifts(new.ind_level(k), rows[k][2]) for k in set(chosen.values())}
    return new, connect, _pro_cert(new, dict(chosen), per_level)


def pullback_deflation(ext: ExtensionTriple, g, certificate=None):
    """Pull the deflation of a locally split ``ext`` back along ``g: Q' -> Q``.

    Returns ``(new_ext, P -> E, verdict)``; the verdict certifies
    ``K -> P -> Q'`` with lifts built from the input certificate.
    """
    _need(certificate)
    if ext.level == PRO:
        return _pro_apply(ext, g, certificate, _ind_pullback)
    new, pe, lifts, _ = _ind_pullback(ext.as_ind(), _as_ind_map(g), _lifts_of(certificate))
    verdict = _ind_cert_from_lifts(new, lifts)
    if ext.level == BASE:
        return _to_base(new), pe.components[0], verdict
    return new, pe, verdict


def pushout_inflation(ext: ExtensionTriple, g, certificate=None):
    """Push the inflation of a locally split ``ext`` out along ``g: K -> L``."""
    _need(certificate)
    if ext.level == PRO:
        return _pro_apply(ext, g, certificate, _ind_pushout)
    new, ep, lifts, _ = _ind_pushout(ext.as_ind(), _as_ind_map(g), _lifts_of(certificate))
    verdict = _ind_cert_from_lifts(new, lifts)
    if ext.level == BASE:
        return _to_base(new), ep.components[0], verdict
    return new, ep, verdict


def compose_deflations(ext1, ext2, cert1=None, cert2=None):
    """``K -> E -> G`` for the composite of two locally split deflations, with a certificate."""
    _need(cert1)
    _need(cert2)
    if ext1.level != ext2.level:
        raise ShapeMismatch("extensions at different levels")
    if ext1.level != PRO:
        new, lifts = _ind_compose(ext1.as_ind(), ext2.as_ind(), _lifts_of(cert1), _lifts_of(cert2))
        verdict = _ind_cert_from_lifts(new, lifts)
        return (_to_base(new) if ext1.level == BASE else new), verdict
    comp = ProIndMorphism(ext1.E, ext2.Q, [[b @ a for a, b in zip(r1.components, r2.components)]
                                           for r1, r2 in zip(ext1.proj.components, ext2.proj.components)])
    new = ExtensionTriple.from_projection(comp)
    ind1, ind2 = cert1.witness["ind"], cert2.witness["ind"]
    levels, per_level = {}, {}
    for n in range(new.E.length):
        for k in range(n, new.E.length):
            if k not in per_level:
                v1 = ind1.get(k) or is_ind_locally_split(ext1.ind_level(k))
                v2 = ind2.get(k) or is_ind_locally_split(ext2.ind_level(k))
                if not (v1.certified and v2.certified):
                    continue
                _, lifts = _ind_compose(ext1.ind_level(k), ext2.ind_level(k), v1.witness["lifts"],
                                        v2.witness["lifts"])
                per_level[k] = _ind_cert_from_lifts(new.ind_level(k), lifts)
            levels[n] = k
            break
        else:
            return new, inconclusive("pro_locally_split", f"no common certified level above {n}")
    return new, _pro_cert(new, levels, per_level)
