"""Class predicates of the model structure on pro-ind supercomplexes.

Everything works on levelwise grids (see ``ProIndComplex.grid``); plain
supercomplexes and ind-systems are promoted to one-level towers.  Searches
over ``k`` (contractibility), ``m`` (equivalence data) and target ind
levels ``j`` go smallest first, so certificates are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..certificates import Verdict, certified, check_claim, inconclusive, infeasible_claim, morphism_equation, refuted
from ..errors import DataInvalid, KernelNotLevelwise, ShapeMismatch
from ..exactbase.modules import BaseMorphism, block_morphism
from ..exactbase.solve import LinearProblem, _lift_problem
from ..indpro.extensions import ExtensionTriple, _assemble_pro_sub, is_pro_locally_split
from ..indpro.homs import _add_chain_unknown
from ..indpro.levelwise import sub_ind
from ..indpro.systems import IndComplex, IndMorphism, ProIndComplex, ProIndMorphism, Window
from ..supercomplex import ChainMap, GradedMap, SuperComplex, cone, cycles, solve_homotopy


# ---------------------------------------------------------------------------
# promotion and small helpers


def as_pro(X) -> ProIndComplex:
    if isinstance(X, ProIndComplex):
        return X
    if isinstance(X, IndComplex):
        return ProIndComplex([X], [], Window(1))
    if isinstance(X, SuperComplex):
        return ProIndComplex([IndComplex([X], [], Window(1))], [], Window(1))
    raise TypeError("expected a supercomplex, ind- or pro-ind complex")


def as_pro_map(f) -> ProIndMorphism:
    if isinstance(f, ProIndMorphism):
        return f
    if isinstance(f, IndMorphism):
        if not f.is_levelwise():
            raise ShapeMismatch("only levelwise ind-morphisms can be promoted")
        return ProIndMorphism(as_pro(f.source), as_pro(f.target), [list(f.components)])
    if isinstance(f, ChainMap):
        return ProIndMorphism(as_pro(f.source), as_pro(f.target), [[f]])
    raise TypeError("expected a chain map, ind- or pro-ind morphism")


def bracket(h: GradedMap) -> GradedMap:
    """``d h + h d`` for a degree-one graded map."""
    C, D = h.source, h.target
    comps = [D.d[k + 1] @ h[k] + h[k + 1] @ C.d[k] for k in (0, 1)]
    return GradedMap(C, D, comps[0], comps[1], 0)


def homotopy_claims(h: GradedMap, target: GradedMap, label):
    C, D = h.source, h.target
    return [morphism_equation([(1, [D.d[k + 1], h[k]]), (1, [h[k + 1], C.d[k]])], target[k], f"{label} deg {k}")
            for k in (0, 1)]


def _definitive(X: ProIndComplex, n):
    return X.window.stabilizing and X.levels[n].window.stabilizing


def _relabel(claims, prefix):
    return [dict(c, label=f"{prefix}: {c['label']}") for c in claims]


def _graded(C, D, sol0, sol1):
    return GradedMap(C, D, sol0, sol1, 1)


# ---------------------------------------------------------------------------
# local contractibility


def is_locally_contractible(C) -> Verdict:
    """For each ``n`` the smallest ``k >= n`` with every ``alpha_{n,i}^k`` null-homotopic.

    The witness has ``levels[n] = k`` and ``homotopies[n][i] = (j, h)`` with
    ``h: C_{k,i} -> C_{n,j}`` of degree one and ``d h + h d`` equal to the
    structure map pushed into level ``j``.
    """
    C = as_pro(C)
    levels, homs, claims = {}, {}, []
    for n in range(C.length):
        Cn = C.levels[n]
        failure = None
        for k in range(n, C.length):
            alpha = C.structure(n, k)
            found = {}
            for i in range(C.levels[k].length):
                m = alpha.level_map[i]
                for j in range(m, Cn.length):
                    target = alpha.pushed(i, j)
                    v = solve_homotopy(target)
                    if v.certified:
                        found[i] = (j, _graded(target.source, target.target, v.witness["h0"], v.witness["h1"]), target)
                        break
                    failure = (k, i, v)
                else:
                    break
            if len(found) == C.levels[k].length:
                levels[n] = k
                homs[n] = {i: (j, h) for i, (j, h, _) in found.items()}
                for i, (j, h, target) in found.items():
                    claims += homotopy_claims(h, target, f"n={n} k={k} i={i} j={j}")
                break
        else:
            k, i, v = failure
            if _definitive(C, n) and k == C.last:
                return refuted("locally_contractible", C.ring, _relabel(v.certificate.claims, f"n={n} k={k} i={i}"),
                               witness={"level": n, "k": k, "i": i},
                               scope={"window": C.window.to_json()},
                               reason=f"structure map into level {n} is never null-homotopic")
            return inconclusive("locally_contractible", f"no contracting level for n={n} inside the window",
                                witness={"level": n})
    return certified("locally_contractible", C.ring, claims, witness={"levels": levels, "homotopies": homs},
                     scope={"window": C.window.to_json()})


# ---------------------------------------------------------------------------
# exactness for the locally split structure


def cycles_complex(C: SuperComplex):
    """``ker d`` as a supercomplex with zero differential, and its inclusion."""
    Z0, i0 = cycles(C, 0)
    Z1, i1 = cycles(C, 1)
    Z = SuperComplex(Z0, Z1, BaseMorphism.zero(Z0, Z1), BaseMorphism.zero(Z1, Z0))
    return Z, ChainMap(Z, C, i0, i1)


def cycles_extension(C) -> ExtensionTriple:
    """The levelwise extension ``ker d -> C -> C / ker d`` of a levelwise grid."""
    C = as_pro(C)
    if not C.is_levelwise_grid():
        raise KernelNotLevelwise("levelwise kernels need a levelwise grid")
    incls = []
    for Cn in C.levels:
        incls.append(sub_ind(Cn, [cycles_complex(L)[1] for L in Cn.levels])[1])
    Z, incl = _assemble_pro_sub(C, incls)
    return ExtensionTriple.from_inclusion(incl)


def homology_vanishes(C) -> Verdict:
    """Is the homology tower zero as a pro-ind object?

    For each ``n`` some ``k >= n`` such that every cycle of ``C_{k,i}`` maps
    to a boundary in some ``C_{n,j}`` (certified by ``d u = alpha z``).
    """
    C = as_pro(C)
    levels, claims = {}, []
    for n in range(C.length):
        Cn = C.levels[n]
        failure = None
        for k in range(n, C.length):
            alpha = C.structure(n, k)
            ok, kclaims = True, []
            for i in range(C.levels[k].length):
                src = C.levels[k].levels[i]
                for j in range(alpha.level_map[i], Cn.length):
                    a = alpha.pushed(i, j)
                    tgt = Cn.levels[j]
                    here = []
                    for deg in (0, 1):
                        _, z = cycles(src, deg)
                        prob = _lift_problem(tgt.d[deg + 1], a[deg] @ z)
                        sol, y = prob.solve()
                        if sol is None:
                            failure = (k, prob, y)
                            break
                        here.append(morphism_equation([(1, [tgt.d[deg + 1], sol[0]])], a[deg] @ z,
                                                      f"n={n} k={k} i={i} j={j} deg {deg}: cycles are boundaries"))
                    else:
                        kclaims += here
                        break
                else:
                    ok = False
                    break
            if ok:
                levels[n] = k
                claims += kclaims
                break
        else:
            k, prob, y = failure
            if _definitive(C, n) and k == C.last:
                return refuted("homology_vanishes", C.ring, [infeasible_claim(prob, y, f"homology at n={n}")],
                               witness={"level": n}, reason="a cycle never becomes a boundary")
            return inconclusive("homology_vanishes", f"homology at n={n} does not die inside the window")
    return certified("homology_vanishes", C.ring, claims, witness={"levels": levels})


def _combine(predicate, ring, verdicts, witness=None):
    if all(v.certified for v in verdicts):
        claims = []
        for v in verdicts:
            claims += _relabel(v.certificate.claims, v.predicate)
        return certified(predicate, ring, claims, witness=witness or {v.predicate: v for v in verdicts})
    for v in verdicts:
        if v.refuted:
            return refuted(predicate, ring, _relabel(v.certificate.claims, v.predicate),
                           witness={v.predicate: v}, reason=v.reason)
    bad = next(v for v in verdicts if v.inconclusive)
    return inconclusive(predicate, bad.reason, witness={bad.predicate: bad})


def is_exact_locally_split(C) -> Verdict:
    """``ker d -> C -> ker d`` (via ``d``) is a locally split conflation.

    Checked as: the homology tower vanishes as a pro-ind object (so ``d``
    identifies ``C / ker d`` with ``ker d``) and ``ker d -> C -> C / ker d``
    is pro-locally split.
    """
    C = as_pro(C)
    ext = cycles_extension(C)
    return _combine("exact_locally_split", C.ring, [homology_vanishes(C), is_pro_locally_split(ext)])


# ---------------------------------------------------------------------------
# cones and local equivalences


def cone_map(f: ChainMap, f2: ChainMap, a: ChainMap, b: ChainMap) -> ChainMap:
    """``cone(f) -> cone(f2)`` induced by ``a`` on sources and ``b`` on targets."""
    K1 = cone(f)[0]
    K2 = cone(f2)[0]
    comps = [block_morphism([f.source[k + 1], f.target[k]], [f2.source[k + 1], f2.target[k]],
                            [[a[k + 1], None], [None, b[k]]]) for k in (0, 1)]
    return ChainMap(K1, K2, comps[0], comps[1])


def cone_tower(f) -> ProIndComplex:
    """Levelwise mapping cone ``C[1]_{n,i} (+) D_{n,i}`` of a levelwise morphism."""
    f = as_pro_map(f)
    C, D = f.source, f.target
    grid, ind_t, pro_t = [], [], []
    for n in range(C.length):
        grid.append([cone(f.at(n, i))[0] for i in range(C.levels[n].length)])
        ind_t.append([cone_map(f.at(n, i), f.at(n, i + 1), C.levels[n].transitions[i], D.levels[n].transitions[i])
                      for i in range(C.levels[n].last)])
    for n in range(C.last):
        a, b = C.transitions[n], D.transitions[n]
        if not (a.is_levelwise() and b.is_levelwise()):
            raise ShapeMismatch("levelwise cones need identity level maps")
        pro_t.append([cone_map(f.at(n + 1, i), f.at(n, i), a.components[i], b.components[i])
                      for i in range(C.levels[n].length)])
    inds = [IndComplex(grid[n], ind_t[n], C.levels[n].window) for n in range(C.length)]
    alphas = [IndMorphism.levelwise(inds[n + 1], inds[n], pro_t[n]) for n in range(C.last)]
    return ProIndComplex(inds, alphas, C.window)


def is_local_equivalence_via_cone(f) -> Verdict:
    v = is_locally_contractible(cone_tower(f))
    return _rename(v, "local_equivalence_via_cone")


def _rename(v: Verdict, predicate):
    v.predicate = predicate
    if v.certificate is not None:
        v.certificate.predicate = predicate
    return v


@dataclass
class EquivalenceDatum:
    """``g: D_{m,i} -> C_{n,j}`` with homotopies ``hC``, ``hD`` (degree one)."""

    n: int
    m: int
    i: int
    j: int
    g: ChainMap
    hC: GradedMap
    hD: GradedMap


def _equivalence_problem(f: ProIndMorphism, n, m, i, j):
    C, D = f.source, f.target
    Cmi, Dmi = C.levels[m].levels[i], D.levels[m].levels[i]
    Cnj, Dnj = C.levels[n].levels[j], D.levels[n].levels[j]
    gamma = C.structure(n, m).pushed(i, j)
    eta = D.structure(n, m).pushed(i, j)
    fm, fn = f.at(m, i), f.at(n, j)
    prob = LinearProblem(C.ring)
    g = _add_chain_unknown(prob, Dmi, Cnj, "g")
    hC = (prob.unknown(Cmi[0], Cnj[1], "hC0"), prob.unknown(Cmi[1], Cnj[0], "hC1"))
    hD = (prob.unknown(Dmi[0], Dnj[1], "hD0"), prob.unknown(Dmi[1], Dnj[0], "hD1"))
    for k in (0, 1):
        # d hC + hC d + g f = gamma
        prob.equation(Cmi[k], Cnj[k], [(1, Cnj.d[k + 1], hC[k], None), (1, None, hC[1 - k], Cmi.d[k]),
                                       (1, None, g[k], fm[k])], gamma[k], f"hC {k}")
        # d hD + hD d + f g = eta
        prob.equation(Dmi[k], Dnj[k], [(1, Dnj.d[k + 1], hD[k], None), (1, None, hD[1 - k], Dmi.d[k]),
                                       (1, fn[k], g[k], None)], eta[k], f"hD {k}")
    return prob, g, hC, hD


def equivalence_claims(f: ProIndMorphism, e: EquivalenceDatum):
    C, D = f.source, f.target
    gamma = C.structure(e.n, e.m).pushed(e.i, e.j)
    eta = D.structure(e.n, e.m).pushed(e.i, e.j)
    fm, fn = f.at(e.m, e.i), f.at(e.n, e.j)
    lab = f"n={e.n} m={e.m} i={e.i} j={e.j}"
    out = [morphism_equation([(1, [e.g.target.d[k], e.g[k]]), (-1, [e.g[k + 1], e.g.source.d[k]])],
                             BaseMorphism.zero(e.g.source[k], e.g.target[k + 1]), f"{lab} g chain map {k}")
           for k in (0, 1)]
    for k in (0, 1):
        out.append(morphism_equation([(1, [e.hC.target.d[k + 1], e.hC[k]]), (1, [e.hC[k + 1], e.hC.source.d[k]]),
                                      (1, [e.g[k], fm[k]])], gamma[k], f"{lab} hC {k}"))
        out.append(morphism_equation([(1, [e.hD.target.d[k + 1], e.hD[k]]), (1, [e.hD[k + 1], e.hD.source.d[k]]),
                                      (1, [fn[k], e.g[k]])], eta[k], f"{lab} hD {k}"))
    return out


def _check_levelwise(f: ProIndMorphism):
    for X in (f.source, f.target):
        if not X.is_levelwise_grid():
            raise ShapeMismatch("local equivalence data needs levelwise grids")


def is_local_equivalence_direct(f) -> Verdict:
    """Search ``m`` and per ind level ``g``, ``hC``, ``hD`` solving the coupled equations.

    The witness ``data[n]`` is the list of ``EquivalenceDatum`` for the chosen ``m``.
    """
    f = as_pro_map(f)
    _check_levelwise(f)
    C = f.source
    levels, data, claims = {}, {}, []
    for n in range(C.length):
        failure = None
        for m in range(n, C.length):
            found = []
            for i in range(C.levels[m].length):
                for j in range(i, C.levels[n].length):
                    prob, g, hC, hD = _equivalence_problem(f, n, m, i, j)
                    sol, y = prob.solve()
                    if sol is not None:
                        Dmi, Cnj = f.target.levels[m].levels[i], C.levels[n].levels[j]
                        e = EquivalenceDatum(
                            n, m, i, j, ChainMap(Dmi, Cnj, sol[g[0]], sol[g[1]]),
                            _graded(C.levels[m].levels[i], Cnj, sol[hC[0]], sol[hC[1]]),
                            _graded(Dmi, f.target.levels[n].levels[j], sol[hD[0]], sol[hD[1]]))
                        found.append(e)
                        break
                    failure = (m, prob, y)
                else:
                    break
            if len(found) == C.levels[m].length:
                levels[n] = m
                data[n] = found
                for e in found:
                    claims += equivalence_claims(f, e)
                break
        else:
            m, prob, y = failure
            if m == C.last and _definitive(C, n) and _definitive(f.target, n):
                return refuted("local_equivalence_direct", C.ring, [infeasible_claim(prob, y, f"n={n} m={m}")],
                               witness={"level": n}, reason="no equivalence data at the last level")
            return inconclusive("local_equivalence_direct", f"no equivalence data for n={n} inside the window")
    return certified("local_equivalence_direct", C.ring, claims, witness={"levels": levels, "data": data},
                     scope={"window": C.window.to_json()})



# ---------------------------------------------------------------------------
# from equivalence data to a contraction of the cone


def _push_datum(f: ProIndMorphism, e: EquivalenceDatum) -> EquivalenceDatum:
    """Move ``g``, ``hC``, ``hD`` into the last ind level of stage ``n``."""
    Cn, Dn = f.source.levels[e.n], f.target.levels[e.n]
    L = Cn.last
    if e.j == L:
        return e
    tC, tD = Cn.transition(e.j, L), Dn.transition(e.j, L)
    return EquivalenceDatum(e.n, e.m, e.i, L, tC @ e.g, tC @ e.hC, tD @ e.hD)


def cone_tilde(f: ProIndMorphism, e: EquivalenceDatum) -> GradedMap:
    """``[[-hC, g], [0, hD]]: cone(f)_{m,i} -> cone(f)_{n,j}`` (degree one)."""
    fm, fn = f.at(e.m, e.i), f.at(e.n, e.j)
    K1, K2 = cone(fm)[0], cone(fn)[0]
    C1, D1, C2, D2 = fm.source, fm.target, fn.source, fn.target
    comps = []
    for k in (0, 1):
        # cone_k = C_{k+1} (+) D_k  ->  cone_{k+1} = C_k (+) D_{k+1}
        comps.append(block_morphism([C1[k + 1], D1[k]], [C2[k], D2[k + 1]],
                                    [[-e.hC[k + 1], e.g[k]], [None, e.hD[k]]]))
    return GradedMap(K1, K2, comps[0], comps[1], 1)


def _data_of(data):
    if isinstance(data, Verdict):
        if not data.certified:
            raise DataInvalid("equivalence data must come from a certified verdict")
        data = data.witness
    return data["levels"], data["data"]


def assemble_cone_nullhomotopy(data, f) -> Verdict:
    """Turn local equivalence data for ``f`` into a local contraction of ``cone(f)``.

    With ``A``/``B`` the cone structure maps ``m1 -> n`` and ``m2 -> m1``
    (``m1 = m(n)``, ``m2 = m(m1)``), ``t = [[-hC, g], [0, hD]]`` and
    ``N = d t + t d - A`` (only a ``C -> D`` block), the map
    ``h = t_A B - N_A t_B`` satisfies ``d h + h d = A B``.  When ``m = n``
    and the structure maps are identities this is ``t Psi`` with
    ``Psi = [[gamma, 0], [f hC - hD f, eta]]``.
    """
    f = as_pro_map(f)
    _check_levelwise(f)
    levels, data = _data_of(data)
    ring = f.ring
    for n, row in data.items():
        for e in row:
            if not all(check_claim(ring, c) for c in equivalence_claims(f, e)):
                raise DataInvalid(f"equivalence datum n={e.n} i={e.i} fails its equations")
    K = cone_tower(f)
    pushed = {n: {e.i: _push_datum(f, e) for e in row} for n, row in data.items()}
    tildes = {n: {i: cone_tilde(f, e) for i, e in row.items()} for n, row in pushed.items()}
    out_levels, homs, claims = {}, {}, []
    for n in sorted(levels):
        m1 = levels[n]
        m2 = levels.get(m1)
        if m2 is None:
            raise DataInvalid(f"no equivalence data for level {m1}")
        A = K.structure(n, m1)
        B = K.structure(m1, m2)
        Ln, L1 = K.levels[n].last, K.levels[m1].last
        tA, tB = tildes[n], tildes[m1]
        N_last = bracket(tA[L1]) - A.pushed(L1, Ln)
        homs[n] = {}
        for i in range(K.levels[m2].length):
            target = K.structure(n, m2).pushed(i, Ln)
            e = pushed[n][i]
            identity_case = (m1 == n == m2 and e.i == i and data_level_is_identity(f, n, i))
            if identity_case:
                h = tA[i] @ _psi(f, e)
            else:
                # t_B lands in the last level L1 of stage m1
                h = tA[L1] @ K.levels[m1].transition(i, L1) @ B.components[i] - N_last @ tB[i]
            if bracket(h) != target:
                raise DataInvalid(f"assembled homotopy fails at n={n}, i={i}")
            homs[n][i] = (Ln, h)
            claims += homotopy_claims(h, target, f"cone n={n} k={m2} i={i}")
            if identity_case:
                claims += _tilde_identity_claims(f, e, tA[i], f"cone n={n} i={i}")
        out_levels[n] = m2
    return certified("locally_contractible", ring, claims, witness={"levels": out_levels, "homotopies": homs},
                     scope={"window": K.window.to_json(), "from": "local_equivalence_direct"})


def data_level_is_identity(f: ProIndMorphism, n, i):
    C, D = f.source.levels[n], f.target.levels[n]
    return i == C.last and i == D.last


def _cone_block(f: ProIndMorphism, e: EquivalenceDatum, top_right, bottom_left):
    """``[[gamma, top_right], [bottom_left, eta]]`` as a degree-zero map ``cone_{m,i} -> cone_{n,j}``."""
    fm, fn = f.at(e.m, e.i), f.at(e.n, e.j)
    K1, K2 = cone(fm)[0], cone(fn)[0]
    gamma = f.source.structure(e.n, e.m).pushed(e.i, e.j)
    eta = f.target.structure(e.n, e.m).pushed(e.i, e.j)
    comps = [block_morphism([fm.source[k + 1], fm.target[k]], [fn.source[k + 1], fn.target[k]],
                            [[gamma[k + 1], top_right[k] if top_right else None],
                             [bottom_left[k + 1] if bottom_left else None, eta[k]]]) for k in (0, 1)]
    return GradedMap(K1, K2, comps[0], comps[1], 0)


def _x_block(f, e):
    """``X = hD f - f hC``, a degree-one map ``C_{m,i} -> D_{n,j}``."""
    fm, fn = f.at(e.m, e.i), f.at(e.n, e.j)
    return e.hD @ fm - fn @ e.hC


def _psi(f, e):
    return _cone_block(f, e, None, -_x_block(f, e))


def _tilde_identity_claims(f, e, t, label):
    """``d t + t d = [[gamma, 0], [hD f - f hC, eta]]``, the displayed identity for ``t``."""
    M = _cone_block(f, e, None, _x_block(f, e))
    return homotopy_claims(t, M, f"{label} tilde identity")
