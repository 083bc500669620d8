"""Named law suites over generated instances.

Trial ``t`` of a suite run with seed ``s`` draws its instances from a
generator seeded with ``s + t``, so every failure is replayable on its own
with :func:`run_trial`.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
import time

from ..certificates import Certificate, replay
from ..errors import DataInvalid, ProkomError, UnknownSuite
from ..exactbase.modules import BaseObject
from ..exactbase.rings import F2, INTEGERS
from ..exactbase.solve import solve_lift
from ..indpro import (ExtensionTriple, IndComplex, IndMorphism, ProIndComplex, ProIndMorphism, compose_deflations,
                      fake_product, is_ind_locally_split, is_locally_split, pullback_deflation, pushout_inflation)
from ..indpro.levelwise import kernel_ind
from ..supercomplex import ChainMap, GradedMap, SuperComplex, solve_homotopy
from .generators import Generator, GeneratorConfig
from .oracles import MAX_TOTAL_DIM, brute_force_homotopy_oracle, brute_force_lift_oracle


class LawViolation(ProkomError):
    """A suite law failed on a generated instance."""


@dataclass
class SuiteReport:
    name: str
    ring: str
    seed: int
    trials: int = 0
    certified: int = 0
    refuted: int = 0
    inconclusive: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return not self.failures

    def count(self, verdicts):
        for v in verdicts:
            if v.certified:
                self.certified += 1
            elif v.refuted:
                self.refuted += 1
            else:
                self.inconclusive += 1

    def to_json(self):
        return asdict(self)

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name} [{self.ring}] trials={self.trials} certified={self.certified} "
                f"refuted={self.refuted} inconclusive={self.inconclusive} failures={len(self.failures)}")


def _law(ok, message):
    if not ok:
        raise LawViolation(message)


def _replays(v, what):
    _law(v.certificate is not None, f"{what}: no certificate")
    ok, msg = replay(v.certificate.to_json())
    _law(ok, f"{what}: replay failed ({msg})")


def _certified(v, what):
    _law(v.certified, f"{what}: expected Certified, got {v.outcome.name} ({v.reason})")
    _replays(v, what)


# ---------------------------------------------------------------------------
# exact-structure axioms


def _random_system(g, like):
    if isinstance(like, ProIndComplex):
        return g.pro(like.length, like.levels[0].length)
    return g.ind(like.length)


def _random_map(g, X, Y):
    if isinstance(X, ProIndComplex):
        return g.pro_morphism(X, Y)
    return g.ind_morphism(X, Y)


def _deflation_out_of(g, Q):
    """A deflation ``Q -> Q / K`` with ``K`` the kernel of a random map out of ``Q``."""
    F = _random_system(g, Q)
    h = _random_map(g, Q, F)
    incl = ExtensionTriple.from_projection(h).incl if isinstance(Q, ProIndComplex) else kernel_ind(h)[1]
    return ExtensionTriple.from_projection(ExtensionTriple.from_inclusion(incl).proj)


def _exact_axioms(level):
    def trial(g, cfg):
        verdicts = []
        for _ in range(10):
            ext = g.extension(level)
            v = is_locally_split(ext)
            verdicts.append(v)
            if v.certified:
                break
        else:
            return verdicts
        _replays(v, "input extension")

        f = _random_map(g, _random_system(g, ext.Q), ext.Q)
        new, to_e, cert = pullback_deflation(ext, f, v)
        _law(new.is_kernel_cokernel_pair(), "pullback is not a kernel-cokernel pair")
        _law(ext.proj @ to_e == f @ new.proj, "pullback square does not commute")
        _certified(cert, "pullback")
        _certified(is_locally_split(new), "pullback rechecked")
        verdicts.append(cert)

        f = _random_map(g, ext.K, _random_system(g, ext.K))
        new, from_e, cert = pushout_inflation(ext, f, v)
        _law(new.is_kernel_cokernel_pair(), "pushout is not a kernel-cokernel pair")
        _law(from_e @ ext.incl == new.incl @ f, "pushout square does not commute")
        _certified(cert, "pushout")
        _certified(is_locally_split(new), "pushout rechecked")
        verdicts.append(cert)

        ext2 = _deflation_out_of(g, ext.Q)
        v2 = is_locally_split(ext2)
        verdicts.append(v2)
        if v2.certified:
            new, cert = compose_deflations(ext, ext2, v, v2)
            _law(new.is_kernel_cokernel_pair(), "composite is not a kernel-cokernel pair")
            _certified(cert, "composite deflation")
            verdicts.append(cert)
        return verdicts
    return trial


def _everything_splits(g, cfg):
    v = is_ind_locally_split(g.extension("ind"))
    _certified(v, "ind extension over a field")
    return [v]


def _zp2(g, cfg):
    """``Z/p -> Z/p^2 -> Z/p`` is refuted at every level; the split control is certified."""
    p = (2, 3, 5)[g.rng.randrange(3)]
    length = cfg.window_length

    def conc(orders):
        return SuperComplex.concentrated(BaseObject(INTEGERS, orders))

    def deg0(C, D, rows):
        from ..exactbase.modules import BaseMorphism
        return ChainMap(C, D, BaseMorphism.from_rows(C[0], D[0], rows), BaseMorphism.zero(C[1], D[1]))

    K, E, S = conc([p]), conc([p * p]), conc([p, p])
    out = []
    for incl, expect in ((deg0(K, E, [[p]]), "refuted"), (deg0(K, S, [[1], [0]]), "certified")):
        I = IndMorphism.levelwise(IndComplex.constant(incl.source, length), IndComplex.constant(incl.target, length),
                                  [incl] * length)
        P = ProIndMorphism(ProIndComplex.constant(I.source, length), ProIndComplex.constant(I.target, length),
                           [[incl] * length] * length)
        for f in (incl, I, P):
            v = is_locally_split(ExtensionTriple.from_inclusion(f))
            _law(getattr(v, expect), f"Z/{p} extension at {type(f).__name__}: expected {expect}, got {v.outcome.name}")
            _replays(v, "Z/p^2 instance")
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# oracle agreements


def _small(g, parts):
    while True:
        objs = [g.obj(2) for _ in range(parts)]
        if sum(X.dim for X in objs) <= MAX_TOTAL_DIM:
            return objs


def _small_complex_pair(g):
    while True:
        C, D = g.supercomplex(2), g.supercomplex(2)
        if sum(C.dims + D.dims) <= MAX_TOTAL_DIM:
            return C, D


def _oracle_agreement(g, cfg):
    C, D = _small_complex_pair(g)
    kind = g.rng.randrange(3)
    if kind == 0:
        h = GradedMap(C, D, g.morphism(C[0], D[1]), g.morphism(C[1], D[0]), 1)
        f = GradedMap(C, D, *[D.d[k + 1] @ h[k] + h[k + 1] @ C.d[k] for k in (0, 1)])
    elif kind == 1:
        f = g.chain_map(C, D)
    else:
        f = GradedMap(C, D, g.morphism(C[0], D[0]), g.morphism(C[1], D[1]))
    a, b = solve_homotopy(f), brute_force_homotopy_oracle(C, D, f)
    _law(a.outcome == b.outcome, f"homotopy: solver {a.outcome.name} vs enumeration {b.outcome.name}")
    X, Y, T = _small(g, 3)
    p = g.morphism(Y, T)
    f = p @ g.morphism(X, Y) if g.rng.random() < 0.5 else g.morphism(X, T)
    c, d = solve_lift(p, f), brute_force_lift_oracle(p, f)
    _law(c.outcome == d.outcome, f"lift: solver {c.outcome.name} vs enumeration {d.outcome.name}")
    for v in (a, c):
        _replays(v, "solver certificate")
    return [a, c]


def _agree(a, b, what):
    if a.definitive and b.definitive:
        _law(a.outcome == b.outcome, f"{what}: {a.outcome.name} vs {b.outcome.name}")
    for v in (a, b):
        if v.certificate is not None:
            _replays(v, v.predicate)


def _contractible_iff_exact(g, cfg):
    from ..modelcheck import is_exact_locally_split, is_locally_contractible
    X = g.pro()
    a, b = is_locally_contractible(X), is_exact_locally_split(X)
    _agree(a, b, "contractible vs exact")
    return [a, b]


def _random_morphism(g):
    pick = g.rng.randrange(3)
    if pick == 0:
        return g.equivalence()
    if pick == 1:
        C = g.supercomplex()
        return g.chain_map(C, g.supercomplex())
    X, Y = g.pro(), g.pro()
    return g.pro_morphism(X, Y)


def _local_equivalence_agreement(g, cfg):
    from ..modelcheck import assemble_cone_nullhomotopy, is_local_equivalence_direct, is_local_equivalence_via_cone
    f = _random_morphism(g)
    a, b = is_local_equivalence_direct(f), is_local_equivalence_via_cone(f)
    _agree(a, b, "direct vs cone")
    out = [a, b]
    if a.certified:
        w = assemble_cone_nullhomotopy(a, f)
        _certified(w, "assembled cone null-homotopy")
        out.append(w)
    return out


# ---------------------------------------------------------------------------
# constructions


def _fake_product(g, cfg):
    from ..modelcheck import classify
    X = g.pro()
    fp = fake_product(X)
    ext = fp.ext
    for n in range(X.length):
        for j in range(X.levels[n].length):
            i, p = ext.incl.at(n, j), ext.proj.at(n, j)
            s, r = fp.section[n][j], fp.retraction[n][j]
            _law(p @ s == ChainMap.identity(s.source), f"p s != id at ({n},{j})")
            _law(r @ i == ChainMap.identity(i.source), f"r i != id at ({n},{j})")
            _law(i @ r + s @ p == ChainMap.identity(i.target), f"i r + s p != id at ({n},{j})")
    _certified(fp.verdict, "fake product extension")
    c = classify(ext.incl).cofibration
    _certified(c, "X -> fake product as a cofibration")
    return [fp.verdict, c]


def _strictify_roundtrip(g, cfg):
    from ..modelcheck import forget, shift_action, strictify
    X = g.pro(ind_length=1)
    r = strictify(forget(X))
    _law(r.tower == X, "strict input was not returned unchanged")
    _law(r.reindex == list(range(X.length)), "strict input was reindexed")
    _certified(r.verdict, "strict round trip")
    s = strictify(shift_action(forget(X)))
    _certified(s.verdict, "shifted round trip")
    if X.window.stabilizing:
        _law(s.reindex == [min(n + 1, X.last) for n in range(X.length)], f"unexpected reindexing {s.reindex}")
    for n in range(s.tower.length):
        Y = s.level(n)
        _law((Y.d[1] @ Y.d[0]).is_zero() and (Y.d[0] @ Y.d[1]).is_zero(), f"d^2 != 0 at level {n}")
    return [r.verdict, s.verdict]


# ---------------------------------------------------------------------------
# certificates and two-out-of-three


def bump_entry(obj, rng):
    """A copy of a certificate with one equation right-hand side entry changed, re-digested.

    Returns ``None`` when the certificate has no such entry.
    """
    cert = Certificate.from_json(obj)
    ring = cert.ring
    spots = [(c, r, col) for c, claim in enumerate(cert.claims) if claim["type"] == "equation"
             for r in range(claim["rhs"]["rows"]) if claim["moduli"][r] != 1
             for col in range(claim["rhs"]["cols"])]
    if not spots:
        return None
    c, r, col = spots[rng.randrange(len(spots))]
    claims = [dict(x) for x in cert.claims]
    rhs = dict(claims[c]["rhs"])
    entries = list(rhs["entries"])
    k = r * rhs["cols"] + col
    entries[k] = ring.format(ring.coerce(ring.parse(entries[k]) + 1))
    rhs["entries"] = entries
    claims[c] = dict(claims[c], rhs=rhs)
    return Certificate(cert.predicate, cert.outcome, ring, claims, cert.scope).to_json()


def _certificate_replay(g, cfg):
    from ..modelcheck import classify, is_exact_locally_split, is_local_equivalence_via_cone, is_locally_contractible
    X = g.pro()
    f = _random_morphism(g)
    verdicts = [is_locally_contractible(X), is_exact_locally_split(X), is_locally_split(g.extension("ind")),
                is_local_equivalence_via_cone(f)]
    verdicts += list(vars(classify(ProIndMorphism.identity(X))).values())
    out = []
    for v in verdicts:
        if v.certificate is None:
            continue
        obj = v.certificate.to_json()
        _law(replay(obj)[0], f"{v.predicate}: fresh certificate does not replay")
        if obj["claims"]:
            k = g.rng.randrange(len(obj["claims"]))
            tampered = dict(obj, claims=[dict(c, label=c["label"] + "'") if i == k else c
                                         for i, c in enumerate(obj["claims"])])
            _law(not replay(tampered)[0], f"{v.predicate}: tampered certificate replays")
        bumped = bump_entry(obj, g.rng)
        if bumped is not None:
            _law(not replay(bumped)[0], f"{v.predicate}: re-digested certificate with a changed entry replays")
        out.append(v)
    return out


def _two_out_of_three(g, cfg):
    from ..modelcheck import is_local_equivalence_via_cone as weq
    f = g.equivalence() if g.rng.random() < 0.7 else g.chain_map(g.supercomplex(), g.supercomplex())
    D = f.target
    k = g.equivalence(source=D) if g.rng.random() < 0.7 else g.chain_map(D, g.supercomplex())
    verdicts = [weq(f), weq(k), weq(k @ f)]
    names = ("f", "g", "g f")
    certs = [v.certified for v in verdicts]
    if sum(certs) >= 2:
        for name, v in zip(names, verdicts):
            _certified(v, f"two-out-of-three: {name}")
    return verdicts


SUITES = {
    "exact-axioms-ind": _exact_axioms("ind"),
    "exact-axioms-pro": _exact_axioms("pro"),
    "everything-splits-over-field": _everything_splits,
    "Zp2-counterexample": _zp2,
    "oracle-agreement": _oracle_agreement,
    "contractible-iff-exact": _contractible_iff_exact,
    "local-equivalence-agreement": _local_equivalence_agreement,
    "fake-product": _fake_product,
    "strictify-roundtrip": _strictify_roundtrip,
    "certificate-replay": _certificate_replay,
    "two-out-of-three": _two_out_of_three,
}

# suites whose instances live over a fixed ring
FIXED_RING = {"Zp2-counterexample": INTEGERS, "oracle-agreement": F2}
FIELD_ONLY = {"everything-splits-over-field"}


def suite_names():
    return list(SUITES)


def _config(name, cfg):
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    cfg = cfg or GeneratorConfig("Q", max_dim=2, window_length=2)
    if name in FIXED_RING:
        cfg = replace(cfg, ring=FIXED_RING[name])
    if name in FIELD_ONLY and not cfg.ring.is_field:
        raise DataInvalid(f"suite {name!r} needs a field ring")
    return cfg


def run_trial(name, cfg: GeneratorConfig):
    """One trial with ``cfg.seed``; returns its verdicts or raises LawViolation."""
    cfg = _config(name, cfg)
    return SUITES[name](Generator(cfg), cfg)


def run_suite(name, cfg: GeneratorConfig | None = None, trials=100) -> SuiteReport:
    cfg = _config(name, cfg)
    report = SuiteReport(name, cfg.ring.name, cfg.seed)
    start = time.perf_counter()
    for t in range(trials):
        seed = cfg.seed + t
        try:
            report.count(run_trial(name, cfg.with_seed(seed)))
        except Exception as exc:  # any failure is recorded with its seed
            report.failures.append({"trial": t, "seed": seed, "error": type(exc).__name__, "message": str(exc)})
        report.trials += 1
    report.seconds = round(time.perf_counter() - start, 3)
    return report
