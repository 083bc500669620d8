"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line, collected in the run summary."""
import json
import random
import time

from prokom.axioms import (Generator, GeneratorConfig, brute_force_homotopy_oracle, brute_force_lift_oracle,
                           bump_entry, run_suite, run_trial, suite_names)
from prokom.axioms.suites import FIELD_ONLY, FIXED_RING
from prokom.cli import main
from prokom.exactbase.modules import BaseMorphism, BaseObject, block_morphism, direct_sum
from prokom.exactbase.rings import F2, INTEGERS as Z, RATIONALS as Q, prime_field
from prokom.exactbase.solve import solve_lift
from prokom.indpro import (ExtensionTriple, IndComplex, IndMorphism, ProIndComplex, fake_product,
                           is_ind_locally_split, is_locally_split)
from prokom.modelcheck import (as_pro_map, assemble_cone_nullhomotopy, classify, forget, is_exact_locally_split,
                               is_local_equivalence_direct, is_local_equivalence_via_cone, is_locally_contractible,
                               shift_action, strictify)
from prokom.modelcheck.local import cone_tower
from prokom.supercomplex import ChainMap, GradedMap, SuperComplex, solve_homotopy

RINGS = (Q, F2, Z)
FIELDS = (Q, F2, prime_field(3))

# certificates emitted by criteria 1-7, replayed by criterion 8
EMITTED = []


def _keep(*verdicts):
    EMITTED.extend(v.certificate for v in verdicts if v.certificate is not None)


def _random_f2(rng, X, Y):
    return BaseMorphism.from_rows(X, Y, [[rng.randrange(2) for _ in range(X.dim)] for _ in range(Y.dim)])


def _dims(rng, parts, top, total=4):
    dims = [rng.randint(0, top) for _ in range(parts)]
    while sum(dims) > total:
        dims[rng.randrange(parts)] -= 1
        dims = [max(d, 0) for d in dims]
    return dims


def _lift_instance(rng):
    X, Y, T = (BaseObject.free(F2, n) for n in _dims(rng, 3, 2))
    return _random_f2(rng, Y, T), _random_f2(rng, X, T)


def _homotopy_instance(rng):
    C0, C1, D0, D1 = (BaseObject.free(F2, n) for n in _dims(rng, 4, 2))
    # one nonzero differential on each side keeps d^2 = 0
    C = SuperComplex(C0, C1, _random_f2(rng, C0, C1), BaseMorphism.zero(C1, C0))
    D = SuperComplex(D0, D1, BaseMorphism.zero(D0, D1), _random_f2(rng, D1, D0))
    return C, D, GradedMap(C, D, _random_f2(rng, C0, D0), _random_f2(rng, C1, D1))


def test_criterion_1_oracle_agreement(criterion):
    with criterion(1, "solvers agree with exhaustive F2 enumeration") as info:
        rng = random.Random(1)
        start = time.perf_counter()
        mismatches = certified = 0
        for _ in range(200):
            p, f = _lift_instance(rng)
            a, b = solve_lift(p, f), brute_force_lift_oracle(p, f)
            C, D, g = _homotopy_instance(rng)
            c, d = solve_homotopy(g), brute_force_homotopy_oracle(C, D, g)
            mismatches += (a.outcome != b.outcome) + (c.outcome != d.outcome)
            certified += a.certified + c.certified
            _keep(a, b, c, d)
        secs = time.perf_counter() - start
        info.update(instances="200 lift + 200 homotopy", certified=certified, mismatches=mismatches, seconds=round(secs, 2))
        assert mismatches == 0
        assert secs < 10


def test_criterion_2_exact_axioms(criterion):
    with criterion(2, "exact-structure axioms at ind and pro level") as info:
        start = time.perf_counter()
        failures, runs = 0, []
        for name in ("exact-axioms-ind", "exact-axioms-pro"):
            for ring in RINGS:
                r = run_suite(name, GeneratorConfig(ring, max_dim=2, window_length=2), trials=100)
                failures += len(r.failures)
                runs.append(f"{name}/{ring.name}:{r.trials}")
        secs = time.perf_counter() - start
        info.update(runs=len(runs), trials_each=100, failures=failures, seconds=round(secs, 1))
        assert failures == 0
        assert secs < 60


def _constant_ind_extension(p, length=3):
    K, E = SuperComplex.concentrated(BaseObject(Z, [p])), SuperComplex.concentrated(BaseObject(Z, [p * p]))
    i = ChainMap(K, E, BaseMorphism.from_rows(K[0], E[0], [[p]]), BaseMorphism.zero(K[1], E[1]))
    I = IndMorphism.levelwise(IndComplex.constant(K, length), IndComplex.constant(E, length), [i] * length)
    return ExtensionTriple.from_inclusion(I)


def test_criterion_3_ind_locally_split(criterion):
    with criterion(3, "field ind extensions certified, Z/p^2 refuted") as info:
        certified = 0
        for ring in FIELDS:
            for seed in range(100):
                g = Generator(GeneratorConfig(ring, seed=seed, max_dim=2, window_length=2, tail="stabilizing"))
                v = is_ind_locally_split(g.extension("ind"))
                certified += v.certified
                _keep(v)
        refuted = 0
        for p in (2, 3, 5):
            v = is_ind_locally_split(_constant_ind_extension(p))
            refuted += v.refuted
            _keep(v)
        info.update(certified=f"{certified}/{100 * len(FIELDS)}", zp2_refuted=f"{refuted}/3")
        assert certified == 100 * len(FIELDS)
        assert refuted == 3


def _definitive(make, want=100, cap=1000):
    """Draw instances by seed until ``want`` of them give definitive verdict pairs."""
    pairs, seed = [], 0
    while len(pairs) < want and seed < cap:
        a, b = make(seed)
        if a.definitive and b.definitive:
            pairs.append((seed, a, b))
        seed += 1
    return pairs


def _random_pro(seed):
    ring = RINGS[seed % 3]
    g = Generator(GeneratorConfig(ring, seed=seed, max_dim=2, window_length=2))
    pick = seed % 4
    if pick == 0:
        return g.pro()
    if pick == 1:
        return cone_tower(g.equivalence())
    if pick == 2:
        return cone_tower(g.pro_morphism(g.pro(), g.pro()))
    return ProIndComplex.constant(IndComplex.constant(g.contractible(), 2), 2)


def test_criterion_4_contractible_iff_exact(criterion):
    with criterion(4, "locally contractible agrees with exact") as info:
        def make(seed):
            X = _random_pro(seed)
            return is_locally_contractible(X), is_exact_locally_split(X)
        pairs = _definitive(make)
        agree = sum(a.outcome == b.outcome for _, a, b in pairs)
        for _, a, b in pairs:
            _keep(a, b)
        info.update(definitive=len(pairs), agree=agree, certified=sum(a.certified for _, a, _ in pairs))
        assert len(pairs) == 100 and agree == 100


def _random_morphism(seed):
    ring = RINGS[seed % 3]
    g = Generator(GeneratorConfig(ring, seed=seed, max_dim=2, window_length=2))
    pick = seed % 3
    if pick == 0:
        return g.equivalence()
    if pick == 1:
        return g.chain_map(g.supercomplex(), g.supercomplex())
    return g.pro_morphism(g.pro(), g.pro())


def _cone_homotopy_holds(f, w):
    """Recheck ``d h + h d = structure map`` for every assembled homotopy, independently of the certificate."""
    K = cone_tower(f)
    for n, m2 in w.witness["levels"].items():
        for i, (Ln, h) in w.witness["homotopies"][n].items():
            src, tgt = K.levels[m2].levels[i], K.levels[n].levels[Ln]
            A = K.structure(n, m2).pushed(i, Ln)
            for k in (0, 1):
                if tgt.d[k + 1] @ h.f[k] + h.f[k + 1] @ src.d[k] != A.f[k]:
                    return False
    return True


def test_criterion_5_local_equivalence(criterion):
    with criterion(5, "direct and cone equivalence agree; assembled contraction replays") as info:
        maps = {}

        def make(seed):
            maps[seed] = _random_morphism(seed)
            return is_local_equivalence_direct(maps[seed]), is_local_equivalence_via_cone(maps[seed])
        pairs = _definitive(make)
        agree = sum(a.outcome == b.outcome for _, a, b in pairs)
        assembled = exact = 0
        for seed, a, b in pairs:
            _keep(a, b)
            if a.certified:
                w = assemble_cone_nullhomotopy(a, maps[seed])
                assembled += 1
                exact += w.certified and _cone_homotopy_holds(as_pro_map(maps[seed]), w)
                _keep(w)
        info.update(definitive=len(pairs), agree=agree, assembled=assembled, exact=exact)
        assert len(pairs) == 100 and agree == 100
        assert assembled > 0 and exact == assembled


def test_criterion_6_fake_product(criterion):
    with criterion(6, "fake product splits levelwise, is locally split, and X -> P is a cofibration") as info:
        ok = 0
        for seed in range(50):
            g = Generator(GeneratorConfig(RINGS[seed % 3], seed=seed, max_dim=2, window_length=2))
            X = g.pro()
            fp = fake_product(X)
            ext = fp.ext
            sections = all(
                ext.proj.at(n, j) @ fp.section[n][j] == ChainMap.identity(fp.section[n][j].source)
                and fp.retraction[n][j] @ ext.incl.at(n, j) == ChainMap.identity(ext.incl.at(n, j).source)
                and ext.incl.at(n, j) @ fp.retraction[n][j] + fp.section[n][j] @ ext.proj.at(n, j)
                == ChainMap.identity(ext.incl.at(n, j).target)
                for n in range(X.length) for j in range(X.levels[n].length))
            v = is_locally_split(ext)
            cof = classify(ext.incl).cofibration
            _keep(fp.verdict, v, cof)
            ok += sections and fp.verdict.certified and v.certified and cof.certified and ext.K == X
        info.update(towers=50, ok=ok)
        assert ok == 50


def _grading_and_differential(Y: SuperComplex):
    """``g`` and ``d`` as matrices on ``Y_0 (+) Y_1``."""
    T = [Y[0], Y[1]]
    one0, one1 = BaseMorphism.identity(Y[0]), BaseMorphism.identity(Y[1])
    g = block_morphism(T, T, [[one0, None], [None, -one1]])
    d = block_morphism(T, T, [[None, Y.d[1]], [Y.d[0], None]])
    return g, d, BaseMorphism.identity(direct_sum(*T))


def _r_module(Y):
    g, d, one = _grading_and_differential(Y)
    zero = BaseMorphism.zero(one.source, one.target)
    return g @ g == one and g @ d + d @ g == zero and d @ d == zero


def _shifted_towers():
    """Hand-built towers whose action is given one or two steps late."""
    out = []
    for ring in (Z, Q, prime_field(3)):
        V = BaseObject.free(ring, 1)
        C = SuperComplex(V, V, BaseMorphism.identity(V), BaseMorphism.zero(V, V))
        two = ChainMap(C, C, BaseMorphism.identity(V).scale(2), BaseMorphism.identity(V).scale(2))
        for sigma in (ChainMap.identity(C), two):
            X = ProIndComplex.grid([[C]] * 3, [[]] * 3, [[sigma]] * 2)
            out += [shift_action(forget(X), 1), shift_action(forget(X), 2)]
    E = SuperComplex.elementary(BaseObject(Z, [0, 4]))
    X = ProIndComplex.grid([[E]] * 3, [[]] * 3, [[ChainMap.identity(E)]] * 2)
    out.append(shift_action(forget(X)))
    return out


def test_criterion_7_strictification(criterion):
    with criterion(7, "strictify round trip and shifted actions") as info:
        strict = 0
        for seed in range(50):
            g = Generator(GeneratorConfig(RINGS[seed % 3], seed=seed, max_dim=2, window_length=3))
            X = g.pro(ind_length=1)
            r = strictify(forget(X))
            _keep(r.verdict)
            strict += r.verdict.certified and r.tower == X and r.reindex == list(range(X.length))
        shifted = relations = 0
        towers = _shifted_towers()
        for T in towers:
            r = strictify(T)
            _keep(r.verdict)
            shifted += r.verdict.certified
            relations += all(_r_module(r.level(n)) for n in range(r.tower.length))
        info.update(strict=f"{strict}/50", shifted=f"{shifted}/{len(towers)}", relations=f"{relations}/{len(towers)}")
        assert strict == 50
        assert shifted == relations == len(towers)


def _mutate_stored_entry(obj, rng):
    """Change one stored matrix entry in place of a copy, leaving the digest alone."""
    obj = json.loads(json.dumps(obj))
    spots = []

    def walk(x):
        if isinstance(x, dict):
            if isinstance(x.get("entries"), list) and x["entries"]:
                spots.append(x)
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
    walk(obj["claims"])
    if not spots:
        return None
    m = rng.choice(spots)
    k = rng.randrange(len(m["entries"]))
    m["entries"][k] = m["entries"][k] + "1" if m["entries"][k] != "0" else "1"
    return obj


def test_criterion_8_certificate_replay(criterion, tmp_path):
    with criterion(8, "certificates replay through the CLI; single-entry mutations fail") as info:
        certs = list(EMITTED)
        for name in suite_names():
            ring = FIXED_RING.get(name, F2 if name in FIELD_ONLY else Z)
            for seed in range(3):
                for v in run_trial(name, GeneratorConfig(ring, seed=seed, max_dim=2, window_length=2)):
                    if v.certificate is not None:
                        certs.append(v.certificate)
        rng = random.Random(8)
        path = tmp_path / "c.json"

        def cli_replay(obj):
            path.write_text(json.dumps(obj))
            return main(["replay", str(path)])
        fresh = stored = redigested = 0
        tried_stored = tried_redigested = 0
        for cert in certs:
            obj = cert.to_json()
            fresh += cli_replay(obj) == 0
            m = _mutate_stored_entry(obj, rng)
            if m is not None:
                tried_stored += 1
                stored += cli_replay(m) != 0
            b = bump_entry(obj, rng)
            if b is not None:
                tried_redigested += 1
                redigested += cli_replay(b) != 0
        info.update(certificates=len(certs), fresh_ok=fresh, mutated_rejected=f"{stored}/{tried_stored}",
                    redigested_rejected=f"{redigested}/{tried_redigested}")
        assert len(certs) > 1000
        assert fresh == len(certs)
        assert stored == tried_stored
        assert redigested == tried_redigested
