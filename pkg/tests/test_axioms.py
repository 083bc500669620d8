import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from prokom.axioms import (GeneratorConfig, brute_force_homotopy_oracle, brute_force_lift_oracle, bump_entry,
                           gen_extension, gen_ind, gen_pro, gen_supercomplex, run_suite, run_trial, suite_names)
from prokom.certificates import replay
from prokom.errors import DataInvalid, RingUnsupported, TooLarge, UnknownSuite
from prokom.exactbase.modules import BaseMorphism, BaseObject
from prokom.exactbase.rings import F2, INTEGERS as Z, RATIONALS as Q
from prokom.exactbase.solve import solve_lift
from prokom.supercomplex import ChainMap, GradedMap, SuperComplex, solve_homotopy

rings = st.sampled_from([Q, F2, Z])
seeds = st.integers(0, 10**6)


# --- generators ----------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(rings, seeds)
def test_generators_are_deterministic(ring, seed):
    cfg = GeneratorConfig(ring, seed=seed, max_dim=2, window_length=2)
    assert gen_supercomplex(cfg) == gen_supercomplex(cfg)
    assert gen_ind(cfg) == gen_ind(cfg)
    assert gen_pro(cfg) == gen_pro(cfg)


@settings(max_examples=30, deadline=None)
@given(rings, seeds)
def test_generated_differentials_square_to_zero(ring, seed):
    C = gen_supercomplex(GeneratorConfig(ring, seed=seed))
    assert (C.d[1] @ C.d[0]).is_zero() and (C.d[0] @ C.d[1]).is_zero()


@settings(max_examples=20, deadline=None)
@given(rings, seeds, st.sampled_from(["base", "ind", "pro"]))
def test_generated_extensions_are_kernel_cokernel_pairs(ring, seed, level):
    ext = gen_extension(GeneratorConfig(ring, seed=seed, max_dim=2, window_length=2), level)
    assert ext.is_kernel_cokernel_pair()
    assert not ext.problems()


def test_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(Q, max_dim=0)
    with pytest.raises(ValueError):
        GeneratorConfig(Q, tail="sometimes")


# --- oracles ---------------------------------------------------------------

def test_oracle_contractible_instance():
    E = SuperComplex.elementary(BaseObject.free(F2, 1))
    f = ChainMap.identity(E)
    a, b = solve_homotopy(f), brute_force_homotopy_oracle(E, E, f)
    assert a.certified and b.certified
    assert replay(b.certificate.to_json())[0]


def test_oracle_zero_differential_identity():
    C = SuperComplex.unit(F2)
    f = ChainMap.identity(C)
    assert solve_homotopy(f).refuted
    assert brute_force_homotopy_oracle(C, C, f).refuted


def test_oracle_limits():
    big = SuperComplex.concentrated(BaseObject.free(F2, 3))
    with pytest.raises(TooLarge):
        brute_force_homotopy_oracle(big, big, ChainMap.identity(big))
    C = SuperComplex.unit(Q)
    with pytest.raises(RingUnsupported):
        brute_force_homotopy_oracle(C, C, ChainMap.identity(C))


def _small_objects(draw_dims):
    return [BaseObject.free(F2, n) for n in draw_dims]


def _matrix(rng, X, Y):
    return BaseMorphism.from_rows(X, Y, [[rng.randrange(2) for _ in range(X.dim)] for _ in range(Y.dim)])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_lift_oracle_matches_solver(seed):
    rng = random.Random(seed)
    dims = [rng.randint(0, 2) for _ in range(3)]
    while sum(dims) > 4:
        dims[rng.randrange(3)] -= 1
    X, Y, T = _small_objects(dims)
    p, f = _matrix(rng, Y, T), _matrix(rng, X, T)
    assert solve_lift(p, f).outcome == brute_force_lift_oracle(p, f).outcome


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_homotopy_oracle_matches_solver(seed):
    rng = random.Random(seed)
    dims = [rng.randint(0, 1) for _ in range(4)]
    C0, C1, D0, D1 = _small_objects(dims)
    Z0 = lambda a, b: BaseMorphism.zero(a, b)  # noqa: E731
    dC = [_matrix(rng, C0, C1), Z0(C1, C0)]
    dD = [Z0(D0, D1), _matrix(rng, D1, D0)]
    C, D = SuperComplex(C0, C1, dC[0], dC[1]), SuperComplex(D0, D1, dD[0], dD[1])
    f = GradedMap(C, D, _matrix(rng, C0, D0), _matrix(rng, C1, D1))
    assert solve_homotopy(f).outcome == brute_force_homotopy_oracle(C, D, f).outcome


# --- suites -------------------------------------------------------------------

@pytest.mark.parametrize("name", suite_names())
def test_suites_pass(name):
    ring = F2 if name == "everything-splits-over-field" else Z
    report = run_suite(name, GeneratorConfig(ring, max_dim=2, window_length=2), trials=8)
    assert report.passed, report.failures
    assert report.trials == 8
    json.dumps(report.to_json())


def test_exact_axioms_over_field_all_certified():
    report = run_suite("exact-axioms-ind", GeneratorConfig(Q, max_dim=2, window_length=2), trials=20)
    assert report.passed and report.refuted == 0 and report.inconclusive == 0


def test_zp2_suite_refutes_exactly_the_torsion_instance():
    report = run_suite("Zp2-counterexample", trials=5)
    assert report.passed
    assert report.refuted == report.certified == 15


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("no-such-suite")


def test_field_suite_rejects_z():
    with pytest.raises(DataInvalid):
        run_suite("everything-splits-over-field", GeneratorConfig(Z))


def test_trials_replay_by_seed():
    cfg = GeneratorConfig(Z, seed=40, max_dim=2, window_length=2)
    a = run_trial("local-equivalence-agreement", cfg)
    b = run_trial("local-equivalence-agreement", cfg)
    assert [v.outcome for v in a] == [v.outcome for v in b]
    assert [v.certificate.to_json() for v in a] == [v.certificate.to_json() for v in b]


def test_bumped_entry_breaks_replay():
    C = SuperComplex.elementary(BaseObject(Z, [0, 4]))
    v = solve_homotopy(ChainMap.identity(C))
    obj = v.certificate.to_json()
    bumped = bump_entry(obj, random.Random(0))
    assert bumped["digest"] != obj["digest"]
    assert not replay(bumped)[0]
