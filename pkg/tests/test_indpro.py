import json

import pytest
from hypothesis import given, settings, strategies as st

from prokom.axioms import Generator, GeneratorConfig
from prokom.axioms.generators import chain_map_problem
from prokom.certificates import replay
from prokom.errors import CertificateMissing, ShapeMismatch, WindowTooShort
from prokom.exactbase.modules import BaseMorphism, BaseObject
from prokom.exactbase.rings import F2, INTEGERS as Z, RATIONALS as Q
from prokom.indpro import (ExtensionTriple, IndComplex, IndMorphism, ProIndComplex, ProIndMorphism, Window,
                           compose_deflations, embed_into_injective, fake_product, find_injectivity_counterexample,
                           ind_hom, is_ind_locally_split, is_locally_split, is_pro_locally_split,
                           is_pro_locally_split_direct, is_split, pro_hom, pullback_deflation, pushout_inflation)
from prokom.supercomplex import ChainMap, SuperComplex

rings = st.sampled_from([Q, F2, Z])
seeds = st.integers(0, 10**6)


def gen(ring, seed, **kw):
    kw.setdefault("max_dim", 2)
    kw.setdefault("window_length", 2)
    return Generator(GeneratorConfig(ring, seed=seed, **kw))


def conc(ring, orders):
    return SuperComplex.concentrated(BaseObject(ring, orders), 0)


def deg0(C, D, rows):
    return ChainMap(C, D, BaseMorphism.from_rows(C[0], D[0], rows), BaseMorphism.zero(C[1], D[1]))


def z2_z4():
    """The non-split ``Z/2 -> Z/4 -> Z/2``."""
    K, E = conc(Z, [2]), conc(Z, [4])
    return ExtensionTriple.from_inclusion(deg0(K, E, [[2]]))


def last_base(ext):
    """The base extension at the last stored level (the collapse under a stabilizing tail)."""
    if ext.level == "pro":
        ext = ext.ind_level(ext.E.last)
    j = ext.E.last
    return ExtensionTriple("base", ext.K.levels[j], ext.E.levels[j], ext.Q.levels[j],
                           ext.incl.components[j], ext.proj.components[j])


# --- systems --------------------------------------------------------------

def test_unknown_tail_window():
    C = conc(Q, [0])
    X = IndComplex.constant(C, 2, tail="unknown")
    with pytest.raises(WindowTooShort):
        X.level(5)
    S = IndComplex.constant(C, 2)
    assert S.level(5) == C


def test_transition_composite():
    C = conc(Z, [0])
    two = deg0(C, C, [[2]])
    X = IndComplex([C, C, C], [two, two])
    assert X.transition(0, 2)[0].matrix.rows() == [[4]]
    with pytest.raises(ShapeMismatch):
        X.transition(2, 0)


@given(rings, seeds)
def test_ind_hom_of_constants(ring, seed):
    # constant systems collapse to a single level
    g = gen(ring, seed)
    C, D = g.supercomplex(), g.supercomplex()
    H = ind_hom(IndComplex.constant(C, 2), IndComplex.constant(D, 3))
    M, _ = chain_map_problem(C, D).homogeneous_module()
    assert H.module.invariants() == M.invariants()


@given(rings, seeds)
def test_pro_hom_of_constants(ring, seed):
    g = gen(ring, seed)
    C, D = g.supercomplex(), g.supercomplex()
    X = ProIndComplex.constant(IndComplex.constant(C, 2), 2)
    Y = ProIndComplex.constant(IndComplex.constant(D, 2), 3)
    M, _ = chain_map_problem(C, D).homogeneous_module()
    assert pro_hom(X, Y).module.invariants() == M.invariants()


def test_hom_needs_a_reached_tail():
    g = gen(Q, 3)
    X = g.ind()
    Y = IndComplex(X.levels, X.transitions, Window(X.length, "unknown"))
    if X.transitions[-1] != ChainMap.identity(X.levels[-1]):
        with pytest.raises(WindowTooShort):
            ind_hom(Y, Y)


def test_hom_into_colimit_z():
    # colim(Z --2--> Z --2--> ...) truncated; Hom(Z, -) is the last level
    C = conc(Z, [0])
    two = deg0(C, C, [[2]])
    X = IndComplex([C, C], [two])
    H = ind_hom(IndComplex.constant(C), X)
    assert H.module.invariants() == ((), 1)


# --- extensions -----------------------------------------------------------

def test_z2_z4_not_split():
    ext = z2_z4()
    assert ext.is_kernel_cokernel_pair()
    v = is_split(ext)
    assert v.refuted
    assert replay(json.loads(json.dumps(v.certificate.to_json())))[0]


def test_split_extension_certified():
    K, E = conc(Z, [0]), conc(Z, [0, 3])
    ext = ExtensionTriple.from_inclusion(deg0(K, E, [[1], [0]]))
    v = is_split(ext)
    assert v.certified and replay(v.certificate.to_json())[0]


def _locally_but_not_levelwise_split(tail="stabilizing"):
    ext = z2_z4()
    Zc = SuperComplex.zero(Z)
    K = IndComplex([ext.K, Zc], [ChainMap.zero(ext.K, Zc)], Window(2, tail))
    E = IndComplex([ext.E, Zc], [ChainMap.zero(ext.E, Zc)], Window(2, tail))
    Qs = IndComplex([ext.Q, Zc], [ChainMap.zero(ext.Q, Zc)], Window(2, tail))
    i = IndMorphism.levelwise(K, E, [ext.incl, ChainMap.zero(Zc, Zc)])
    p = IndMorphism.levelwise(E, Qs, [ext.proj, ChainMap.zero(Zc, Zc)])
    return ExtensionTriple("ind", K, E, Qs, i, p)


def test_ind_locally_split_via_later_level():
    ext = _locally_but_not_levelwise_split()
    v = is_ind_locally_split(ext)
    assert v.certified
    assert v.witness["lifts"][0, 0][0] == 1
    assert replay(v.certificate.to_json())[0]
    assert is_split(z2_z4()).refuted


def test_unknown_tail_failure_is_inconclusive():
    ext = z2_z4().as_ind()
    K, E, Qs = (IndComplex(S.levels, S.transitions, Window(1, "unknown")) for S in (ext.K, ext.E, ext.Q))
    X = ExtensionTriple("ind", K, E, Qs, IndMorphism.levelwise(K, E, ext.incl.components),
                        IndMorphism.levelwise(E, Qs, ext.proj.components))
    assert is_ind_locally_split(X).inconclusive
    # a certification inside the window stays definitive
    assert is_ind_locally_split(_locally_but_not_levelwise_split("unknown")).certified


@given(st.sampled_from([Q, F2]), seeds, st.sampled_from(["base", "ind", "pro"]))
def test_everything_splits_over_a_field(ring, seed, level):
    ext = gen(ring, seed).extension(level)
    assert ext.is_kernel_cokernel_pair()
    assert is_locally_split(ext).certified


@given(rings, seeds, st.sampled_from(["ind", "pro"]))
def test_stabilizing_collapse_to_last_level(ring, seed, level):
    ext = gen(ring, seed).extension(level)
    assert is_locally_split(ext).outcome == is_split(last_base(ext)).outcome


@settings(max_examples=30)
@given(rings, seeds)
def test_pro_routes_agree(ring, seed):
    ext = gen(ring, seed).extension("pro")
    assert is_pro_locally_split(ext).outcome == is_pro_locally_split_direct(ext).outcome


@given(rings, seeds, st.sampled_from(["base", "ind", "pro"]))
def test_certificates_replay_after_json(ring, seed, level):
    v = is_locally_split(gen(ring, seed).extension(level))
    assert replay(json.loads(json.dumps(v.certificate.to_json())))[0]


@given(rings, seeds)
def test_extension_json_roundtrip(ring, seed):
    ext = gen(ring, seed).extension("pro")
    back = ExtensionTriple.from_json(json.loads(json.dumps(ext.to_json())))
    assert back.E == ext.E and back.Q == ext.Q and back.K == ext.K


def _certified_extension(ring, seed, level):
    g = gen(ring, seed)
    for _ in range(20):
        ext = g.extension(level)
        v = is_locally_split(ext)
        if v.certified:
            return g, ext, v
    pytest.skip("no certified extension drawn")


@settings(max_examples=30)
@given(rings, seeds, st.sampled_from(["ind", "pro"]))
def test_pullback_of_deflation(ring, seed, level):
    g, ext, v = _certified_extension(ring, seed, level)
    if level == "ind":
        Qp = g.ind(ext.Q.length)
        f = g.ind_morphism(Qp, ext.Q)
    else:
        Qp = g.pro(ext.Q.length, ext.Q.levels[0].length)
        f = g.pro_morphism(Qp, ext.Q)
    new, to_e, cert = pullback_deflation(ext, f, v)
    assert new.is_kernel_cokernel_pair()
    assert cert.certified and replay(cert.certificate.to_json())[0]
    assert (ext.proj @ to_e) == (f @ new.proj)


@settings(max_examples=30)
@given(rings, seeds, st.sampled_from(["ind", "pro"]))
def test_pushout_of_inflation(ring, seed, level):
    g, ext, v = _certified_extension(ring, seed, level)
    if level == "ind":
        L = g.ind(ext.K.length)
        f = g.ind_morphism(ext.K, L)
    else:
        L = g.pro(ext.K.length, ext.K.levels[0].length)
        f = g.pro_morphism(ext.K, L)
    new, from_e, cert = pushout_inflation(ext, f, v)
    assert new.is_kernel_cokernel_pair()
    assert cert.certified and replay(cert.certificate.to_json())[0]
    assert (from_e @ ext.incl) == (new.incl @ f)


@settings(max_examples=30)
@given(rings, seeds, st.sampled_from(["base", "ind", "pro"]))
def test_composition_of_deflations(ring, seed, level):
    g, ext1, v1 = _certified_extension(ring, seed, level)
    # a second deflation out of ext1.Q: the identity, or a split projection
    if level == "base":
        p2 = ChainMap.identity(ext1.Q)
    elif level == "ind":
        p2 = IndMorphism.identity(ext1.Q)
    else:
        p2 = ProIndMorphism.identity(ext1.Q)
    ext2 = ExtensionTriple.from_projection(p2)
    v2 = is_locally_split(ext2)
    new, cert = compose_deflations(ext1, ext2, v1, v2)
    assert new.is_kernel_cokernel_pair()
    assert cert.certified and replay(cert.certificate.to_json())[0]


def test_composition_of_two_nontrivial_deflations():
    # Z/3 (+) Z (+) Z -> Z (+) Z -> Z, both split
    E = conc(Z, [3, 0, 0])
    F = conc(Z, [0, 0])
    G = conc(Z, [0])
    p1 = deg0(E, F, [[0, 1, 0], [0, 0, 1]])
    p2 = deg0(F, G, [[0, 1]])
    e1, e2 = ExtensionTriple.from_projection(p1), ExtensionTriple.from_projection(p2)
    new, cert = compose_deflations(e1, e2, is_split(e1), is_split(e2))
    assert new.K[0].invariants() == ((3,), 1)
    assert cert.certified and replay(cert.certificate.to_json())[0]


def test_axioms_need_certificates():
    ext = z2_z4()
    with pytest.raises(CertificateMissing):
        pullback_deflation(ext, ChainMap.identity(ext.Q), None)
    with pytest.raises(CertificateMissing):
        pushout_inflation(ext, ChainMap.identity(ext.K), is_split(ext))


# --- fake products and injectives -----------------------------------------

def _tower(ring, orders, factor, n=3):
    C = conc(ring, orders)
    a = deg0(C, C, [[factor if i == j else 0 for j in range(len(orders))] for i in range(len(orders))])
    return ProIndComplex.grid([[C]] * n, [[]] * n, [[a]] * (n - 1))


def test_fake_product_shape():
    fp = fake_product(_tower(Z, [4], 2))
    assert [X.levels[0][0].orders for X in fp.product.levels] == [(4,), (4, 4), (4, 4, 4)]
    assert [X.levels[0][0].orders for X in fp.ext.Q.levels] == [(), (4,), (4, 4)]
    assert fp.ext.is_kernel_cokernel_pair()
    assert fp.verdict.certified and replay(fp.verdict.certificate.to_json())[0]


@given(rings, seeds)
def test_fake_product_splitting(ring, seed):
    X = gen(ring, seed).pro(3, 1)
    fp = fake_product(X)
    ext = fp.ext
    for n in range(X.length):
        for j in range(X.levels[n].length):
            s, r = fp.section[n][j], fp.retraction[n][j]
            i, p = ext.incl.at(n, j), ext.proj.at(n, j)
            assert (s @ p) + (i @ r) == ChainMap.identity(ext.E.levels[n].levels[j])
            assert (p @ s) == ChainMap.identity(ext.Q.levels[n].levels[j])
    assert is_pro_locally_split(ext).certified


def test_fake_product_inherits_injectivity():
    assert fake_product(_tower(Q, [0], 3)).product.injective
    assert not fake_product(_tower(Z, [4], 2)).product.injective


@given(st.sampled_from([Q, F2]), seeds)
def test_embed_into_injective_over_fields(ring, seed):
    X = gen(ring, seed).pro(2, 2)
    ext, v = embed_into_injective(X)
    assert ext.E.injective
    assert ext.is_kernel_cokernel_pair()
    assert v.certified


def test_embed_needs_embeddings_over_z():
    with pytest.raises(CertificateMissing):
        embed_into_injective(_tower(Z, [4], 2))


def test_injectivity_falsification():
    found = find_injectivity_counterexample(BaseObject(Z, [4]))
    assert found is not None
    i, f, v = found
    assert v.refuted and replay(v.certificate.to_json())[0]
    assert find_injectivity_counterexample(BaseObject(Z, [0])) is not None
    assert find_injectivity_counterexample(BaseObject.free(Q, 2), gen(Q, 0)) is None
    assert find_injectivity_counterexample(BaseObject(Z, []), gen(Z, 0)) is None
