import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from prokom.certificates import replay
from prokom.errors import NotWellDefined, RingUnsupported, ShapeMismatch
from prokom.exactbase.linalg import check_infeasible, invariant_factors, smith_normal_form, solve_system
from prokom.exactbase.matrix import Matrix
from prokom.exactbase.modules import (BaseMorphism, BaseObject, cokernel, hom_module, kernel,
                                      direct_sum)
from prokom.exactbase.rings import F2, INTEGERS as Z, RATIONALS as Q, prime_field
from prokom.exactbase.solve import (LinearProblem, _lift_problem, brute_force, enumerate_maps,
                                    solution_count, solve_extend, solve_graded_homotopy, solve_lift)

from strategies import RINGS, morphisms, objects


def det(M):
    return sympy.Matrix(M.rows()).det() if M.nrows else 1


# --- rings and matrices ---------------------------------------------------

def test_fp_entries_are_reduced():
    F5 = prime_field(5)
    m = Matrix.from_rows(F5, [[7, -1], [10, 3]])
    assert m.rows() == [[2, 4], [0, 3]]
    assert (m @ m).rows() == [[(2 * 2 + 4 * 0) % 5, (2 * 4 + 4 * 3) % 5], [0, 9 % 5]]


def test_non_prime_field_rejected():
    with pytest.raises(ValueError):
        prime_field(4)


def test_matrix_json_roundtrip():
    m = Matrix.from_rows(Q, [[Fraction(3, 7), -2], [0, Fraction(-1, 2)]])
    blob = m.to_json()
    assert blob["entries"] == ["3/7", "-2", "0", "-1/2"]
    assert Matrix.from_json(Q, json.loads(json.dumps(blob))) == m


def test_fraction_literal_outside_q_rejected():
    with pytest.raises(ValueError):
        Matrix.from_json(Z, {"rows": 1, "cols": 1, "entries": ["1/2"]})


def test_empty_shapes():
    a = Matrix.zeros(Q, 0, 3)
    b = Matrix.zeros(Q, 3, 0)
    assert (b @ a).shape == (3, 3)
    assert (a @ b).shape == (0, 0)
    assert a.T.shape == (3, 0)


# --- Smith normal form ----------------------------------------------------

def test_snf_diag_2_3():
    A = Matrix.diag(Z, [2, 3])
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert D == Matrix.diag(Z, [1, 6])
    assert abs(det(U)) == 1 and abs(det(V)) == 1


def test_snf_identity_and_zero():
    I = Matrix.identity(Z, 3)
    assert smith_normal_form(I)[1] == I
    O = Matrix.zeros(Z, 2, 3)
    assert smith_normal_form(O)[1] == O


def test_snf_over_field_unsupported():
    with pytest.raises(RingUnsupported):
        smith_normal_form(Matrix.identity(Q, 2))


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_snf_properties(m, n, data):
    rows = [[data.draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(m)]
    A = Matrix(Z, m, n, rows)
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[k, k] for k in range(min(m, n))]
    assert all(D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    if m and n:
        from sympy.matrices.normalforms import invariant_factors as sym_if
        expected = [abs(int(x)) for x in sym_if(sympy.Matrix(rows), domain=sympy.ZZ) if x]
        assert invariant_factors(A) == expected


# --- linear systems -------------------------------------------------------

@given(st.sampled_from(RINGS), st.integers(1, 4), st.integers(1, 4), st.data())
def test_solve_system_or_certificate(ring, m, n, data):
    rows = [[ring.coerce(data.draw(st.integers(-4, 4))) for _ in range(n)] for _ in range(m)]
    b = [ring.coerce(data.draw(st.integers(-4, 4))) for _ in range(m)]
    z, cert = solve_system(ring, rows, m, n, b)
    if z is not None:
        lhs = [ring.coerce(sum(rows[i][j] * z[j] for j in range(n))) for i in range(m)]
        assert lhs == b
    else:
        assert check_infeasible(ring, rows, m, n, b, cert)


def test_integer_divisibility_certificate():
    z, cert = solve_system(Z, [[2]], 1, 1, [1])
    assert z is None and cert.y == [Fraction(1, 2)]


# --- modules --------------------------------------------------------------

def test_ill_defined_morphism_raises():
    with pytest.raises(NotWellDefined):
        BaseMorphism.from_rows(BaseObject(Z, [2]), BaseObject(Z, [0]), [[1]])
    with pytest.raises(NotWellDefined):
        BaseMorphism.from_rows(BaseObject(Z, [2]), BaseObject(Z, [4]), [[1]])
    BaseMorphism.from_rows(BaseObject(Z, [2]), BaseObject(Z, [4]), [[2]])


def test_kernel_of_row_vector_over_q():
    f = BaseMorphism.from_rows(BaseObject.free(Q, 2), BaseObject.free(Q, 1), [[1, 1]])
    K, incl = kernel(f)
    assert K.dim == 1
    a, b = incl.matrix[0, 0], incl.matrix[1, 0]
    assert a == -b != 0


def test_kernel_of_zero_map_is_everything():
    X = BaseObject(Z, [4, 0])
    K, incl = kernel(BaseMorphism.zero(X, BaseObject(Z, [3])))
    assert K.invariants() == X.invariants()
    assert cokernel(incl)[0].is_zero()


def test_kernel_times_two_on_z4():
    X = BaseObject(Z, [4])
    K, incl = kernel(BaseMorphism.from_rows(X, X, [[2]]))
    # preimage of 0 under x -> 2x on Z/4 is {0, 2}
    brute = {x for x in range(4) if (2 * x) % 4 == 0}
    assert K.orders == (2,)
    assert {(k * incl.matrix[0, 0]) % 4 for k in range(2)} == brute


def test_cokernel_diag_2_3():
    Y = BaseObject.free(Z, 2)
    Qo, _ = cokernel(BaseMorphism.from_rows(Y, Y, [[2, 0], [0, 3]]))
    assert Qo.orders == (6,)


def test_cokernel_identity_and_zero():
    Y = BaseObject(Z, [2, 0])
    assert cokernel(BaseMorphism.identity(Y))[0].is_zero()
    Qo, _ = cokernel(BaseMorphism.zero(BaseObject(Z, [3]), Y))
    assert Qo.invariants() == Y.invariants()


def test_hom_module_orders():
    H, gens = hom_module(BaseObject(Z, [4, 0]), BaseObject(Z, [6, 0]))
    # Hom(Z/4, Z/6) = Z/2, Hom(Z, Z/6) = Z/6, Hom(Z/4, Z) = 0, Hom(Z, Z) = Z
    assert sorted(H.orders) == [0, 2, 6]
    assert len(gens) == 3


def _random_pair(ring, data):
    X = data.draw(objects(ring))
    Y = data.draw(objects(ring))
    return data.draw(morphisms(X, Y))


@given(st.sampled_from(RINGS), st.data())
def test_kernel_universal(ring, data):
    f = _random_pair(ring, data)
    K, incl = kernel(f)
    assert (f @ incl).is_zero()
    # any test map killed by f factors through the kernel
    T = data.draw(objects(ring))
    t = incl @ data.draw(morphisms(T, K))
    assert (f @ t).is_zero()
    assert solve_lift(incl, t).certified


@given(st.sampled_from(RINGS), st.data())
def test_cokernel_kills_image(ring, data):
    f = _random_pair(ring, data)
    Qo, proj = cokernel(f)
    assert (proj @ f).is_zero()
    # proj is onto
    assert cokernel(proj)[0].is_zero()


@given(st.sampled_from([Q, F2, prime_field(3)]), st.data())
def test_rank_nullity(ring, data):
    f = _random_pair(ring, data)
    K, _ = kernel(f)
    Qo, _ = cokernel(f)
    rank = f.source.dim - K.dim
    assert Qo.dim == f.target.dim - rank


# --- lifting and homotopy solvers ----------------------------------------

def test_lift_identity_along_identity():
    X = BaseObject(Z, [3, 0])
    f = BaseMorphism.from_rows(X, X, [[2, 1], [0, 5]])
    v = solve_lift(BaseMorphism.identity(X), f)
    assert v.certified and v.witness["h"] == f


def test_lift_zp2_to_zp_refuted():
    for p in (2, 3, 5):
        E, P = BaseObject(Z, [p * p]), BaseObject(Z, [p])
        v = solve_lift(BaseMorphism.from_rows(E, P, [[1]]), BaseMorphism.identity(P))
        assert v.refuted
        ok, _ = replay(v.certificate.to_json())
        assert ok


def test_lift_along_surjection_over_q():
    rng = random.Random(3)
    E, P, X = BaseObject.free(Q, 4), BaseObject.free(Q, 2), BaseObject.free(Q, 3)
    p = BaseMorphism.from_rows(E, P, [[1, 0, 2, 1], [0, 1, -1, 3]])
    f = BaseMorphism.from_rows(X, P, [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)]
                                      for _ in range(2)])
    v = solve_lift(p, f)
    assert v.certified and p @ v.witness["h"] == f


def test_extend_along_injection():
    K, E = BaseObject(Z, [2]), BaseObject(Z, [4])
    i = BaseMorphism.from_rows(K, E, [[2]])
    # the identity of Z/2 does not extend along Z/2 -> Z/4
    assert solve_extend(i, BaseMorphism.identity(K)).refuted


def _q_line():
    return BaseObject.free(Q, 1)


def test_homotopy_identity_of_contractible():
    V = _q_line()
    I, O = BaseMorphism.identity(V), BaseMorphism.zero(V, V)
    v = solve_graded_homotopy((I, O), (I, O), (I, I))
    assert v.certified
    h0, h1 = v.witness["h0"], v.witness["h1"]
    assert O @ h0 + h1 @ I == I
    assert I @ h1 + h0 @ O == I


def test_homotopy_identity_of_point_refuted():
    V, Z0 = _q_line(), BaseObject.zero(Q)
    a, b = BaseMorphism.zero(V, Z0), BaseMorphism.zero(Z0, V)
    v = solve_graded_homotopy((a, b), (a, b), (BaseMorphism.identity(V), BaseMorphism.identity(Z0)))
    assert v.refuted


def test_homotopy_odd_degree_rejected():
    V = _q_line()
    I = BaseMorphism.identity(V)
    with pytest.raises(ShapeMismatch):
        solve_graded_homotopy((I, I), (I, I), (I, I), degree_of_f=1)


@given(st.sampled_from(RINGS), st.data())
def test_boundary_is_nullhomotopic(ring, data):
    # any C with d = 0 and D with d = 0; f = dD g + g dC for random g
    C0, C1 = data.draw(objects(ring, 2)), data.draw(objects(ring, 2))
    D0, D1 = data.draw(objects(ring, 2)), data.draw(objects(ring, 2))
    dC = (data.draw(morphisms(C0, C1)), BaseMorphism.zero(C1, C0))
    dD = (BaseMorphism.zero(D0, D1), data.draw(morphisms(D1, D0)))
    g0, g1 = data.draw(morphisms(C0, D1)), data.draw(morphisms(C1, D0))
    f0 = dD[1] @ g0 + g1 @ dC[0]
    f1 = dD[0] @ g1 + g0 @ dC[1]
    v = solve_graded_homotopy(dC, dD, (f0, f1))
    assert v.certified
    h0, h1 = v.witness["h0"], v.witness["h1"]
    assert dD[1] @ h0 + h1 @ dC[0] == f0
    assert dD[0] @ h1 + h0 @ dC[1] == f1
    assert replay(json.loads(json.dumps(v.certificate.to_json())))[0]


# --- brute-force oracle ---------------------------------------------------

@given(st.data())
def test_f2_lift_matches_enumeration(data):
    X, E, P = (data.draw(objects(F2, 2)) for _ in range(3))
    p = data.draw(morphisms(E, P))
    f = data.draw(morphisms(X, P))
    prob = _lift_problem(p, f)
    count, _ = brute_force(prob)
    assert count == solution_count(prob)
    assert (count > 0) == solve_lift(p, f).certified


@given(st.data())
def test_torsion_solution_module_size(data):
    X, E, P = (data.draw(objects(Z, 2, torsion=(2, 3, 4))) for _ in range(3))
    p = data.draw(morphisms(E, P))
    f = data.draw(morphisms(X, P))
    prob = _lift_problem(p, f)
    count, _ = brute_force(prob)
    sol, y = prob.solve()
    if sol is None:
        assert count == 0 and prob.check_refutation(y)
    else:
        M, _ = prob.homogeneous_module()
        size = 1
        for o in M.orders:
            size *= o
        assert size == count


def test_enumerate_maps_counts():
    assert len(list(enumerate_maps(BaseObject(Z, [4]), BaseObject(Z, [6])))) == 2
    assert len(list(enumerate_maps(BaseObject.free(F2, 2), BaseObject.free(F2, 2)))) == 16


def test_problem_json_roundtrip():
    X = BaseObject(Z, [4, 0])
    prob = LinearProblem(Z)
    prob.unknown(X, X, "h")
    prob.equation(X, X, [(2, None, 0, None)], BaseMorphism.from_rows(X, X, [[2, 0], [0, 4]]), "2h = f")
    again = LinearProblem.from_json(json.loads(json.dumps(prob.to_json())))
    assert again.system()[:4] == prob.system()[:4]


def test_direct_sum_orders():
    assert direct_sum(BaseObject(Z, [2]), BaseObject(Z, [0, 3])).orders == (2, 0, 3)
