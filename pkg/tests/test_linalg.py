import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mae_orbits import linalg as la
from mae_orbits.errors import NoSolutionError

ints = st.integers(-6, 6)


def int_matrix(n, m=None):
    m = m or n
    return st.lists(st.lists(ints, min_size=m, max_size=m), min_size=n, max_size=n)


def to_sympy(M):
    return sympy.Matrix(M.shape[0], M.shape[1],
                        lambda i, j: sympy.nsimplify(la.to_complex(M[i, j]).real))


def exact(rows):
    return la.as_matrix(np.array(rows), exact=True)


def test_exact_scalars_are_closed_under_field_operations():
    a = la.qq(la.Fraction(2, 3)) + la.qq(1) * la.I_UNIT
    b = la.qq(la.Fraction(-5, 7))
    for v in (a + b, a - b, a * b, a / b):
        assert la.is_exact_scalar(v)
    assert (a / b) * b == a


def test_tolerance_threshold_scales():
    tol = la.TolPolicy(1e-10, 1e-6)
    assert tol.threshold(1.0) == 1e-6
    assert tol.threshold(1e-8) == 1e-10
    with pytest.raises(ValueError):
        la.TolPolicy(0, 1e-6)


def test_adjugate_examples():
    assert (la.adjugate(la.eye(3)) == la.eye(3)).all()
    D = exact([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert (la.adjugate(D) == exact([[6, 0, 0], [0, 3, 0], [0, 0, 2]])).all()
    v = exact([[1], [-2], [3]])
    assert not any(la.adjugate(v @ v.T).flat)


@given(int_matrix(3))
def test_adjugate_and_det_match_sympy(rows):
    M = exact(rows)
    S = sympy.Matrix(rows)
    assert to_sympy(la.adjugate(M)) == S.adjugate()
    assert la.det(M) == la.qq(int(S.det()))


@given(int_matrix(4))
def test_adjugate_4x4_matches_sympy(rows):
    assert to_sympy(la.adjugate(exact(rows))) == sympy.Matrix(rows).adjugate()


def test_adjugate_float_against_inverse(rng):
    for _ in range(10):
        M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.allclose(la.adjugate(M), np.linalg.det(M) * np.linalg.inv(M))


def test_rank_examples():
    assert la.rank(la.zeros((3, 3))) == 0
    assert la.rank(exact([[1, 0, 0], [0, 1, 0], [0, 0, 0]])) == 2
    v = exact([[2], [1], [-1]])
    assert la.rank(v @ v.T) == 1
    assert la.rank(la.to_float(v @ v.T)) == 1


@given(int_matrix(4, 5))
def test_rank_matches_sympy_on_both_paths(rows):
    r = sympy.Matrix(rows).rank()
    assert la.rank(exact(rows)) == r
    assert la.rank(np.array(rows, dtype=complex)) == r


@given(int_matrix(3, 5))
def test_nullspace_is_kernel(rows):
    M = exact(rows)
    N = la.nullspace(M)
    assert N.shape[1] == 5 - sympy.Matrix(rows).rank()
    assert not any((M @ N).flat)


def test_charpoly_highest_degree_first():
    M = exact([[2, 1], [0, 3]])
    assert la.charpoly(M) == [la.qq(1), la.qq(-5), la.qq(6)]
    F = np.array([[2, 1], [0, 3]], dtype=complex)
    assert np.allclose(la.charpoly(F), [1, -5, 6])


def test_solve_linear_examples(rng):
    b = exact([[1], [2], [3]])
    assert (la.solve_linear(la.eye(3), b) == b).all()
    x = la.solve_linear(exact([[2, 0], [0, 4]]), exact([[2], [4]]))
    assert (x == exact([[1], [1]])).all()
    A = rng.normal(size=(6, 6))
    x0 = rng.normal(size=(6, 1))
    assert np.allclose(la.solve_linear(A, A @ x0), x0)
    with pytest.raises(NoSolutionError):
        la.solve_linear(exact([[1, 0], [0, 0]]), exact([[1], [1]]))


def nilpotent_42():
    N = la.zeros((6, 6))
    for i, j in [(0, 1), (1, 2), (2, 3), (4, 5)]:
        N[i, j] = la.ONE
    return N


def test_jordan_nilpotent_rank_chain():
    N = nilpotent_42()
    for k in range(1, 5):
        assert la.rank(la.mat_pow(N, k)) == 6 - k - min(k, 2)
    assert [(ev, list(p)) for ev, p in la.jordan_data(N)] == [(la.ZERO, [4, 2])]
    (ev, p), = la.jordan_data(la.to_float(N))
    assert abs(ev) < 1e-12 and list(p) == [4, 2]


def test_jordan_simple_and_identity():
    D = la.as_matrix(np.diag([1, 2, 3, -1, -2, -3]), exact=True)
    data = la.jordan_data(D)
    assert sorted(la.to_complex(ev).real for ev, _ in data) == [-3, -2, -1, 1, 2, 3]
    assert all(list(p) == [1] for _, p in data)
    assert [(ev, list(p)) for ev, p in la.jordan_data(la.eye(6))] == [(la.ONE, [1] * 6)]


def test_jordan_float_matches_exact_after_similarity(rng):
    N = nilpotent_42() + la.eye(6) * la.qq(2)
    P = la.as_matrix(rng.integers(-2, 3, size=(6, 6)), exact=True)
    while la.rank(P) < 6:
        P = la.as_matrix(rng.integers(-2, 3, size=(6, 6)), exact=True)
    Pinv = la._from_dm(la._dm(P).inv())
    M = P @ N @ Pinv
    assert [(ev, list(p)) for ev, p in la.jordan_data(M)] == [(la.qq(2), [4, 2])]
    (ev, p), = la.jordan_data(la.to_float(M), la.TolPolicy(1e-8, 1e-6))
    assert abs(ev - 2) < 1e-6 and list(p) == [4, 2]
