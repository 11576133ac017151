import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mae_orbits import linalg as la
from mae_orbits import symplectic as sp
from mae_orbits.errors import NotInAlgebraError, ValidationError

seeds = st.integers(0, 10_000)


def test_gram_is_the_standard_form():
    G = sp.GRAM
    for i in range(3):
        assert G[i, i + 3] == la.ONE and G[i + 3, i] == -la.ONE
    assert sum(1 for x in G.flat if x) == 6
    assert (G @ G == -la.eye(6)).all()


def test_is_symplectic_examples():
    assert sp.is_symplectic(la.eye(6))
    assert sp.is_symplectic(sp.legendre("total"))
    D = la.eye(6)
    D[0, 0] = la.qq(2)
    assert not sp.is_symplectic(D)


def test_legendre_matrices():
    L = sp.legendre("total")
    x = la.as_matrix(np.arange(1, 7).reshape(6, 1), exact=True)
    assert [la.to_complex(v).real for v in (L @ x).flat] == [4, 5, 6, -1, -2, -3]
    assert (L == sp.GRAM).all()
    P = sp.legendre({1})
    assert [la.to_complex(v).real for v in (P @ x).flat] == [4, 2, 3, -1, 5, 6]
    assert sp.is_symplectic(P)
    assert (sp.legendre(set()) == la.eye(6)).all()
    with pytest.raises(ValidationError):
        sp.legendre({4})


def test_basis_has_21_independent_elements():
    B = sp.sp_basis()
    assert len(B) == 21 and all(sp.is_sp_algebra(X) for X in B)
    stacked = np.array([X.ravel() for X in B], dtype=object)
    assert la.rank(stacked) == 21


def test_root_vectors():
    assert (sp.root_vector("2h1") == sp.E(1, 4)).all()
    assert (sp.root_vector("h1-h2") == sp.E(1, 2) - sp.E(5, 4)).all()
    assert (sp.root_vector("-2h1") == sp.E(4, 1)).all()


def test_phi_examples():
    H = la.as_matrix(np.diag([1, 2, 3, -1, -2, -3]), exact=True)
    # table notation: lambda eps1 e1 + mu eps2 e2 + nu eps3 e3
    assert (sp.phi(H) == sp.quad_from_table_notation("eps1*e1 + 2*eps2*e2 + 3*eps3*e3")).all()
    Q = sp.phi(-sp.E(1, 4))
    assert (Q == sp.quad_from_polynomial("e1**2")).all()
    assert sum(1 for x in Q.flat if x) == 1
    assert not any(sp.phi(la.zeros((6, 6))).flat)
    with pytest.raises(NotInAlgebraError):
        sp.phi(sp.E(1, 2))


def test_phi_inv_examples():
    assert not any(sp.phi_inv(la.zeros((6, 6))).flat)
    assert (sp.phi_inv(sp.phi(sp.E(1, 4))) == sp.E(1, 4)).all()
    Q = sp.quad_from_table_notation("eps1*e1 + 2*eps2*e2 + 3*eps3*e3")
    assert (sp.phi_inv(Q) == la.as_matrix(np.diag([1, 2, 3, -1, -2, -3]), exact=True)).all()
    with pytest.raises(ValidationError):
        sp.phi_inv(sp.E(1, 2))


def test_table_notation_labels():
    half = la.qq(la.Fraction(1, 2))
    assert (sp.algebra_from_table_notation("e1**2") == -sp.root_vector("2h1")).all()
    assert (sp.algebra_from_table_notation("e1*e2") == -sp.root_vector("h1+h2") * half).all()
    assert (sp.algebra_from_table_notation("eps1*e2") == sp.root_vector("h1-h2")).all()


@given(seeds)
def test_random_sp_is_symplectic(seed):
    g = sp.random_sp(seed)
    assert sp.is_symplectic(g)
    assert (sp.sp_inverse(g) @ g == la.eye(6)).all()
    assert sp.is_symplectic(sp.random_sp(seed, exact=False))


def test_random_sp_forced_identity_and_distinct_seeds():
    Z = la.zeros((3, 3))
    assert (sp.sp_from_factors(la.eye(3), Z, Z) == la.eye(6)).all()
    keys = {tuple(sp.random_sp(s).flat) for s in range(100)}
    assert len(keys) == 100


@given(seeds, st.lists(st.integers(-3, 3), min_size=21, max_size=21))
def test_phi_is_equivariant(seed, coeffs):
    X = sum((B * la.qq(c) for B, c in zip(sp.sp_basis(), coeffs)), la.zeros((6, 6)))
    g = sp.random_sp(seed)
    lhs = sp.phi(sp.conjugate(g, X))
    rhs = sp.act_on_quad(g, sp.phi(X))
    assert (lhs == rhs).all()
    assert (sp.phi_inv(sp.phi(X)) == X).all()


def test_act_on_quad_examples():
    Q = sp.quad_from_polynomial("e1**2 + 3*e2*eps3")
    assert (sp.act_on_quad(la.eye(6), Q) == Q).all()
    g = sp.random_sp(5)
    assert (sp.act_on_quad(sp.sp_inverse(g), sp.act_on_quad(g, Q)) == Q).all()
    # e1^2 lives on the fourth coordinate; the total Legendre map moves it to the first
    L = sp.legendre("total")
    moved = sp.act_on_quad(L, sp.quad_from_polynomial("e1**2"))
    assert moved[0, 0] == la.ONE and sum(1 for x in moved.flat if x) == 1


def test_polynomial_round_trip():
    for expr in ["e1**2", "eps1*e2 + eps2*e3 + e3**2", "2*e1*eps1 - e2**2/3", "0"]:
        Q = sp.quad_from_polynomial(expr)
        assert (sp.quad_from_polynomial(str(sp.polynomial_of_quad(Q))) == Q).all()
