import itertools

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from mae_orbits import forms as fm
from mae_orbits import linalg as la
from mae_orbits import symplectic as sp

seeds = st.integers(0, 10_000)
vec20 = st.lists(st.integers(-4, 4), min_size=20, max_size=20)


def basis20(*triples):
    return fm.form20({t: 1 for t in triples})


def levi_civita_wedge(u, v, w):
    """Oracle: antisymmetrize u (x) v (x) w by brute force over S3."""
    T = np.zeros((6, 6, 6), dtype=complex)
    for perm in itertools.permutations(range(3)):
        s = fm.perm_sign(perm)
        vecs = [np.asarray(la.to_float(x)) for x in (u, v, w)]
        T += s * np.einsum("i,j,k->ijk", *[vecs[p] for p in perm])
    return np.array([T[i - 1, j - 1, k - 1] for i, j, k in fm.TRIPLES])


@given(st.lists(st.integers(-5, 5), min_size=18, max_size=18))
def test_wedge3_matches_brute_force(entries):
    u, v, w = (la.as_matrix(np.array(entries[6 * k:6 * k + 6]), exact=True) for k in range(3))
    assert np.allclose(la.to_float(fm.wedge3(u, v, w)), levi_civita_wedge(u, v, w))


def test_omega_pair_examples():
    assert fm.omega_pair(basis20("123"), basis20("456")) == la.ONE
    assert fm.omega_pair(basis20("124"), basis20("356")) == -la.ONE


@given(vec20, vec20)
def test_omega_pair_is_antisymmetric(a, b):
    a = la.as_matrix(np.array(a), exact=True)
    b = la.as_matrix(np.array(b), exact=True)
    assert fm.omega_pair(a, a) == la.ZERO
    assert fm.omega_pair(a, b) == -fm.omega_pair(b, a)


def e(i):
    v = la.zeros(6)
    v[i - 1] = la.ONE
    return v


def test_insert_omega_examples():
    W = fm.omega_inv_bivector()
    assert (fm.insert_omega(fm.wedge_vec_bivector(e(1), W)) == e(1)).all()
    assert (fm.insert_omega(fm.wedge_vec_bivector(e(4), W)) == e(4)).all()
    assert not any(fm.insert_omega(basis20("123")))


def test_effective_project_examples():
    W = fm.omega_inv_bivector()
    assert (fm.effective_project(basis20("123")).to20() == basis20("123")).all()
    assert not any(fm.effective_project(fm.wedge_vec_bivector(e(1), W)).to20())


def test_effective_space_has_dimension_14():
    basis = fm.effective_basis()
    assert len(basis) == 14
    stacked = np.array([b.to20() for b in basis], dtype=object)
    assert la.rank(stacked) == 14
    assert all(not any(fm.insert_omega(b.to20())) for b in basis)


@given(vec20, seeds)
def test_projection_idempotent_and_equivariant(tau, seed):
    tau = la.as_matrix(np.array(tau), exact=True)
    p = fm.effective_project(tau).to20()
    assert (fm.effective_project(p).to20() == p).all()
    assert not any(fm.insert_omega(p))
    g = sp.random_sp(seed)
    assert (fm.effective_project(fm.sp_act20(g, tau)).to20() == fm.sp_act20(g, p)).all()


@given(vec20, vec20, seeds)
def test_action_preserves_omega_pair(a, b, seed):
    a = la.as_matrix(np.array(a), exact=True)
    b = la.as_matrix(np.array(b), exact=True)
    g = sp.random_sp(seed)
    assert fm.omega_pair(fm.sp_act20(g, a), fm.sp_act20(g, b)) == fm.omega_pair(a, b)


def test_action_identity_and_legendre_fixture():
    eta = fm.eff_from_triples({"163": 1, "125": 1})
    assert fm.sp_act_form(la.eye(6), eta) == eta
    minus156 = fm.eff_from_triples({"156": -1}, side="covector")
    moved = fm.sp_act_form(sp.legendre("total"), minus156)
    assert (moved.to20() == fm.eff_from_triples({"423": 1}, side="covector").to20()).all()


def test_duality_examples():
    d = fm.duality(fm.eff_from_triples({"423": 1}))
    assert d.side == "covector"
    assert (d.to20() == fm.eff_from_triples({"156": -1}, side="covector").to20()).all()
    d = fm.duality(fm.eff_from_triples({"123": 1}))
    assert (d.to20() == fm.eff_from_triples({"456": 1}, side="covector").to20()).all()


def test_duality_squares_to_a_single_global_sign():
    signs = set()
    for t in fm.TRIPLES:
        tau = fm.form20({t: 1})
        twice = fm.duality20(fm.duality20(tau))
        signs.add(la.to_complex(twice[fm.TRIPLE_INDEX[t]]).real)
        assert sum(1 for x in twice if x) == 1
    assert signs == {-1.0}
    for b in fm.effective_basis():
        assert fm.duality_inverse(fm.duality(b)) == b


def frame(*cols):
    F = la.zeros((6, 3))
    for j, c in enumerate(cols):
        F[c - 1, j] = la.ONE
    return F


def test_plucker_examples():
    assert (fm.plucker_vol(frame(1, 2, 3)) == basis20("123")).all()
    assert any(fm.insert_omega(fm.plucker_vol(frame(1, 2, 4))))
    assert fm.is_lagrangian(frame(1, 2, 3)) and not fm.is_lagrangian(frame(1, 2, 4))


def test_big_cell_examples():
    zero = la.zeros((3, 3))
    eta = fm.big_cell(zero)
    assert (eta.to20() == basis20("123")).all()
    one = fm.big_cell(la.eye(3))
    assert one.p123 == la.ONE and one.p456 == la.ONE
    assert (one.X == la.eye(3)).all() and (one.Y == la.eye(3)).all()
    D = la.as_matrix(np.diag([1, 2, 3]), exact=True)
    d = fm.big_cell(D)
    assert (d.X == D).all() and (d.Y == la.as_matrix(np.diag([6, 3, 2]), exact=True)).all()
    assert d.p456 == la.qq(6)


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_big_cell_layout_is_one_u_adj_det(entries):
    U = la.zeros((3, 3))
    for (i, j), v in zip(zip(*np.triu_indices(3)), entries):
        U[i, j] = U[j, i] = la.qq(v)
    eta = fm.big_cell(U)
    assert eta.p123 == la.ONE and (eta.X == U).all()
    assert (eta.Y == la.adjugate(U)).all() and eta.p456 == la.det(U)
    assert (eta.to20() == fm.plucker_vol(fm.big_cell_frame(U))).all()
