from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mae_orbits import classifier as cl
from mae_orbits import linalg as la
from mae_orbits import symplectic as sp
from mae_orbits.errors import AmbiguityError, InvalidParametersError, ValidationError

seeds = st.integers(0, 10_000)
NONZERO = [lab for lab in cl.LABELS if lab != "zero"]


def q(expr):
    return sp.quad_from_polynomial(expr)


def ad_rank_oracle(Q):
    """dim of the orbit: rank of Z -> [Z, X] on sp(6), via numpy on vec(Z)."""
    X = la.to_float(sp.phi_inv(Q))
    ad = np.kron(X.T, np.eye(6)) - np.kron(np.eye(6), X)
    B = np.array([la.to_float(Z).ravel(order="F") for Z in sp.sp_basis()]).T
    return int(np.linalg.matrix_rank(ad @ B, tol=1e-9))


def test_table_shape():
    assert len(NONZERO) == 23
    dims = Counter(cl.TABLE[lab][3] for lab in NONZERO)
    assert set(dims) == {18, 16, 14, 12, 10, 6}
    assert dims[18] == 7 and dims[6] == 1
    assert cl.TABLE["zero"][3] == 0


def test_signature_fixture_regenerates():
    assert cl.regenerate_signatures() == cl.SIGNATURES
    assert len(set(cl.SIGNATURES.values())) == len(cl.LABELS)


@pytest.mark.parametrize("label", cl.LABELS)
def test_row_round_trip_and_dimension(label):
    p = cl.default_params(label)
    Q = cl.normal_form_rep(label, p)
    nf = cl.classify_quadric(Q)
    assert nf.label == label
    assert nf.params == cl.canonical_params(label, p)
    assert cl.orbit_dimension(Q) == cl.TABLE[label][3] == ad_rank_oracle(Q)


@pytest.mark.parametrize("label", NONZERO)
def test_rows_are_conjugation_invariant(label):
    Q = cl.normal_form_rep(label, cl.default_params(label))
    want = cl.classify_quadric(Q)
    for s in range(2):
        g = sp.random_sp(1000 + s)
        assert cl.classify_quadric(sp.act_on_quad(g, Q)) == want


@given(seeds)
def test_float_path_agrees_after_conjugation(seed):
    g = sp.random_sp(seed, bound=1)
    for label in ("q[4,2]", "q(21)+X[h1-h2]", "q(111)", "q[2,1^4]", "q(1)-1/2X[h1+h2]"):
        Q = cl.normal_form_rep(label, cl.default_params(label))
        got = cl.classify_quadric(la.to_float(sp.act_on_quad(g, Q)), la.TolPolicy(1e-9, 1e-7))
        assert got.label == label


def test_spectral_data_examples():
    jd = cl.spectral_data(cl.normal_form_rep("q[6]"))
    assert [(ev, list(p)) for ev, p in jd.clusters] == [(la.ZERO, [6])]
    Q = cl.normal_form_rep("q(111)", tuple(la.qq(v) for v in (1, 2, 3)))
    jd = cl.spectral_data(Q)
    assert sorted(la.to_complex(ev).real for ev, _ in jd.clusters) == [-3, -2, -1, 1, 2, 3]
    assert jd.paired
    jd = cl.spectral_data(q("e1**2"))
    assert [(ev, list(p)) for ev, p in jd.clusters] == [(la.ZERO, [2, 1, 1, 1, 1])]


def test_classify_examples():
    nf = cl.classify_quadric(q("eps1*e2 + eps2*e3 + e3**2"))
    assert cl.classify_quadric(cl.normal_form_rep("q[6]")).label == "q[6]"
    assert nf.label in cl.LABELS
    nf = cl.classify_quadric(q("e1**2"))
    assert (nf.label, nf.dim) == ("q[2,1^4]", 6)
    Q = sp.quad_from_table_notation("(eps1*e1 + eps2*e2) + 2*eps3*e3 + eps1*e2")
    nf = cl.classify_quadric(Q)
    assert (nf.label, nf.dim) == ("q(21)+X[h1-h2]", 18)
    g = sp.random_sp(17)
    assert cl.classify_quadric(sp.act_on_quad(g, cl.normal_form_rep("q[4,2]"))).label == "q[4,2]"
    assert cl.classify_quadric(la.zeros((6, 6))).label == "zero"


def test_table_expression_of_q6():
    # eps1 e2 + eps2 e3 + e3^2 in the table notation is the q[6] representative
    assert (sp.quad_from_table_notation("eps1*e2 + eps2*e3 + e3**2")
            == cl.normal_form_rep("q[6]")).all()


def test_normal_form_rep_examples():
    assert (cl.normal_form_rep("q[2^3]") == q("e1**2 + e2**2 + e3**2")).all()
    assert (cl.normal_form_rep("q(2)", (la.ONE,))
            == sp.quad_from_table_notation("eps2*e2 + eps3*e3")).all()
    with pytest.raises(InvalidParametersError):
        cl.normal_form_rep("q(111)", tuple(la.qq(v) for v in (1, 1, 2)))
    with pytest.raises(InvalidParametersError):
        cl.normal_form_rep("q(11)", (la.qq(0), la.qq(2)))
    with pytest.raises(InvalidParametersError):
        cl.normal_form_rep("q(2)", ())
    with pytest.raises(ValidationError):
        cl.normal_form_rep("q(7)", ())


def test_orbit_dimension_examples():
    assert cl.orbit_dimension(cl.normal_form_rep("q[6]")) == 18
    assert cl.orbit_dimension(q("e1**2")) == 6
    assert cl.orbit_dimension(la.zeros((6, 6))) == 0


def test_weyl_canonicalize_examples():
    assert cl.weyl_canonicalize([la.qq(-1), la.qq(3), la.qq(2)]) == (la.qq(3), la.qq(2), la.ONE)
    i = la.I_UNIT
    assert cl.weyl_canonicalize([i, -i, la.ZERO]) == (i, i, la.ZERO)
    assert cl.weyl_canonicalize([la.ZERO] * 3) == (la.ZERO,) * 3


@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3), st.permutations(range(3)),
       st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3))
def test_weyl_canonicalize_is_invariant(vals, perm, signs):
    p = [la.qq(v) for v in vals]
    moved = [p[k] * la.qq(s) for k, s in zip(perm, signs)]
    assert cl.weyl_canonicalize(p) == cl.weyl_canonicalize(moved)


def test_q111_params_are_canonical():
    Q = cl.normal_form_rep("q(111)", tuple(la.qq(v) for v in (1, -2, 3)))
    assert cl.classify_quadric(Q).params == (la.qq(3), la.qq(2), la.ONE)


def test_q21_keeps_parameter_roles():
    Q = cl.normal_form_rep("q(21)", (la.qq(-1), la.qq(4)))
    assert cl.classify_quadric(Q).params == (la.ONE, la.qq(4))


def test_kernel_partitions_are_symplectic():
    for label in cl.LABELS:
        Q = cl.normal_form_rep(label, cl.default_params(label))
        for ev, part in cl.spectral_data(Q).clusters:
            if ev == la.ZERO:
                odd = Counter(p for p in part if p % 2)
                assert all(m % 2 == 0 for m in odd.values()), label


def test_asymmetric_and_unpaired_inputs():
    A = la.zeros((6, 6))
    A[0, 1] = la.ONE
    with pytest.raises(ValidationError):
        cl.classify_quadric(A)


def test_eigenvalue_wall_is_ambiguous_on_the_float_path():
    tol = la.TolPolicy(1e-10, 1e-7)
    near = cl.normal_form_rep("q(111)", (1.0, 1.0 + 1e-6, 3.0))
    with pytest.raises(AmbiguityError) as exc:
        cl.classify_quadric(near, tol)
    assert exc.value.candidates
    assert cl.classify_quadric(cl.normal_form_rep("q(111)", (1.0, 1.001, 3.0)), tol).label == "q(111)"
    assert cl.classify_quadric(cl.normal_form_rep("q(111)", (1.0, 1.0 + 1e-12, 3.0)),
                               tol).label == "q(21)"
