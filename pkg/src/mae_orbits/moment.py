"""Quadratic invariants of effective three-forms and their orbit types.

klr          double contraction with the inverse symplectic form
moment_map   the same quadric obtained from the Hamiltonian pairing, by a
             21x21 linear solve that never calls klr
quartic_f    the degree-4 invariant whose zero set is the dual variety of LG(3,6)
classify_3form
             O / L / G / P (open, linearizable, Goursat, parabolic)

Quadratic forms are returned as honest symmetric matrices on C (see
``symplectic``).  For g symplectic, klr(g . eta) = act_on_quad(g^-1, klr(eta)).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import forms as fm
from . import linalg as la
from . import symplectic as sp
from .errors import ClassificationConflictError, DegenerateInputError

ORBIT_DIMENSIONS = {"O": 13, "L": 12, "G": 9, "P": 6}
KLR_RANKS = {"O": 6, "L": 3, "G": 1, "P": 0}


@dataclass(frozen=True)
class OrbitClass3Form:
    label: str

    @property
    def dimension(self):
        return ORBIT_DIMENSIONS[self.label]


def _as_eff(eta):
    if isinstance(eta, fm.EffForm):
        return eta
    return fm.from20(eta)


def _signed_perm(W):
    """(perm, signs) with W[perm[j], j] = signs[j] for a signed permutation W."""
    K = np.kron(W, W)
    perm = [int(np.flatnonzero(K[:, j])[0]) for j in range(K.shape[1])]
    return perm, [K[perm[j], j] for j in range(K.shape[1])]


_KLR_KERNEL = {side: _signed_perm(sp.GRAM if side == "vector" else sp.OMEGA_INV)
               for side in ("vector", "covector")}


def klr(eta):
    """q_ab = eta_aij eta_bhk w^ih w^jk on the side the form declares."""
    eta = _as_eff(eta)
    T = fm.to_tensor(eta.to20())
    exact = la.is_exact(T)
    perm, signs = _KLR_KERNEL[eta.side]
    Tm = T.reshape(6, 36)
    # kron(W, W) is a signed permutation, so Tm @ kron(W, W) is a gather
    signs = np.array(signs, dtype=object) if exact else la.to_float(np.array(signs, dtype=object))
    q = (Tm[:, perm] * signs) @ Tm.T
    if eta.side == "vector":
        # q is a tensor in S^2(C); move it to a form on C with omega
        G = sp.gram_like(q)
        q = G @ q @ G.T
    return q


def lie_action20(X, tau):
    """Derivation action of an algebra element on a three-vector."""
    X, tau = la.common_mode(X, fm.as_form20(tau))
    T = fm.to_tensor(tau)
    out = []
    for i, j, k in fm.TRIPLES:
        a, b, c = i - 1, j - 1, k - 1
        out.append(X[a, :] @ T[:, b, c] + X[b, :] @ T[a, :, c] + X[c, :] @ T[a, b, :])
    return np.array(out, dtype=object if la.is_exact(tau) else complex)


def _moment_system(exact):
    basis = sp.sp_basis()
    iu = list(zip(*np.triu_indices(6)))
    W = sp.OMEGA_INV if exact else la.to_float(sp.OMEGA_INV)
    A = la.zeros((21, 21), exact)
    two = la.qq(2) if exact else 2.0
    for k, X in enumerate(basis):
        P = (X if exact else la.to_float(X)) @ W
        for col, (a, b) in enumerate(iu):
            A[k, col] = P[a, a] if a == b else P[a, b] * two
    # the system is fixed, so it is inverted once
    Ainv = la._from_dm(la._dm(A).inv()) if exact else np.linalg.inv(A)
    return basis, iu, Ainv


_SYSTEM = {True: _moment_system(True), False: _moment_system(False)}


@lru_cache(maxsize=2)
def _pairing_forms(exact):
    """Sparse 20x20 matrices P_k with 1/2 Omega(X_k . tau, tau) = tau^T P_k tau."""
    basis = sp.sp_basis()
    Om = fm.omega_matrix(True)
    eye20 = la.eye(20, True)
    half = la.qq(la.Fraction(1, 2))
    out = []
    for X in basis:
        D = np.array([lie_action20(X, eye20[:, j]) for j in range(20)], dtype=object).T
        P = (D.T @ Om) * half
        entries = [(i, j, P[i, j]) for i in range(20) for j in range(20) if P[i, j]]
        out.append(entries if exact else [(i, j, la.to_complex(v)) for i, j, v in entries])
    return out


def moment_map(eta):
    """Solve tr(s X_k w^-1) = 1/2 Omega(X_k . eta, eta) over the 21 basis elements.

    The pairing tr(s X w^-1) is Sp-invariant, so s is an equivariant quadratic
    form; it is proportional to klr(eta) with one global constant.
    """
    eta = fm.to_vector_side(_as_eff(eta))
    tau = eta.to20()
    exact = la.is_exact(tau)
    basis, iu, Ainv = _SYSTEM[exact]
    zero = la.ZERO if exact else 0j
    rhs = np.array([sum((tau[i] * tau[j] * v for i, j, v in P), zero)
                    for P in _pairing_forms(exact)], dtype=object if exact else complex)
    sol = Ainv @ rhs
    s = la.zeros((6, 6), exact)
    for val, (a, b) in zip(sol, iu):
        s[a, b] = val
        s[b, a] = val
    return s


def projective_residual(A, B):
    """sqrt(1 - |<A,B>|^2 / (|A|^2 |B|^2)): zero iff A, B are proportional.

    Two zero matrices count as proportional; exactly one zero gives 1.
    """
    A, B = la.as_matrix(A), la.as_matrix(B)
    if la.is_exact(A) and la.is_exact(B):
        a, b = A.ravel(), B.ravel()
        na = sum(la.abs2(x) for x in a)
        nb = sum(la.abs2(x) for x in b)
        if na == 0 or nb == 0:
            return 0.0 if na == nb else 1.0
        ip = sum((la.QQ_I(x.x, -x.y) * y for x, y in zip(a, b)), la.ZERO)
        return float(np.sqrt(float(1 - la.abs2(ip) / (na * nb))))
    a = la.to_float(A).ravel()
    b = la.to_float(B).ravel()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 and nb == 0:
        return 0.0
    if na == 0 or nb == 0:
        return 1.0
    a, b = a / na, b / nb
    # distance from a to its projection on b: no cancellation near 0
    return float(np.linalg.norm(a - b * np.vdot(b, a)))


def proportionality_constant(A, B):
    """c with A = c B (least squares), or None if B vanishes."""
    a = la.to_float(A).ravel()
    b = la.to_float(B).ravel()
    nb = np.vdot(b, b)
    if nb == 0:
        return None
    return complex(np.vdot(b, a) / nb)


# ---------------------------------------------------------------------------
# the quartic


def _parts(eta):
    eta = fm.to_vector_side(_as_eff(eta))
    return eta.p123, eta.X, eta.Y, eta.p456, eta.exact


def quartic_f(eta):
    """(a b - tr XY)^2 + 4 a det Y + 4 b det X - 4 sum_ij det X_ij det Y_ij."""
    a, X, Y, b, exact = _parts(eta)
    t = a * b - np.trace(X @ Y)
    four = la.qq(4) if exact else 4.0
    minors = np.trace(la.adjugate(X) @ la.adjugate(Y).T)
    return t * t + four * a * la.det(Y) + four * b * la.det(X) - four * minors


def grad_f(eta):
    """Gradient of quartic_f in the 14 coordinates of ``EffForm.coords14``."""
    a, X, Y, b, exact = _parts(eta)
    two = la.qq(2) if exact else 2.0
    four = la.qq(4) if exact else 4.0
    t = a * b - np.trace(X @ Y)
    adjX, adjY = la.adjugate(X), la.adjugate(Y)
    ga = two * t * b + four * la.det(Y)
    gb = two * t * a + four * la.det(X)
    GX = Y * (-two * t) + adjX * (four * b) - la.adj_trace_gradient(X, adjY) * four
    GY = X * (-two * t) + adjY * (four * a) - la.adj_trace_gradient(Y, adjX) * four
    out = [ga]
    for G in (GX, GY):
        for r, c in zip(*np.triu_indices(3)):
            out.append(G[r, c] if r == c else G[r, c] + G[c, r])
    out.append(gb)
    return np.array(out, dtype=object if exact else complex)


# ---------------------------------------------------------------------------
# classification


def _scale(eta):
    return max(abs(la.to_complex(v)) for v in eta.coords14())


def _negligible(value, eta, power, tol):
    if la.is_exact(np.asarray(value, dtype=object)) and all(
            isinstance(v, la.GaussianRational) for v in np.ravel(np.asarray(value, dtype=object))):
        return not any(np.ravel(np.asarray(value, dtype=object)))
    mag = float(np.max(np.abs(la.to_float(np.atleast_1d(np.asarray(value))))))
    return mag <= tol.threshold(1.0) * _scale(eta) ** power


def classify_3form(eta, tol=la.DEFAULT_TOL):
    """O, L, G or P, cross-checked against the rank of klr (6, 3, 1, 0)."""
    eta = _as_eff(eta)
    s = _scale(eta)
    if s == 0 or (not eta.exact and s <= tol.abs_tol):
        raise DegenerateInputError("the zero form has no orbit type")
    q = klr(eta)
    if _negligible(q, eta, 2, tol):
        label = "P"
    elif not _negligible(quartic_f(eta), eta, 4, tol):
        label = "O"
    elif not _negligible(grad_f(eta), eta, 3, tol):
        label = "L"
    else:
        label = "G"
    if la.is_exact(q):
        r = la.rank(q)
    else:
        r = la.rank(q, la.TolPolicy(tol.abs_tol * max(s * s, 1.0), tol.rel_tol))
        if label == "P":
            r = 0
    if r != KLR_RANKS[label]:
        raise ClassificationConflictError(
            f"quartic test gives {label} but klr has rank {r} (expected {KLR_RANKS[label]})")
    return OrbitClass3Form(label)


# representatives of the four orbits (vector side)
REPRESENTATIVES = {
    "O": {"123": 1, "456": 1},
    "L": {"423": 1, "126": 1, "153": 1, "123": 1},
    "G": {"163": 1, "125": 1},
    "P": {"123": 1},
}


def representative(label):
    return fm.eff_from_triples(REPRESENTATIVES[label])
