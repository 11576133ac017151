"""The symplectic space C = V + V* of dimension six.

Basis e1, e2, e3, e4 = eps^1, e5 = eps^2, e6 = eps^3 and coordinates x^1..x^6
dual to it.  The symplectic form is

    omega = x^1 ^ x^4 + x^2 ^ x^5 + x^3 ^ x^6,

so its Gram matrix is ``GRAM = [[0, I], [-I, 0]]`` (``GRAM @ GRAM = -I``) and
the inverse bivector ``OMEGA_INV = -GRAM`` reads e41 + e52 + e63.

Conventions fixed once here:

* ``SpElement`` g acts on vectors by v -> g v and on covectors
  contragrediently.
* A ``QuadForm6`` is a symmetric matrix Q in the coordinates x^a, with
  Q(v) = v^T Q v.  The group acts by pull-back, ``act_on_quad(g, Q) = g^T Q g``.
  This is a right action: act(g h, Q) = act(h, act(g, Q)).
* ``phi(X) = GRAM @ X`` is the matrix of Q_X(a, b) = omega(X a, b).  It
  intertwines conjugation with pull-back: phi(g^-1 X g) = act_on_quad(g, phi(X)).
"""

import numpy as np
import sympy

from . import linalg as la
from .errors import DomainError, NotInAlgebraError, ValidationError

DIM = 6
BASIS_LABELS = ("e1", "e2", "e3", "eps1", "eps2", "eps3")


def E(i, j, n=DIM):
    """Elementary matrix with a single 1 at (i, j), 1-based, exact."""
    M = la.zeros((n, n), True)
    M[i - 1, j - 1] = la.ONE
    return M


def _gram():
    G = la.zeros((DIM, DIM), True)
    for i in range(1, 4):
        G[i - 1, i + 2] = la.ONE
        G[i + 2, i - 1] = -la.ONE
    return G


GRAM = _gram()
OMEGA_INV = -GRAM


def gram_like(M):
    return GRAM if la.is_exact(M) else la.to_float(GRAM)


# ---------------------------------------------------------------------------
# the Lie algebra


def cartan(i):
    return E(i, i) - E(i + 3, i + 3)


def _root_vectors():
    roots = {}
    for i in range(1, 4):
        roots[f"2h{i}"] = E(i, i + 3)
    for i, j in ((1, 2), (2, 3), (1, 3)):
        roots[f"h{i}-h{j}"] = E(i, j) - E(j + 3, i + 3)
        roots[f"h{i}+h{j}"] = E(i, j + 3) + E(j, i + 3)
    for name in list(roots):
        roots["-" + name if not name.startswith("h") else f"-({name})"] = roots[name].T.copy()
    return roots


_ROOTS = _root_vectors()


def root_vector(name):
    """Root vector by name: '2h1', 'h1-h2', 'h1+h3', '-2h2', '-(h2-h3)', ..."""
    key = name.replace(" ", "").replace("−", "-")
    if key.startswith("-h"):
        key = f"-({key[1:]})"
    return _ROOTS[key].copy()


def sp_basis_labeled():
    """Ordered list of (label, matrix): h1, h2, h3 then the 18 root vectors."""
    out = [(f"h{i}", cartan(i)) for i in range(1, 4)]
    out += [(k, v.copy()) for k, v in _ROOTS.items()]
    return out


def sp_basis():
    return [m for _, m in sp_basis_labeled()]


def is_sp_algebra(X, tol=la.DEFAULT_TOL):
    X = la.as_matrix(X)
    if X.shape != (DIM, DIM):
        return False
    return la.is_symmetric(gram_like(X) @ X, tol)


def is_symplectic(g, tol=la.DEFAULT_TOL):
    g = la.as_matrix(g)
    if g.shape != (DIM, DIM):
        return False
    G = gram_like(g)
    return la.matrices_close(g.T @ G @ g, G, tol)


def sp_inverse(g):
    """g^-1 = -GRAM g^T GRAM, exact for symplectic g."""
    g = la.as_matrix(g)
    G = gram_like(g)
    return -(G @ g.T @ G)


def blocks(X):
    """Split a 6x6 matrix into its 3x3 blocks (S, R, T, W)."""
    return X[:3, :3], X[:3, 3:], X[3:, :3], X[3:, 3:]


def from_blocks(S, R, T):
    """Algebra element with blocks (S, R; T, -S^T)."""
    S, R, T = la.common_mode(S, R, T)
    return np.block([[S, R], [T, -S.T]])


# ---------------------------------------------------------------------------
# phi and the action on quadratic forms


def phi(X, tol=la.DEFAULT_TOL):
    X = la.as_matrix(X)
    if not is_sp_algebra(X, tol):
        raise NotInAlgebraError("matrix is not in sp(6): GRAM @ X is not symmetric")
    Q = gram_like(X) @ X
    if la.is_exact(Q):
        return Q
    return (Q + Q.T) / 2


def phi_inv(Q, tol=la.DEFAULT_TOL):
    Q = la.as_matrix(Q)
    if Q.shape != (DIM, DIM) or not la.is_symmetric(Q, tol):
        raise ValidationError("quadratic form must be a symmetric 6x6 matrix")
    return -(gram_like(Q) @ Q)


def act_on_quad(g, Q):
    g, Q = la.common_mode(g, Q)
    return g.T @ Q @ g


def conjugate(g, X):
    """g^-1 X g, the algebra counterpart of act_on_quad."""
    g, X = la.common_mode(g, X)
    return sp_inverse(g) @ X @ g


# ---------------------------------------------------------------------------
# group elements


def sp_from_factors(A, B, C):
    """[[A, 0], [0, A^-T]] @ [[I, B], [0, I]] @ [[I, 0], [C, I]]."""
    A, B, C = la.common_mode(A, B, C)
    exact = la.is_exact(A)
    if exact:
        Ainv = la._from_dm(la._dm(A).inv())
    else:
        Ainv = np.linalg.inv(A)
    Z = la.zeros((3, 3), exact)
    Id = la.eye(3, exact)
    g1 = np.block([[A, Z], [Z, Ainv.T]])
    g2 = np.block([[Id, B], [Z, Id]])
    g3 = np.block([[Id, Z], [C, Id]])
    return g1 @ g2 @ g3


def random_sp(seed, exact=True, bound=2, max_retries=100):
    """Deterministic random symplectic matrix from the three-factor product.

    Entries of A, B, C are integers in [-bound, bound] (exact path) or
    standard normals (float path).  Singular draws of A are redrawn.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        if exact:
            A = rng.integers(-bound, bound + 1, size=(3, 3))
            B = rng.integers(-bound, bound + 1, size=(3, 3))
            C = rng.integers(-bound, bound + 1, size=(3, 3))
            if round(np.linalg.det(A)) == 0:
                continue
        else:
            A, B, C = rng.normal(size=(3, 3, 3))
            if abs(np.linalg.det(A)) < 1e-3:
                continue
        B = np.triu(B) + np.triu(B, 1).T
        C = np.triu(C) + np.triu(C, 1).T
        return sp_from_factors(la.as_matrix(A, exact=exact), la.as_matrix(B, exact=exact),
                               la.as_matrix(C, exact=exact))
    raise DomainError("could not draw an invertible block")


def legendre(kind="total"):
    """Legendre transformation as a symplectic matrix.

    ``kind`` is ``"total"`` or an iterable of indices m within {1, 2, 3}.  The
    matrix is the coordinate change x~^i = x^{i+3}, x~^{i+3} = -x^i for each
    i in m, other coordinates unchanged.  The total transformation therefore
    maps (x^1, ..., x^6) to (x^4, x^5, x^6, -x^1, -x^2, -x^3) and equals GRAM.
    """
    idx = {1, 2, 3} if kind == "total" else set(kind)
    if not idx <= {1, 2, 3}:
        raise ValidationError("Legendre index set must lie in {1, 2, 3}")
    L = la.eye(DIM, True)
    for i in idx:
        L[i - 1, i - 1] = la.ZERO
        L[i + 2, i + 2] = la.ZERO
        L[i - 1, i + 2] = la.ONE
        L[i + 2, i - 1] = -la.ONE
    return L


# ---------------------------------------------------------------------------
# quadratic forms from polynomial expressions

_SYMS = sympy.symbols("e1 e2 e3 eps1 eps2 eps3")


def _parse(expr):
    if isinstance(expr, str):
        local = {s.name: s for s in _SYMS}
        expr = sympy.sympify(expr.replace("ε", "eps").replace("^", "**"), locals=local)
    poly = sympy.Poly(sympy.expand(expr), *_SYMS)
    if not poly.is_zero and any(sum(m) != 2 for m in poly.monoms()):
        raise ValidationError("expression must be a homogeneous quadratic in e1..e3, eps1..eps3")
    return poly


def _sym_matrix_from_poly(poly, exact):
    """Symmetric matrix M with P(y) = y^T M y (cross terms split in halves)."""
    M = [[0] * DIM for _ in range(DIM)]
    for monom, c in poly.terms():
        if not c:
            continue
        a, b = [i for i, p in enumerate(monom) for _ in range(p)]
        val = sympy.nsimplify(c) if exact else complex(c)
        if a == b:
            M[a][a] += val
        else:
            M[a][b] += val / 2
            M[b][a] += val / 2
    return la.as_matrix(M, exact=exact)


def _exactness(poly):
    return all(la.is_exact_scalar(sympy.nsimplify(c)) and sympy.nsimplify(c) == c
               for c in poly.coeffs())


def quad_from_polynomial(expr):
    """Quadratic form on C from an honest polynomial in e_i, eps^i.

    The polynomial is read as a symmetric tensor in S^2(C), i.e. a quadratic
    form on C*, and transported to C with omega: e_j -> x^{j+3},
    eps^i -> -x^i.  Result: Q = GRAM @ M @ GRAM^T.
    """
    poly = _parse(expr)
    M = _sym_matrix_from_poly(poly, _exactness(poly))
    G = gram_like(M)
    return G @ M @ G.T


def polynomial_of_quad(Q):
    """Inverse of ``quad_from_polynomial`` (the tensor M, as a sympy polynomial)."""
    Q = la.as_matrix(Q)
    G = gram_like(Q)
    M = G.T @ Q @ G
    y = sympy.Matrix(_SYMS)
    Ms = sympy.Matrix(DIM, DIM, lambda i, j: _to_sympy(M[i, j]))
    return sympy.expand((y.T * Ms * y)[0, 0])


def _to_sympy(x):
    from sympy import QQ_I
    if isinstance(x, la.GaussianRational):
        return QQ_I.to_sympy(x)
    return sympy.sympify(complex(x))


def algebra_from_table_notation(expr):
    """Lie algebra element named by an expression in the normal-form notation.

    The notation identifies eps^i e_j with the S-block entry S_ij, a square or
    product of eps's with the T block and of e's with the negative of the R
    block (products split in halves), giving X = (S, R; T, -S^T).
    """
    poly = _parse(expr)
    exact = _exactness(poly)
    S = [[0] * 3 for _ in range(3)]
    R = [[0] * 3 for _ in range(3)]
    T = [[0] * 3 for _ in range(3)]
    for monom, c in poly.terms():
        if not c:
            continue
        a, b = sorted(i for i, p in enumerate(monom) for _ in range(p))
        val = sympy.nsimplify(c) if exact else complex(c)
        if a < 3 and b < 3:
            if a == b:
                R[a][a] -= val
            else:
                R[a][b] -= val / 2
                R[b][a] -= val / 2
        elif a >= 3 and b >= 3:
            a, b = a - 3, b - 3
            if a == b:
                T[a][a] += val
            else:
                T[a][b] += val / 2
                T[b][a] += val / 2
        else:
            S[b - 3][a] += val
    return from_blocks(la.as_matrix(S, exact), la.as_matrix(R, exact), la.as_matrix(T, exact))


def quad_from_table_notation(expr):
    """phi of ``algebra_from_table_notation``: the normal-form reading."""
    return phi(algebra_from_table_notation(expr))
