"""Small dense complex linear algebra with an exact and a floating path.

A matrix is a numpy array in one of two storage modes:

* exact: ``dtype=object`` holding Gaussian rationals (elements of sympy's
  ``QQ_I`` domain); every operation stays exact;
* float: ``dtype=complex128``.

``as_matrix`` picks the mode from the entries: ints, ``Fraction`` and sympy
rationals stay exact, and a single float anywhere switches the whole array to
the float path.  Scalars follow the same rule (a ``QQ_I`` element or a Python
``complex``).

Zero tests on the float path use ``TolPolicy.threshold(scale)``, that is
``max(abs_tol, rel_tol * scale)``.
"""

from dataclasses import dataclass
from fractions import Fraction
import numbers

import numpy as np
import sympy
from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from .errors import AmbiguityError, DimensionError, NoSolutionError

GaussianRational = type(QQ_I(0, 0))
ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
I_UNIT = QQ_I(0, 1)


@dataclass(frozen=True)
class TolPolicy:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")

    def threshold(self, scale=1.0):
        return max(self.abs_tol, self.rel_tol * float(scale))


DEFAULT_TOL = TolPolicy()


# ---------------------------------------------------------------------------
# scalars


def is_exact_scalar(x):
    if isinstance(x, bool):
        return False
    if isinstance(x, (GaussianRational, Fraction, numbers.Integral)):
        return True
    if isinstance(x, sympy.Basic):
        return bool(x.is_number) and all(
            p.is_Rational for p in x.as_real_imag())
    return False


def qq(x):
    """Convert an exact scalar to ``QQ_I``; raise TypeError otherwise."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, numbers.Integral) and not isinstance(x, bool):
        return QQ_I(int(x), 0)
    if isinstance(x, Fraction):
        return QQ_I.convert(x)
    if isinstance(x, sympy.Basic) and is_exact_scalar(x):
        return QQ_I.from_sympy(sympy.nsimplify(x))
    raise TypeError(f"not an exact scalar: {x!r}")


def qq_complex(re, im=0):
    return qq(re) + qq(im) * I_UNIT


def to_complex(x):
    if isinstance(x, GaussianRational):
        return complex(float(x.x), float(x.y))
    return complex(x)


def re_im(x):
    """Real and imaginary parts: Fractions on the exact path, floats otherwise."""
    if isinstance(x, GaussianRational):
        return Fraction(int(x.x.numerator), int(x.x.denominator)), Fraction(
            int(x.y.numerator), int(x.y.denominator))
    z = complex(x)
    return z.real, z.imag


def is_zero(x, tol=DEFAULT_TOL, scale=1.0):
    if isinstance(x, GaussianRational):
        return not x
    return abs(complex(x)) <= tol.threshold(scale)


def abs2(x):
    """|x|^2, exact for Gaussian rationals."""
    if isinstance(x, GaussianRational):
        return x.x * x.x + x.y * x.y
    return abs(complex(x)) ** 2


def rationalize(x, max_den=10**6):
    """Closest Gaussian rational to a float with bounded denominators."""
    z = complex(x)
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    return qq(re) + qq(im) * I_UNIT


# ---------------------------------------------------------------------------
# matrices


def is_exact(M):
    return isinstance(M, np.ndarray) and M.dtype == object


def as_matrix(M, exact=None):
    """Normalize an array-like into exact or float storage.

    ``exact=None`` chooses automatically, ``True`` demands exact entries (and
    raises TypeError on a float), ``False`` forces the float path.
    """
    if isinstance(M, np.ndarray) and M.dtype == object:
        arr = M
    else:
        arr = np.asarray(M) if not isinstance(M, np.ndarray) else M
        if arr.dtype != object:
            if exact:
                if np.issubdtype(arr.dtype, np.integer):
                    return np.vectorize(lambda v: QQ_I(int(v), 0), otypes=[object])(arr)
                raise TypeError("float entries cannot be used on the exact path")
            if np.issubdtype(arr.dtype, np.integer) and exact is None:
                return np.vectorize(lambda v: QQ_I(int(v), 0), otypes=[object])(arr)
            return arr.astype(complex)
    flat = list(arr.flat)
    all_exact = all(is_exact_scalar(v) for v in flat)
    if exact is False or (exact is None and not all_exact):
        return np.array([to_complex(v) for v in flat], dtype=complex).reshape(arr.shape)
    if not all_exact:
        raise TypeError("float entries cannot be used on the exact path")
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = [qq(v) for v in flat]
    return out


def to_float(M):
    M = np.asarray(M)
    if M.dtype != object:
        return M.astype(complex)
    return np.array([to_complex(v) for v in M.flat], dtype=complex).reshape(M.shape)


def common_mode(*mats):
    """Bring several matrices to a common storage mode (exact only if all are)."""
    mats = [as_matrix(m) for m in mats]
    if all(is_exact(m) for m in mats):
        return mats
    return [to_float(m) for m in mats]


def zeros(shape, exact=True):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(ZERO)
        return out
    return np.zeros(shape, dtype=complex)


def eye(n, exact=True):
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = ONE if exact else 1.0
    return out


def like(M, values):
    """Array of ``values`` stored in the same mode as ``M``."""
    return as_matrix(values, exact=True) if is_exact(M) else to_float(values)


def scale_of(M):
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(to_float(M))))


def is_zero_matrix(M, tol=DEFAULT_TOL, scale=None):
    M = as_matrix(M)
    if is_exact(M):
        return not any(M.flat)
    s = 1.0 if scale is None else scale
    return scale_of(M) <= tol.threshold(s)


def matrices_close(A, B, tol=DEFAULT_TOL):
    A, B = common_mode(A, B)
    if is_exact(A):
        return not any((A - B).flat)
    s = max(scale_of(A), scale_of(B), 1.0)
    return scale_of(A - B) <= tol.threshold(s)


def is_symmetric(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    return M.shape[0] == M.shape[1] and matrices_close(M, M.T, tol)


def _dm(M):
    return DomainMatrix([list(r) for r in M], M.shape, QQ_I)


def _from_dm(D):
    rows = D.to_list()
    out = np.empty(D.shape, dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = QQ_I.convert(v)
    return out


def _square(M, limit=None):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if limit is not None and M.shape[0] > limit:
        raise DimensionError(f"matrix larger than {limit}x{limit}")


def charpoly(M):
    """Characteristic polynomial det(tI - M), coefficients highest degree first."""
    M = as_matrix(M)
    _square(M)
    if is_exact(M):
        return [QQ_I.convert(c) for c in _dm(M).charpoly()]
    coeffs, _ = _faddeev_leverrier(M)
    return coeffs


def _faddeev_leverrier(M):
    n = M.shape[0]
    exact = is_exact(M)
    Id = eye(n, exact)
    coeffs = [ONE if exact else 1.0]
    Mk = zeros((n, n), exact)
    for k in range(1, n + 1):
        Mk = M @ Mk + Id * coeffs[-1]
        tr = np.trace(M @ Mk)
        coeffs.append(-tr * (qq(Fraction(1, k)) if exact else 1.0 / k))
    return coeffs, Mk


def _adjugate3(M):
    # cofactor formula; the hot path of the 3x3 Hessian computations
    out = np.empty((3, 3), dtype=M.dtype)
    for i in range(3):
        for j in range(3):
            r0, r1 = [k for k in range(3) if k != j]
            c0, c1 = [k for k in range(3) if k != i]
            minor = M[r0, c0] * M[r1, c1] - M[r0, c1] * M[r1, c0]
            out[i, j] = minor if (i + j) % 2 == 0 else -minor
    return out


def det(M):
    M = as_matrix(M)
    _square(M)
    if M.shape[0] == 0:
        return ONE if is_exact(M) else 1.0
    if M.shape[0] == 3:
        return M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]) \
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0]) \
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    if is_exact(M):
        return QQ_I.convert(_dm(M).det())
    return complex(np.linalg.det(M))


def adjugate(M):
    """Classical adjugate via the Faddeev-LeVerrier recursion (valid when singular)."""
    M = as_matrix(M)
    _square(M, limit=6)
    n = M.shape[0]
    if n == 1:
        return eye(1, is_exact(M))
    if n == 3:
        return _adjugate3(M)
    _, Mn = _faddeev_leverrier(M)
    sign = 1 if n % 2 == 1 else -1
    return Mn * (qq(sign) if is_exact(M) else sign)


def rank(M, tol=DEFAULT_TOL):
    """Rank by row reduction with full pivoting (exact rank on the exact path)."""
    M = as_matrix(M)
    if M.size == 0:
        return 0
    if is_exact(M):
        return _dm(M).rank()
    A = np.array(M, dtype=complex)
    m, n = A.shape
    thr = None
    r = 0
    for r in range(min(m, n)):
        sub = np.abs(A[r:, r:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        piv = sub[i, j]
        if thr is None:
            thr = tol.threshold(piv)
        if piv <= thr:
            return r
        i += r
        j += r
        A[[r, i], :] = A[[i, r], :]
        A[:, [r, j]] = A[:, [j, r]]
        A[r + 1:, r:] -= np.outer(A[r + 1:, r] / A[r, r], A[r, r:])
    else:
        return min(m, n)


def nullspace(M, tol=DEFAULT_TOL):
    """Columns spanning the kernel of M."""
    M = as_matrix(M)
    m, n = M.shape
    if is_exact(M):
        N = _dm(M).nullspace()
        if N.shape[0] == 0:
            return zeros((n, 0), True)
        return _from_dm(N).T.copy()
    k = n - rank(M, tol)
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    _, _, vh = np.linalg.svd(M)
    return vh[n - k:].conj().T.copy()


def solve_linear(A, b, tol=DEFAULT_TOL):
    """Solve A x = b.

    Exact path: a particular solution with all free variables set to zero.
    Float path: the least-norm least-squares solution, rejected when the
    residual exceeds tolerance.
    """
    A, b = common_mode(A, b)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    if A.shape[0] != b.shape[0]:
        raise DimensionError("row counts of A and b differ")
    n = A.shape[1]
    if is_exact(A):
        aug = np.concatenate([A, b], axis=1)
        R, pivots = _dm(aug).rref()
        R = _from_dm(R)
        if any(p >= n for p in pivots):
            raise NoSolutionError("inconsistent linear system")
        x = zeros((n, b.shape[1]), True)
        for row, p in enumerate(pivots):
            x[p, :] = R[row, n:]
    else:
        x, *_ = np.linalg.lstsq(A, b, rcond=None)
        res = scale_of(A @ x - b)
        if res > tol.threshold(max(scale_of(b), 1.0)):
            raise NoSolutionError("inconsistent linear system", residual=res)
    return x[:, 0] if vec else x


def mat_pow(M, k):
    out = eye(M.shape[0], is_exact(M))
    for _ in range(k):
        out = out @ M
    return out


def poly_at_matrix(coeffs, M):
    """Horner evaluation of a polynomial (highest degree first) at a matrix."""
    n = M.shape[0]
    exact = is_exact(M)
    Id = eye(n, exact)
    out = zeros((n, n), exact)
    for c in coeffs:
        out = out @ M + Id * c
    return out


# ---------------------------------------------------------------------------
# Jordan data


def _partition_from_nullities(nullities, unit=1):
    """Parts from dim ker A^k, k = 0..m (divided by ``unit`` for irreducible factors)."""
    counts = []
    for k in range(1, len(nullities)):
        diff = nullities[k] - nullities[k - 1]
        if diff % unit:
            return None
        counts.append(diff // unit)
    if any(c < 0 for c in counts) or any(
            counts[i] < counts[i + 1] for i in range(len(counts) - 1)):
        return None
    parts = []
    for k in range(len(counts)):
        nxt = counts[k + 1] if k + 1 < len(counts) else 0
        parts += [k + 1] * (counts[k] - nxt)
    return sorted(parts, reverse=True)


def _sort_key(ev):
    z = to_complex(ev)
    return (round(z.real, 12), round(z.imag, 12))


def jordan_data(M, tol=DEFAULT_TOL):
    """Eigenvalues with Jordan block partitions, from rank chains.

    Returns a list of ``(eigenvalue, partition)`` sorted by eigenvalue.  On
    the exact path the characteristic polynomial is factored over the Gaussian
    rationals; rational roots stay exact, and roots of higher-degree factors
    are reported as floats while their partitions are still computed exactly.
    """
    M = as_matrix(M)
    _square(M, limit=6)
    if is_exact(M):
        return _jordan_exact(M)
    return _jordan_float(M, tol)


def _jordan_exact(M):
    n = M.shape[0]
    t = sympy.Symbol("t")
    cp = sympy.Poly([QQ_I.to_sympy(c) for c in charpoly(M)], t, domain=QQ_I)
    _, factors = cp.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = [QQ_I.from_sympy(c) for c in fac.all_coeffs()]
        lead = coeffs[0]
        coeffs = [c / lead for c in coeffs]
        d = len(coeffs) - 1
        P = poly_at_matrix(coeffs, M)
        nullities = [0]
        Pk = eye(n, True)
        for _ in range(mult):
            Pk = Pk @ P
            nullities.append(n - rank(Pk))
        part = _partition_from_nullities(nullities, unit=d)
        if part is None or sum(part) != mult:
            raise AssertionError("inconsistent exact rank chain")
        if d == 1:
            out.append((-coeffs[1], part))
        else:
            for r in np.roots([to_complex(c) for c in coeffs]):
                out.append((complex(r), list(part)))
    out.sort(key=lambda p: _sort_key(p[0]))
    return out


def _newton_polish(coeffs, r):
    """One Newton step on a simple root; skipped when the derivative is tiny."""
    c = np.array(coeffs, dtype=complex)
    d = np.polyval(np.polyder(c), r)
    if abs(d) > 1e-300:
        step = np.polyval(c, r) / d
        if abs(step) < 1e-3 * (1 + abs(r)):
            return complex(r - step)
    return complex(r)


def _single_linkage(values, radius):
    groups = [[i] for i in range(len(values))]
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                if min(abs(values[i] - values[j]) for i in groups[a] for j in groups[b]) <= radius:
                    groups[a] += groups.pop(b)
                    merged = True
                    break
            if merged:
                break
    return sorted(sorted(g) for g in groups)


def _verify_cluster(M, lam, m, s, tol):
    n = M.shape[0]
    A = (M - lam * np.eye(n)) / s
    nullities = [0]
    Ak = np.eye(n, dtype=complex)
    for _ in range(m):
        Ak = Ak @ A
        nullities.append(n - rank(Ak, tol))
    if nullities[-1] != m:
        return None
    part = _partition_from_nullities(nullities)
    if part is None or sum(part) != m:
        return None
    return part


def _jordan_float(M, tol):
    n = M.shape[0]
    s = max(scale_of(M), tol.abs_tol)
    coeffs = charpoly(M)
    roots = [complex(r) for r in np.roots(np.array(coeffs, dtype=complex))]
    rho = s * max(tol.threshold(s) / s, tol.rel_tol) ** (1.0 / n)
    floor = tol.threshold(s)
    # walk from coarse to fine radii; the first clustering whose every cluster
    # passes the rank-chain test wins (finer splits of a defective eigenvalue
    # can pass spuriously, coarse false merges cannot)
    result = None
    tried = []
    radius = rho
    while radius >= floor * 1e-3 and result is None:
        groups = _single_linkage(roots, radius)
        if groups not in tried:
            tried.append(groups)
            attempt = []
            for g in groups:
                lam = np.mean([roots[i] for i in g])
                if len(g) == 1:
                    lam = _newton_polish(coeffs, lam)
                part = _verify_cluster(M, lam, len(g), s, tol)
                if part is None:
                    attempt = None
                    break
                attempt.append((complex(lam), part, g))
            result = attempt
        radius /= 10.0
    if result is None:
        raise AmbiguityError("no eigenvalue clustering is consistent with the rank chains",
                             candidates=[sorted(roots, key=_sort_key)])
    diam = max([max(abs(roots[i] - roots[j]) for i in g for j in g) for _, _, g in result] + [0.0])
    fuzz = max(diam, floor)
    centers = [lam for lam, _, _ in result]
    for a in range(len(centers)):
        for b in range(a + 1, len(centers)):
            if abs(centers[a] - centers[b]) < 10 * fuzz:
                raise AmbiguityError(
                    "eigenvalue clusters within ten times the clustering tolerance",
                    candidates=[[(lam, part) for lam, part, _ in result]])
    out = [(lam, part) for lam, part, _ in result]
    out.sort(key=lambda p: _sort_key(p[0]))
    return out


def adj_trace_gradient(U, C):
    """Matrix G with d tr(C adj U) = tr(G dU) for 3x3 U.

    From adj U = U^2 - tr(U) U + (tr(U)^2 - tr(U^2)) I / 2.
    """
    U, C = common_mode(U, C)
    Id = eye(3, is_exact(U))
    trU = np.trace(U)
    trC = np.trace(C)
    trCU = np.trace(C @ U)
    return U @ C + C @ U - Id * trCU - C * trU + (Id * trU - U) * trC
