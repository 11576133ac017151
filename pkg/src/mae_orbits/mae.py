"""Monge-Ampere equations as hyperplane sections of the Lagrangian Grassmannian.

An effective three-form eta on the covector side defines the equation

    F(U) = c0 + tr(lin U) + tr(cof adj U) + c3 det U = 0

on symmetric 3x3 matrices U, by pairing eta with the Plucker point
(1, U, adj U, det U) of the plane spanned by the columns of [I; U].  The
coefficients are the block coordinates of eta: c0 = eta_123, lin = X,
cof = Y, c3 = eta_456.  A vector-side form is first moved across with
``forms.duality``.

Everything here works on both arithmetic paths.  Sampling stays exact when
the equation is affine in a diagonal entry with rational coefficients; it
falls back to floats only when a square root is irrational.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import forms as fm
from . import linalg as la
from . import moment as mo
from . import symplectic as sp
from .errors import (ConsistencyError, DegenerateInputError, FrameError,
                     NonRegularPointError, SamplingError, ValidationError)


@dataclass(frozen=True)
class MaeCoeffs:
    c0: object
    lin: np.ndarray
    cof: np.ndarray
    c3: object

    @property
    def exact(self):
        return la.is_exact(self.lin) and la.is_exact(self.cof)

    def as_form(self):
        """The covector-side three-form of this equation."""
        return fm.EffForm(self.c0, self.lin, self.cof, self.c3, "covector")


def mae_from_form(eta):
    eta = fm.to_covector_side(mo._as_eff(eta))
    return MaeCoeffs(eta.p123, eta.X, eta.Y, eta.p456)


def coeffs(c0, lin, cof, c3):
    """Validated MaeCoeffs from raw data (symmetric lin and cof)."""
    return mae_from_form(fm.EffForm(c0, la.as_matrix(lin), la.as_matrix(cof), c3, "covector"))


def natural_pair20(eta20, v20):
    """<x^t, e_t> = 1 pairing between covector and vector three-forms."""
    a, b = la.common_mode(fm.as_form20(eta20), fm.as_form20(v20))
    return a @ b


def _hess(U):
    U = la.as_matrix(U)
    if U.shape != (3, 3):
        raise ValidationError("Hessian point must be 3x3")
    return U


def F_eval(c, U):
    U = _hess(U)
    lin, cof, U = la.common_mode(c.lin, c.cof, U)
    conv = la.qq if la.is_exact(U) else la.to_complex
    c0, c3 = conv(c.c0), conv(c.c3)
    return c0 + np.sum(lin * U) + np.sum(cof * la.adjugate(U)) + c3 * la.det(U)


# ---------------------------------------------------------------------------
# sampling


def _rand_entry(rng, exact):
    if exact:
        return la.qq(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))))
    return complex(rng.normal())


def _affine_in(c, U, pos):
    """F restricted to the symmetric entry ``pos`` as (slope, value at 0)."""
    exact = la.is_exact(U)
    one = la.ONE if exact else 1.0
    U0, U1 = U.copy(), U.copy()
    i, j = pos
    U0[i, j] = U0[j, i] = 0 * one
    U1[i, j] = U1[j, i] = one
    f0, f1 = F_eval(c, U0), F_eval(c, U1)
    return f1 - f0, f0, U0


def _quadratic_in(c, U, pos):
    exact = la.is_exact(U)
    one = la.ONE if exact else 1.0
    vals = []
    for t in (0, 1, -1):
        V = U.copy()
        V[pos] = V[pos[::-1]] = one * t
        vals.append(F_eval(c, V))
    f0, fp, fm_ = vals
    half = la.qq(Fraction(1, 2)) if exact else 0.5
    a = (fp + fm_) * half - f0
    b = (fp - fm_) * half
    return a, b, f0


def _exact_sqrt(x):
    s = sympy.sqrt(sympy.QQ_I.to_sympy(x))
    s = sympy.nsimplify(sympy.expand_complex(s))
    return la.qq(s) if la.is_exact_scalar(s) else None


def _free_entries(c):
    """Mask of the entries u_ij that F actually involves."""
    lin, cof = la.to_float(c.lin), la.to_float(c.cof)
    c3 = la.to_complex(c.c3)
    mask = (lin != 0) | (c3 != 0)
    # u_ij enters adj(U) wherever a cofactor coefficient sits off row i and column j
    for i in range(3):
        for j in range(3):
            rows = [k for k in range(3) if k != i]
            cols = [k for k in range(3) if k != j]
            mask[i, j] |= bool(np.any(cof[np.ix_(cols, rows)] != 0)) or bool(
                np.any(cof[np.ix_(rows, cols)] != 0))
    return mask | mask.T


def sample_solution(c, seed, exact=None, tol=la.DEFAULT_TOL, max_retries=40):
    """A point U with F(U) = 0, deterministic in ``seed``.

    Five entries are drawn at random and F is solved for the remaining
    diagonal entry (u11, then u22, then u33).  When F never depends on a
    diagonal entry, F is solved for an off-diagonal entry instead, where it
    is at most quadratic.
    """
    if exact is None:
        exact = c.exact
    rng = np.random.default_rng(seed)
    thr = tol.threshold(1.0)
    free = _free_entries(c)

    def small(x):
        return (not x) if la.is_exact_scalar(x) and isinstance(x, la.GaussianRational) \
            else abs(la.to_complex(x)) <= thr

    for _ in range(max_retries):
        U = la.zeros((3, 3), exact)
        for i in range(3):
            for j in range(i, 3):
                U[i, j] = U[j, i] = _rand_entry(rng, exact)
        if not any(free[d, d] for d in range(3)):
            break
        for d in range(3):
            if not free[d, d]:
                continue
            slope, f0, U0 = _affine_in(c, U, (d, d))
            if not small(slope):
                U0[d, d] = -f0 / slope if exact else -la.to_complex(f0) / la.to_complex(slope)
                return U0
    for pos in ((1, 2), (0, 2), (0, 1)):
        if not free[pos]:
            continue
        for _ in range(max_retries):
            U = la.zeros((3, 3), exact)
            for i in range(3):
                for j in range(i, 3):
                    U[i, j] = U[j, i] = _rand_entry(rng, exact)
            a, b, f0 = _quadratic_in(c, U, pos)
            if small(a) and small(b):
                continue
            if small(a):
                t = -f0 / b if exact else -la.to_complex(f0) / la.to_complex(b)
            else:
                disc = b * b - a * f0 * (la.qq(4) if exact else 4.0)
                root = _exact_sqrt(disc) if exact else None
                if root is None:
                    a, b, f0 = (la.to_complex(v) for v in (a, b, f0))
                    U = la.to_float(U)
                    root = np.sqrt(b * b - 4 * a * f0)
                    t = (-b + root) / (2 * a)
                else:
                    t = (-b + root) / (a * la.qq(2))
            U[pos] = U[pos[::-1]] = t
            return U
    raise SamplingError("could not sample a point on the equation")


# ---------------------------------------------------------------------------
# symbols


def symbol_poly(c, U):
    """(1/(2 - delta_ij)) dF/du_ij from the closed-form derivative of F."""
    U = _hess(U)
    lin, cof, U = la.common_mode(c.lin, c.cof, U)
    exact = la.is_exact(U)
    c3 = la.qq(c.c3) if exact else la.to_complex(c.c3)
    G = la.adj_trace_gradient(U, cof)
    half = la.qq(Fraction(1, 2)) if exact else 0.5
    return lin + (G + G.T) * half + la.adjugate(U) * c3


def symbol_intrinsic(eta, U):
    """The same matrix from the derivative of l1 ^ l2 ^ l3 along each h_ab."""
    eta = fm.to_covector_side(mo._as_eff(eta))
    U = _hess(U)
    e20 = eta.to20()
    e20, U = la.common_mode(e20, U)
    exact = la.is_exact(U)
    Fr = fm.big_cell_frame(U)
    out = la.zeros((3, 3), exact)
    half = la.qq(Fraction(1, 2)) if exact else 0.5
    for a in range(3):
        for b in range(a, 3):
            H = la.zeros((3, 3), exact)
            H[a, b] = H[b, a] = la.ONE if exact else 1.0
            dF = np.concatenate([la.zeros((3, 3), exact), H], axis=0)
            cols = [Fr[:, k] for k in range(3)]
            d = None
            for k in range(3):
                cc = list(cols)
                cc[k] = dF[:, k]
                w = fm.wedge3(*cc)
                d = w if d is None else d + w
            val = natural_pair20(e20, d)
            out[a, b] = out[b, a] = val if a == b else val * half
    return out


def symbol_at(eta, U, tol=la.DEFAULT_TOL):
    """Symbol of the equation of ``eta`` at U, cross-checked by two derivations."""
    c = mae_from_form(eta)
    s1 = symbol_poly(c, U)
    s2 = symbol_intrinsic(eta, U)
    if not la.matrices_close(s1, s2, tol):
        raise ConsistencyError("polynomial and intrinsic symbols disagree")
    return s1


def char_rank(eta, U, tol=la.DEFAULT_TOL):
    s = symbol_at(eta, U, tol)
    if la.is_zero_matrix(s, tol):
        raise NonRegularPointError("the symbol vanishes at this point")
    return la.rank(s, tol)


def cochar_local(eta, U, tol=la.DEFAULT_TOL):
    s = symbol_at(eta, U, tol)
    if la.is_zero_matrix(s, tol):
        raise NonRegularPointError("the symbol vanishes at this point")
    return la.adjugate(s)


def klr_on_plane(eta, U):
    """Restriction of klr(eta) to the plane spanned by the columns of [I; U]."""
    Fr = fm.big_cell_frame(_hess(U))
    Q = mo.klr(mo._as_eff(eta))
    Q, Fr = la.common_mode(Q, Fr)
    return Fr.T @ Q @ Fr


@dataclass(frozen=True)
class CocharCheck:
    residual: float
    rank: int
    trivial: bool


def cochar_consistency(eta, U, tol=la.DEFAULT_TOL):
    """Projective distance between adj(symbol) and the restricted klr form.

    For a rank-one symbol both sides vanish identically; the residual is then
    reported as 0 with ``trivial`` set.
    """
    r = char_rank(eta, U, tol)
    if r <= 1:
        restricted = klr_on_plane(eta, U)
        e = mo._as_eff(eta)
        scale = mo._scale(e) ** 2 * (1.0 + la.scale_of(la.as_matrix(U))) ** 2
        if not la.is_zero_matrix(restricted, tol, scale):
            raise ConsistencyError("rank-one symbol but klr does not vanish")
        return CocharCheck(0.0, r, True)
    A = cochar_local(eta, U, tol)
    B = klr_on_plane(eta, U)
    return CocharCheck(mo.projective_residual(A, B), r, False)


def is_smooth_point(eta, U, tol=la.DEFAULT_TOL):
    s = symbol_poly(mae_from_form(eta), U)
    return not la.is_zero_matrix(s, tol, max(la.scale_of(la.as_matrix(U)), 1.0))


def sample_smooth_points(eta, n, seed, exact=None, tol=la.DEFAULT_TOL, max_draws=None):
    """n points on the equation where the symbol is nonzero; trial k uses seed + k."""
    c = mae_from_form(eta)
    out = []
    k = 0
    limit = max_draws or 20 * n + 20
    while len(out) < n:
        if k >= limit:
            raise SamplingError(f"only {len(out)} smooth points in {limit} draws")
        U = sample_solution(c, seed + k, exact, tol)
        k += 1
        if is_smooth_point(eta, U, tol):
            out.append(U)
    return out


# ---------------------------------------------------------------------------
# rank-one verticals and characteristic covectors


def rank_one_vertical(cvec):
    v = la.as_matrix(np.asarray(cvec, dtype=object if all(
        la.is_exact_scalar(x) for x in cvec) else complex).reshape(3, 1))
    return v @ v.T


def deviation_order(U, nu, t):
    """3 - dim of the intersection of the planes of U and U + t nu."""
    U, nu = la.common_mode(_hess(U), _hess(nu))
    exact = la.is_exact(U)
    t = la.qq(t) if exact and la.is_exact_scalar(t) else t
    if exact and not la.is_exact_scalar(t):
        U, nu = la.to_float(U), la.to_float(nu)
        exact = False
    if (not t) if isinstance(t, la.GaussianRational) else t == 0:
        raise ValidationError("t must be nonzero")
    Id = la.eye(3, exact)
    M = np.block([[Id, Id], [U, U + nu * t]])
    return la.rank(M) - 3


def characteristic_covectors(sigma, n, seed, tol=la.DEFAULT_TOL):
    """n complex covectors c with c^T sigma c = 0."""
    S = la.to_float(_hess(sigma))
    scale = np.max(np.abs(S))
    if scale <= tol.abs_tol:
        raise DegenerateInputError("the symbol is zero")
    thr = tol.threshold(scale)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        for perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            p, q, r = perm
            cq, cr = rng.normal(size=2) + 1j * rng.normal(size=2)
            a = S[p, p]
            b = 2 * (S[p, q] * cq + S[p, r] * cr)
            k = S[q, q] * cq * cq + 2 * S[q, r] * cq * cr + S[r, r] * cr * cr
            if abs(a) > thr:
                cp = (-b + np.sqrt(b * b - 4 * a * k)) / (2 * a)
            elif abs(b) > thr:
                cp = -k / b
            elif abs(k) <= thr:
                cp = complex(rng.normal())
            else:
                continue
            c = np.zeros(3, dtype=complex)
            c[p], c[q], c[r] = cp, cq, cr
            out.append(c)
            break
        else:
            raise DegenerateInputError("could not find a characteristic covector")
    return out


# ---------------------------------------------------------------------------
# Schubert cycles


def _frame3(D, tol=la.DEFAULT_TOL):
    try:
        return fm.check_frame(D, tol)
    except FrameError:
        raise
    except ValidationError as exc:
        raise FrameError(str(exc)) from exc


def schubert_form(D, tol=la.DEFAULT_TOL):
    """Covector-side form whose equation is dim(L cap D) >= 1.

    L meets D exactly when d1 ^ d2 ^ d3 ^ l1 ^ l2 ^ l3 = 0, a linear condition
    on the Plucker point of L.  Only the effective part of d1 ^ d2 ^ d3 pairs
    with Lagrangian planes, so the form is the dual of that part.
    """
    D = _frame3(D, tol)
    d = fm.plucker_coords(D)
    return fm.duality(fm.effective_project(d, "vector"))


def D_perp(D, tol=la.DEFAULT_TOL):
    D = _frame3(D, tol)
    return la.nullspace(D.T @ sp.gram_like(D), tol)


def kernel_line(D, tol=la.DEFAULT_TOL):
    """Spanning vector of D cap D-perp when that line is one-dimensional, else None."""
    D = _frame3(D, tol)
    N = la.nullspace(D.T @ sp.gram_like(D) @ D, tol)
    if N.shape[1] != 1:
        return None
    return (D @ N)[:, 0]


def flat(v):
    """The covector omega(v, .) in the coordinates x^a."""
    v = la.as_matrix(np.asarray(v, dtype=object if all(la.is_exact_scalar(x) for x in v)
                                else complex))
    return sp.gram_like(v).T @ v


# ---------------------------------------------------------------------------
# first integrals of distributions on the space of Hessians

U_VARS = sympy.symbols("u11 u12 u13 u22 u23 u33")
_U = dict(zip(("u11", "u12", "u13", "u22", "u23", "u33"), U_VARS))


def _sym(expr):
    return sympy.sympify(expr, locals=_U) if isinstance(expr, str) else expr


def _field(F):
    return {(_U[k] if isinstance(k, str) else k): _sym(v) for k, v in F.items()}


u11, u12, u13, u22, u23, u33 = U_VARS

#: Fields spanning the distribution attached to the cone structure of
#: u11 + u22 u33 - u23^2 = 0.
MINOR_EQUATION_FIELDS = [
    {u12: u11 * u23 * u33, u13: u11 * u33**2},
    {u22: -2 * u22 * u23 * u33 + 2 * u23**3, u23: -u22 * u33**2 + u23**2 * u33},
    {u11: u11**2 * u33**2, u22: u11 * u23**2 * u33, u23: u11 * u23 * u33**2,
     u33: u11 * u33**3},
    {u12: -u11 * u22 * u33**2 + u11 * u23**2 * u33},
    {u22: u22**2 * u33**2 - 3 * u22 * u23**2 * u33 + 2 * u23**4,
     u23: -u22 * u23 * u33**2 + u23**3 * u33,
     u33: -u22 * u33**3 + u23**2 * u33**2},
]

#: The constant distribution attached to the wave cone structure.
WAVE_FIELDS = [{u11: 1, u22: 1}, {u11: 1, u33: 1}, {u12: 1}, {u13: 1}, {u23: 1}]


def apply_field(F, f):
    f = _sym(f)
    return sympy.expand(sum(coef * sympy.diff(f, v) for v, coef in _field(F).items()))


def _random_point(rng):
    return {v: sympy.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for v in U_VARS}


def _point_on_level_set(f, rng, max_retries=50):
    for _ in range(max_retries):
        pt = _random_point(rng)
        for v in U_VARS:
            if sympy.degree(f, v) != 1:
                continue
            rest = {w: val for w, val in pt.items() if w != v}
            g = sympy.expand(f.subs(rest))
            slope = g.coeff(v, 1)
            if slope != 0:
                pt[v] = -g.coeff(v, 0) / slope
                return pt
    raise SamplingError("could not sample the level set f = 0")


def first_integral_check(fields, f, n=25, seed=0, on_level_set=True):
    """Exact test that each field annihilates f at n random rational points.

    With ``on_level_set`` (the default) the points lie on the hypersurface
    f = 0, so the test asks whether that hypersurface is an integral manifold
    of the distribution.  Otherwise the points are unconstrained and the test
    asks whether f is a first integral everywhere.
    """
    f = sympy.expand(_sym(f))
    derived = [apply_field(F, f) for F in fields]
    rng = np.random.default_rng(seed)
    for _ in range(n):
        pt = _point_on_level_set(f, rng) if on_level_set else _random_point(rng)
        if any(g.subs(pt) != 0 for g in derived):
            return False
    return True


def equation_polynomial(c):
    """F(U) as a sympy polynomial in u11, ..., u33 (exact coefficients only)."""
    U = sympy.Matrix(3, 3, lambda i, j: _U[f"u{min(i, j) + 1}{max(i, j) + 1}"])
    adj = U.adjugate()
    conv = sp._to_sympy
    F = conv(c.c0) + conv(c.c3) * U.det()
    for i in range(3):
        for j in range(3):
            F += conv(c.lin[i, j]) * U[i, j] + conv(c.cof[i, j]) * adj[i, j]
    return sympy.expand(F)
