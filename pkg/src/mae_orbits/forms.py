"""Three-forms on the symplectic space and their effective part.

A general element of the 20-dimensional space of three-vectors (or
three-forms) is stored as a length-20 array indexed by ``TRIPLES``, the sorted
index triples (1-based).  The effective part is the 14-dimensional kernel of
the insertion of omega.  ``EffForm`` stores it in block coordinates
(p123, X, Y, p456):

    X = [[423, 143, 124],         Y = [[156, 416, 451],
         [523, 153, 125],              [256, 426, 452],
         [623, 163, 126]]              [356, 436, 453]]

Entry (r, c) of X is the coefficient of the ordered triple obtained from
(1, 2, 3) by putting r + 4 in position c.  Entry (r, c) of Y comes from
(4, 5, 6) with r + 1 in position c.  A three-form is effective exactly when
X and Y are symmetric.

``side`` records whether the form lives among vectors (e_ijk) or covectors
(x^ijk).  The group acts on covectors by the inverse transpose, and
``duality`` (the omega-flat map e1 -> x4, e4 -> -x1, ...) moves between the
two sides equivariantly.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from . import linalg as la
from . import symplectic as sp
from .errors import DomainError, FrameError, ValidationError

TRIPLES = list(combinations(range(1, 7), 3))
TRIPLE_INDEX = {t: i for i, t in enumerate(TRIPLES)}
SIDES = ("vector", "covector")


def perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


def _signed_slot(triple):
    """(index into TRIPLES, sign) for an arbitrary ordered triple."""
    s = perm_sign(triple)
    if s == 0:
        return None, 0
    return TRIPLE_INDEX[tuple(sorted(triple))], s


def _x_triple(r, c):
    t = [1, 2, 3]
    t[c] = r + 4
    return tuple(t)


def _y_triple(r, c):
    t = [4, 5, 6]
    t[c] = r + 1
    return tuple(t)


# The coordinate dictionary: (block, r, c) -> (slot in TRIPLES, sign)
COORD_TABLE = {("p123", 0, 0): _signed_slot((1, 2, 3)), ("p456", 0, 0): _signed_slot((4, 5, 6))}
for _r in range(3):
    for _c in range(3):
        COORD_TABLE[("X", _r, _c)] = _signed_slot(_x_triple(_r, _c))
        COORD_TABLE[("Y", _r, _c)] = _signed_slot(_y_triple(_r, _c))


def _zero_vec(exact):
    return la.zeros((20,), exact)


def form20(coeffs=None, exact=None):
    """Three-vector from a mapping of (possibly unsorted) triples to scalars.

    Keys may be tuples like (4, 2, 3) or strings like "423"; repeated indices
    contribute nothing.
    """
    coeffs = dict(coeffs or {})
    vals = list(coeffs.values())
    if exact is None:
        exact = all(la.is_exact_scalar(v) for v in vals)
    out = _zero_vec(exact)
    for key, val in coeffs.items():
        t = tuple(int(ch) for ch in key) if isinstance(key, str) else tuple(key)
        if len(t) != 3 or not set(t) <= set(range(1, 7)):
            raise ValidationError(f"bad index triple {key!r}")
        slot, s = _signed_slot(t)
        if slot is None:
            continue
        v = la.qq(val) if exact else la.to_complex(val)
        out[slot] = out[slot] + (v if s > 0 else -v)
    return out


def as_form20(tau):
    tau = la.as_matrix(np.asarray(tau) if not isinstance(tau, np.ndarray) else tau)
    if tau.shape != (20,):
        raise ValidationError("a three-form has 20 coefficients")
    return tau


def to_tensor(tau):
    """Fully antisymmetric 6x6x6 array of a 20-vector."""
    tau = as_form20(tau)
    T = la.zeros((6, 6, 6), la.is_exact(tau))
    for idx, (i, j, k) in enumerate(TRIPLES):
        v = tau[idx]
        for p in permutations((i, j, k)):
            s = perm_sign(p)
            T[p[0] - 1, p[1] - 1, p[2] - 1] = v if s > 0 else -v
    return T


def from_tensor(T):
    return np.array([T[i - 1, j - 1, k - 1] for i, j, k in TRIPLES],
                    dtype=object if T.dtype == object else complex)


def wedge3(u, v, w):
    """u ^ v ^ w: coefficient of e_ijk is the 3x3 minor on rows i, j, k."""
    F = np.stack(la.common_mode(u, v, w), axis=1)
    return plucker_coords(F)


def plucker_coords(F):
    F = la.as_matrix(F)
    return np.array([la.det(F[[i - 1, j - 1, k - 1], :]) for i, j, k in TRIPLES],
                    dtype=object if la.is_exact(F) else complex)


def wedge_vec_bivector(v, P):
    """v ^ P for a vector v and a bivector given by its antisymmetric matrix P."""
    v, P = la.common_mode(v, P)
    out = []
    for i, j, k in TRIPLES:
        a, b, c = i - 1, j - 1, k - 1
        out.append(v[a] * P[b, c] + v[b] * P[c, a] + v[c] * P[a, b])
    return np.array(out, dtype=object if la.is_exact(v) else complex)


def omega_pair(alpha, beta):
    """Coefficient of e123456 in alpha ^ beta."""
    alpha, beta = la.common_mode(as_form20(alpha), as_form20(beta))
    total = la.ZERO if la.is_exact(alpha) else 0j
    for idx, t in enumerate(TRIPLES):
        comp = tuple(sorted(set(range(1, 7)) - set(t)))
        s = perm_sign(t + comp)
        term = alpha[idx] * beta[TRIPLE_INDEX[comp]]
        total = total + (term if s > 0 else -term)
    return total


def omega_matrix(exact=True):
    """20x20 matrix of omega_pair in the TRIPLES basis."""
    M = la.zeros((20, 20), exact)
    one = la.ONE if exact else 1.0
    for idx, t in enumerate(TRIPLES):
        comp = tuple(sorted(set(range(1, 7)) - set(t)))
        M[idx, TRIPLE_INDEX[comp]] = one * perm_sign(t + comp)
    return M


# contraction normalization: sum_ij omega_ij (v ^ omega^-1)^{ija} = -4 v^a
_INSERT_SCALE = -4


def insert_omega(tau):
    """Contraction of a three-vector with omega, scaled so that
    insert_omega(v ^ omega^-1) = v."""
    tau = as_form20(tau)
    T = to_tensor(tau)
    G = sp.gram_like(tau)
    out = []
    for a in range(6):
        s = la.ZERO if la.is_exact(tau) else 0j
        for i in range(6):
            for j in range(6):
                if G[i, j]:
                    s = s + G[i, j] * T[i, j, a]
        out.append(s)
    out = np.array(out, dtype=object if la.is_exact(tau) else complex)
    if la.is_exact(tau):
        return out * la.qq(la.Fraction(1, _INSERT_SCALE))
    return out / _INSERT_SCALE


def omega_inv_bivector(exact=True):
    return sp.OMEGA_INV if exact else la.to_float(sp.OMEGA_INV)


def lambda3_matrix(g):
    """20x20 matrix of the induced action of g on three-vectors (3x3 minors)."""
    g = la.as_matrix(g)
    exact = la.is_exact(g)
    M = la.zeros((20, 20), exact)
    for r, I in enumerate(TRIPLES):
        rows = [i - 1 for i in I]
        for c, J in enumerate(TRIPLES):
            M[r, c] = la.det(g[np.ix_(rows, [j - 1 for j in J])])
    return M


# ---------------------------------------------------------------------------
# effective forms


@dataclass(frozen=True, eq=False)
class EffForm:
    p123: object
    X: np.ndarray
    Y: np.ndarray
    p456: object
    side: str = "vector"
    tol: la.TolPolicy = field(default=la.DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValidationError(f"side must be one of {SIDES}")
        X, Y = la.common_mode(self.X, self.Y)
        exact = la.is_exact(X) and la.is_exact_scalar(self.p123) and la.is_exact_scalar(self.p456)
        if not exact:
            X, Y = la.to_float(X), la.to_float(Y)
        if X.shape != (3, 3) or Y.shape != (3, 3):
            raise ValidationError("X and Y must be 3x3")
        if not (la.is_symmetric(X, self.tol) and la.is_symmetric(Y, self.tol)):
            raise ValidationError("effective forms need symmetric X and Y blocks")
        conv = la.qq if exact else la.to_complex
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "p123", conv(self.p123))
        object.__setattr__(self, "p456", conv(self.p456))

    @property
    def exact(self):
        return la.is_exact(self.X)

    def to20(self):
        out = _zero_vec(self.exact)
        for (blk, r, c), (slot, s) in COORD_TABLE.items():
            v = {"p123": self.p123, "p456": self.p456}.get(blk)
            if v is None:
                v = (self.X if blk == "X" else self.Y)[r, c]
            out[slot] = v if s > 0 else -v
        return out

    def coords14(self):
        """Flat list (p123, X upper triangle, Y upper triangle, p456)."""
        iu = np.triu_indices(3)
        return [self.p123] + list(self.X[iu]) + list(self.Y[iu]) + [self.p456]

    def scaled(self, c):
        c = la.qq(c) if self.exact and la.is_exact_scalar(c) else c
        if not la.is_exact_scalar(c):
            f = la.to_float
            c = complex(c)
            return EffForm(la.to_complex(self.p123) * c, f(self.X) * c, f(self.Y) * c,
                           la.to_complex(self.p456) * c, self.side)
        return EffForm(self.p123 * c, self.X * c, self.Y * c, self.p456 * c, self.side)

    def is_zero(self, tol=la.DEFAULT_TOL):
        return la.is_zero_matrix(self.to20(), tol)

    def __eq__(self, other):
        """Same side and same coordinates (exactly, or within tolerance on floats)."""
        if not isinstance(other, EffForm):
            return NotImplemented
        if self.side != other.side:
            return False
        a, b = self.to20(), other.to20()
        if self.exact and other.exact:
            return bool((a == b).all())
        return la.matrices_close(a.reshape(20, 1), b.reshape(20, 1), self.tol)

    __hash__ = None


def block_coords(tau):
    """(p123, X, Y, p456) of an arbitrary 20-vector (X, Y not necessarily symmetric)."""
    tau = as_form20(tau)
    exact = la.is_exact(tau)
    X = la.zeros((3, 3), exact)
    Y = la.zeros((3, 3), exact)
    vals = {}
    for (blk, r, c), (slot, s) in COORD_TABLE.items():
        v = tau[slot] if s > 0 else -tau[slot]
        if blk == "X":
            X[r, c] = v
        elif blk == "Y":
            Y[r, c] = v
        else:
            vals[blk] = v
    return vals["p123"], X, Y, vals["p456"]


def from20(tau, side="vector", tol=la.DEFAULT_TOL):
    """EffForm from an effective 20-vector (raises if not effective)."""
    p123, X, Y, p456 = block_coords(tau)
    return EffForm(p123, X, Y, p456, side, tol)


def eff_from_triples(coeffs, side="vector"):
    return from20(form20(coeffs), side)


def effective_basis(exact=True):
    """The 14 coordinate EffForms (vector side)."""
    out = []
    one = la.ONE if exact else 1.0
    z = la.zeros((3, 3), exact)
    out.append(EffForm(one, z, z, 0 * one if not exact else la.ZERO))
    for blk in ("X", "Y"):
        for r in range(3):
            for c in range(r, 3):
                M = la.zeros((3, 3), exact)
                M[r, c] = one
                M[c, r] = one
                if blk == "X":
                    out.append(EffForm(la.ZERO if exact else 0, M, z, la.ZERO if exact else 0))
                else:
                    out.append(EffForm(la.ZERO if exact else 0, z, M, la.ZERO if exact else 0))
    out.append(EffForm(la.ZERO if exact else 0, z, z, one))
    return out


def _vector_side20(eta):
    """20-vector on the vector side for an EffForm or raw 20-vector."""
    if isinstance(eta, EffForm):
        v = eta.to20()
        return duality_inverse20(v) if eta.side == "covector" else v
    return as_form20(eta)


def effective_project(tau, side="vector"):
    """tau - insert_omega(tau) ^ omega^-1, as an EffForm."""
    tau = as_form20(tau)
    v = insert_omega(tau)
    r = tau - wedge_vec_bivector(v, omega_inv_bivector(la.is_exact(tau)))
    return from20(r, side)


def sp_act20(g, tau, side="vector", tol=la.DEFAULT_TOL):
    g = la.as_matrix(g)
    if not sp.is_symplectic(g, tol):
        raise DomainError("group element is not symplectic")
    h = g if side == "vector" else sp.sp_inverse(g).T
    h, tau = la.common_mode(h, as_form20(tau))
    return lambda3_matrix(h) @ tau


def sp_act_form(g, tau, side=None, tol=la.DEFAULT_TOL):
    """Action of a symplectic matrix on a three-form or EffForm.

    Vectors transform by g and covectors by g^-T.  A raw 20-vector is read on
    ``side`` (default vector); an EffForm uses its own side.
    """
    if isinstance(tau, EffForm):
        return from20(sp_act20(g, tau.to20(), tau.side, tol), tau.side)
    return sp_act20(g, tau, side or "vector", tol)


_FLAT = sp.GRAM.T.copy()  # omega-flat: covector components of v are GRAM^T v


def duality20(tau):
    """Substitution e1->x4, e2->x5, e3->x6, e4->-x1, e5->-x2, e6->-x3 triple-wise."""
    tau = as_form20(tau)
    F = _FLAT if la.is_exact(tau) else la.to_float(_FLAT)
    return lambda3_matrix(F) @ tau


def duality_inverse20(tau):
    tau = as_form20(tau)
    F = sp.GRAM if la.is_exact(tau) else la.to_float(sp.GRAM)
    return lambda3_matrix(F) @ tau


def duality(eta):
    """Move an EffForm to the opposite side with the same substitution.

    Applying it twice multiplies by -1.
    """
    other = "covector" if eta.side == "vector" else "vector"
    return from20(duality20(eta.to20()), other)


def duality_inverse(eta):
    """Exact inverse of ``duality``."""
    other = "covector" if eta.side == "vector" else "vector"
    return from20(duality_inverse20(eta.to20()), other)


def to_vector_side(eta):
    return eta if eta.side == "vector" else duality_inverse(eta)


def to_covector_side(eta):
    return eta if eta.side == "covector" else duality(eta)


# ---------------------------------------------------------------------------
# Lagrangian frames and the big cell


def check_frame(F, tol=la.DEFAULT_TOL):
    F = la.as_matrix(F)
    if F.shape != (6, 3):
        raise FrameError("a frame is a 6x3 matrix")
    if la.rank(F, tol) != 3:
        raise FrameError("frame columns are linearly dependent")
    return F


def is_lagrangian(F, tol=la.DEFAULT_TOL):
    F = check_frame(F, tol)
    return la.is_zero_matrix(F.T @ sp.gram_like(F) @ F, tol, max(la.scale_of(F) ** 2, 1.0))


def plucker_vol(F, tol=la.DEFAULT_TOL):
    """l1 ^ l2 ^ l3 for the columns of a rank-3 frame."""
    return plucker_coords(check_frame(F, tol))


def big_cell_frame(U):
    U = la.as_matrix(U)
    return np.concatenate([la.eye(3, la.is_exact(U)), U], axis=0)


def big_cell(U, tol=la.DEFAULT_TOL):
    """(1, U, adj U, det U) in block coordinates: the Plucker point of [I; U]."""
    U = la.as_matrix(U)
    if U.shape != (3, 3) or not la.is_symmetric(U, tol):
        raise ValidationError("Hessian point must be a symmetric 3x3 matrix")
    one = la.ONE if la.is_exact(U) else 1.0
    return EffForm(one, U, la.adjugate(U), la.det(U), "vector")


def random_effective(rng, exact=True, bound=5, side="vector"):
    """Effective form with independent entries: integers in [-bound, bound]
    on the exact path, standard normals otherwise."""
    def draw():
        if exact:
            return la.qq(int(rng.integers(-bound, bound + 1)))
        return complex(rng.normal())

    def sym():
        M = la.zeros((3, 3), exact)
        for i in range(3):
            for j in range(i, 3):
                M[i, j] = M[j, i] = draw()
        return M

    return EffForm(draw(), sym(), sym(), draw(), side)
