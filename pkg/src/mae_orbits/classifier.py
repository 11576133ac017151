"""Sp(6, C)-orbits of quadratic forms on C.

Every nonzero orbit has a representative in a fixed table of 23 rows: seven
nilpotent, six semisimple and ten mixed.  The classifier never builds a
conjugating matrix.  It reads the orbit from spectral invariants of
X = phi_inv(Q): the multiplicities of the nonzero eigenvalue pairs +-a, the
Jordan partition on each generalized eigenspace, and the partition on the
kernel.  These invariants are complete for the table.

Representatives are written in the table notation (see
``symplectic.algebra_from_table_notation``), in which eps^i e_j names the
matrix entry S_ij of the algebra element.
"""

import cmath
from dataclasses import dataclass

import numpy as np
import sympy

from . import linalg as la
from . import symplectic as sp
from .errors import AmbiguityError, InvalidParametersError, ValidationError

# label -> (expression, parameter names, orbit type, dimension)
TABLE = {
    "q[6]": ("eps1*e2 + eps2*e3 + e3**2", (), "nilpotent", 18),
    "q(111)": ("l*eps1*e1 + m*eps2*e2 + n*eps3*e3", ("lambda", "mu", "nu"), "semisimple", 18),
    "q(21)+X[h1-h2]": ("m*(eps1*e1 + eps2*e2) + n*eps3*e3 + eps1*e2", ("mu", "nu"), "mixed", 18),
    "q(11)+X[-2h1]": ("m*eps2*e2 + n*eps3*e3 + eps1**2", ("mu", "nu"), "mixed", 18),
    "q(2)+X[h2-h3]+X[-2h1]": ("n*(eps2*e2 + eps3*e3) + eps2*e3 + eps1**2", ("nu",), "mixed", 18),
    "q(3)+X[h1-h2]+X[h2-h3]": ("n*(eps1*e1 + eps2*e2 + eps3*e3) + eps1*e2 + eps2*e3", ("nu",),
                               "mixed", 18),
    "q(1)+X[h1-h2]-X[2h2]": ("n*eps3*e3 + eps1*e2 + e2**2", ("nu",), "mixed", 18),
    "q[4,2]": ("eps1*e3 + e2**2 + e3**2", (), "nilpotent", 16),
    "q(21)": ("m*(eps1*e1 + eps2*e2) + n*eps3*e3", ("mu", "nu"), "semisimple", 16),
    "q(11)": ("m*eps2*e2 + n*eps3*e3", ("mu", "nu"), "semisimple", 16),
    "q(2)+X[h2-h3]": ("n*(eps2*e2 + eps3*e3) + eps2*e3", ("nu",), "mixed", 16),
    "q(2)+X[-2h1]": ("n*(eps2*e2 + eps3*e3) + eps1**2", ("nu",), "mixed", 16),
    "q(3)+X[h1-h2]": ("n*(eps1*e1 + eps2*e2 + eps3*e3) + eps1*e2", ("nu",), "mixed", 16),
    "q(1)-1/2X[h1+h2]": ("n*eps3*e3 + e1*e2", ("nu",), "mixed", 16),
    "q[4,1^2]": ("eps1*e2 + e2**2", (), "nilpotent", 14),
    "q[3^2]": ("eps1*e3 + e2*e3", (), "nilpotent", 14),
    "q(2)": ("n*(eps2*e2 + eps3*e3)", ("nu",), "semisimple", 14),
    "q(1)-X[2h1]": ("n*eps3*e3 + e1**2", ("nu",), "mixed", 14),
    "q[2^3]": ("e1**2 + e2**2 + e3**2", (), "nilpotent", 12),
    "q(3)": ("n*(eps1*e1 + eps2*e2 + eps3*e3)", ("nu",), "semisimple", 12),
    "q[2^2,1^2]": ("e1**2 + e2**2", (), "nilpotent", 10),
    "q(1)": ("n*eps3*e3", ("nu",), "semisimple", 10),
    "q[2,1^4]": ("e1**2", (), "nilpotent", 6),
    "zero": ("0", (), "zero", 0),
}

LABELS = tuple(TABLE)
NONZERO_LABELS = tuple(k for k in LABELS if k != "zero")

# Spectral signature -> label.  A signature is
#   (tuple of (multiplicity, partition) over nonzero pairs +-a, kernel partition)
# with pairs ordered by multiplicity.  Regenerated and compared in the tests.
SIGNATURES = {
    ((), (6,)): "q[6]",
    ((), (4, 2)): "q[4,2]",
    ((), (4, 1, 1)): "q[4,1^2]",
    ((), (3, 3)): "q[3^2]",
    ((), (2, 2, 2)): "q[2^3]",
    ((), (2, 2, 1, 1)): "q[2^2,1^2]",
    ((), (2, 1, 1, 1, 1)): "q[2,1^4]",
    ((), (1, 1, 1, 1, 1, 1)): "zero",
    (((1, (1,)), (1, (1,)), (1, (1,))), ()): "q(111)",
    (((2, (1, 1)), (1, (1,))), ()): "q(21)",
    (((2, (2,)), (1, (1,))), ()): "q(21)+X[h1-h2]",
    (((1, (1,)), (1, (1,))), (1, 1)): "q(11)",
    (((1, (1,)), (1, (1,))), (2,)): "q(11)+X[-2h1]",
    (((2, (1, 1)),), (1, 1)): "q(2)",
    (((2, (2,)),), (1, 1)): "q(2)+X[h2-h3]",
    (((2, (1, 1)),), (2,)): "q(2)+X[-2h1]",
    (((2, (2,)),), (2,)): "q(2)+X[h2-h3]+X[-2h1]",
    (((3, (1, 1, 1)),), ()): "q(3)",
    (((3, (2, 1)),), ()): "q(3)+X[h1-h2]",
    (((3, (3,)),), ()): "q(3)+X[h1-h2]+X[h2-h3]",
    (((1, (1,)),), (1, 1, 1, 1)): "q(1)",
    (((1, (1,)),), (2, 1, 1)): "q(1)-X[2h1]",
    (((1, (1,)),), (2, 2)): "q(1)-1/2X[h1+h2]",
    (((1, (1,)),), (4,)): "q(1)+X[h1-h2]-X[2h2]",
}


@dataclass(frozen=True)
class NormalForm:
    label: str
    params: tuple = ()

    @property
    def dim(self):
        return TABLE[self.label][3]

    @property
    def orbit_type(self):
        return TABLE[self.label][2]

    @property
    def expression(self):
        return TABLE[self.label][0]

    @property
    def param_names(self):
        return TABLE[self.label][1]


@dataclass(frozen=True)
class JordanData:
    clusters: tuple
    paired: bool


# ---------------------------------------------------------------------------
# Weyl group normalization


def _is_zero_scalar(x):
    return (not x) if isinstance(x, la.GaussianRational) else complex(x) == 0


def sign_normalize(x):
    """x or -x, whichever has Re > 0 (Im > 0 when Re = 0).

    On the float path a real part below 1e-12 |x| counts as zero.
    """
    re, im = la.re_im(x)
    if not isinstance(x, la.GaussianRational) and abs(re) <= 1e-12 * abs(complex(x)):
        re = 0
    if re < 0 or (re == 0 and im < 0):
        return -x
    return x


def _order_key(x):
    z = la.to_complex(x)
    mag = la.abs2(x)
    return (-mag, round(cmath.phase(z), 12))


def weyl_canonicalize(params):
    """Signed-permutation normal form: sign-normalize, then sort by |.| descending."""
    params = list(params)
    if len(params) > 3:
        raise ValidationError("at most three parameters")
    return tuple(sorted((sign_normalize(p) for p in params), key=_order_key))


def canonical_params(label, params):
    """Canonical parameters for a row of the table.

    Every parameter may change sign.  Only parameters with interchangeable
    roles are sorted: all three for q(111), the two of the (11) rows.  The
    doubled eigenvalue mu of the (21) rows keeps its place before nu.
    """
    params = tuple(sign_normalize(p) for p in params)
    if label.startswith("q(111)") or label.startswith("q(11)"):
        return weyl_canonicalize(params)
    return params


# ---------------------------------------------------------------------------
# representatives


def _pm_equal(a, b):
    if isinstance(a, la.GaussianRational) and isinstance(b, la.GaussianRational):
        return a == b or a == -b
    a, b = la.to_complex(a), la.to_complex(b)
    return abs(a - b) <= 1e-12 * max(1, abs(a)) or abs(a + b) <= 1e-12 * max(1, abs(a))


def check_params(label, params):
    if label not in TABLE:
        raise ValidationError(f"unknown label {label!r}")
    names = TABLE[label][1]
    if len(params) != len(names):
        raise InvalidParametersError(f"{label} takes {len(names)} parameter(s) {names}")
    for name, p in zip(names, params):
        if _is_zero_scalar(p):
            raise InvalidParametersError(f"{name} must be nonzero for {label}")
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            if _pm_equal(params[i], params[j]):
                raise InvalidParametersError(
                    f"{names[i]} = +-{names[j]} leaves the orbit type of {label}")


def _to_sympy_scalar(p):
    if isinstance(p, la.GaussianRational):
        return sympy.QQ_I.to_sympy(p)
    if la.is_exact_scalar(p):
        return sympy.nsimplify(p)
    return sympy.Float(complex(p).real) + sympy.I * sympy.Float(complex(p).imag) \
        if complex(p).imag else sympy.Float(complex(p).real)


def normal_form_rep(label, params=()):
    """Symmetric 6x6 matrix of the table's expression."""
    params = tuple(params)
    check_params(label, params)
    expr, names, _, _ = TABLE[label]
    syms = dict(zip(("l", "m", "n") if len(names) == 3 else ("m", "n") if len(names) == 2
                    else ("n",), params))
    exact = all(la.is_exact_scalar(p) for p in params)
    e = sympy.sympify(expr, locals={s.name: s for s in sp._SYMS})
    e = e.subs({sympy.Symbol(k): _to_sympy_scalar(v) for k, v in syms.items()})
    Q = sp.quad_from_table_notation(e)
    return la.as_matrix(Q, exact=exact if exact else False)


def default_params(label):
    """Generic rational parameters for a row."""
    n = len(TABLE[label][1])
    return tuple(la.qq(v) for v in (3, 2, 5)[:n]) if n != 2 else (la.qq(2), la.qq(5))


# ---------------------------------------------------------------------------
# spectral data


def _close(a, b, tol, scale):
    if isinstance(a, la.GaussianRational) and isinstance(b, la.GaussianRational):
        return a == b
    return abs(la.to_complex(a) - la.to_complex(b)) <= 10 * tol.threshold(scale)


def spectral_data(Q, tol=la.DEFAULT_TOL):
    """Jordan data of phi_inv(Q), with the clusters +-a paired and symmetrized."""
    X = sp.phi_inv(Q, tol)
    clusters = la.jordan_data(X, tol)
    scale = max(1.0, la.scale_of(X))
    out = []
    used = set()
    paired = True
    for i, (ev, part) in enumerate(clusters):
        if i in used:
            continue
        if _is_zero_scalar(ev) or (not isinstance(ev, la.GaussianRational)
                                   and abs(la.to_complex(ev)) <= 10 * tol.threshold(scale)):
            out.append((la.ZERO if isinstance(ev, la.GaussianRational) else 0j, tuple(part)))
            used.add(i)
            continue
        match = None
        for j, (ev2, part2) in enumerate(clusters):
            if j != i and j not in used and _close(ev2, -ev, tol, scale):
                match = j
                break
        if match is None or tuple(clusters[match][1]) != tuple(part):
            paired = False
            out.append((ev, tuple(part)))
            used.add(i)
            continue
        ev2 = clusters[match][0]
        if isinstance(ev, la.GaussianRational) and isinstance(ev2, la.GaussianRational):
            a = ev
        else:
            a = (la.to_complex(ev) - la.to_complex(ev2)) / 2
        out.append((a, tuple(part)))
        out.append((-a, tuple(part)))
        used.update((i, match))
    out.sort(key=lambda c: la._sort_key(c[0]))
    return JordanData(tuple(out), paired)


def signature(jd):
    """(nonzero pairs as (multiplicity, partition), kernel partition) plus pair values."""
    pairs = []
    kernel = ()
    for ev, part in jd.clusters:
        if _is_zero_scalar(ev):
            kernel = tuple(part)
            continue
        if sign_normalize(ev) != ev:
            continue
        pairs.append((sum(part), tuple(part), ev))
    pairs.sort(key=lambda p: (-p[0], [-x for x in p[1]], _order_key(p[2])))
    sig = (tuple((m, part) for m, part, _ in pairs), kernel)
    return sig, [ev for _, _, ev in pairs]


def classify_quadric(Q, tol=la.DEFAULT_TOL):
    Q = la.as_matrix(Q)
    if Q.shape != (6, 6) or not la.is_symmetric(Q, tol):
        raise ValidationError("quadratic form must be a symmetric 6x6 matrix")
    jd = spectral_data(Q, tol)
    if not jd.paired:
        raise AmbiguityError("eigenvalues do not pair as +-a within tolerance",
                             candidates=[jd.clusters])
    sig, values = signature(jd)
    label = SIGNATURES.get(sig)
    if label is None:
        raise AmbiguityError(f"spectral signature {sig} matches no table row", candidates=[sig])
    return NormalForm(label, canonical_params(label, values))


def orbit_dimension(Q, tol=la.DEFAULT_TOL):
    """Rank of Z -> [Z, phi_inv(Q)] on the 21-dimensional algebra."""
    X = sp.phi_inv(Q, tol)
    exact = la.is_exact(X)
    cols = []
    for Z in sp.sp_basis():
        Z = Z if exact else la.to_float(Z)
        cols.append((Z @ X - X @ Z).ravel())
    M = np.array(cols, dtype=object if exact else complex).T
    if not exact:
        tol = la.TolPolicy(tol.abs_tol * max(1.0, la.scale_of(X)), tol.rel_tol)
    return la.rank(M, tol)


def regenerate_signatures():
    """Signature of every table row at its default parameters (for the fixture test)."""
    out = {}
    for label in LABELS:
        jd = spectral_data(normal_form_rep(label, default_params(label)))
        out[signature(jd)[0]] = label
    return out
