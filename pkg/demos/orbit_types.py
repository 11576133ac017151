"""Classify a few Monge-Ampere equations by the orbit of their three-form.

An equation c0 + <lin, U> + <cof, adj U> + c3 det U = 0 in the Hessian U is
built from its coefficients, then classified through its covector-side form.

Run:  python3 demos/orbit_types.py
"""

from fractions import Fraction

import numpy as np

from mae_orbits import classifier as cl
from mae_orbits import mae
from mae_orbits import moment as mo
from mae_orbits import symplectic as sp

Z = np.zeros((3, 3), dtype=int)


def entry(i, j, value=1):
    M = np.zeros((3, 3), dtype=object)
    M[i, j] = M[j, i] = value if i == j else Fraction(value, 2)
    return M


EQUATIONS = {
    "det Hess u = 1": mae.coeffs(-1, Z, Z, 1),
    "u_23 = 0": mae.coeffs(0, entry(1, 2), Z, 0),
    "u_11 = 0": mae.coeffs(0, entry(0, 0), Z, 0),
    "wave": mae.coeffs(0, np.diag([1, 1, -1]), Z, 0),
}

for name, c in EQUATIONS.items():
    eta = c.as_form()
    label = mo.classify_3form(eta).label
    q = mo.klr(eta)
    image = cl.classify_quadric(q).label
    print(f"{name:16s} F = {mae.equation_polynomial(c)}")
    print(f"{'':16s} class {label}, klr = {sp.polynomial_of_quad(q)}  ({image})")
