"""Orbit invariants of symplectic 3D Monge-Ampere equations.

Submodules: linalg, symplectic, forms, moment, mae, classifier, suite, cli.
"""

__version__ = "0.1.0"
