"""Print the adjoint-orbit table with the dimension of each orbit.

Run:  python3 demos/quadric_atlas.py
"""

from mae_orbits import classifier as cl

for label, (expr, names, kind, dim) in cl.TABLE.items():
    Q = cl.normal_form_rep(label, cl.default_params(label))
    assert cl.classify_quadric(Q).label == label
    print(f"{label:24s} {kind:10s} dim {cl.orbit_dimension(Q):2d}  {expr}")
