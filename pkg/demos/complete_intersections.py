"""Complete intersections are exactly the rings where Ext_E(k, k) has
empty support, i.e. vanishes in high degrees.

    python demos/complete_intersections.py
"""
from kozhom.dgmodule import RingSpec
from kozhom.families import build_koszul, xy_yz_resolution
from kozhom.support import is_complete_intersection

for vars_, f in [(["x"], ["x"]), (["x", "y"], ["x^2", "y^2"]), (["x", "y", "z"], ["x^2", "y^3", "z^2"])]:
    v = is_complete_intersection(build_koszul(RingSpec.make(vars_, f)))
    print(f"Q/({', '.join(f)}): {v}")

v = is_complete_intersection(xy_yz_resolution())
print(f"Q/(xy, yz): {v}")
print("  support:", v.report.summary())
