"""Supports of the jorgensen family over Q = F_5[x, y, z], f = (xy, yz).

Each module M_(p:q) has Ext against k of size (1, 0, 2, 0, 2, ...) and its
support is the single point (p:q) of P^1.  Two different points give
modules whose Ext vanishes in high degrees.

    python demos/jorgensen_walkthrough.py
"""
from kozhom.dgmodule import reduce_at_origin, residue_field_datum, verify_dg_axioms
from kozhom.families import jorgensen_family
from kozhom.opcomplex import build_ce_closed_fiber, hilbert_function
from kozhom.support import pointwise_support

points = [(1, a) for a in range(5)] + [(0, 1)]
k = residue_field_datum(2)

m = jorgensen_family(2, 3)
print("M_(2:3): differentials")
for d, mat in sorted(m.complex.diffs.items()):
    print(f"  d{d} = {[[str(e) for e in row] for row in mat.to_rows()]}")
print("axioms:", "ok" if verify_dg_axioms(m).ok else "FAIL")
print()

print("support of (M_(p:q), k), internal grading, d <= 20")
for pq in points:
    c = build_ce_closed_fiber(reduce_at_origin(jorgensen_family(*pq)), k)
    rep = pointwise_support(c, dmax=20, deg_bound=3, grading="internal")
    dims = [rep.hilbert[d] for d in range(0, 11, 2)]
    print(f"  {pq}: {rep.summary():24s} annihilator {rep.annihilator}  even dims {dims}")
print()

a, b = (1, 0), (0, 1)
c = build_ce_closed_fiber(reduce_at_origin(jorgensen_family(*a)), reduce_at_origin(jorgensen_family(*b)))
h = hilbert_function(c, 20)
print(f"(M_{a}, M_{b}): dims {list(h.values())}")
print("support:", pointwise_support(c, with_annihilator=False).summary())
