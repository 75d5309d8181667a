"""Ext of k over the codepth-3 multiplication classes, read from the
closed-fiber data of each class.

    python demos/codepth3_classes.py
"""
from kozhom.dgmodule import residue_field_datum
from kozhom.families import codepth3_family
from kozhom.opcomplex import build_ce_closed_fiber, hilbert_function
from kozhom.support import hyperplane_check, pointwise_support

classes = [
    ("CI", "CI", 3, 3, 1, {}),
    ("TE", "TE", 3, 3, 1, {}),
    ("B", "B", 3, 3, 1, {}),
    ("G(2)", "G", 3, 3, 2, {"r": 2}),
    ("H(1,1)", "H", 3, 3, 2, {"hp": 1, "hq": 1}),
    ("H(2,1)", "H", 3, 3, 1, {"hp": 2, "hq": 1}),
]

k = residue_field_datum(3)
for label, cls, n, m, l, kw in classes:
    data = codepth3_family(cls, n, m, l, **kw)
    c = build_ce_closed_fiber(data, k)
    dims = [v for d, v in sorted(hilbert_function(c, 16, "internal").dims.items()) if d % 2 == 0]
    rep = pointwise_support(c, with_annihilator=False)
    print(f"{label}({n},{m},{l}): even dims {dims}")
    print(f"    support {rep.summary()}; {hyperplane_check(rep)}")
