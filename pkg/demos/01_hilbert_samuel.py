"""Hilbert-Samuel data for a small gallery of curve singularities.

H1(t) = dim R/(I + M^(t+1)) counts the quotient dimensions level by level;
once the graded differences stabilize, the tail is the linear polynomial
e0*(t+1) - e1 and the pair (e0, e1) summarizes multiplicity and deviation.
"""

from curvemoduli import QQ, IdealPresentation, hilbert_data, min_generators, initial_ideal

GALLERY = [
    ("smooth line", ["x2"], 2),
    ("node", ["x1*x2"], 2),
    ("cusp", ["x2^2 - x1^3"], 2),
    ("triple line", ["x1^3"], 2),
    ("space curve (t^3, t^4, t^5)",
     ["x1*x3 - x2^2", "x1^3 - x2*x3", "x1^2*x2 - x3^2"], 3),
    ("determinantal curve", ["x3^2", "x2*x3", "x1^2*x2"], 3),
]

for name, gens, n_vars in GALLERY:
    level = 10
    ideal = IdealPresentation.parse(gens, n_vars, QQ, level)
    hd = hilbert_data(ideal, level)
    data = initial_ideal(ideal, level)
    print(f"{name}:  I = ({', '.join(gens)})")
    print(f"  H1     = {hd.values}")
    print(f"  graded = {hd.graded}")
    print(f"  (e0, e1) = ({hd.e0}, {hd.e1}), stabilizes at t = {hd.stab_index}")
    print(f"  tail polynomial: {hd.e0}*(T+1) - {hd.e1}")
    print(f"  initial ideal generator degrees v* = {data.vstar};"
          f" minimal generators of I: {min_generators(ideal, level)}")
    print()

# Redundant presentations change nothing: the invariants see the ideal only.
lean = IdealPresentation.parse(["x1^2 - x2^3"], 2, QQ, 8)
fat = IdealPresentation.parse(["x1^2 - x2^3", "x1^2*x2^2 - x2^5"], 2, QQ, 8)
print("presentation independence:",
      hilbert_data(lean, 8).values == hilbert_data(fat, 8).values)
