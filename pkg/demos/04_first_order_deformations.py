"""First-order deformations over k[eps]/(eps^2): family or not?

Two routes decide.  The colon criterion asks each perturbation g_i to lie
in (I + M^(e0+1) : I + M^(e0+1-v_i)); the direct route counts dimensions of
the dual-number quotient.  They agree whenever the base generators form a
standard basis -- and the classical perturbation x1^3 + eps*x1 fails both.
"""

from curvemoduli import (
    QQ,
    DualPoly,
    FirstOrderDeformation,
    IdealPresentation,
    cm_colon_identity,
    colon,
    determinantal_ideal,
    flatness_direct,
    is_family_first_order,
    parse_poly,
    poly_str,
)

base = IdealPresentation.parse(["x1^3"], 2, QQ, 8)

for g_text in ("x1", "x2^3", "x1^4", "0"):
    g = parse_poly(g_text, 2, QQ, 8) if g_text != "0" else None
    d = FirstOrderDeformation(base, [g], 3)
    fam, verdicts = is_family_first_order(d)
    flat, dims = flatness_direct(d, 4)
    print(f"x1^3 + eps*({g_text}):  colon criterion {fam},"
          f" direct flatness {flat}  (dims {dims})")
print()

# the colon space behind the criterion, explicitly
cs = colon(base, IdealPresentation.parse(["x1", "x2"], 2, QQ, 8), 4)
print("colon (I+M^4 : M):", ", ".join(poly_str(p) for p in cs.basis))
print("contains x2^3:", cs.contains(parse_poly("x2^3", 2, QQ, 4)),
      " contains x1:", cs.contains(parse_poly("x1", 2, QQ, 4)))
print()

# graded Cohen-Macaulay rings satisfy (m^(e0+1) : m^(e0+1-v)) = m^v
for e0 in (2, 3, 4):
    I = IdealPresentation.parse([f"x1^{e0}"], 2, QQ, e0 + 2)
    print(f"colon identity for x1^{e0}:", cm_colon_identity(I, e0, [e0]))
print()

# deforming a syzygy matrix instead of the equations: always a family
lvl = 8
z = parse_poly("x1", 3, QQ, lvl).scale(0)
p = lambda s: parse_poly(s, 3, QQ, lvl)
matrix = [
    [DualPoly(p("x3"), p("x1^2")), DualPoly(z)],
    [DualPoly(p("x1^2"), p("x1^4")), DualPoly(p("x3"), p("x2^2"))],
    [DualPoly(z), DualPoly(p("x2"), p("x1*x3"))],
]
d = determinantal_ideal(matrix)
print("perturbed determinantal matrix:")
print("  base minors:", ", ".join(poly_str(g) for g in d.base.generators))
print("  eps parts:  ", ", ".join(poly_str(g) for g in d.perturbations))
print("  family:", is_family_first_order(d)[0],
      " flat:", flatness_direct(d, d.e0 + 1)[0])
