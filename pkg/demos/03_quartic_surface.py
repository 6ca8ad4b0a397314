"""The quartic surface Φ = 0 and the discriminant curves that cut it.

Φ(a, b, c, h) = a²h + (c − ab)c vanishes, for a ≠ 0, exactly when the quartic has two roots
summing to zero (an opposite pair ±v or an imaginary pair ±i√A).
"""
from fractions import Fraction as F

from hypatlas.curves import curve_residuals, emit_curve
from hypatlas.polycore import EvenTimesQuadratic, OppositePair, Poly, expand
from hypatlas.strata import etilde_membership, landmarks, phi, whitney_coordinates
from hypatlas.verify import contact_order_check, hessian_grid

# %% Φ on the two families it is built to detect.
opp = expand(OppositePair(F(2, 3), Poly((F(1, 5), F(-1, 2), 1))))
imag = expand(EvenTimesQuadratic(F(3), F(1, 7), F(-2)))
for name, P in (("opposite pair", opp), ("imaginary pair", imag)):
    print(f"{name:>15}: {P}   Φ = {phi(*P.coords)}   {etilde_membership(P)}")

# In Whitney coordinates ω = c − ab/2, ϱ = b²/4 − h the surface is an umbrella.
print("\nWhitney coordinates of the opposite-pair quartic:", whitney_coordinates(*opp.coords))

# %% The Hessian of Φ drops to rank 1 exactly along the parabola 4h = b².
grid = hessian_grid(20)
print("\nHessian ranks on a 20x20 grid:", grid.rank_counts, "misclassified:", len(grid.misclassified))

# %% Landmark quartics, with Φ.
print()
for lm in landmarks(4):
    print(f"  {lm.name:>10}: {lm.description:<58} Φ = {phi(*lm.coords)}")

# %% The curve Pcal4 lies on both Φ = 0 and the disc slice; it touches
# h = c(b − c) at the tangency point to order four.
curve = emit_curve("Pcal4", (F(0), F(1, 2)), 5)
for t, pt in zip(curve.parameters, curve.samples):
    print(f"  u = {t}: (b, c, h) = {tuple(str(x) for x in pt)}")
print("largest residual:", max(max(abs(x) for x in r) for r in curve_residuals(curve)))
print("contact order:", contact_order_check(step=1e-3))
