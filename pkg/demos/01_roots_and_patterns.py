"""Roots, sign patterns and moduli orders of a few hand-picked polynomials.

Run with ``python demos/01_roots_and_patterns.py``.
"""
from fractions import Fraction as F

from hypatlas.patterns import canonical_mo, descartes_counts, moduli_order_of, sign_pattern
from hypatlas.polycore import Polynomial, expand, isolate_real_roots, square_free_decomposition
from hypatlas.rootlab import all_roots, is_hyperbolic

# %% A hyperbolic quartic with a double root and two roots of equal modulus.
P = expand({F(-1, 2): 2, F(1, 2): 1, F(3): 1})
print("P =", P)
print("square-free factors:", [(str(f), m) for f, m in square_free_decomposition(P)])
print("isolating intervals:", [f"[{lo}, {hi}]" for lo, hi in isolate_real_roots(P)])

roots = all_roots(P)
print("roots:", [(str(e.value), e.multiplicity) for e in roots.entries])
print("hyperbolic:", is_hyperbolic(P))

# %% The sign pattern bounds positive and negative roots (Descartes).  For a
# hyperbolic polynomial with no zero root the bounds are attained.
sp = sign_pattern(P)
print("sign pattern:", sp, "->", descartes_counts(sp))

# Ordering the roots by absolute value and writing P/N for their signs gives the
# moduli order; equal moduli are joined with '='.
print("moduli order:", moduli_order_of(P))
print("canonical order for this sign pattern:", canonical_mo(sp))

# %% The float path gives the same answer on the rounded coefficients, up to tolerance.
Pf = P.to_float()
print("float roots:", [(round(e.value, 12), e.multiplicity) for e in all_roots(Pf).entries])
print("float moduli order:", moduli_order_of(Pf))

# %% A non-hyperbolic example: x^4 + 1 has no real roots at all.
Q = Polynomial.from_coords(0, 0, 0, 1)
print("\nQ =", Q, "hyperbolic:", bool(is_hyperbolic(Q)))
