"""A text map of the monic cubic slice a = 1.

Every point (b, c) of the slice x^3 + x^2 + b x + c is classified exactly and
printed as its stratum id; '.' marks non-hyperbolic cubics.  The open regions
show up as large blocks, curves and points only where the grid happens to hit
them.
"""
from collections import Counter
from fractions import Fraction as F

from hypatlas.polycore import Polynomial
from hypatlas.strata import D3_STRATA, classify, landmarks

ROWS, COLS = 25, 61
B_RANGE = (F(-1), F(1, 2))
C_RANGE = (F(-1, 4), F(1, 8))

glyphs = {}
tally = Counter()
print(f"b from {B_RANGE[0]} (left) to {B_RANGE[1]}, c from {C_RANGE[1]} (top) to {C_RANGE[0]}\n")
for r in range(ROWS):
    c = C_RANGE[1] - (C_RANGE[1] - C_RANGE[0]) * r / (ROWS - 1)
    line = []
    for k in range(COLS):
        b = B_RANGE[0] + (B_RANGE[1] - B_RANGE[0]) * k / (COLS - 1)
        lb = classify(Polynomial.from_coords(1, b, c))
        if lb.hyperbolic == "outside":
            line.append(".")
            continue
        tally[lb.enumerated_id] += 1
        # one printable character per stratum id
        ch = glyphs.setdefault(lb.enumerated_id, "0123456789ABCDEFGHIJKLMNOP"[len(glyphs) % 26])
        line.append(ch)
    print("".join(line))

print("\nlegend (id: sign pattern, moduli order, grid hits)")
for sid, ch in glyphs.items():
    sp, mo = D3_STRATA[sid]
    print(f"  {ch} = {sid:>3}: {sp:<12} {mo:<8} {tally[sid]}")

print("\nthe named points of the cubic picture:")
for lm in landmarks(3):
    lb = classify(lm.polynomial)
    print(f"  {lm.name}: {lm.description:<24} id {lb.enumerated_id}")
