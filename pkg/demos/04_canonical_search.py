"""Which sign patterns force their moduli order?

Sampling hyperbolic polynomials by their roots, we tabulate every
(sign pattern, moduli order) pair seen.  A sign pattern is called canonical
when only its canonical moduli order occurs.  A moduli order is rigid when only
one sign pattern occurs.
"""
from hypatlas.search import build_incidence, canonical_report, descartes_sweep, rigid_report

N = 50_000

for d in (3, 4):
    table = build_incidence(d, N, seed=1, restrict="a>0")
    print(f"\nd = {d}: {table.admitted} admitted samples, {len(table.counts)} distinct pairs")
    for e in canonical_report(table):
        verdict = "canonical" if e.canonical else f"{len(e.observed)} orders"
        print(f"  {str(e.sp):<16} {verdict:<12} e.g. {e.observed[0]}")

    full = build_incidence(d, N, seed=1)
    rigid = [str(e.mo) for e in rigid_report(full, a_sign=1) if e.rigid]
    print("  rigid moduli orders with a > 0:", ", ".join(rigid))

# The sampler only produces generic hyperbolic polynomials, so the Descartes
# bounds should be attained every time.
for d in range(2, 9):
    rep = descartes_sweep(d, 20_000, seed=d)
    print(f"Descartes, d = {d}: {rep.violations} violations in {rep.admitted} samples")
