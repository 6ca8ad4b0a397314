"""End-to-end acceptance checks, each with its runtime budget."""
import time
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from hypatlas.curves import emit_curve
from hypatlas.patterns import ModuliOrder, SignPattern, canonical_mo
from hypatlas.polycore import Polynomial, discriminant_resultant, expand
from hypatlas.search import (
    build_incidence,
    canonical_report,
    compare_expected,
    descartes_sweep,
    rigid_report,
)
from hypatlas.strata import D3_STRATA, classify, landmark, phi
from hypatlas.verify import (
    contact_order_check,
    hessian_grid,
    jacobian_batch,
    phi_vanishing_check,
    resultant_family_check,
    whitney_identity_check,
)

F = Fraction


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f} s, budget {self.seconds} s"


@pytest.mark.acceptance("landmark regression, exact")
def test_landmark_regression():
    with Budget(1):
        T = landmark("T", 3)
        assert T.coords == (1, F(1, 3), F(1, 27))
        assert T.polynomial == expand({F(-1, 3): 3})
        assert classify(T.polynomial).enumerated_id == "19"

        S = landmark("S", 3)
        assert S.coords == (1, 0, F(-4, 27))
        assert S.polynomial == expand({F(-2, 3): 2, F(1, 3): 1})
        assert classify(S.polynomial).enumerated_id == "21"

        cusp = expand({F(-1, 4): 4})
        assert cusp.coords == (1, F(3, 8), F(1, 16), F(1, 256))
        assert landmark("swallowtail", 4).coords == cusp.coords
        assert classify(cusp).partition == (4,)

        B = landmark("B", 4)
        quad = Polynomial.from_coords(F(1, 2), F(3, 40))
        assert B.coords == (1, F(2, 5), F(3, 40), F(9, 1600))
        assert B.polynomial == quad * quad
        assert discriminant_resultant(B.polynomial) == 0


@pytest.mark.acceptance("Φ vanishes on (x²+A)(x²+ux+v); Φ(B) = −3/160")
def test_phi_characterization():
    with Budget(10):
        rep = phi_vanishing_check(10_000, seed=0)
        assert rep.samples == 10_000
        assert rep.max_residual == 0 and not rep.failures
        assert phi(1, F(2, 5), F(3, 40), F(9, 1600)) == F(-3, 160)


@pytest.mark.acceptance("Whitney identity and Hessian rank map")
def test_whitney_and_hessian():
    with Budget(30):
        rep = whitney_identity_check(1000, seed=0)
        assert rep.samples == 1000 and rep.max_residual == 0 and not rep.failures
        grid = hessian_grid(50)
        assert grid.points == 2500
        assert grid.misclassified == []
        counts = {int(k): v for k, v in grid.rank_counts.items()}
        assert counts[1] == grid.on_parabola > 0
        assert counts[2] == 2500 - grid.on_parabola
        assert set(counts) == {1, 2}


@pytest.mark.acceptance("resultant factorization of the (x²−u²)(x²+x+w) family")
def test_resultant_factorization():
    with Budget(30):
        rep = resultant_family_check(100, seed=0)
        assert rep.samples == 100
        assert rep.vanishing_mismatches == []
        assert len(rep.ratios) == 1


@pytest.mark.acceptance("Jacobian ranks d−1 for d = 3..8")
def test_jacobian_ranks():
    with Budget(60):
        rep = jacobian_batch(range(3, 9), trials=100, seed=0)
        assert rep.failures == []
        assert rep.ranks == {str(d): [d - 1] for d in range(3, 9)}


@pytest.mark.acceptance("tangency point and contact order")
def test_tangency_point():
    with Budget(5):
        poly = emit_curve("Pcal4", (F(0), F(1, 2)), 3)
        assert poly.parameters[1] == F(1, 4)
        b, c, h = poly.samples[1]
        assert (b, c, h) == (F(1, 8), F(-1, 16), F(-3, 256))
        assert (b - 2 * c) ** 2 + c == 0
        assert h == c * (b - c)
        rep = contact_order_check(step=1e-3)
        assert rep.numeric_order >= 4
        assert rep.exact_order >= 4


def _cubic_root_lattice(a, n, span):
    """Coefficient points on the slice with all three roots on the 1/n lattice."""
    out = set()
    for i, j in combinations_with_replacement(range(-span * n, span * n + 1), 2):
        r1, r2 = F(i, n), F(j, n)
        r3 = -a - r1 - r2
        if r3 >= r2:
            out.add((F(a), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3))
    return out


def _coefficient_lattice(a, nb, nc):
    return {(F(a), F(i, nb), F(j, nc)) for i in range(-2 * nb, nb // 2 + 1) for j in range(-nc, nc // 4 + 1)}


def _sweep(points):
    seen, hyperbolic = {}, 0
    for pt in points:
        lb = classify(Polynomial.from_coords(*pt))
        if lb.hyperbolic == "outside":
            continue
        hyperbolic += 1
        assert lb.enumerated_id is not None, pt
        key = (str(lb.sign_pattern), str(lb.moduli_order))
        assert seen.setdefault(lb.enumerated_id, key) == key
    return seen, hyperbolic


@pytest.mark.acceptance("cubic stratum sweep on the a = 1 and a = 0 slices")
def test_cubic_stratum_sweep():
    with Budget(60):
        grid = _cubic_root_lattice(1, 72, 2) | _coefficient_lattice(1, 16, 64)
        seen, hyperbolic = _sweep(grid)
        assert hyperbolic >= 10_000
        numbered = {str(k) for k in range(1, 23)}
        assert set(seen) == numbered
        for sid, pair in seen.items():
            assert pair == D3_STRATA[sid]

        grid0 = _cubic_root_lattice(0, 12, 2) | _coefficient_lattice(0, 8, 8)
        seen0, _ = _sweep(grid0)
        variants = {"5a", "6a", "11a", "12a", "14a16a", "18a"}
        assert variants <= set(seen0)
        for sid in variants:
            assert seen0[sid] == D3_STRATA[sid]


@pytest.mark.acceptance("Descartes equalities over 10⁵ samples, d = 2..8")
def test_descartes_equalities():
    with Budget(60):
        for d in range(2, 9):
            rep = descartes_sweep(d, 100_000, seed=d)
            assert rep.admitted == 100_000
            assert rep.violations == 0, d


@pytest.mark.acceptance("canonicity and rigidity tables at n = 10⁵")
def test_canonicity_rigidity():
    with Budget(300):
        t2 = build_incidence(2, 100_000, seed=0)
        canon2 = canonical_report(t2)
        assert len(canon2) == 4 and all(e.canonical for e in canon2)
        rigid2 = rigid_report(t2)
        assert len(rigid2) == 4 and all(e.rigid for e in rigid2)

        t3 = build_incidence(3, 100_000, seed=0)
        assert compare_expected(t3) == []
        assert {str(e.mo) for e in rigid_report(t3) if e.rigid} == {"N<N<N", "N<P<N", "P<N<P", "P<P<P"}
        verdict3 = {str(e.sp): e.canonical for e in canonical_report(t3)}
        assert verdict3["(+,+,+,+)"] and verdict3["(+,+,-,+)"] and verdict3["(+,+,+,-)"]
        assert not verdict3["(+,+,-,-)"]

        t4 = build_incidence(4, 100_000, seed=0)
        verdict4 = {str(e.sp): e for e in canonical_report(t4.filter_a(1))}
        for sp in ("(+,+,+,+,+)", "(+,+,+,+,-)", "(+,+,-,+,+)", "(+,+,+,-,+)", "(+,+,-,+,-)"):
            assert verdict4[sp].observed == (canonical_mo(SignPattern.parse(sp)),)
        for sp in ("(+,+,+,-,-)", "(+,+,-,-,-)", "(+,+,-,-,+)"):
            assert len(verdict4[sp].observed) >= 2
        rigid4 = {e.mo for e in rigid_report(t4, a_sign=1) if e.rigid}
        assert rigid4 == {ModuliOrder.parse("P<N<P<N"), ModuliOrder.parse("N<N<N<N")}


@pytest.mark.acceptance("canonical moduli order golden value")
def test_canonical_mo_golden():
    with Budget(1):
        assert str(canonical_mo(SignPattern.parse("(+,-,+,-,+,+,-,-,+)"))) == "P<N<P<N<P<P<P<P"
