from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from hypatlas.polycore import Polynomial, expand
from hypatlas.verify import (
    contact_order_check,
    hessian_grid,
    hessian_rank,
    jacobian_batch,
    jacobian_rank,
    jacobian_rank_imaginary,
    jacobian_transpose,
    nullspace,
    phi_hessian,
    phi_vanishing_check,
    quartic_resultant,
    rank_bareiss,
    resultant_family_check,
    resultant_product,
    transversality_check,
    transversality_mixed,
    umbrella_check,
    vandermonde_det,
    vandermonde_subset_sweep,
    whitney_identity_check,
)

F = Fraction
X = sympy.Symbol("x")


def W(*lower):
    return Polynomial.from_lower([F(x) for x in lower])


def sym_matrix(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])


@given(st.lists(st.lists(rationals(6), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_and_nullspace_match_sympy(rows):
    M = sym_matrix(rows)
    assert rank_bareiss(rows) == M.rank()
    ns = nullspace(rows)
    assert len(ns) == 4 - M.rank()
    for vec in ns:
        assert all(sum(r[k] * vec[k] for k in range(4)) == 0 for r in rows)


def test_jacobian_examples():
    rep = jacobian_rank(W(1), F(1, 2))
    assert rep.rank == 2 and rep.hypotheses_hold and rep.identity_holds and rep.ok
    rep = jacobian_rank(W(2, 3), F(1, 2))
    assert rep.rank == 3 and rep.ok
    rep = jacobian_rank(W(1), F(1))
    assert not rep.hypotheses_hold and not rep.certified
    assert rep.W_minus == 0 and rep.identity_holds


def test_jacobian_matches_symbolic_derivative():
    d = 5
    cs = sympy.symbols(f"c0:{d - 2}")
    v = sympy.Symbol("v")
    Wsym = sum(cs[j] * X**j for j in range(d - 2)) + X ** (d - 2)
    coeffs = sympy.Poly(sympy.expand((X**2 - v**2) * Wsym), X).all_coeffs()[::-1][:d]
    J = sympy.Matrix(coeffs).jacobian(list(cs) + [v])
    point = {cs[0]: sympy.Rational(1, 3), cs[1]: -2, cs[2]: sympy.Rational(5, 7), v: sympy.Rational(3, 2)}
    ours = jacobian_transpose(W(F(1, 3), -2, F(5, 7)), F(3, 2))
    assert sym_matrix(ours) == J.subs(point).T


@given(st.lists(rationals(9), min_size=1, max_size=6), rationals(9, nonzero=True))
def test_jacobian_rank_property(lower, v):
    w = W(*lower)
    rep = jacobian_rank(w, v)
    assert rep.identity_holds
    assert rep.rank <= rep.degree - 1
    if w(v) != 0 and w(-v) != 0:
        assert rep.rank == rep.degree - 1
    expected = sym_matrix(jacobian_transpose(w, v)).rank()
    assert rep.rank == expected


def test_imaginary_jacobian():
    rep = jacobian_rank_imaginary(W(1), F(1))
    assert rep.rank == 2 and rep.hypotheses_hold
    # W(x) = x^2 + 1 vanishes at +-i
    rep = jacobian_rank_imaginary(W(1, 0), F(1))
    assert not rep.hypotheses_hold


def test_jacobian_batch_is_worker_independent():
    one = jacobian_batch(range(3, 6), trials=10, seed=3)
    many = jacobian_batch(range(3, 6), trials=10, seed=3, workers=3)
    assert one == many
    assert one.ranks == {"3": [2], "4": [3], "5": [4]} and not one.failures


def test_transversality_examples():
    rep = transversality_check([1, 2])
    assert rep.vandermonde_det in (3, -3) and rep.independent
    assert transversality_check([F(5, 3)]).independent
    rep = transversality_check([1, 2, 3], cofactor=W(7))
    assert abs(rep.vandermonde_det) == 120
    assert rep.normals_rank == 3
    with pytest.raises(ValueError):
        transversality_check([1, 1])


def test_transversality_mixed_examples():
    rep = transversality_mixed([1], [1])
    assert rep.independent and rep.normals_rank == 2
    assert transversality_mixed([], [F(2)]).independent
    with pytest.raises(ValueError):
        transversality_mixed([1], [-1])


@given(st.lists(rationals(8), min_size=1, max_size=5))
def test_vandermonde_against_product_formula(params):
    expected = 1
    for i, j in combinations(range(len(params)), 2):
        expected *= params[j] - params[i]
    assert vandermonde_det(params) == expected


def test_vandermonde_subset_sweep_with_duplicates():
    pool = [F(k, 3) for k in range(-4, 4)] + [F(1), F(-4, 3)]  # two repeats
    rep = vandermonde_subset_sweep(pool)
    assert rep.subsets == 2 ** len(pool) - 1
    assert rep.mismatches == 0


def test_hessian_matches_sympy():
    a, b, c, h = sympy.symbols("a b c h")
    H = sympy.hessian(a**2 * h + (c - a * b) * c, (a, b, c, h))
    pt = (F(1, 2), F(-3), F(2, 7), F(5))
    ours = sym_matrix(phi_hessian(*pt))
    assert ours == H.subs(dict(zip((a, b, c, h), (sympy.Rational(str(x)) for x in pt))))


def test_hessian_examples():
    assert hessian_rank(0, 1, 0, 1).numeric_rank == 2
    assert hessian_rank(0, 2, 0, 1).numeric_rank == 1
    assert hessian_rank(0, 0, 0, 0).numeric_rank == 1
    assert hessian_rank(0, 2, 0, 1).exact
    assert hessian_rank(0.0, 2.0, 0.0, 1.0).numeric_rank == 1


def test_hessian_grid_small():
    rep = hessian_grid(10)
    assert rep.misclassified == []
    assert rep.rank_counts.get(1, rep.rank_counts.get("1")) == rep.on_parabola
    assert rep.on_parabola >= 1


def test_identity_checks():
    rep = whitney_identity_check(200, seed=1)
    assert rep.max_residual == 0 and not rep.failures
    assert phi_vanishing_check(200, seed=2).max_residual == 0


def test_resultant_examples():
    assert quartic_resultant(F(1), F(0)) == 0 == resultant_product(F(1), F(0))
    assert quartic_resultant(F(0), F(1, 4)) == 0 == resultant_product(F(0), F(1, 4))
    r1 = quartic_resultant(F(1), F(1)) / resultant_product(F(1), F(1))
    r2 = quartic_resultant(F(2), F(1)) / resultant_product(F(2), F(1))
    assert r1 == r2


@given(rationals(8), rationals(8))
def test_quartic_resultant_matches_sympy(u, w):
    su, sw = sympy.Rational(u.numerator, u.denominator), sympy.Rational(w.numerator, w.denominator)
    q = sympy.expand((X**2 - su**2) * (X**2 + X + sw))
    assert quartic_resultant(u, w) == F(str(sympy.resultant(q, sympy.diff(q, X), X)))


def test_resultant_family_check():
    rep = resultant_family_check(60, seed=5)
    assert rep.vanishing_mismatches == [] and len(rep.ratios) == 1
    assert rep.vanishing_samples > 0


def test_umbrella_check():
    rep = umbrella_check(50, seed=0)
    assert rep.identity_failures == 0
    assert rep.coordinate_jacobian_det != 0
    assert rep.rho_positive_off_axis
    assert rep.base == (0, -2, 0, 1)
    assert expand({F(1): 2, F(-1): 2}).coords == rep.base


def test_contact_order():
    rep = contact_order_check()
    assert rep.exact_order == 4 and rep.numeric_order >= 4
    assert rep.point == (F(-1, 16), F(-3, 256))
