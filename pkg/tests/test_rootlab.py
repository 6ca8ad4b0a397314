from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from hypatlas.polycore import ImaginaryPair, Polynomial, expand
from hypatlas.rootlab import (
    RootKind,
    all_roots,
    is_hyperbolic,
    multiplicity_partition,
    root_sign_counts,
)

F = Fraction
X = sympy.Symbol("x")
B = Polynomial.from_coords(1, F(2, 5), F(3, 40), F(9, 1600))


def to_sympy(p):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(p.coeffs))


def root_dicts(roots=st.lists(st.tuples(rationals(8), st.integers(1, 3)), min_size=1, max_size=4)):
    def merge(pairs):
        out = {}
        for r, m in pairs:
            out[r] = out.get(r, 0) + m
        return out

    return roots.map(merge)


def test_double_root_and_simple_root():
    r = all_roots(Polynomial.from_coords(1, -1, -1))
    assert [(e.exact, e.multiplicity, e.kind) for e in r.entries] == [
        (-1, 2, RootKind.REAL),
        (1, 1, RootKind.REAL),
    ]
    assert r.tolerance_used == 0


def test_double_complex_pair_at_B():
    r = all_roots(B)
    assert len(r.entries) == 1
    (e,) = r.entries
    assert e.kind is RootKind.PAIR and e.multiplicity == 2
    assert e.value.imag > 0
    assert multiplicity_partition(B) == (2, 2)
    # float path agrees
    fr = all_roots(B.to_float())
    assert fr.partition() == (2, 2) and not fr.all_real


def test_zero_root_kept():
    r = all_roots(Polynomial.from_coords(1, 0, 0))
    assert [(e.exact, e.multiplicity) for e in r.entries] == [(-1, 1), (0, 2)]
    fr = all_roots(Polynomial.from_coords(1.0, 0.0, 0.0))
    assert fr.partition() == (2, 1)
    assert sorted(round(e.value.real, 12) for e in fr.entries) == [-1.0, 0.0]


def test_hyperbolicity_examples():
    assert is_hyperbolic(expand({F(-1, 4): 4})).hyperbolic
    assert not is_hyperbolic(B).hyperbolic
    cert = is_hyperbolic(Polynomial.from_coords(0, 1))
    assert not cert and cert.certified
    assert not is_hyperbolic(Polynomial.from_coords(0.0, 1.0)).certified


def test_partition_examples():
    assert multiplicity_partition(expand({F(-1, 4): 4})) == (4,)
    assert multiplicity_partition(Polynomial.from_coords(1, -1, -1)) == (2, 1)
    assert multiplicity_partition(expand({F(-1, 2): 2, F(0): 2})) == (2, 2)


def test_imaginary_double_pair_reconstructs():
    W = Polynomial.from_coords(F(0), F(1))  # x^2 + 1
    p = expand(ImaginaryPair(F(1), W))
    r = all_roots(p)
    assert r.partition() == (2, 2)
    assert r.expand().coords == pytest.approx([float(c) for c in p.coords], abs=1e-12)


@given(root_dicts())
def test_exact_roots_match_sympy(roots):
    p = expand(roots)
    r = all_roots(p)
    assert r.all_real
    got = {e.exact: e.multiplicity for e in r.entries}
    assert got == roots
    expected = sympy.roots(to_sympy(p), X)
    assert {F(str(k)): v for k, v in expected.items()} == roots
    values = [e.value for e in r.entries]
    assert values == sorted(values)


@given(st.lists(rationals(8), min_size=1, max_size=4), st.lists(rationals(8, nonzero=True), max_size=2))
def test_irrational_and_complex_roots_match_sympy(lower, _):
    p = Polynomial.from_lower(lower)
    r = all_roots(p)
    assert sum(e.weight for e in r.entries) == p.degree
    sym = sympy.Poly(to_sympy(p), X)
    assert len(r.real) == len(set(sympy.real_roots(sym)))
    assert r.all_real == is_hyperbolic(p).hyperbolic
    for e in r.real:
        lo, hi = e.enclosure
        assert float(lo) <= e.value <= float(hi)
    for e in r.pairs:
        assert e.value.imag > 0
        assert abs(complex(sym.eval(e.value))) < 1e-6 * (1 + abs(e.value)) ** p.degree


@given(root_dicts())
def test_float_reconstruction(roots):
    p = expand(roots)
    r = all_roots(p.to_float())
    assert r.tolerance_used > 0
    scale = max(1.0, *(abs(float(c)) for c in p.coeffs))
    got = np.array(r.expand().coeffs, dtype=float)
    want = np.array([float(c) for c in p.coeffs])
    assert np.allclose(got, want, atol=1e3 * r.tolerance_used * scale)


@given(root_dicts(), st.sampled_from([F(2), F(1, 2), F(-1)]))
def test_partition_is_dilation_equivariant(roots, t):
    p = expand(roots)
    q = p.dilate(t)
    assert multiplicity_partition(q) == multiplicity_partition(p)
    assert {e.exact for e in all_roots(q).entries} == {t * e.exact for e in all_roots(p).entries}
    # the float clustering sees the same partition
    assert all_roots(q.to_float()).partition() == all_roots(p.to_float()).partition()


@given(root_dicts())
def test_sign_counts(roots):
    c = root_sign_counts(expand(roots))
    assert c.pos == sum(m for r, m in roots.items() if r > 0)
    assert c.neg == sum(m for r, m in roots.items() if r < 0)
    assert c.zero == roots.get(F(0), 0)
    assert c.nonreal == 0


def test_all_roots_rejects_constants():
    from hypatlas.polycore import Poly

    with pytest.raises(ValueError):
        all_roots(Poly((F(3),)))
