"""Exact and floating-point univariate polynomial arithmetic.

Coefficients are either all :class:`fractions.Fraction` (the exact path) or
all finite ``float`` (the sampling path).  Plain ``int`` values adopt the
representation of their neighbours, so ``Poly([1, 0.5])`` is a float
polynomial and ``Poly([1, Fraction(1, 2)])`` is exact.

Coefficient tuples are stored in ascending order of degree throughout.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]


class RepresentationError(TypeError):
    """Exact and float coefficients were mixed, or a float was not finite."""


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"`` or an integer literal exactly, a decimal literal as float."""
    s = text.strip()
    if not s:
        raise ValueError("empty coefficient")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except ValueError:
        pass
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"malformed coefficient {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite coefficient {text!r}")
    return value


def as_scalar(x) -> Scalar | int:
    """Normalize a number to Fraction, float, or (representation-neutral) int."""
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, numbers.Real):
        value = float(x)
        if not math.isfinite(value):
            raise RepresentationError(f"non-finite coefficient {x!r}")
        return value
    raise TypeError(f"unsupported coefficient {x!r}")


def _unify(values: Iterable) -> tuple:
    values = tuple(values)
    if all(type(v) is Fraction for v in values):
        return values
    vals = [as_scalar(v) for v in values]
    has_float = any(isinstance(v, float) for v in vals)
    has_frac = any(isinstance(v, Fraction) for v in vals)
    if has_float and has_frac:
        raise RepresentationError("exact and float coefficients cannot be mixed")
    if has_float:
        return tuple(float(v) for v in vals)
    return tuple(Fraction(v) for v in vals)


def sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True, eq=False, repr=False)
class Poly:
    """Polynomial with ascending coefficients; the zero polynomial is ``()``."""

    coeffs: tuple

    def __post_init__(self):
        c = list(_unify(self.coeffs))
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_descending(cls, coeffs: Sequence) -> Poly:
        return cls(tuple(reversed(list(coeffs))))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    @classmethod
    def from_roots(cls, roots: Iterable) -> Poly:
        p = Poly((1,))
        for r in roots:
            p = p * Poly((-as_scalar(r), 1))
        return p

    # -- basic structure -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def descending(self) -> tuple:
        return tuple(reversed(self.coeffs))

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self._zero()

    def _zero(self):
        if self.coeffs and isinstance(self.coeffs[0], float):
            return 0.0
        return Fraction(0)

    def to_float(self) -> Poly:
        return type(self)(tuple(float(c) for c in self.coeffs))

    def to_numpy(self) -> np.ndarray:
        """Descending float coefficients, the numpy.roots convention."""
        return np.array([float(c) for c in reversed(self.coeffs)], dtype=float)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self), len(other))
        return Poly(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return Poly(())
        out = [self._zero()] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly((1,)) if self.is_exact else Poly((1.0,))
        for _ in range(n):
            out = out * self
        return out

    def scale(self, s) -> Poly:
        return Poly(tuple(c * s for c in self.coeffs))

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(self) - len(other)
        if dq < 0:
            return Poly(()), self
        quot = [self._zero()] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lc
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(tuple(quot)), Poly(tuple(rem[: other.degree]))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> Polynomial:
        if self.is_zero:
            raise ValueError("zero polynomial has no monic form")
        lc = self.lc
        return Polynomial(tuple(c / lc for c in self.coeffs))

    def primitive(self) -> Poly:
        """Exact polynomial scaled to coprime integer coefficients with positive lc."""
        if self.is_zero:
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Poly(tuple(Fraction(v // g) for v in ints))

    # -- evaluation and calculus -----------------------------------------
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def reflect(self) -> Poly:
        """P(-x)."""
        return Poly(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def dilate(self, t) -> Poly:
        """t^deg * P(x / t): the polynomial whose roots are t times those of P."""
        d = self.degree
        return type(self)(tuple(c * t ** (d - k) for k, c in enumerate(self.coeffs)))

    def taylor(self, z) -> list:
        """Coefficients of P(x + z) in ascending powers of x (repeated Horner)."""
        work = list(self.coeffs)
        n = len(work)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                work[k] = work[k] + z * work[k + 1]
        return work

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            sgn = "-" if c < 0 else "+"
            if k == 0:
                body = str(mag)
            else:
                coef = "" if mag == 1 else f"{mag}*"
                body = coef + ("x" if k == 1 else f"x^{k}")
            terms.append((sgn, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sgn, body in terms[1:]:
            out += f" {sgn} {body}"
        return out


class Polynomial(Poly):
    """Monic polynomial ``x^d + a_{d-1} x^{d-1} + ... + a_0`` with ``d >= 1``.

    The coordinates ``(a, b, c, h)`` are the coefficients in
    descending order below the leading one; see :meth:`from_coords`.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.degree < 1:
            raise ValueError("a monic Polynomial needs degree >= 1")
        if self.lc != 1:
            raise ValueError(f"polynomial is not monic (leading coefficient {self.lc})")

    @classmethod
    def from_coords(cls, *coords) -> Polynomial:
        """``from_coords(a, b, c)`` is ``x^3 + a x^2 + b x + c``."""
        if len(coords) == 1 and not isinstance(coords[0], (numbers.Number, str)):
            coords = tuple(coords[0])
        vals = _unify((1,) + tuple(coords))
        return cls(tuple(reversed(vals)))

    @classmethod
    def from_lower(cls, a: Sequence) -> Polynomial:
        """From ``a_0 .. a_{d-1}``."""
        vals = _unify(tuple(a) + (1,))
        return cls(vals)

    @property
    def a(self) -> tuple:
        return self.coeffs[:-1]

    @property
    def coords(self) -> tuple:
        return tuple(reversed(self.coeffs[:-1]))


def _coerce(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly((x,))


def to_monic(p: Poly) -> Polynomial:
    return p if isinstance(p, Polynomial) else p.monic()


# ---------------------------------------------------------------------------
# factored forms


@dataclass(frozen=True)
class OppositePair:
    """``(x^2 - v^2) W(x)`` with ``v != 0``."""

    v: Scalar
    W: Polynomial

    def __post_init__(self):
        if self.v == 0:
            raise ValueError("OppositePair needs v != 0")


@dataclass(frozen=True)
class ImaginaryPair:
    """``(x^2 + A) W(x)`` with ``A > 0``."""

    A: Scalar
    W: Polynomial

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("ImaginaryPair needs A > 0")


@dataclass(frozen=True)
class EvenTimesQuadratic:
    """``(x^2 + A)(x^2 + u x + w)``; ``A`` of either sign."""

    A: Scalar
    u: Scalar
    w: Scalar


FactoredForm = Union[OppositePair, ImaginaryPair, EvenTimesQuadratic]


def quartic_uw(u, w) -> EvenTimesQuadratic:
    """The a=1 family ``(x^2 - u^2)(x^2 + x + w)``."""
    u = as_scalar(u)
    return EvenTimesQuadratic(-u * u, 1, w)


def _one_like(x) -> Scalar:
    return 1.0 if isinstance(as_scalar(x), float) else Fraction(1)


def expand(f) -> Polynomial:
    """Expand a factored form, a root multiset, or a list of monic factors.

    Accepted inputs: an :class:`OppositePair` / :class:`ImaginaryPair` /
    :class:`EvenTimesQuadratic`; a ``{root: multiplicity}`` mapping or a list
    of ``(root, multiplicity)`` pairs; a list of monic :class:`Poly` factors.
    """
    if isinstance(f, OppositePair):
        one = _one_like(f.v)
        return to_monic(Poly((-f.v * f.v, 0, one)) * f.W)
    if isinstance(f, ImaginaryPair):
        one = _one_like(f.A)
        return to_monic(Poly((f.A, 0, one)) * f.W)
    if isinstance(f, EvenTimesQuadratic):
        one = _one_like(f.A)
        return to_monic(Poly((f.A, 0, one)) * Poly((f.w, f.u, one)))
    if isinstance(f, dict):
        f = list(f.items())
    factors = list(f)
    if not factors:
        raise ValueError("nothing to expand")
    if all(isinstance(x, Poly) for x in factors):
        out = Poly((1,))
        for x in factors:
            if x.is_zero or x.lc != 1:
                raise ValueError(f"factor {x} is not monic")
            out = out * x
    else:
        roots = []
        for root, mult in factors:
            if int(mult) != mult or mult < 1:
                raise ValueError(f"bad multiplicity {mult!r}")
            roots.extend([root] * int(mult))
        out = Poly.from_roots(roots)
    if out.degree < 1:
        raise ValueError("expansion has degree 0")
    return to_monic(out)


# ---------------------------------------------------------------------------
# exact algorithms


def _require_exact(*polys: Poly):
    for p in polys:
        if not p.is_exact:
            raise RepresentationError("this operation needs exact rational coefficients")


def derivative(p: Poly) -> Poly:
    """Formal derivative; the result is in general not monic."""
    return p.derivative()


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    _require_exact(p, q)
    a, b = p, q
    while not b.is_zero:
        a, b = b, a % b
        if not b.is_zero:
            b = b.scale(1 / b.lc)
    if a.is_zero:
        return a
    return a.scale(1 / a.lc)


def square_free_decomposition(p: Poly) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: ``[(f_i, i)]`` with ``p = lc * prod f_i^i``.

    Factors are monic, square-free and pairwise coprime; trivial factors are
    dropped, so the list is sorted by increasing multiplicity.
    """
    _require_exact(p)
    if p.degree < 1:
        raise ValueError("square-free decomposition needs degree >= 1")
    f = p.scale(1 / p.lc)
    df = f.derivative()
    a = gcd(f, df)
    b = f // a
    c = df // a
    out = []
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = gcd(b, d) if not d.is_zero else b
        if g.degree > 0:
            out.append((to_monic(g), i))
        b = b // g
        c = d // g
        i += 1
    return out


def square_free_part(p: Poly) -> Polynomial:
    _require_exact(p)
    out = Poly((1,))
    for f, _ in square_free_decomposition(p):
        out = out * f
    return to_monic(out)


def _det_bareiss(m: list[list]) -> Fraction:
    """Fraction-free (Bareiss) determinant with row pivoting."""
    n = len(m)
    a = [row[:] for row in m]
    sgn = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sgn = -sgn
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sgn * a[n - 1][n - 1]


def sylvester_matrix(p: Poly, q: Poly) -> list[list]:
    m, n = p.degree, q.degree
    size = m + n
    zero = p._zero()
    rows = []
    pd, qd = p.descending(), q.descending()
    for i in range(n):
        rows.append([zero] * i + list(pd) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(qd) + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: Poly, q: Poly) -> Scalar:
    """Determinant of the Sylvester matrix of ``p`` and ``q``.

    Exact inputs use fraction-free elimination; float inputs use LAPACK.
    """
    if p.is_zero or q.is_zero:
        raise ValueError("resultant of the zero polynomial is undefined")
    if p.degree == 0 and q.degree == 0:
        return p._zero() + 1
    s = sylvester_matrix(p, q)
    if p.is_exact and q.is_exact:
        return _det_bareiss(s)
    return float(np.linalg.det(np.array(s, dtype=float)))


def discriminant_resultant(p: Poly) -> Scalar:
    """``Res(p, p')``, the defining expression of the discriminant set."""
    return resultant(p, p.derivative())


# -- Sturm sequences ---------------------------------------------------------


def sturm_chain(p: Poly) -> list[Poly]:
    """Signed remainder chain of ``p``, each member scaled by a positive constant."""
    _require_exact(p)
    chain = [p, p.derivative()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero:
            break
        chain.append((-r).scale(1 / abs(r.lc)))
    return [c for c in chain if not c.is_zero]


def _sign_at(p: Poly, x) -> int:
    if x is None:
        raise ValueError
    if isinstance(x, tuple):  # (+-1, "inf")
        s = x[0]
        return sign(p.lc) * (s ** p.degree if p.degree else 1)
    return sign(p(x))


def sign_variations(chain: Sequence[Poly], x) -> int:
    """Sign changes of the chain at ``x``; ``x`` may be ``(1, 'inf')`` or ``(-1, 'inf')``."""
    prev = 0
    v = 0
    for p in chain:
        s = _sign_at(p, x)
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


_POS_INF = (1, "inf")
_NEG_INF = (-1, "inf")


def sturm_distinct_real_roots(
    p: Poly,
    lo=None,
    hi=None,
    *,
    closed_lo: bool = False,
    closed_hi: bool = False,
    chain: Sequence[Poly] | None = None,
) -> int:
    """Number of distinct real roots of ``p`` in an interval.

    ``lo=None`` / ``hi=None`` mean minus / plus infinity.  The interval is
    open unless ``closed_lo`` / ``closed_hi`` are set.
    """
    _require_exact(p)
    if p.degree < 1:
        return 0
    if chain is None:
        chain = sturm_chain(square_free_part(p))
    sq = chain[0]
    a = _NEG_INF if lo is None else Fraction(lo)
    b = _POS_INF if hi is None else Fraction(hi)
    if lo is not None and hi is not None and a > b:
        raise ValueError("empty interval")
    # sign_variations(a) - sign_variations(b) counts roots in (a, b]
    n = sign_variations(chain, a) - sign_variations(chain, b)
    if hi is not None and not closed_hi and sq(b) == 0:
        n -= 1
    if lo is not None and closed_lo and sq(a) == 0:
        n += 1
    return n


def cauchy_bound(p: Poly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def simplest_between(x: Fraction, y: Fraction) -> Fraction:
    """The rational with the smallest denominator in the closed interval [x, y]."""
    if x > y:
        x, y = y, x
    if x <= 0 <= y:
        return Fraction(0)
    if y < 0:
        return -simplest_between(-y, -x)
    fl = x.numerator // x.denominator
    if fl == x or fl + 1 <= y:
        return Fraction(fl if fl == x else fl + 1)
    # x and y share the integer part: recurse on the reciprocals of the fractional parts
    return fl + 1 / simplest_between(1 / (y - fl), 1 / (x - fl))


def isolate_real_roots(p: Poly, lo=None, hi=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, each holding exactly one real root of ``p``.

    A proper interval ``(l, r)`` has non-root endpoints and one root strictly
    inside; a root hit exactly by bisection comes back as ``(r, r)``.  The
    search covers the open interval ``(lo, hi)`` (the whole line by default).
    Intervals are sorted left to right.
    """
    _require_exact(p)
    sq = square_free_part(p)
    chain = sturm_chain(sq)
    bound = cauchy_bound(sq)
    a = -bound if lo is None else Fraction(lo)
    b = bound if hi is None else Fraction(hi)
    out: list[tuple[Fraction, Fraction]] = []
    if a >= b:
        return out

    def count_open(l, r, vl, vr):
        return vl - vr - (1 if sq(r) == 0 else 0)

    # Cut (a, b) between float estimates of the roots so that most pieces
    # already hold one root; the Sturm counts below keep the result exact.
    cuts = [a]
    if sq.degree >= 2:
        est = sorted(z.real for z in np.roots(sq.to_numpy()) if abs(z.imag) <= 1e-3 * (1 + abs(z)))
        for u, w in zip(est, est[1:]):
            if w - u < 1e-9 * (1 + abs(u)):
                continue
            m = simplest_between(Fraction(u + (w - u) / 4), Fraction(w - (w - u) / 4))
            if cuts[-1] < m < b:
                cuts.append(m)
    cuts.append(b)
    stack = []
    var = [sign_variations(chain, x) for x in cuts]
    for x in cuts[1:-1]:
        if sq(x) == 0:
            out.append((x, x))
    for k in range(len(cuts) - 1):
        stack.append((cuts[k], cuts[k + 1], var[k], var[k + 1]))
    while stack:
        l, r, vl, vr = stack.pop()
        n = count_open(l, r, vl, vr)
        if n == 0:
            continue
        if n == 1 and sq(l) != 0 and sq(r) != 0:
            out.append((l, r))
            continue
        m = (l + r) / 2
        vm = sign_variations(chain, m)
        if sq(m) == 0:
            out.append((m, m))
        stack.append((l, m, vl, vm))
        stack.append((m, r, vm, vr))
    out.sort()
    return out


def refine_root(p: Poly, interval: tuple[Fraction, Fraction], width) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a square-free ``p`` down to ``width``."""
    l, r = interval
    if l == r:
        return interval
    sl = sign(p(l))
    while r - l > width:
        m = (l + r) / 2
        sm = sign(p(m))
        if sm == 0:
            return (m, m)
        if sm == sl:
            l = m
        else:
            r = m
    return (l, r)
