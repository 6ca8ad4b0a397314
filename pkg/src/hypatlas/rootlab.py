"""Roots with multiplicities, hyperbolicity tests and root-sign accounting.

Two paths:

* exact (rational coefficients): square-free decomposition plus Sturm
  isolation.  Real roots carry rational enclosures; equal moduli are detected
  exactly through the positive roots of ``sqf(P(x) P(-x))``.
* float: companion-matrix eigenvalues, Newton polishing and greedy
  clustering.  A cluster of ``m`` eigenvalues with centre ``z`` is accepted
  as one root of multiplicity ``m`` when the first ``m`` Taylor coefficients
  of ``P`` at ``z`` are below ``tol`` relative to the same Taylor
  coefficients of the absolute-value polynomial.  That is a backward-error
  criterion: it is invariant under the dilatations ``x -> t x``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polycore import (
    Poly,
    Polynomial,
    RepresentationError,
    isolate_real_roots,
    sign_variations,
    square_free_decomposition,
    square_free_part,
    sturm_chain,
    sturm_distinct_real_roots,
    refine_root,
)

DEFAULT_TOL = 1e-8
_EPS = np.finfo(float).eps


class RootFindingError(ArithmeticError):
    pass


class RootKind(enum.Enum):
    REAL = "real"
    PAIR = "pair"


@dataclass(frozen=True)
class RootEntry:
    """One distinct root (or conjugate pair, stored by its upper member)."""

    value: complex
    multiplicity: int
    kind: RootKind
    enclosure: tuple[Fraction, Fraction] | None = None
    exact: Fraction | None = None

    @property
    def is_real(self) -> bool:
        return self.kind is RootKind.REAL

    @property
    def weight(self) -> int:
        return self.multiplicity * (1 if self.is_real else 2)


@dataclass(frozen=True)
class RootMultiset:
    entries: tuple[RootEntry, ...]
    degree: int
    tolerance_used: float = 0.0
    demoted: bool = False  # a near-real conjugate pair was merged into a real root

    def __post_init__(self):
        if sum(e.weight for e in self.entries) != self.degree:
            raise RootFindingError("root multiplicities do not add up to the degree")

    @property
    def exact(self) -> bool:
        return self.tolerance_used == 0

    @property
    def real(self) -> tuple[RootEntry, ...]:
        return tuple(e for e in self.entries if e.is_real)

    @property
    def pairs(self) -> tuple[RootEntry, ...]:
        return tuple(e for e in self.entries if not e.is_real)

    @property
    def all_real(self) -> bool:
        return all(e.is_real for e in self.entries)

    def partition(self) -> tuple[int, ...]:
        parts = []
        for e in self.entries:
            parts.extend([e.multiplicity] * (1 if e.is_real else 2))
        return tuple(sorted(parts, reverse=True))

    def expand(self) -> Polynomial:
        """Reconstruct the (float) monic polynomial from the root data."""
        p = Poly((1.0,))
        for e in self.entries:
            if e.is_real:
                f = Poly((-float(e.value.real), 1.0))
            else:
                z = complex(e.value)
                f = Poly((abs(z) ** 2, -2 * z.real, 1.0))
            p = p * f ** e.multiplicity
        return p.monic()


# ---------------------------------------------------------------------------
# float path


def _taylor_abs(c: np.ndarray, z: complex, m: int) -> tuple[np.ndarray, np.ndarray]:
    """First ``m`` Taylor coefficients of P at z and of |P| at |z|."""
    t = c.astype(complex)
    s = np.abs(c).astype(float)
    az = abs(z)
    n = len(c)
    for i in range(min(m, n - 1)):
        for k in range(n - 2, i - 1, -1):
            t[k] += z * t[k + 1]
            s[k] += az * s[k + 1]
    return t[:m], s[:m]


def _cluster_ok(
    c: np.ndarray, members: list, tol: float, others: np.ndarray
) -> tuple[bool, complex]:
    """Can ``members`` be read as one root of multiplicity len(members)?

    The centre must be an approximate m-fold root in the backward sense, and
    every member must sit inside the radius by which an m-fold root moves
    under a relative coefficient perturbation of size tol.
    """
    z = complex(np.mean(members))
    m = len(members)
    t, s = _taylor_abs(c, z, len(c))
    bound = (tol + 4 * _EPS) * s
    if np.any(np.abs(t[:m]) > bound[:m]):
        return False, z
    spread = max(abs(w - z) for w in members)
    if spread == 0:
        return True, z
    # The radius comes from the first Taylor coefficient that is clearly
    # nonzero; z may be a root of higher multiplicity than m (the midpoint
    # of two roots placed symmetrically about a triple root).
    big = [j for j in range(m, len(t)) if abs(t[j]) > bound[j]]
    if not big:
        return False, z
    lead_at = big[0]
    radius = max((bound[k] / abs(t[lead_at])) ** (1.0 / (lead_at - k)) for k in range(m))
    if np.any(np.abs(others - z) < spread / 4):
        # a much tighter cluster sits at z; the members are distinct roots
        # placed around it, not a perturbed multiple root
        return False, z
    return spread <= 4 * radius, z


def _newton(c: np.ndarray, z: complex, order: int, real: bool, steps: int = 6) -> complex:
    """Polish z as a simple root of the ``order``-th derivative."""
    f = np.polynomial.Polynomial(c).deriv(order) if order else np.polynomial.Polynomial(c)
    df = f.deriv()
    best, fbest = z, abs(f(z))
    for _ in range(steps):
        d = df(z)
        if d == 0 or not np.isfinite(d):
            break
        z = z - f(z) / d
        if real:
            z = complex(z.real, 0.0)
        fz = abs(f(z))
        if not np.isfinite(fz) or fz >= fbest:
            break
        best, fbest = z, fz
    return best


def _float_roots(p: Poly, tol: float) -> RootMultiset:
    if not tol > 0:
        raise ValueError("the float path needs tol > 0")
    # exact zero roots are read off the trailing coefficients
    k = 0
    while p.coeffs[k] == 0:
        k += 1
    c = np.array([float(x) for x in p.coeffs])
    eig = np.roots(c[k:][::-1]) if p.degree > k else np.zeros(0)
    if eig.size != p.degree - k or not np.all(np.isfinite(eig)):
        raise RootFindingError("companion eigenvalue computation failed")
    eig = np.concatenate([np.zeros(k), eig]).astype(complex)

    clusters = [[z] for z in eig]
    centres = list(eig)
    merged = len(clusters) > 1
    while merged and len(clusters) > 1:
        merged = False
        pairs = []
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                ci, cj = centres[i], centres[j]
                pairs.append((abs(ci - cj) / (1 + max(abs(ci), abs(cj))), i, j))
        pairs.sort()
        for _, i, j in pairs:
            members = clusters[i] + clusters[j]
            others = np.array([w for k, cl in enumerate(clusters) if k not in (i, j) for w in cl])
            ok, z = _cluster_ok(c, members, tol, others)
            if ok:
                clusters[i] = members
                centres[i] = z
                del clusters[j], centres[j]
                merged = True
                break

    entries = []
    demoted = False
    for members, z in zip(clusters, centres):
        m = len(members)
        real = abs(z.imag) <= 4 * _EPS * (1 + abs(z))
        if real:
            z = complex(z.real, 0.0)
            if any(w.imag != 0 for w in members):
                demoted = True
        z = _newton(c, z, m - 1, real)
        if real:
            entries.append(RootEntry(float(z.real), m, RootKind.REAL))
        elif z.imag > 0:
            entries.append(RootEntry(z, m, RootKind.PAIR))
    entries.sort(key=lambda e: (not e.is_real, e.value.real, e.value.imag))
    try:
        return RootMultiset(tuple(entries), p.degree, tol, demoted)
    except RootFindingError:
        raise RootFindingError(
            f"clustering of {p} at tol={tol} did not yield conjugate-symmetric roots"
        ) from None


# ---------------------------------------------------------------------------
# exact path


def _strip_zero_root(p: Poly) -> tuple[Poly, int]:
    k = 0
    while k < len(p.coeffs) and p.coeffs[k] == 0:
        k += 1
    return Poly(p.coeffs[k:]), k


def _float_value_in(f: Poly, interval, fl_roots: np.ndarray) -> float:
    lo, hi = interval
    flo, fhi = float(lo), float(hi)
    slack = 1e-12 * (1 + max(abs(flo), abs(fhi)))
    cand = [z.real for z in fl_roots if abs(z.imag) <= 1e-7 * (1 + abs(z)) and flo - slack <= z.real <= fhi + slack]
    if len(cand) == 1:
        return float(cand[0])
    l, r = refine_root(f, interval, (hi - lo) / 2**60 + Fraction(1, 10**18))
    return float((l + r) / 2)


def _rational_guess(f: Poly, interval, value: float) -> Fraction | None:
    lo, hi = interval
    if lo == hi:
        return lo
    for den in (10**3, 10**6):
        q = Fraction(value).limit_denominator(den)
        if lo < q < hi and f(q) == 0:
            return q
    return None


def _rational_roots(f: Poly) -> list[Fraction] | None:
    """All roots of the square-free ``f`` if it splits over Q, else None.

    Candidates come from the float roots; a root p/q of the integer
    primitive form has q dividing its leading coefficient, which bounds the
    denominator search.  Every candidate is checked exactly.
    """
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    lead = abs(f.lc * den)
    roots = []
    for z in np.roots(f.to_numpy()):
        if abs(z.imag) > 1e-6 * (1 + abs(z)):
            return None
        r = Fraction(float(z.real)).limit_denominator(max(1, int(lead)))
        if f(r) != 0 or r in roots:
            return None
        roots.append(r)
    return roots


def _exact_roots(p: Poly) -> RootMultiset:
    q, zmult = _strip_zero_root(p)
    factors = square_free_decomposition(q) if q.degree > 0 else []
    entries: list[RootEntry] = []
    if zmult:
        entries.append(RootEntry(0.0, zmult, RootKind.REAL, (Fraction(0), Fraction(0)), Fraction(0)))
    split = [_rational_roots(f) for f, _ in factors]
    if all(rs is not None for rs in split):
        for rs, (_, m) in zip(split, factors):
            entries.extend(RootEntry(float(r), m, RootKind.REAL, (r, r), r) for r in rs)
        entries.sort(key=lambda e: e.exact)
        return RootMultiset(tuple(entries), p.degree, 0.0)
    if factors:
        prod = Poly((1,))
        for f, _ in factors:
            prod = prod * f * f.reflect()
        s = square_free_part(prod)
        intervals = isolate_real_roots(s, lo=0)
        chains = []
        for f, m in factors:
            fr = f.reflect()
            chains.append((f, fr, m, sturm_chain(f), sturm_chain(fr)))
        real_counts = [0] * len(factors)
        for iv in intervals:
            lo, hi = iv
            for k, (f, fr, m, cf, cfr) in enumerate(chains):
                for poly, chain, sgn in ((f, cf, 1), (fr, cfr, -1)):
                    if lo == hi:
                        hit = poly(lo) == 0
                    else:
                        hit = sign_variations(chain, lo) - sign_variations(chain, hi) == 1
                    if not hit:
                        continue
                    real_counts[k] += 1
                    value = _float_value_in(poly, iv, np.roots(poly.to_numpy()))
                    ex = _rational_guess(poly, iv, value)
                    enc = iv if sgn == 1 else (-hi, -lo)
                    entries.append(
                        RootEntry(
                            sgn * value if ex is None else float(sgn * ex),
                            m,
                            RootKind.REAL,
                            enc,
                            None if ex is None else sgn * ex,
                        )
                    )
        for k, (f, _, m, _, _) in enumerate(chains):
            ncomplex = f.degree - real_counts[k]
            if ncomplex % 2:
                raise RootFindingError("odd number of non-real roots")
            if ncomplex:
                z = np.roots(f.to_numpy())
                z = sorted(z, key=lambda w: -w.imag)[: ncomplex // 2]
                entries.extend(RootEntry(complex(w), m, RootKind.PAIR) for w in z)
    entries.sort(key=lambda e: (not e.is_real, e.enclosure[0] if e.is_real else 0, e.value.real, e.value.imag))
    return RootMultiset(tuple(entries), p.degree, 0.0)


# ---------------------------------------------------------------------------
# public API


def all_roots(p: Poly, tol: float = DEFAULT_TOL, *, exact: bool | None = None) -> RootMultiset:
    """Distinct roots with multiplicities.

    The exact path runs whenever the coefficients are rational (unless
    ``exact=False``); ``tol`` is then ignored and ``tolerance_used`` is 0.
    """
    if p.degree < 1:
        raise ValueError("all_roots needs degree >= 1")
    if p.lc != 1:
        p = p.monic()
    if exact is None:
        exact = p.is_exact
    if exact:
        if not p.is_exact:
            raise RepresentationError("exact root data needs rational coefficients")
        return _exact_roots(p)
    return _float_roots(p.to_float(), tol)


@dataclass(frozen=True)
class HyperbolicityCertificate:
    hyperbolic: bool
    certified: bool
    distinct_real: int
    squarefree_degree: int
    demoted: bool = False

    def __bool__(self):
        return self.hyperbolic


def is_hyperbolic(p: Poly, tol: float = DEFAULT_TOL) -> HyperbolicityCertificate:
    """All roots real?  Certified by a Sturm count on rational input."""
    if p.is_exact:
        sq = square_free_part(p)
        n = sturm_distinct_real_roots(sq)
        return HyperbolicityCertificate(n == sq.degree, True, n, sq.degree)
    roots = all_roots(p, tol)
    nreal = len(roots.real)
    return HyperbolicityCertificate(
        roots.all_real, False, nreal, nreal + 2 * len(roots.pairs), roots.demoted
    )


def multiplicity_partition(p: Poly, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """Partition of the degree by root multiplicities over C, sorted descending."""
    if p.is_exact:
        parts = []
        for f, m in square_free_decomposition(p):
            parts.extend([m] * f.degree)
        return tuple(sorted(parts, reverse=True))
    return all_roots(p, tol).partition()


@dataclass(frozen=True)
class RootSignCounts:
    pos: int
    neg: int
    zero: int
    nonreal: int


def root_sign_counts(p: Poly, tol: float = DEFAULT_TOL) -> RootSignCounts:
    """Positive, negative and zero roots counted with multiplicity."""
    if p.is_exact:
        q, z = _strip_zero_root(p)
        pos = neg = 0
        if q.degree > 0:
            for f, m in square_free_decomposition(q):
                pos += m * sturm_distinct_real_roots(f, 0, None)
                neg += m * sturm_distinct_real_roots(f, None, 0)
        return RootSignCounts(pos, neg, z, p.degree - pos - neg - z)
    roots = all_roots(p, tol)
    pos = neg = zero = 0
    for e in roots.real:
        r = e.value.real if isinstance(e.value, complex) else e.value
        if abs(r) <= tol:
            zero += e.multiplicity
        elif r > 0:
            pos += e.multiplicity
        else:
            neg += e.multiplicity
    return RootSignCounts(pos, neg, zero, p.degree - pos - neg - zero)
