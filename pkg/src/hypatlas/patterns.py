"""Sign patterns, Descartes counts and moduli orders.

Serialization follows the usual notation: a sign pattern prints as
``(+,+,-,0)`` and a moduli order as ``0=0<P=N<N=N<P<N``.  Inside an equality
group letters are emitted in the order ``P`` before ``N``; parsing accepts any
order, and two orders that differ only inside equality groups compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass

from .polycore import Poly, sign
from .rootlab import DEFAULT_TOL, RootMultiset, all_roots, root_sign_counts

_SIGN_CHARS = {1: "+", -1: "-", 0: "0"}
_CHAR_SIGNS = {"+": 1, "-": -1, "0": 0}
_LETTER_ORDER = {"0": 0, "P": 1, "N": 2}


@dataclass(frozen=True)
class SignPattern:
    """Signs of ``(1, a_{d-1}, ..., a_0)``; entries are +1, -1 or 0."""

    signs: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.signs)
        if len(s) < 2 or s[0] != 1 or any(x not in (-1, 0, 1) for x in s):
            raise ValueError(f"invalid sign pattern {self.signs!r}")
        object.__setattr__(self, "signs", s)

    @classmethod
    def parse(cls, text: str) -> SignPattern:
        body = text.strip().strip("()")
        try:
            return cls(tuple(_CHAR_SIGNS[t.strip()] for t in body.split(",")))
        except KeyError:
            raise ValueError(f"malformed sign pattern {text!r}") from None

    @property
    def degree(self) -> int:
        return len(self.signs) - 1

    @property
    def has_zeros(self) -> bool:
        return 0 in self.signs

    def reflect(self) -> SignPattern:
        """Pattern of ``(-1)^d P(-x)``: the roots change sign."""
        return SignPattern(tuple(s * (-1) ** i for i, s in enumerate(self.signs)))

    def __str__(self):
        return "(" + ",".join(_SIGN_CHARS[s] for s in self.signs) + ")"


@dataclass(frozen=True)
class ModuliOrder:
    """Letters grouped by equal modulus, groups in increasing modulus.

    ``groups`` is a tuple of tuples of letters from ``{"0", "P", "N"}``;
    a root of multiplicity m contributes m letters.
    """

    groups: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.groups or any(not g for g in self.groups):
            raise ValueError("empty moduli order")
        for g in self.groups:
            if any(x not in _LETTER_ORDER for x in g):
                raise ValueError(f"bad letters in {g!r}")
        groups = tuple(tuple(sorted(g, key=_LETTER_ORDER.__getitem__)) for g in self.groups)
        for i, g in enumerate(groups):
            if "0" in g and (i != 0 or set(g) != {"0"}):
                raise ValueError("zero letters must form the first group")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text: str) -> ModuliOrder:
        return cls(tuple(tuple(g.split("=")) for g in text.strip().split("<")))

    @classmethod
    def strict(cls, letters) -> ModuliOrder:
        return cls(tuple((x,) for x in letters))

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(x for g in self.groups for x in g)

    @property
    def relations(self) -> tuple[str, ...]:
        out = []
        for i, g in enumerate(self.groups):
            if i:
                out.append("<")
            out.extend("=" * (len(g) - 1))
        return tuple(out)

    @property
    def has_equalities(self) -> bool:
        return any(len(g) > 1 for g in self.groups)

    def swap(self) -> ModuliOrder:
        """Exchange P and N (the roots change sign)."""
        tr = {"P": "N", "N": "P", "0": "0"}
        return ModuliOrder(tuple(tuple(tr[x] for x in g) for g in self.groups))

    def __str__(self):
        return "<".join("=".join(g) for g in self.groups)


@dataclass(frozen=True)
class DescartesCounts:
    c: int
    p: int | None  # only defined when no coefficient vanishes
    c_prime: int


def sign_pattern(P: Poly) -> SignPattern:
    return SignPattern(tuple(sign(x) for x in P.descending()))


def _changes(seq) -> int:
    nz = [s for s in seq if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def descartes_counts(sp: SignPattern) -> DescartesCounts:
    d = sp.degree
    c = _changes(sp.signs)
    p = None if sp.has_zeros else d - c
    # coefficient of x^(d-i) picks up (-1)^(d-i) in Q(-x)
    flipped = [s * (-1) ** (d - i) for i, s in enumerate(sp.signs)]
    return DescartesCounts(c, p, _changes(flipped))


@dataclass(frozen=True)
class DescartesReport:
    pos: int
    neg: int
    c: int
    p: int | None
    c_prime: int
    satisfied: bool
    equality_case: bool
    certified: bool


def verify_descartes(P: Poly, tol: float = DEFAULT_TOL) -> DescartesReport:
    """Check Descartes' bounds, and the equalities for hyperbolic P without zeros."""
    counts = root_sign_counts(P, tol)
    dc = descartes_counts(sign_pattern(P))
    ok = (
        counts.pos <= dc.c
        and (dc.c - counts.pos) % 2 == 0
        and counts.neg <= dc.c_prime
        and (dc.c_prime - counts.neg) % 2 == 0
    )
    equality = dc.p is not None and counts.nonreal == 0 and counts.zero == 0
    if equality:
        ok = ok and counts.pos == dc.c and counts.neg == dc.p
    return DescartesReport(counts.pos, counts.neg, dc.c, dc.p, dc.c_prime, ok, equality, P.is_exact)


def no_consecutive_zero_check(P: Poly) -> bool:
    """True iff no two adjacent coefficients (leading 1 included) both vanish."""
    c = P.descending()
    return not any(c[i] == 0 and c[i + 1] == 0 for i in range(len(c) - 1))


def moduli_order(r: RootMultiset, tol: float | None = None) -> ModuliOrder:
    """Moduli order of an all-real root multiset.

    Exact multisets group moduli by their rational enclosures (equal moduli
    share one enclosure by construction); float multisets group moduli within
    ``tol * (1 + modulus)``, defaulting to the tolerance the roots were found at.
    """
    if not r.all_real:
        raise ValueError("moduli orders are defined for real roots only")
    zeros = 0
    items = []  # (sort key, group key, letter, multiplicity)
    if r.exact:
        for e in r.entries:
            lo, hi = e.enclosure
            if lo == hi == 0:
                zeros += e.multiplicity
                continue
            mod = (lo, hi) if lo >= 0 else (-hi, -lo)
            items.append((mod, "P" if lo >= 0 else "N", e.multiplicity))
        items.sort()
        groups = []
        last = None
        for mod, letter, m in items:
            if mod != last:
                groups.append([])
                last = mod
            groups[-1].extend(letter * m)
    else:
        t = r.tolerance_used if tol is None else tol
        for e in r.entries:
            v = float(e.value.real if isinstance(e.value, complex) else e.value)
            if abs(v) <= t:
                zeros += e.multiplicity
                continue
            items.append((abs(v), "P" if v > 0 else "N", e.multiplicity))
        items.sort()
        groups = []
        anchor = None
        for mod, letter, m in items:
            if anchor is None or mod - anchor > t * (1 + mod):
                groups.append([])
                anchor = mod
            groups[-1].extend(letter * m)
    out = [tuple("0" * zeros)] if zeros else []
    out.extend(tuple(g) for g in groups)
    return ModuliOrder(tuple(out))


def moduli_order_of(P: Poly, tol: float = DEFAULT_TOL) -> ModuliOrder:
    return moduli_order(all_roots(P, tol), tol)


def canonical_mo(sp: SignPattern) -> ModuliOrder:
    """Read the pattern from the back; equal neighbours give N, opposite give P."""
    if sp.has_zeros:
        raise ValueError("canonical moduli orders are defined for patterns without zeros")
    rev = sp.signs[::-1]
    return ModuliOrder.strict("N" if a == b else "P" for a, b in zip(rev, rev[1:]))
