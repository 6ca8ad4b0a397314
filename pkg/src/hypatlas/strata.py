"""Stratification of the hyperbolicity domain for small degrees.

Coefficient points are written as ``(a, b)`` for
``x^2 + a x + b``, ``(a, b, c)`` for ``x^3 + a x^2 + b x + c`` and
``(a, b, c, h)`` for ``x^4 + a x^3 + b x^2 + c x + h``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .patterns import ModuliOrder, SignPattern, moduli_order, sign_pattern
from .polycore import (
    Poly,
    Polynomial,
    _unify,
    expand,
    gcd,
    sturm_distinct_real_roots,
)
from .rootlab import DEFAULT_TOL, RootFindingError, all_roots

MEMBERSHIP_ORDER = ("E", "F", "G", "Δ")


# ---------------------------------------------------------------------------
# the quartic invariant


def phi(a, b, c, h):
    """``a^2 h + (c - a b) c``; its zero set is the closure of Ẽ_4."""
    a, b, c, h = _unify((a, b, c, h))
    return a * a * h + (c - a * b) * c


def whitney_coordinates(a, b, c, h) -> tuple:
    """``(omega, rho) = (c - a b / 2, b^2 / 4 - h)``, so that ``phi = omega^2 - rho a^2``."""
    a, b, c, h = _unify((a, b, c, h))
    return c - a * b / 2, b * b / 4 - h


# ---------------------------------------------------------------------------
# E / F / G memberships


@dataclass(frozen=True)
class EtildeMembership:
    in_E: bool
    in_F: bool
    in_G: bool
    witnesses_E: tuple[float, ...] = ()  # r > 0 with +-r both roots
    witnesses_F: tuple[float, ...] = ()  # y > 0 with +-iy both roots
    phi_zero: bool | None = None  # degree 4 only
    closure_only: bool = False  # phi = 0 (a = 0, c = 0) without E, F or G
    consistent: bool = True
    certified: bool = True

    @property
    def any(self) -> bool:
        return self.in_E or self.in_F or self.in_G


def _zero_multiplicity(p: Poly) -> int:
    k = 0
    while k < len(p.coeffs) and p.coeffs[k] == 0:
        k += 1
    return k


def _even_part_roots(p: Poly) -> tuple[Poly | None, int]:
    """Common roots of P(x) and P(-x), as a polynomial in y = x^2."""
    g = gcd(p, p.reflect())
    if g.degree < 1:
        return None, 0
    k = _zero_multiplicity(g)
    q = Poly(g.coeffs[k:])
    if q.degree < 1:
        return None, k
    if any(q.coeffs[i] != 0 for i in range(1, len(q.coeffs), 2)):
        raise ArithmeticError("gcd(P(x), P(-x)) is not even")
    return Poly(q.coeffs[::2]), k


def _exact_membership(p: Poly) -> EtildeMembership:
    import numpy as np

    G, _ = _even_part_roots(p)
    in_G = _zero_multiplicity(p) >= 2
    in_E = in_F = False
    wE: tuple[float, ...] = ()
    wF: tuple[float, ...] = ()
    if G is not None:
        in_E = sturm_distinct_real_roots(G, 0, None) > 0
        in_F = sturm_distinct_real_roots(G, None, 0) > 0
        ys = [z.real for z in np.roots(G.to_numpy()) if abs(z.imag) <= 1e-9 * (1 + abs(z))]
        wE = tuple(sorted(float(np.sqrt(y)) for y in ys if y > 0)) if in_E else ()
        wF = tuple(sorted(float(np.sqrt(-y)) for y in ys if y < 0)) if in_F else ()
    return _with_phi(p, EtildeMembership(in_E, in_F, in_G, wE, wF))


def _float_membership(p: Poly, tol: float) -> EtildeMembership:
    roots = all_roots(p, tol)
    reals = [float(e.value.real if isinstance(e.value, complex) else e.value) for e in roots.real]
    mults = [e.multiplicity for e in roots.real]
    in_G = any(abs(r) <= tol and m >= 2 for r, m in zip(reals, mults))
    wE = []
    for r in reals:
        if r > tol and any(abs(s + r) <= tol * (1 + r) for s in reals):
            wE.append(r)
    wF = []
    for e in roots.pairs:
        z = complex(e.value)
        if abs(z.real) <= tol * (1 + abs(z)):
            wF.append(z.imag)
    return _with_phi(
        p, EtildeMembership(bool(wE), bool(wF), in_G, tuple(wE), tuple(wF), certified=False)
    )


def _with_phi(p: Poly, m: EtildeMembership) -> EtildeMembership:
    if p.degree != 4:
        return m
    a, b, c, h = p.coords
    val = phi(a, b, c, h)
    if p.is_exact:
        zero = val == 0
    else:
        scale = abs(a * a * h) + abs(c * c) + abs(a * b * c)
        zero = abs(val) <= 1e-9 * max(scale, 1e-300)
    if a != 0:
        consistent = zero == m.any
        closure_only = False
    else:
        # with a = 0, phi = c^2 also vanishes on even quartics with non-real y-roots
        consistent = (not m.any) or zero
        closure_only = zero and not m.any
    return replace(m, phi_zero=zero, consistent=consistent, closure_only=closure_only)


def etilde_membership(P: Poly, tol: float = DEFAULT_TOL) -> EtildeMembership:
    """Membership in E_d, F_d, G_d with witnesses; degree 4 also checks phi."""
    if P.is_exact:
        return _exact_membership(P)
    return _float_membership(P, tol)


# ---------------------------------------------------------------------------
# landmarks


@dataclass(frozen=True)
class LandmarkPoint:
    name: str
    degree: int
    coords: tuple[Fraction, ...]
    factored: tuple  # expand() input
    description: str
    partition: tuple[int, ...]
    memberships: frozenset[str]
    hyperbolic: str

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.from_coords(*self.coords)

    def defining_polynomial(self) -> Polynomial:
        f = self.factored
        return expand(dict(f) if f and not isinstance(f[0], Poly) else list(f))


def _q(*c) -> Poly:
    return Poly(tuple(Fraction(x) for x in c))


F_ = Fraction
_CATALOG = [
    LandmarkPoint("O", 3, (F_(1), F_(0), F_(0)), ((0, 2), (-1, 1)), "x^2 (x + 1)", (2, 1), frozenset({"G", "Δ"}), "boundary"),
    LandmarkPoint("T", 3, (F_(1), F_(1, 3), F_(1, 27)), ((F_(-1, 3), 3),), "(x + 1/3)^3", (3,), frozenset({"Δ"}), "boundary"),
    LandmarkPoint("P", 3, (F_(1), F_(1, 4), F_(0)), ((0, 1), (F_(-1, 2), 2)), "x (x + 1/2)^2", (2, 1), frozenset({"Δ"}), "boundary"),
    LandmarkPoint("S", 3, (F_(1), F_(0), F_(-4, 27)), ((F_(-2, 3), 2), (F_(1, 3), 1)), "(x + 2/3)^2 (x - 1/3)", (2, 1), frozenset({"Δ"}), "boundary"),
    LandmarkPoint("M", 3, (F_(1), F_(-1), F_(-1)), ((1, 1), (-1, 2)), "(x - 1) (x + 1)^2", (2, 1), frozenset({"E", "Δ"}), "boundary"),
    LandmarkPoint("swallowtail", 4, (F_(1), F_(3, 8), F_(1, 16), F_(1, 256)), ((F_(-1, 4), 4),), "(x + 1/4)^4", (4,), frozenset({"Δ"}), "boundary"),
    LandmarkPoint("B", 4, (F_(1), F_(2, 5), F_(3, 40), F_(9, 1600)), (_q(F_(3, 40), F_(1, 2), 1), _q(F_(3, 40), F_(1, 2), 1)), "(x^2 + x/2 + 3/40)^2", (2, 2), frozenset({"Δ"}), "outside"),
    LandmarkPoint("I", 4, (F_(1), F_(0), F_(-1, 8), F_(1, 64)), (_q(F_(-1, 8), F_(1, 2), 1), _q(F_(-1, 8), F_(1, 2), 1)), "(x^2 + x/2 - 1/8)^2, two double real roots (slice b = 0)", (2, 2), frozenset({"Δ"}), "boundary"),
    LandmarkPoint("L", 4, (F_(1), F_(0), F_(-1, 4), F_(-1, 16)), ((F_(-1, 2), 3), (F_(1, 2), 1)), "(x + 1/2)^3 (x - 1/2), cusp of the slice b = 0", (3, 1), frozenset({"E", "Δ"}), "boundary"),
    LandmarkPoint("R", 4, (F_(1), F_(0), F_(0), F_(0)), ((0, 3), (-1, 1)), "x^3 (x + 1), cusp of the slice b = 0", (3, 1), frozenset({"G", "Δ"}), "boundary"),
    LandmarkPoint("tangency", 4, (F_(1), F_(1, 8), F_(-1, 16), F_(-3, 256)), ((F_(1, 4), 1), (F_(-1, 4), 2), (F_(-3, 4), 1)), "(x - 1/4)(x + 1/4)^2 (x + 3/4)", (2, 1, 1), frozenset({"E", "Δ"}), "boundary"),
    LandmarkPoint("N", 4, (F_(0), F_(1), F_(0), F_(1, 4)), (_q(F_(1, 2), 0, 1), _q(F_(1, 2), 0, 1)), "(x^2 + 1/2)^2, double purely imaginary pair", (2, 2), frozenset({"F", "Δ"}), "outside"),
]
_BY_KEY = {(lm.name, lm.degree): lm for lm in _CATALOG}


def landmark(name: str, degree: int) -> LandmarkPoint:
    try:
        return _BY_KEY[(name, degree)]
    except KeyError:
        raise KeyError(f"no landmark {name!r} in degree {degree}") from None


def landmarks(degree: int | None = None) -> list[LandmarkPoint]:
    return [lm for lm in _CATALOG if degree is None or lm.degree == degree]


# ---------------------------------------------------------------------------
# stratum tables: (sign pattern, moduli order) -> stratum ID

_D1 = {("(+,+)", "N"): "a>0", ("(+,-)", "P"): "a<0", ("(+,0)", "0"): "a=0"}

_D2 = {
    ("(+,+,+)", "N<N"): "a>0,0<b<a^2/4",
    ("(+,-,+)", "P<P"): "a<0,0<b<a^2/4",
    ("(+,+,-)", "P<N"): "a>0,b<0",
    ("(+,-,-)", "N<P"): "a<0,b<0",
    ("(+,0,-)", "P=N"): "E2",
    ("(+,+,+)", "N=N"): "a>0,b=a^2/4",
    ("(+,-,+)", "P=P"): "a<0,b=a^2/4",
    ("(+,+,0)", "0<N"): "a>0,b=0",
    ("(+,-,0)", "0<P"): "a<0,b=0",
    ("(+,0,0)", "0=0"): "origin",
}

# the a = 1 slice of the cubic family, then the a = 0 slice
D3_STRATA = {
    "1": ("(+,+,+,+)", "N<N<N"),
    "2": ("(+,+,+,-)", "P<N<N"),
    "3": ("(+,+,-,-)", "P<N<N"),
    "4": ("(+,+,-,-)", "N<P<N"),
    "5": ("(+,+,-,-)", "N<N<P"),
    "6": ("(+,+,-,+)", "P<P<N"),
    "7": ("(+,+,+,+)", "N=N<N"),
    "8": ("(+,+,+,+)", "N<N=N"),
    "9": ("(+,+,+,-)", "P<N=N"),
    "10": ("(+,+,-,-)", "P<N=N"),
    "11": ("(+,+,-,-)", "N=N<P"),
    "12": ("(+,+,-,+)", "P=P<N"),
    "13": ("(+,+,-,-)", "P=N<N"),
    "14": ("(+,+,-,-)", "N<P=N"),
    "15": ("(+,+,+,0)", "0<N<N"),
    "16": ("(+,+,-,0)", "0<P<N"),
    "17": ("(+,+,0,-)", "P<N<N"),
    "18": ("(+,+,0,0)", "0=0<N"),
    "19": ("(+,+,+,+)", "N=N=N"),
    "20": ("(+,+,+,0)", "0<N=N"),
    "21": ("(+,+,0,-)", "P<N=N"),
    "22": ("(+,+,-,-)", "P=N=N"),
    "5a": ("(+,0,-,-)", "N<N<P"),
    "6a": ("(+,0,-,+)", "P<P<N"),
    "11a": ("(+,0,-,-)", "N=N<P"),
    "12a": ("(+,0,-,+)", "P=P<N"),
    "14a16a": ("(+,0,-,0)", "0<P=N"),
    "18a": ("(+,0,0,0)", "0=0=0"),
}
D3_POINT_LANDMARKS = {"18": "O", "19": "T", "20": "P", "21": "S", "22": "M"}


def _key(sp: SignPattern, mo: ModuliOrder) -> tuple[str, str]:
    return str(sp), str(mo)


_D3 = {}
for _id, (_sp, _mo) in D3_STRATA.items():
    _D3[_key(SignPattern.parse(_sp), ModuliOrder.parse(_mo))] = _id


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class StratumLabel:
    degree: int
    hyperbolic: str  # interior | boundary | outside
    partition: tuple[int, ...]
    moduli_order: ModuliOrder | None
    sign_pattern: SignPattern
    memberships: tuple[str, ...]
    enumerated_id: str | None = None
    landmark: str | None = None
    normalized: tuple | None = None  # slice coordinates used for the ID lookup (d = 3)
    certified: bool = True
    candidates: tuple[str, ...] | None = None

    @property
    def ambiguous(self) -> bool:
        return self.candidates is not None

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "hyperbolic": self.hyperbolic,
            "partition": list(self.partition),
            "sp": str(self.sign_pattern),
            "mo": None if self.moduli_order is None else str(self.moduli_order),
            "memberships": list(self.memberships),
            "id": self.enumerated_id,
            "landmark": self.landmark,
            "certified": self.certified,
            "candidates": None if self.candidates is None else list(self.candidates),
        }


def _normalize_cubic(coords):
    """Map (a, b, c) with a != 0 to the slice a = 1 (reflecting when a < 0)."""
    a, b, c = coords
    flip = a < 0
    if flip:
        a, c = -a, -c
    return (a / a, b / (a * a), c / (a * a * a)), flip


def _lookup_id(degree: int, coords, sp: SignPattern, mo: ModuliOrder | None):
    if mo is None:
        return None, None
    if degree == 1:
        return _D1.get(_key(sp, mo)), None
    if degree == 2:
        return _D2.get(_key(sp, mo)), None
    if degree == 3:
        if coords[0] == 0:
            return _D3.get(_key(sp, mo)), coords
        normalized, flip = _normalize_cubic(coords)
        # positive dilatations keep the sign pattern and the moduli order;
        # the reflection a -> -a, c -> -c negates the roots
        if flip:
            sp, mo = sp.reflect(), mo.swap()
        return _D3.get(_key(sp, mo)), normalized
    return None, None


def _landmark_at(P: Poly, tol: float) -> str | None:
    for lm in _CATALOG:
        if lm.degree != P.degree:
            continue
        if P.is_exact:
            hit = tuple(lm.coords) == tuple(P.coords)
        else:
            hit = all(abs(float(x) - float(y)) <= tol * (1 + abs(float(y))) for x, y in zip(P.coords, lm.coords))
        if hit:
            return lm.name
    return None


def _memberships(mem: EtildeMembership, partition) -> tuple[str, ...]:
    tags = set()
    if mem.in_E:
        tags.add("E")
    if mem.in_F:
        tags.add("F")
    if mem.in_G:
        tags.add("G")
    if any(m > 1 for m in partition):
        tags.add("Δ")
    return tuple(t for t in MEMBERSHIP_ORDER if t in tags)


def _finish(P: Poly, hyperbolic: bool, partition, mo, mem, certified, tol=0.0) -> StratumLabel:
    sp = sign_pattern(P)
    if not hyperbolic:
        status = "outside"
    elif any(m > 1 for m in partition):
        status = "boundary"
    else:
        status = "interior"
    sid, normalized = _lookup_id(P.degree, P.coords, sp, mo)
    lm = _landmark_at(P, tol)
    if P.degree >= 4:
        sid = lm
    return StratumLabel(
        P.degree,
        status,
        tuple(partition),
        mo,
        sp,
        _memberships(mem, partition),
        sid,
        lm,
        None if normalized is None else tuple(normalized),
        certified,
    )


def _classify_exact(P: Polynomial) -> StratumLabel:
    roots = all_roots(P)  # real roots are counted by Sturm sequences
    mo = moduli_order(roots) if roots.all_real else None
    return _finish(P, roots.all_real, roots.partition(), mo, _exact_membership(P), True)


def _classify_float(P: Polynomial, tol: float) -> StratumLabel:
    roots = all_roots(P, tol)
    mo = moduli_order(roots, tol) if roots.all_real else None
    return _finish(P, roots.all_real, roots.partition(), mo, _float_membership(P, tol), False, tol)


def classify(P: Poly, tol: float = DEFAULT_TOL) -> StratumLabel:
    """Full stratum label of a monic polynomial.

    Rational input is classified exactly.  Float input is classified at
    ``tol`` and re-checked at ``100 tol`` and ``tol / 100``; if the labels
    disagree the result carries the candidate stratum IDs instead of a
    silent pick.
    """
    if P.lc != 1:
        raise ValueError("classify expects a monic polynomial")
    if not isinstance(P, Polynomial):
        P = P.monic()
    if P.is_exact:
        return _classify_exact(P)
    labels = []
    for t in (tol, tol * 100, tol / 100):
        try:
            labels.append(_classify_float(P, t))
        except RootFindingError:
            continue
    if not labels:
        raise RootFindingError(f"no tolerance produced consistent roots for {P}")
    base = labels[0]

    def sig(lb: StratumLabel):
        return (lb.enumerated_id, lb.hyperbolic, lb.partition, lb.memberships, str(lb.moduli_order))

    if len({sig(lb) for lb in labels}) > 1:
        cands = tuple(sorted({lb.enumerated_id or lb.hyperbolic for lb in labels}))
        return replace(base, candidates=cands)
    return base
