"""Sampled curves of the small-degree hyperbolicity domains.

Every catalog curve is polynomial in its parameter, so a curve is stored as
one ``Poly`` per coordinate.  With rational parameters and a rational range
the samples are exact; cusps are the real roots of the gcd of the velocity
components.
"""
from __future__ import annotations

import csv
import io
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .polycore import Poly, Polynomial, as_scalar, discriminant_resultant, gcd, parse_scalar
from .rootlab import all_roots
from .strata import phi

CUSP_TOL = 1e-10

_T = Poly((0, 1))  # the parameter


def _c(x) -> Poly:
    return Poly((x,))


@dataclass(frozen=True)
class SingularPoint:
    kind: str  # cusp | self-intersection | isolated
    parameters: tuple  # parameter values (two for a self-intersection, none for an isolated point)
    point: tuple
    exact: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": [_jsonable(t) for t in self.parameters],
            "point": [_jsonable(x) for x in self.point],
            "exact": self.exact,
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return float(x)


@dataclass(frozen=True)
class CurvePolyline:
    curve_id: str
    parameter: str
    coordinates: tuple[str, ...]
    parameter_range: tuple
    parameters: tuple
    samples: tuple[tuple, ...]
    singular_points: tuple[SingularPoint, ...]

    @property
    def exact(self) -> bool:
        return all(isinstance(t, Fraction) for t in self.parameters)

    def array(self) -> np.ndarray:
        """``(n, 1 + dim)`` float array: parameter first, then coordinates."""
        return np.array([[float(t), *map(float, s)] for t, s in zip(self.parameters, self.samples)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = self.parameter if self.parameter not in self.coordinates else f"param_{self.parameter}"
        w.writerow([head, *self.coordinates])
        for row in self.array():
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "curve_id": self.curve_id,
            "parameter": self.parameter,
            "coordinates": list(self.coordinates),
            "parameter_range": [_jsonable(x) for x in self.parameter_range],
            "samples": [[float(t), *map(float, s)] for t, s in zip(self.parameters, self.samples)],
            "singular_points": [sp.to_json() for sp in self.singular_points],
        }


@dataclass(frozen=True)
class _Curve:
    name: str
    parameter: str
    coordinates: tuple[str, ...]
    polys: tuple[Poly, ...]
    domain: tuple  # (lo, hi), None for unbounded
    default_range: tuple
    residual: Callable[[tuple], tuple]
    extra_singular: Callable[[], list] = lambda: []


# ---------------------------------------------------------------------------
# catalog


def _disc(coeffs_desc) -> object:
    return discriminant_resultant(Polynomial.from_coords(*coeffs_desc))


F = Fraction


def _pi2_boundary() -> _Curve:
    return _Curve(
        "Pi2Boundary", "a", ("a", "b"), (_T, _T * _T * F(1, 4)), (None, None), (F(-2), F(2)),
        lambda p: (p[1] - p[0] * p[0] / 4,),
    )


def _c3(lift: bool = False) -> _Curve:
    # (x - xi)^2 (x - eta), eta = -1 - 2 xi
    b = _T * _T * -3 - _T * 2
    c = _T * _T + _T * _T * _T * 2
    if not lift:
        return _Curve("C3", "xi", ("b", "c"), (b, c), (None, None), (F(-6, 5), F(3, 5)),
                      lambda p: (_disc((1, p[0], p[1])),))
    return _Curve("H4", "xi", ("b", "c", "h"), (b, c, _c(0)), (None, None), (F(-6, 5), F(3, 5)),
                  lambda p: (_disc((1, p[0], p[1], 0 * p[0])), p[2]))


def _e3(sign: int) -> _Curve:
    v2 = _T * _T * sign
    name = "E3" if sign < 0 else "F3"
    return _Curve(name, "v", ("b", "c"), (v2, v2), (F(0), None), (F(0), F(3, 2)),
                  lambda p: (p[0] - p[1], max(sign * -p[0], 0)))


def _s4() -> _Curve:
    # (x - xi)^3 (x - eta), 3 xi + eta = -1
    eta = _T * -3 - _c(1)
    b = _T * _T * 3 + _T * eta * 3
    c = (_T * _T * eta * -3) - _T * _T * _T
    h = _T * _T * _T * eta
    return _Curve("S4", "xi", ("b", "c", "h"), (b, c, h), (None, None), (F(-3, 4), F(1, 4)),
                  lambda p: (_disc((1, p[0], p[1], p[2])), _disc((F(3, 4), p[0] / 2, p[1] / 4))))


def _l4(real: bool) -> _Curve:
    c = _T * F(1, 2) - _c(F(1, 8))
    dom = (None, F(3, 8)) if real else (F(3, 8), None)
    rng = (F(-1), F(3, 8)) if real else (F(3, 8), F(1))
    return _Curve("LR4" if real else "LI4", "b", ("b", "c", "h"), (_T, c, c * c), dom, rng,
                  lambda p: (p[1] - p[0] / 2 + F(1, 8), p[2] - p[1] * p[1]))


def _pcal4() -> _Curve:
    # (x^2 - u^2)(x^2 + x + w) with w = u - u^2
    b = _T - _T * _T * 2
    c = _T * _T * -1
    h = c * (b - c)
    return _Curve("Pcal4", "u", ("b", "c", "h"), (b, c, h), (None, None), (F(-1), F(1)),
                  lambda p: ((p[0] - 2 * p[1]) ** 2 + p[1], p[2] - p[1] * (p[0] - p[1])))


def _disc_slice(a, b, name="DiscSlice") -> _Curve:
    # (x - t)^2 (x^2 + p x + q) with the x^3 and x^2 coefficients fixed to a, b
    p = _c(a) + _T * 2
    q = _c(b) + _T * (a * 2) + _T * _T * 3
    c = _T * _T * p - _T * q * 2
    h = _T * _T * q
    half_a = a / 2
    prod = (b - a * a / 4) / 2  # t1 t2 for a pair of double roots

    def extra():
        sum_ = -half_a
        c0, h0 = -2 * prod * sum_, prod * prod
        gap = sum_ * sum_ - 4 * prod
        if gap < 0:
            return [SingularPoint("isolated", (), (c0, h0), isinstance(gap, Fraction))]
        if gap == 0:
            return []
        exact = isinstance(gap, Fraction)
        r = all_roots(Poly((prod, -sum_, 1)))
        ts = sorted(e.exact if e.exact is not None else float(np.real(e.value)) for e in r.entries)
        return [SingularPoint("self-intersection", tuple(ts), (c0, h0), exact and all(isinstance(t, Fraction) for t in ts))]

    label = f"{name}(a={a},b={b})" if name == "DiscSlice" else f"{name}(b={b})"
    return _Curve(label, "t", ("c", "h"), (c, h), (None, None), (F(-1), F(1)),
                  lambda pt: (_disc((a, b, pt[0], pt[1])),), extra)


def _etilde_slice(a, b) -> _Curve:
    if a != 0:
        h = (_T - _c(a * b)) * _T * (-1 / (a * a))
        polys = (_T, h)
        param = "c"
    else:
        polys = (_c(0 * b), _T)
        param = "h"
    return _Curve(f"EtildeSlice(a={a},b={b})", param, ("c", "h"), polys, (None, None), (F(-1, 2), F(1, 2)),
                  lambda pt: (phi(a, b, pt[0], pt[1]),))


CURVE_NAMES = {
    "pi2-boundary": "Pi2Boundary",
    "c3": "C3",
    "e3": "E3",
    "f3": "F3",
    "s4": "S4",
    "lr4": "LR4",
    "li4": "LI4",
    "h4": "H4",
    "pcal": "Pcal4",
    "disc-slice": "DiscSlice",
    "etilde-slice": "EtildeSlice",
    "even-disc-slice": "EvenDiscSlice",
}
_SLICE_ARGS = {"DiscSlice": ("a", "b"), "EtildeSlice": ("a", "b"), "EvenDiscSlice": ("b",)}


def _build(name: str, a=None, b=None) -> _Curve:
    simple = {
        "Pi2Boundary": _pi2_boundary,
        "C3": _c3,
        "H4": lambda: _c3(True),
        "E3": lambda: _e3(-1),
        "F3": lambda: _e3(1),
        "S4": _s4,
        "LR4": lambda: _l4(True),
        "LI4": lambda: _l4(False),
        "Pcal4": _pcal4,
    }
    if name in simple:
        return simple[name]()
    if name not in _SLICE_ARGS:
        raise ValueError(f"unknown curve {name!r}")
    if name == "EvenDiscSlice":
        if b is None:
            raise ValueError("EvenDiscSlice needs b")
        b = _slice_scalar(b)
        return _disc_slice(0 * b, b, "EvenDiscSlice")
    if a is None or b is None:
        raise ValueError(f"{name} needs a and b")
    a, b = _slice_scalar(a), _slice_scalar(b)
    if isinstance(a, float) or isinstance(b, float):
        a, b = float(a), float(b)
    return (_disc_slice if name == "DiscSlice" else _etilde_slice)(a, b)


def _slice_scalar(x):
    x = parse_scalar(x) if isinstance(x, str) else as_scalar(x)
    return Fraction(x) if isinstance(x, int) else x


_CALL_FORM = re.compile(r"^\s*([\w-]+)\s*\((.*)\)\s*$")


def resolve_curve(curve_id: str, a=None, b=None) -> tuple[str, object, object]:
    """Accept ``DiscSlice``, ``disc-slice`` or ``DiscSlice(a=1,b=0)``."""
    m = _CALL_FORM.match(curve_id)
    if m:
        name, body = m.group(1), m.group(2)
        keys = _SLICE_ARGS.get(CURVE_NAMES.get(name, name), ())
        vals = {}
        for i, part in enumerate(x for x in body.split(",") if x.strip()):
            k, _, v = part.rpartition("=")
            key = k.strip() or (keys[i] if i < len(keys) else "?")
            vals[key] = v.strip()
        a = vals.get("a", a)
        b = vals.get("b", b)
        curve_id = name
    return CURVE_NAMES.get(curve_id, curve_id), a, b


# ---------------------------------------------------------------------------
# emission


def _sample_params(lo, hi, n: int) -> list:
    return [lo + k * (hi - lo) / (n - 1) for k in range(n)]


def _eval_chunk(polys, ts) -> list:
    return [tuple(p(t) for p in polys) for t in ts]


def _cusps(curve: _Curve, lo, hi) -> list[SingularPoint]:
    derivs = [p.derivative() for p in curve.polys]
    if all(d.is_zero for d in derivs):
        return []
    exact = all(p.is_exact for p in curve.polys)
    dlo, dhi = curve.domain

    def interior(t):
        return (dlo is None or t > dlo) and (dhi is None or t < dhi) and lo <= t <= hi

    out = []
    if exact:
        g = None
        for d in derivs:
            g = d if g is None else gcd(g, d)
        if g.degree < 1:
            return []
        for e in all_roots(g).real:
            t = e.exact if e.exact is not None else float(e.value)
            if interior(t):
                out.append(SingularPoint("cusp", (t,), tuple(p(t) for p in curve.polys), isinstance(t, Fraction)))
        return out
    first = next(d for d in derivs if not d.is_zero)
    if first.degree < 1:
        return []
    for z in np.roots(first.to_numpy()):
        if abs(z.imag) > CUSP_TOL * (1 + abs(z)):
            continue
        t = float(z.real)
        scale = 1 + abs(t)
        if all(abs(float(d(t))) <= CUSP_TOL * scale for d in derivs) and interior(t):
            out.append(SingularPoint("cusp", (t,), tuple(float(p(t)) for p in curve.polys), False))
    return out


def emit_curve(
    curve_id: str,
    parameter_range=None,
    n_samples: int = 200,
    *,
    a=None,
    b=None,
    workers: int = 1,
) -> CurvePolyline:
    """Sample a catalog curve at ``n_samples`` equally spaced parameters.

    The range is clipped to the curve's natural domain (``v >= 0`` for E3/F3,
    ``b <= 3/8`` for LR4, ``b >= 3/8`` for LI4); an empty intersection raises
    ``ValueError``.  ``workers > 1`` splits the samples across threads and
    yields the same polyline as a serial run.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    name, a, b = resolve_curve(curve_id, a, b)
    curve = _build(name, a, b)
    lo, hi = curve.default_range if parameter_range is None else parameter_range
    lo, hi = _slice_scalar(lo), _slice_scalar(hi)
    coeff_float = not all(p.is_exact for p in curve.polys)
    if coeff_float or isinstance(lo, float) or isinstance(hi, float):
        lo, hi = float(lo), float(hi)
        polys = tuple(p.to_float() for p in curve.polys)
        curve = _Curve(curve.name, curve.parameter, curve.coordinates, polys, curve.domain,
                       curve.default_range, curve.residual, curve.extra_singular)
    dlo, dhi = curve.domain
    if dlo is not None and lo < dlo:
        lo = type(lo)(dlo)
    if dhi is not None and hi > dhi:
        hi = type(hi)(dhi)
    if not lo < hi:
        raise ValueError(f"range does not meet the domain of {curve.name}")
    ts = _sample_params(lo, hi, n_samples)
    if workers > 1:
        step = -(-len(ts) // workers)
        chunks = [ts[i:i + step] for i in range(0, len(ts), step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ch: _eval_chunk(curve.polys, ch), chunks))
        samples = [s for part in parts for s in part]
    else:
        samples = _eval_chunk(curve.polys, ts)
    singular = _cusps(curve, lo, hi) + list(curve.extra_singular())
    return CurvePolyline(
        curve.name, curve.parameter, curve.coordinates, (lo, hi), tuple(ts), tuple(samples), tuple(singular)
    )


def curve_residuals(poly: CurvePolyline, a=None, b=None) -> list[tuple]:
    """Defining-equation residuals of every sample (zero on the curve)."""
    name, a, b = resolve_curve(poly.curve_id, a, b)
    curve = _build(name, a, b)
    return [curve.residual(s) for s in poly.samples]
