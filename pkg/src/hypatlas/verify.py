"""Exact checks of the rank, transversality and normal-form statements.

Every report is a frozen dataclass with a ``to_json`` method.  Batch checks
draw one generator per sample, ``np.random.default_rng([seed, ..., index])``,
so results do not depend on how samples are split across workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .polycore import EvenTimesQuadratic, Poly, _det_bareiss, expand, gcd, quartic_uw, resultant
from .strata import phi, whitney_coordinates

HEIGHT = 100


# ---------------------------------------------------------------------------
# exact linear algebra


def rank_bareiss(rows) -> int:
    """Rank by fraction-free elimination with full pivot search."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    prev = Fraction(1)
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, n_rows):
            f = a[r][col]
            a[r] = [(p * a[r][j] - f * a[rank][j]) / prev for j in range(n_cols)]
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def nullspace(rows) -> list[list[Fraction]]:
    """Basis of the right nullspace (reduced row echelon form over Q)."""
    a = [[Fraction(x) for x in r] for r in rows]
    n_cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    basis = []
    for free in (c for c in range(n_cols) if c not in pivots):
        vec = [Fraction(0)] * n_cols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][free]
        basis.append(vec)
    return basis


def _js(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_js(y) for y in x]
    if isinstance(x, dict):
        return {k: _js(v) for k, v in x.items()}
    return x


class _Report:
    def to_json(self) -> dict:
        return _js(asdict(self))


# ---------------------------------------------------------------------------
# Jacobian of (c_0, ..., c_{d-3}, v) -> coefficients of (x^2 - v^2) W(x)


def jacobian_transpose(W: Poly, v) -> list[list[Fraction]]:
    """Rows: derivatives of (a_0, ..., a_{d-1}) along c_0, ..., c_{d-3}, v."""
    W = _as_monic(W)
    v = Fraction(v)
    d = W.degree + 2
    c = list(W.coeffs)  # c_{d-2} = 1
    rows = []
    for i in range(d - 2):
        row = [Fraction(0)] * d
        row[i] = -v * v
        row[i + 2] = Fraction(1)
        rows.append(row)
    rows.append([-2 * v * c[j] for j in range(d - 1)] + [Fraction(0)])
    return rows


def jacobian_transpose_imaginary(W: Poly, A) -> list[list[Fraction]]:
    """Same for (x^2 + A) W(x); the last row is the derivative along A."""
    W = _as_monic(W)
    A = Fraction(A)
    d = W.degree + 2
    rows = []
    for i in range(d - 2):
        row = [Fraction(0)] * d
        row[i] = A
        row[i + 2] = Fraction(1)
        rows.append(row)
    rows.append([Fraction(x) for x in W.coeffs] + [Fraction(0)])
    return rows


def _as_monic(W: Poly) -> Poly:
    if not W.is_exact:
        raise TypeError("Jacobian checks need rational cofactors")
    if W.lc != 1:
        raise ValueError("the cofactor W must be monic")
    return W


@dataclass(frozen=True)
class JacobianReport(_Report):
    degree: int
    v: Fraction
    c: tuple  # W coefficients c_0 .. c_{d-3}
    rank: int
    U0: Fraction
    U1: Fraction
    W_plus: Fraction  # W(v)
    W_minus: Fraction  # W(-v)
    identity_holds: bool  # U0 +- v U1 == -2 v W(+-v)
    witness: str | None  # a nonzero one of "U0+vU1", "U0-vU1"
    hypotheses_hold: bool
    certified: bool

    @property
    def ok(self) -> bool:
        return self.identity_holds and (not self.hypotheses_hold or self.rank == self.degree - 1)


def jacobian_rank(W: Poly, v) -> JacobianReport:
    """Exact rank of the Jacobian at ``(x^2 - v^2) W``, with U0 and U1.

    U0 and U1 are read from the last row after adding ``v^2`` times column
    ``j + 2`` to column ``j`` for ``j`` from the right.  Violated hypotheses
    (``v = 0`` or ``W(+-v) = 0``) give a non-certified diagnostic report.
    """
    W = _as_monic(W)
    v = Fraction(v)
    d = W.degree + 2
    jt = jacobian_transpose(W, v)
    rank = rank_bareiss(jt)
    cols = [list(col) for col in zip(*jt)]
    for j in range(d - 3, -1, -1):
        cols[j] = [x + v * v * y for x, y in zip(cols[j], cols[j + 2])]
    U0, U1 = cols[0][-1], cols[1][-1]
    Wp, Wm = W(v), W(-v)
    identity = U0 + v * U1 == -2 * v * Wp and U0 - v * U1 == -2 * v * Wm
    hyp = v != 0 and Wp != 0 and Wm != 0
    witness = "U0+vU1" if U0 + v * U1 != 0 else ("U0-vU1" if U0 - v * U1 != 0 else None)
    return JacobianReport(d, v, tuple(W.coeffs[:-1]), rank, U0, U1, Wp, Wm, identity, witness, hyp, hyp)


@dataclass(frozen=True)
class ImaginaryJacobianReport(_Report):
    degree: int
    A: Fraction
    rank: int
    U0: Fraction  # real part of W(i sqrt(A))
    U1: Fraction  # W(i sqrt(A)) = U0 + i sqrt(A) U1
    hypotheses_hold: bool


def jacobian_rank_imaginary(W: Poly, A) -> ImaginaryJacobianReport:
    """Rank at ``(x^2 + A) W``; hypotheses are ``A > 0`` and ``W(+-i sqrt(A)) != 0``."""
    W = _as_monic(W)
    A = Fraction(A)
    jt = jacobian_transpose_imaginary(W, A)
    d = W.degree + 2
    cols = [list(col) for col in zip(*jt)]
    for j in range(d - 3, -1, -1):
        cols[j] = [x - A * y for x, y in zip(cols[j], cols[j + 2])]
    U0, U1 = cols[0][-1], cols[1][-1]
    return ImaginaryJacobianReport(d, A, rank_bareiss(jt), U0, U1, A > 0 and (U0, U1) != (0, 0))


def random_rational(rng: np.random.Generator, height: int = HEIGHT, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))
        if x != 0 or not nonzero:
            return x


def _jacobian_trial(d: int, seed: int, index: int) -> JacobianReport:
    rng = np.random.default_rng([seed, d, index])
    while True:
        # W is hyperbolic: a product of linear factors with rational roots
        roots = [random_rational(rng) for _ in range(d - 2)]
        W = expand([Poly((-r, Fraction(1))) for r in roots])
        v = random_rational(rng, nonzero=True)
        if W(v) != 0 and W(-v) != 0:
            return jacobian_rank(W, v)


@dataclass(frozen=True)
class JacobianBatch(_Report):
    degrees: tuple
    trials: int
    seed: int
    ranks: dict  # degree -> sorted distinct ranks observed
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def jacobian_batch(degrees=range(3, 9), trials: int = 100, seed: int = 0, workers: int = 1) -> JacobianBatch:
    jobs = [(d, i) for d in degrees for i in range(trials)]
    run = lambda job: _jacobian_trial(job[0], seed, job[1])  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(run, jobs))
    else:
        reports = [run(j) for j in jobs]
    ranks: dict = {}
    failures = []
    for (d, i), rep in zip(jobs, reports):
        ranks.setdefault(str(d), set()).add(rep.rank)
        if not rep.ok:
            failures.append({"degree": d, "index": i, "rank": rep.rank})
    return JacobianBatch(tuple(degrees), trials, seed, {k: sorted(v) for k, v in ranks.items()}, failures)


# ---------------------------------------------------------------------------
# transversality


@dataclass(frozen=True)
class TransversalityReport(_Report):
    s: int
    v_values: tuple
    A_values: tuple
    parameters: tuple  # v_j^2 for opposite pairs, -A_k for imaginary pairs
    vandermonde_det: Fraction
    independent: bool
    degree: int
    normals_rank: int  # rank of the full normal vectors at the common polynomial


def vandermonde_det(params) -> Fraction:
    out = Fraction(1)
    for i, j in combinations(range(len(params)), 2):
        out *= Fraction(params[j]) - Fraction(params[i])
    return out


def _normal(jt) -> list[Fraction]:
    basis = nullspace(jt)
    if len(basis) != 1:
        raise ArithmeticError("Jacobian does not have corank one")
    return basis[0]


def transversality_mixed(v_values=(), A_values=(), cofactor: Poly | None = None) -> TransversalityReport:
    """Independence of the normals at ``prod (x^2 - v_j^2) prod (x^2 + A_k) R(x)``.

    The reduced normals are the rows ``(1, t, t^2, ...)`` of a Vandermonde
    matrix in ``t = v_j^2`` and ``t = -A_k``; the full normals are computed
    as nullspaces of the transposed Jacobians and their rank is reported too.
    """
    vs = tuple(Fraction(v) for v in v_values)
    As = tuple(Fraction(A) for A in A_values)
    if any(v <= 0 for v in vs):
        raise ValueError("v values must be positive")
    params = tuple(v * v for v in vs) + tuple(-A for A in As)
    if len(set(params)) != len(params):
        raise ValueError(f"coincident parameters {[str(p) for p in params]}")
    if any(A <= 0 for A in As):
        raise ValueError("imaginary pairs need A > 0")
    R = Poly((Fraction(1),)) if cofactor is None else cofactor
    factors = [Poly((-v * v, 0, 1)) for v in vs] + [Poly((A, 0, 1)) for A in As]
    Q = R
    for f in factors:
        Q = Q * f
    if any(gcd(R, f).degree > 0 for f in factors):
        raise ValueError("the cofactor shares a root with one of the pairs")
    normals = []
    for k, f in enumerate(factors):
        W = Q // f
        if k < len(vs):
            normals.append(_normal(jacobian_transpose(W, vs[k])))
        else:
            normals.append(_normal(jacobian_transpose_imaginary(W, As[k - len(vs)])))
    det = vandermonde_det(params)
    nrank = rank_bareiss(normals) if normals else 0
    return TransversalityReport(len(params), vs, As, params, det, det != 0, Q.degree, nrank)


def transversality_check(v_values, cofactor: Poly | None = None) -> TransversalityReport:
    """Opposite pairs only; repeated ``v_j`` raise ``ValueError``."""
    if len(set(Fraction(v) for v in v_values)) != len(v_values):
        raise ValueError("repeated v values")
    return transversality_mixed(v_values, (), cofactor)


@dataclass(frozen=True)
class VandermondeSweep(_Report):
    pool: tuple
    subsets: int
    mismatches: int  # subsets where (det != 0) disagrees with pairwise distinctness

    @property
    def passed(self) -> bool:
        return self.mismatches == 0


def vandermonde_subset_sweep(pool) -> VandermondeSweep:
    """Check det != 0 iff distinct on every subset of a parameter pool."""
    pool = tuple(Fraction(p) for p in pool)
    n = 0
    bad = 0
    for k in range(1, len(pool) + 1):
        for sub in combinations(pool, k):
            n += 1
            if (vandermonde_det(sub) != 0) != (len(set(sub)) == len(sub)):
                bad += 1
    return VandermondeSweep(pool, n, bad)


# ---------------------------------------------------------------------------
# Hessian of phi


def phi_hessian(a, b, c, h) -> list[list]:
    """Hessian of ``a^2 h + (c - a b) c`` in the variable order (a, b, c, h)."""
    return [
        [2 * h, -c, -b, 2 * a],
        [-c, 0 * a, -a, 0 * a],
        [-b, -a, 2 + 0 * a, 0 * a],
        [2 * a, 0 * a, 0 * a, 0 * a],
    ]


@dataclass(frozen=True)
class HessianReport(_Report):
    point: tuple
    hessian: list
    numeric_rank: int
    exact: bool


def hessian_rank(a, b, c, h, tol: float = 1e-12) -> HessianReport:
    """Exact rank for rational points; SVD rank at ``tol`` (relative) otherwise."""
    vals = (a, b, c, h)
    if all(isinstance(x, (int, Fraction)) for x in vals):
        vals = tuple(Fraction(x) for x in vals)
        H = phi_hessian(*vals)
        return HessianReport(vals, H, rank_bareiss(H), True)
    vals = tuple(float(x) for x in vals)
    H = phi_hessian(*vals)
    arr = np.array(H, dtype=float)
    return HessianReport(vals, H, int(np.linalg.matrix_rank(arr, tol=tol * max(1.0, np.abs(arr).max()))), False)


@dataclass(frozen=True)
class HessianGrid(_Report):
    n: int
    points: int
    on_parabola: int
    rank_counts: dict  # "rank" -> count
    misclassified: list

    @property
    def passed(self) -> bool:
        return not self.misclassified


def hessian_grid(n: int = 50) -> HessianGrid:
    """Ranks over the plane a = c = 0 on the grid ``b = i/5``, ``h = j/100``.

    The index ranges are centred so that the parabola ``4h = b^2`` passes
    through grid points (for n = 50: i in -24..25, j in -10..39).
    """
    counts: dict = {}
    bad = []
    on = 0
    for i in range(n):
        b = Fraction(i - (n // 2 - 1), 5)
        for j in range(n):
            h = Fraction(j - n // 5, 100)
            r = hessian_rank(0, b, 0, h).numeric_rank
            counts[str(r)] = counts.get(str(r), 0) + 1
            expected = 1 if 4 * h == b * b else 2
            on += expected == 1
            if r != expected:
                bad.append([str(b), str(h), r])
    return HessianGrid(n, n * n, on, counts, bad)


# ---------------------------------------------------------------------------
# identities


def random_point(rng: np.random.Generator, height: int = HEIGHT) -> tuple[Fraction, ...]:
    return tuple(random_rational(rng, height) for _ in range(4))


@dataclass(frozen=True)
class IdentityReport(_Report):
    name: str
    samples: int
    seed: int
    max_residual: Fraction
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures and self.max_residual == 0


def whitney_identity_check(n_samples: int = 1000, seed: int = 0) -> IdentityReport:
    """``phi == omega^2 - rho a^2`` exactly at random rational points."""
    worst = Fraction(0)
    bad = []
    for i in range(n_samples):
        a, b, c, h = random_point(np.random.default_rng([seed, i]))
        om, rho = whitney_coordinates(a, b, c, h)
        res = abs(phi(a, b, c, h) - (om * om - rho * a * a))
        worst = max(worst, res)
        if res:
            bad.append(i)
    return IdentityReport("whitney", n_samples, seed, worst, bad)


def phi_vanishing_check(n_samples: int = 10000, seed: int = 0) -> IdentityReport:
    """phi of (x^2 + A)(x^2 + u x + v) is exactly zero."""
    worst = Fraction(0)
    bad = []
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        A, u, v = (random_rational(rng) for _ in range(3))
        res = abs(phi(*expand(EvenTimesQuadratic(A, u, v)).coords))
        worst = max(worst, res)
        if res:
            bad.append(i)
    return IdentityReport("phi-vanishing", n_samples, seed, worst, bad)


def resultant_product(u, w) -> Fraction:
    """``-4 u^2 (u^2 + u + w)^2 (u^2 - u + w)^2 (4 w - 1)``."""
    u, w = Fraction(u), Fraction(w)
    return -4 * u * u * (u * u + u + w) ** 2 * (u * u - u + w) ** 2 * (4 * w - 1)


def quartic_resultant(u, w) -> Fraction:
    Q = expand(quartic_uw(Fraction(u), Fraction(w)))
    return resultant(Q, Q.derivative())


@dataclass(frozen=True)
class ResultantReport(_Report):
    samples: int
    seed: int
    vanishing_mismatches: list
    ratios: list  # distinct values of Res / product over nonvanishing samples
    vanishing_samples: int

    @property
    def passed(self) -> bool:
        return not self.vanishing_mismatches and len(self.ratios) == 1


def _family_point(rng: np.random.Generator, index: int) -> tuple[Fraction, Fraction]:
    u = random_rational(rng)
    w = random_rational(rng)
    # every fifth sample sits on one of the special loci
    locus = index % 25
    if locus == 5:
        u = Fraction(0)
    elif locus == 10:
        w = u - u * u
    elif locus == 15:
        w = -u - u * u
    elif locus == 20:
        w = Fraction(1, 4)
    return u, w


def resultant_family_check(n_samples: int = 100, seed: int = 0) -> ResultantReport:
    """Res(Q4, Q4') against its factored form on random (u, w)."""
    bad = []
    ratios = set()
    zeros = 0
    for i in range(n_samples):
        u, w = _family_point(np.random.default_rng([seed, i]), i)
        res, prod = quartic_resultant(u, w), resultant_product(u, w)
        if (res == 0) != (prod == 0):
            bad.append([str(u), str(w)])
        elif res == 0:
            zeros += 1
        else:
            ratios.add(res / prod)
    return ResultantReport(n_samples, seed, bad, sorted(ratios), zeros)


# ---------------------------------------------------------------------------
# normal form near (x^2 - 1)^2 and the tangency at b = 1/8


@dataclass(frozen=True)
class UmbrellaReport(_Report):
    base: tuple
    samples: int
    identity_failures: int  # points of phi = 0 where omega^2 != rho a^2
    coordinate_jacobian_det: Fraction  # of (a, b, c, h) -> (a, b, omega, rho)
    rho_positive_off_axis: bool  # rho > 0 wherever a != 0 on phi = 0

    @property
    def passed(self) -> bool:
        return self.identity_failures == 0 and self.coordinate_jacobian_det != 0 and self.rho_positive_off_axis


def umbrella_check(n_samples: int = 200, seed: int = 0, radius: Fraction = Fraction(1, 10)) -> UmbrellaReport:
    """Near (0, -2, 0, 1) the set phi = 0 reads omega^2 = rho a^2.

    Points of phi = 0 are produced from ``(x^2 - v^2)(x^2 + u x + w)`` with
    (v, u, w) near (1, 0, -1).
    """
    fails = 0
    rho_ok = True
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        dv, du, dw = (random_rational(rng) * radius / HEIGHT for _ in range(3))
        v = 1 + dv
        a, b, c, h = expand(EvenTimesQuadratic(-v * v, du, -1 + dw)).coords
        om, rho = whitney_coordinates(a, b, c, h)
        if phi(a, b, c, h) != 0 or om * om != rho * a * a:
            fails += 1
        if a != 0 and rho < 0:
            rho_ok = False
    det = _det_bareiss(_whitney_jacobian(Fraction(0), Fraction(-2)))
    return UmbrellaReport((0, -2, 0, 1), n_samples, fails, det, rho_ok)


def _whitney_jacobian(a: Fraction, b: Fraction) -> list[list[Fraction]]:
    # rows: a, b, omega = c - a b / 2, rho = b^2 / 4 - h; columns: a, b, c, h
    one, zero = Fraction(1), Fraction(0)
    return [
        [one, zero, zero, zero],
        [zero, one, zero, zero],
        [-b / 2, -a / 2, one, zero],
        [zero, b / 2, zero, -one],
    ]


@dataclass(frozen=True)
class ContactReport(_Report):
    point: tuple  # (c, h)
    parameter: Fraction
    exact_order: int  # vanishing order of h - c (b - c) along the disc-slice parametrization
    numeric_order: int  # the same, read from a local fit of finite samples
    step: float
    velocity: tuple

    @property
    def passed(self) -> bool:
        return self.exact_order >= 4 and self.numeric_order >= 4


def contact_order_check(step: float = 1e-3, half_width: int = 5, threshold: float = 1e-4) -> ContactReport:
    """Order of contact of the b = 1/8 slices of the discriminant and of phi = 0.

    Along ``t -> (c(t), h(t))`` on the discriminant slice (double root t),
    the function ``h - c (1/8 - c)`` vanishes at ``t = -1/4`` to the reported
    order; the curve is regular there, so this is the intersection order of
    the two curves.
    """
    b0 = Fraction(1, 8)
    t0 = Fraction(-1, 4)
    T = Poly((Fraction(0), Fraction(1)))
    p = Poly((Fraction(1),)) + T * 2
    q = Poly((b0,)) + T * 2 + T * T * 3
    c = T * T * p - T * q * 2
    h = T * T * q
    E = h - c * (Poly((b0,)) - c)
    taylor = E.taylor(t0)
    exact_order = next(k for k, x in enumerate(taylor) if x != 0)
    # numeric: fit sampled values in the scaled variable j (t = t0 + j * step)
    js = np.arange(-half_width, half_width + 1, dtype=float)
    ts = float(t0) + js * step
    cf = np.polynomial.Polynomial([float(x) for x in c.coeffs])
    hf = np.polynomial.Polynomial([float(x) for x in h.coeffs])
    vals = hf(ts) - cf(ts) * (float(b0) - cf(ts))
    fit = np.polynomial.polynomial.polyfit(js, vals, 2 * half_width - 4)
    scale = np.abs(fit).max()
    numeric_order = int(next(k for k, x in enumerate(fit) if abs(x) > threshold * scale))
    vel = (c.derivative()(t0), h.derivative()(t0))
    return ContactReport((c(t0), h(t0)), t0, exact_order, numeric_order, step, vel)
