"""Sampling hyperbolic polynomials and tabulating sign patterns against moduli orders.

Samples are drawn in root space, so every sample is hyperbolic by
construction.  Sample ``i`` lives in block ``i // BLOCK`` and each block has
its own generator ``np.random.default_rng([seed, block])``; tables are
therefore identical for any number of worker threads.
"""
from __future__ import annotations

import csv
import io
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .patterns import ModuliOrder, SignPattern, canonical_mo, descartes_counts
from .polycore import Polynomial

BLOCK = 8192
LAWS = ("logmod", "uniform")
COEFF_TOL = 1e-12
MODULI_TOL = 1e-8


def worker_count(requested: int | None = None) -> int:
    """``requested``, else ``HYPATLAS_THREADS``, else 1."""
    if requested is not None:
        return max(1, int(requested))
    try:
        return max(1, int(os.environ.get("HYPATLAS_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# sampling


def sample_roots(d: int, n: int, rng: np.random.Generator, law: str = "logmod", radius: float = 1.0) -> np.ndarray:
    """``(n, d)`` real roots.

    ``logmod``: modulus ``10^U`` with U uniform on [-3, 3] and a fair sign;
    ``uniform``: uniform on ``[-radius, radius]``.
    """
    if law == "logmod":
        mods = 10.0 ** rng.uniform(-3.0, 3.0, size=(n, d))
        signs = np.where(rng.random((n, d)) < 0.5, -1.0, 1.0)
        return mods * signs
    if law == "uniform":
        return rng.uniform(-radius, radius, size=(n, d))
    raise ValueError(f"unknown root law {law!r}; expected one of {LAWS}")


def coefficients_from_roots(roots: np.ndarray) -> np.ndarray:
    """Descending coefficient rows ``(1, a_{d-1}, ..., a_0)`` of ``prod (x - r)``."""
    n, d = roots.shape
    c = np.ones((n, 1))
    for k in range(d):
        r = roots[:, k : k + 1]
        c = np.hstack([c, np.zeros((n, 1))]) - r * np.hstack([np.zeros((n, 1)), c])
    return c


def _block_roots(d: int, seed: int, block: int, law: str) -> np.ndarray:
    return sample_roots(d, BLOCK, np.random.default_rng([seed, block]), law)


def _roots_range(d: int, start: int, stop: int, seed: int, law: str) -> np.ndarray:
    parts = []
    for block in range(start // BLOCK, (stop - 1) // BLOCK + 1):
        lo = max(start, block * BLOCK) - block * BLOCK
        hi = min(stop, (block + 1) * BLOCK) - block * BLOCK
        parts.append(_block_roots(d, seed, block, law)[lo:hi])
    return np.vstack(parts) if parts else np.zeros((0, d))


def sample_hyperbolic(d: int, n: int, seed: int = 0, root_law: str = "logmod"):
    """Yield ``n`` monic float polynomials with real roots; sample i depends only on (seed, i)."""
    if n < 1:
        raise ValueError("n must be positive")
    for start in range(0, n, BLOCK):
        stop = min(n, start + BLOCK)
        roots = _roots_range(d, start, stop, seed, root_law)
        for row in coefficients_from_roots(roots):
            yield Polynomial.from_descending(tuple(float(x) for x in row))


# ---------------------------------------------------------------------------
# open-stratum filter and encoding


def _admissible(roots: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """No coefficient near zero and no two moduli within the clustering tolerance.

    A coefficient counts as nonzero when it exceeds ``COEFF_TOL`` times the
    same elementary symmetric function of the moduli; the rounding error of
    the expansion is far below that, so the kept signs are certified.
    """
    scale = coefficients_from_roots(-np.abs(roots))  # e_j(|r|), all positive
    ok = np.all(np.abs(coeffs[:, 1:]) >= COEFF_TOL * scale[:, 1:], axis=1)
    m = np.sort(np.abs(roots), axis=1)
    if m.shape[1] > 1:
        ok &= np.all(np.diff(m, axis=1) > MODULI_TOL * (1 + m[:, 1:]), axis=1)
    return ok


def _encode(roots: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Pack (SP, MO) into one integer per row: bit j of the low half is a
    negative coefficient, bit j of the high half a positive root."""
    d = roots.shape[1]
    sp_bits = (coeffs[:, 1:] < 0).astype(np.int64)
    order = np.argsort(np.abs(roots), axis=1)
    mo_bits = (np.take_along_axis(roots, order, axis=1) > 0).astype(np.int64)
    weights = 1 << np.arange(d, dtype=np.int64)
    return (sp_bits @ weights) | ((mo_bits @ weights) << d)


def _decode(code: int, d: int) -> tuple[SignPattern, ModuliOrder]:
    sp = SignPattern((1,) + tuple(-1 if (code >> j) & 1 else 1 for j in range(d)))
    mo = ModuliOrder.strict("P" if (code >> (d + j)) & 1 else "N" for j in range(d))
    return sp, mo


# ---------------------------------------------------------------------------
# incidence table


@dataclass
class IncidenceTable:
    degree: int
    n_samples: int
    seed: int
    law: str = "logmod"
    restrict: str | None = None
    reflect: bool = False
    counts: dict = field(default_factory=dict)  # (SignPattern, ModuliOrder) -> int

    @property
    def admitted(self) -> int:
        return sum(self.counts.values())

    @property
    def sp_to_mos(self) -> dict:
        out: dict = {}
        for (sp, mo), k in self.counts.items():
            out.setdefault(sp, {})[mo] = k
        return out

    @property
    def mo_to_sps(self) -> dict:
        out: dict = {}
        for (sp, mo), k in self.counts.items():
            out.setdefault(mo, {})[sp] = k
        return out

    def merge(self, other: IncidenceTable) -> IncidenceTable:
        c = Counter(self.counts)
        c.update(other.counts)
        return IncidenceTable(
            self.degree, self.n_samples + other.n_samples, self.seed, self.law, self.restrict, self.reflect, dict(c)
        )

    def filter_a(self, sign: int) -> IncidenceTable:
        """Cells whose pattern has ``a`` of the given sign."""
        kept = {k: v for k, v in self.counts.items() if k[0].signs[1] == sign}
        return IncidenceTable(
            self.degree, self.n_samples, self.seed, self.law, "a>0" if sign > 0 else "a<0", self.reflect, kept
        )

    def _sorted_cells(self):
        return sorted(self.counts.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))

    def to_json(self) -> dict:
        sp_to_mos: dict = {}
        for (sp, mo), k in self._sorted_cells():
            sp_to_mos.setdefault(str(sp), {})[str(mo)] = k
        mo_to_sps: dict = {}
        for (sp, mo), k in sorted(self.counts.items(), key=lambda kv: (str(kv[0][1]), str(kv[0][0]))):
            mo_to_sps.setdefault(str(mo), {})[str(sp)] = k
        return {
            "degree": self.degree,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "law": self.law,
            "restrict": self.restrict,
            "reflect": self.reflect,
            "admitted": self.admitted,
            "sp_to_mos": sp_to_mos,
            "mo_to_sps": mo_to_sps,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sp", "mo", "count"])
        for (sp, mo), k in self._sorted_cells():
            w.writerow([str(sp), str(mo), k])
        return buf.getvalue()


def _parse_restrict(restrict: str | None) -> int:
    if restrict in (None, "", "none"):
        return 0
    r = restrict.replace(" ", "")
    if r == "a>0":
        return 1
    if r == "a<0":
        return -1
    raise ValueError(f"unsupported restriction {restrict!r}; use 'a>0' or 'a<0'")


def _chunk_counts(d, start, stop, seed, law, sign, reflect) -> Counter:
    roots = _roots_range(d, start, stop, seed, law)
    coeffs = coefficients_from_roots(roots)
    keep = _admissible(roots, coeffs)
    roots, coeffs = roots[keep], coeffs[keep]
    if reflect:
        flip = coeffs[:, 1] < 0
        roots[flip] = -roots[flip]
        coeffs = coefficients_from_roots(roots)
    if sign:
        keep = np.sign(coeffs[:, 1]) == sign
        roots, coeffs = roots[keep], coeffs[keep]
    codes, counts = np.unique(_encode(roots, coeffs), return_counts=True)
    return Counter(dict(zip(codes.tolist(), counts.tolist())))


def build_incidence(
    d: int,
    n: int,
    seed: int = 0,
    law: str = "logmod",
    restrict: str | None = None,
    reflect: bool = False,
    workers: int | None = None,
) -> IncidenceTable:
    """Tabulate (SP, MO) over ``n`` sampled polynomials in the open strata.

    ``restrict`` keeps only samples with ``a > 0`` (or ``a < 0``);
    ``reflect`` maps samples with ``a < 0`` to their reflections
    ``(-1)^d P(-x)`` first.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    sign = _parse_restrict(restrict)
    bounds = [(s, min(n, s + BLOCK)) for s in range(0, n, BLOCK)]
    job = lambda b: _chunk_counts(d, b[0], b[1], seed, law, sign, reflect)  # noqa: E731
    nw = worker_count(workers)
    if nw > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(nw) as pool:
            parts = list(pool.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    total: Counter = Counter()
    for p in parts:
        total.update(p)
    cells = {}
    for code, k in sorted(total.items()):
        cells[_decode(code, d)] = k
    return IncidenceTable(d, n, seed, law, restrict if sign else None, reflect, cells)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CanonicalEntry:
    sp: SignPattern
    samples: int
    observed: tuple[ModuliOrder, ...]
    canonical_mo: ModuliOrder
    canonical: bool  # observed set is exactly {canonical_mo}

    def to_json(self) -> dict:
        return {
            "sp": str(self.sp),
            "samples": self.samples,
            "observed": [str(m) for m in self.observed],
            "canonical_mo": str(self.canonical_mo),
            "canonical": self.canonical,
        }


def canonical_report(table: IncidenceTable) -> list[CanonicalEntry]:
    """Empirical canonicity per observed SP.  A verdict of ``canonical``
    means only the canonical MO was seen; it is evidence, not proof."""
    if not table.counts:
        raise ValueError("empty incidence table")
    out = []
    for sp, mos in sorted(table.sp_to_mos.items(), key=lambda kv: str(kv[0])):
        cmo = canonical_mo(sp)
        observed = tuple(sorted(mos, key=str))
        out.append(CanonicalEntry(sp, sum(mos.values()), observed, cmo, observed == (cmo,)))
    return out


def _interlace_patterns(d: int) -> tuple[SignPattern, SignPattern]:
    a = [1, 1, -1, -1]
    b = [1, -1, -1, 1]
    return (
        SignPattern(tuple(a[i % 4] for i in range(d + 1))),
        SignPattern(tuple(b[i % 4] for i in range(d + 1))),
    )


def structural_rigid_form(mo: ModuliOrder, sp: SignPattern) -> bool:
    """Does (MO, SP) have one of the two known shapes of rigid orders?

    Either all roots share a sign (SP all-units or alternating), or the
    letters alternate and the SP is ``(+,+,-,-,+,+,...)`` or ``(+,-,-,+,+,...)``.
    """
    letters = mo.letters
    d = len(letters)
    if set(letters) == {"N"}:
        return sp.signs == (1,) * (d + 1)
    if set(letters) == {"P"}:
        return sp.signs == tuple((-1) ** i for i in range(d + 1))
    alternating = all(x != y for x, y in zip(letters, letters[1:]))
    return alternating and sp in _interlace_patterns(d)


@dataclass(frozen=True)
class RigidEntry:
    mo: ModuliOrder
    samples: int
    observed: tuple[SignPattern, ...]
    rigid: bool  # a single SP observed
    structural: bool  # rigid and of one of the known shapes

    def to_json(self) -> dict:
        return {
            "mo": str(self.mo),
            "samples": self.samples,
            "observed": [str(s) for s in self.observed],
            "rigid": self.rigid,
            "structural": self.structural,
        }


def rigid_report(table: IncidenceTable, a_sign: int = 0) -> list[RigidEntry]:
    """Empirical rigidity per observed MO.

    With ``a_sign`` set, only MOs whose observed SPs all have ``a`` of that
    sign are listed; rigidity is still judged on the full table, so an MO
    whose ``a`` changes sign is never reported rigid from half its samples.
    """
    if not table.counts:
        raise ValueError("empty incidence table")
    out = []
    for mo, sps in sorted(table.mo_to_sps.items(), key=lambda kv: str(kv[0])):
        observed = tuple(sorted(sps, key=str))
        if a_sign and any(sp.signs[1] != a_sign for sp in observed):
            continue
        rigid = len(observed) == 1
        out.append(RigidEntry(mo, sum(sps.values()), observed, rigid, rigid and structural_rigid_form(mo, observed[0])))
    return out


# ---------------------------------------------------------------------------
# expected lists for d <= 4


def _sps(*texts) -> frozenset:
    return frozenset(SignPattern.parse(t) for t in texts)


def _mos(*texts) -> frozenset:
    return frozenset(ModuliOrder.parse(t) for t in texts)


# patterns with a > 0; the a < 0 halves follow by reflection
_EXPECTED_POS = {
    2: dict(
        canonical=_sps("(+,+,+)", "(+,+,-)"),
        non_canonical=frozenset(),
        rigid=_mos("N<N", "P<N"),
    ),
    3: dict(
        canonical=_sps("(+,+,+,+)", "(+,+,-,+)", "(+,+,+,-)"),
        non_canonical=_sps("(+,+,-,-)"),
        rigid=_mos("N<N<N", "N<P<N"),
    ),
    4: dict(
        canonical=_sps("(+,+,+,+,+)", "(+,+,+,+,-)", "(+,+,-,+,+)", "(+,+,+,-,+)", "(+,+,-,+,-)"),
        non_canonical=_sps("(+,+,+,-,-)", "(+,+,-,-,-)", "(+,+,-,-,+)"),
        rigid=_mos("P<N<P<N", "N<N<N<N"),
    ),
}


def expected_lists(d: int, a_sign: int = 0) -> dict | None:
    """Known canonical / non-canonical SPs and rigid MOs (None for d > 4)."""
    base = _EXPECTED_POS.get(d)
    if base is None:
        return None
    if a_sign > 0:
        return dict(base)
    refl = {
        "canonical": frozenset(s.reflect() for s in base["canonical"]),
        "non_canonical": frozenset(s.reflect() for s in base["non_canonical"]),
        "rigid": frozenset(m.swap() for m in base["rigid"]),
    }
    if a_sign < 0:
        return refl
    return {k: base[k] | refl[k] for k in base}


def compare_expected(table: IncidenceTable, a_sign: int = 0) -> list[str]:
    """Differences between the table's verdicts and the known lists."""
    exp = expected_lists(table.degree, a_sign)
    if exp is None:
        return []
    canon = canonical_report(table if not a_sign else table.filter_a(a_sign))
    rigid = rigid_report(table, a_sign)
    problems = []
    verdict = {e.sp: e for e in canon}
    for sp in sorted(exp["canonical"], key=str):
        e = verdict.get(sp)
        if e is None:
            problems.append(f"canonical SP {sp} not observed")
        elif not e.canonical:
            problems.append(f"SP {sp} expected canonical, observed {[str(m) for m in e.observed]}")
    for sp in sorted(exp["non_canonical"], key=str):
        e = verdict.get(sp)
        if e is None or len(e.observed) < 2:
            problems.append(f"SP {sp} expected non-canonical, observed {0 if e is None else len(e.observed)} MO(s)")
    got = {e.mo for e in rigid if e.rigid}
    if got != exp["rigid"]:
        problems.append(
            f"rigid MOs {sorted(map(str, got))} differ from expected {sorted(map(str, exp['rigid']))}"
        )
    return problems


# ---------------------------------------------------------------------------
# Descartes sweep


@dataclass(frozen=True)
class DescartesSweep:
    degree: int
    drawn: int
    admitted: int
    violations: int

    def to_json(self) -> dict:
        return dict(degree=self.degree, drawn=self.drawn, admitted=self.admitted, violations=self.violations)


def descartes_sweep(d: int, n: int, seed: int = 0, law: str = "logmod") -> DescartesSweep:
    """Count HPs without zero coefficients where pos != c or neg != p.

    Draws blocks until ``n`` samples pass the coefficient filter.
    """
    admitted = 0
    bad = 0
    drawn = 0
    block = 0
    while admitted < n:
        roots = _block_roots(d, seed, block, law)
        block += 1
        coeffs = coefficients_from_roots(roots)
        scale = coefficients_from_roots(-np.abs(roots))
        keep = np.all(np.abs(coeffs[:, 1:]) >= COEFF_TOL * scale[:, 1:], axis=1)
        roots, coeffs = roots[keep][: n - admitted], coeffs[keep][: n - admitted]
        drawn += BLOCK
        signs = np.sign(coeffs)
        changes = np.sum(signs[:, 1:] != signs[:, :-1], axis=1)
        pos = np.sum(roots > 0, axis=1)
        neg = np.sum(roots < 0, axis=1)
        bad += int(np.sum((pos != changes) | (neg != d - changes)))
        admitted += len(roots)
    return DescartesSweep(d, drawn, admitted, bad)


def descartes_pair_check(table: IncidenceTable) -> list[str]:
    """Every recorded (SP, MO): number of P letters equals the sign changes."""
    out = []
    for sp, mo in table.counts:
        if mo.letters.count("P") != descartes_counts(sp).c:
            out.append(f"{sp} {mo}")
    return out
