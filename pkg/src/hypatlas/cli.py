"""Command-line front end: classify, figure, verify, search, landmarks.

Exit codes: 0 success, 1 usage or parse error, 2 tolerance-ambiguous
classification, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import curves, search, strata, verify
from .polycore import Polynomial, RepresentationError, parse_scalar
from .rootlab import DEFAULT_TOL

EXIT_OK, EXIT_USAGE, EXIT_AMBIGUOUS, EXIT_FAILED = 0, 1, 2, 3

# options whose values may start with '-' (e.g. "--range -1:1")
_VALUE_OPTIONS = {"--coeffs", "--range", "--a", "--b"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# classify


def parse_coeffs(text: str, exact_only: bool = False) -> tuple:
    """``"1,1/3,1/27"`` -> Fractions; decimals -> floats; mixing is an error."""
    try:
        vals = [parse_scalar(t) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"malformed coefficients {text!r}: {e}") from None
    floats = [isinstance(v, float) for v in vals]
    if any(floats) and not all(floats):
        raise UsageError(f"mixed exact and decimal coefficients in {text!r}")
    if exact_only and any(floats):
        raise UsageError(f"--exact needs integer or p/q coefficients, got {text!r}")
    return tuple(Fraction(v) if isinstance(v, int) else v for v in vals)


def cmd_classify(args) -> int:
    points = [parse_coeffs(c, args.exact) for c in args.coeffs]
    kinds = {isinstance(p[0], float) for p in points if p}
    if len(kinds) > 1:
        raise UsageError("mixing exact and decimal points in one invocation")
    status = EXIT_OK
    lines = []
    for p in points:
        if args.degree is not None and len(p) != args.degree:
            raise UsageError(f"degree {args.degree} needs {args.degree} coefficients, got {len(p)}")
        label = strata.classify(Polynomial.from_coords(*p), tol=args.tol)
        if label.ambiguous:
            status = EXIT_AMBIGUOUS
        lines.append(_dump(label.to_json()))
    _emit("\n".join(lines) + "\n", args.out)
    return status


# ---------------------------------------------------------------------------
# figure


def _parse_range(text: str):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise UsageError(f"range must look like lo:hi, got {text!r}")
    try:
        return parse_scalar(lo), parse_scalar(hi)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed range {text!r}") from None


def cmd_figure(args) -> int:
    rng = _parse_range(args.range) if args.range else None
    try:
        poly = curves.emit_curve(args.curve, rng, args.samples, a=args.a, b=args.b, workers=search.worker_count())
    except (ValueError, RepresentationError) as e:
        raise UsageError(str(e)) from None
    if args.format == "json":
        _emit(_dump(poly.to_json()) + "\n", args.out)
    else:
        _emit(poly.to_csv(), args.out)
    if args.singular_sidecar:
        Path(args.singular_sidecar).write_text(
            _dump({"curve_id": poly.curve_id, "singular_points": [s.to_json() for s in poly.singular_points]}) + "\n",
            encoding="utf-8",
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

SUITES = ("jacobian", "transversality", "hessian", "whitney", "resultant-family", "umbrella", "contact")


def _parse_degrees(text: str) -> range:
    lo, sep, hi = text.partition(":")
    try:
        return range(int(lo), int(hi if sep else lo) + 1)
    except ValueError:
        raise UsageError(f"degrees must look like 3:8, got {text!r}") from None


def _transversality_suite(trials: int, seed: int) -> dict:
    import numpy as np

    # squares of this pool repeat (1 and -1, 2 and -2), so the sweep sees both verdicts
    pool = [Fraction(x) for x in (1, -1, 2, -2, Fraction(1, 2), 3, Fraction(1, 3), 5, Fraction(7, 2), Fraction(2, 3))]
    sweep = verify.vandermonde_subset_sweep([v * v for v in pool])
    bad = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        s1 = int(rng.integers(0, 3))
        s2 = int(rng.integers(0 if s1 else 1, 3))
        vals = set()
        while len(vals) < s1 + s2:
            vals.add(abs(verify.random_rational(rng, nonzero=True)))
        vals = sorted(vals)
        vs, As = vals[:s1], vals[s1:]
        rep = verify.transversality_mixed(vs, As)
        if not rep.independent or rep.normals_rank != rep.s:
            bad.append(rep.to_json())
    return {"passed": sweep.passed and not bad, "vandermonde_sweep": sweep.to_json(), "trials": trials, "failures": bad}


def _run_suite(name: str, args) -> dict:
    seed = args.seed
    if name == "jacobian":
        rep = verify.jacobian_batch(_parse_degrees(args.degrees), args.trials or 100, seed, search.worker_count())
        return {"passed": rep.passed, **rep.to_json()}
    if name == "transversality":
        return _transversality_suite(args.trials or 100, seed)
    if name == "hessian":
        rep = verify.hessian_grid(args.grid)
        return {"passed": rep.passed, **rep.to_json()}
    if name == "whitney":
        rep = verify.whitney_identity_check(args.trials or 1000, seed)
        return {"passed": rep.passed, **rep.to_json()}
    if name == "resultant-family":
        rep = verify.resultant_family_check(args.trials or 100, seed)
        return {"passed": rep.passed, **rep.to_json()}
    if name == "umbrella":
        rep = verify.umbrella_check(args.trials or 200, seed)
        return {"passed": rep.passed, **rep.to_json()}
    if name == "contact":
        rep = verify.contact_order_check()
        return {"passed": rep.passed, **rep.to_json()}
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    results = {n: _run_suite(n, args) for n in names}
    ok = all(r["passed"] for r in results.values())
    _emit(_dump({"passed": ok, "suites": results}) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------------------
# search


def cmd_search(args) -> int:
    try:
        a_sign = search._parse_restrict(args.restrict)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.law not in search.LAWS:
        raise UsageError(f"unknown law {args.law!r}")
    # rigidity is judged on every sample; the restriction selects what is listed
    full = search.build_incidence(args.degree, args.samples, args.seed, args.law, None, args.reflect)
    table = full.filter_a(a_sign) if a_sign else full
    canon = search.canonical_report(table)
    rigid = search.rigid_report(full, a_sign)
    problems = search.compare_expected(full, a_sign) if not args.reflect else []
    problems += search.descartes_pair_check(table)
    report = {
        "degree": args.degree,
        "samples": args.samples,
        "seed": args.seed,
        "law": args.law,
        "restrict": args.restrict,
        "admitted": table.admitted,
        "canonical": [e.to_json() for e in canon],
        "rigid": sorted(str(e.mo) for e in rigid if e.rigid),
        "rigid_detail": [e.to_json() for e in rigid],
        "mismatches": problems,
        "passed": not problems,
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table.json").write_text(_dump(table.to_json()) + "\n", encoding="utf-8")
        (out / "table.csv").write_text(table.to_csv(), encoding="utf-8")
        (out / "report.json").write_text(_dump(report) + "\n", encoding="utf-8")
    sys.stdout.write(_dump(report) + "\n")
    return EXIT_OK if not problems else EXIT_FAILED


# ---------------------------------------------------------------------------
# landmarks


def _landmark_json(lm: strata.LandmarkPoint) -> dict:
    return {
        "name": lm.name,
        "degree": lm.degree,
        "coords": [str(x) for x in lm.coords],
        "polynomial": str(lm.polynomial),
        "factored": lm.description,
        "partition": list(lm.partition),
        "memberships": [m for m in strata.MEMBERSHIP_ORDER if m in lm.memberships],
        "hyperbolic": lm.hyperbolic,
    }


def cmd_landmarks(args) -> int:
    items = strata.landmarks(args.degree)
    if args.name:
        try:
            items = [strata.landmark(args.name, args.degree or 0)] if args.degree else [
                lm for lm in items if lm.name == args.name
            ]
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
        if not items:
            raise UsageError(f"no landmark named {args.name!r}")
    _emit("\n".join(_dump(_landmark_json(lm)) for lm in items) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypatlas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="stratum label of coefficient points")
    c.add_argument("--degree", type=int)
    c.add_argument("--coeffs", action="append", required=True, help="a_{d-1},...,a_0 (repeatable)")
    c.add_argument("--exact", action="store_true", help="require integer or p/q coefficients")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("figure", help="sampled curve data")
    f.add_argument("--curve", required=True, help=", ".join(curves.CURVE_NAMES))
    f.add_argument("--a")
    f.add_argument("--b")
    f.add_argument("--range", help="lo:hi of the curve parameter")
    f.add_argument("--samples", type=int, default=200)
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("--singular-sidecar", help="write singular points to this JSON file")
    f.add_argument("--out")
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="exact verification suites")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--degrees", default="3:8")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--grid", type=int, default=50)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="sign pattern / moduli order incidence")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--samples", type=int, default=100000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restrict", help="a>0 or a<0")
    s.add_argument("--law", default="logmod", help=" or ".join(search.LAWS))
    s.add_argument("--reflect", action="store_true", help="map a<0 samples to their reflections")
    s.add_argument("--out", help="directory for table.json, table.csv, report.json")
    s.set_defaults(func=cmd_search)

    lm = sub.add_parser("landmarks", help="catalog of named points")
    lm.add_argument("--degree", type=int)
    lm.add_argument("--name")
    lm.add_argument("--out")
    lm.set_defaults(func=cmd_landmarks)
    return p


def _join_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, RepresentationError) as e:
        print(f"hypatlas: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
