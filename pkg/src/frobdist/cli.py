"""Command-line front end: curve ingestion, subcommand dispatch, JSON
reports on stdout, CSV artifacts and figures under --out.

Exit codes: 0 success, 1 usage or parse error, 2 invalid curve or model,
3 numeric failure, 4 size guard exceeded.  Error detail goes to stderr as a
single JSON object; stdout carries only the deterministic report envelope
(wall-clock timing is a stderr diagnostic so reports stay byte-identical).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

import mpmath as mp
import numpy as np

from . import __version__
from .classify import (
    CensusReport,
    RelationReport,
    census,
    classify as classify_numerator,
    find_integer_relation,
    is_irreducible_over_integers,
)
from .curves import CurveSpec, elliptic_curve, hyperelliptic_curve, count_points, validate
from .equidist import (
    DistributionReport,
    Interval,
    default_grid,
    distribution_report,
    kronecker_points,
    limit_density,
    monte_carlo_density,
    ratio_sequence,
    star_discrepancy,
)
from .errors import (
    BadCharacteristic,
    BadDegree,
    DegreeOutOfRange,
    EvenCharacteristic,
    FrobdistError,
    GuardExceeded,
    NoConvergence,
    NonIntegerCoefficient,
    NotPrime,
    PrecisionInsufficient,
    SingularCurve,
    SizeExceeded,
    ToleranceBelowPrecision,
    ToleranceUnachievable,
    WeilViolation,
    ZeroParameter,
)
from .kloosterman import kappa_distribution_report
from .zeta import (
    extension_numerator,
    frobenius_angles,
    jacobian_order,
    numerator_from_curve,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CURVE = 2
EXIT_NUMERIC = 3
EXIT_SIZE = 4

CURVE_ERRORS = (
    SingularCurve, EvenCharacteristic, BadDegree, NotPrime,
    BadCharacteristic, ZeroParameter, DegreeOutOfRange,
)
NUMERIC_ERRORS = (
    NoConvergence, PrecisionInsufficient, ToleranceUnachievable,
    NonIntegerCoefficient, WeilViolation, ToleranceBelowPrecision,
)
SIZE_ERRORS = (SizeExceeded, GuardExceeded)

JSON_INT_LIMIT = 1 << 53


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


# ---------------------------------------------------------------------------
# curve-spec files
# ---------------------------------------------------------------------------

def load_curve_file(path: str) -> tuple[dict, CurveSpec]:
    """Parse a JSON (or TOML) curve spec, reject unknown keys, validate."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read curve file: {exc}") from exc
    data = None
    if path.endswith(".toml"):
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise UsageError(f"TOML parse error: {exc}") from exc
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            try:
                data = tomllib.loads(text)
            except tomllib.TOMLDecodeError as exc:
                raise UsageError(f"curve file is neither JSON nor TOML: {exc}") from exc
    curve = parse_curve_spec(data)
    validate(curve)
    return data, curve


def parse_curve_spec(data) -> CurveSpec:
    if not isinstance(data, dict):
        raise UsageError("curve spec must be an object")
    expected = {"p", "model", "coeffs"}
    if set(data) != expected:
        raise UsageError(f"curve spec keys must be exactly {sorted(expected)}")
    p, model, coeffs = data["p"], data["model"], data["coeffs"]
    if not isinstance(p, int):
        raise UsageError("p must be an integer")
    if not isinstance(coeffs, dict):
        raise UsageError("coeffs must be an object")
    if model == "elliptic":
        if set(coeffs) != {"a", "b"}:
            raise UsageError("elliptic coeffs must be exactly {a, b}")
        if not all(isinstance(coeffs[k], int) for k in ("a", "b")):
            raise UsageError("elliptic coefficients must be integers")
        return elliptic_curve(p, coeffs["a"], coeffs["b"])
    if model == "hyperelliptic2":
        if set(coeffs) != {"f"}:
            raise UsageError("hyperelliptic2 coeffs must be exactly {f}")
        f = coeffs["f"]
        if (not isinstance(f, list) or len(f) not in (6, 7)
                or not all(isinstance(c, int) for c in f)):
            raise UsageError("f must be an integer list of length 6 or 7")
        return hyperelliptic_curve(p, f)
    raise UsageError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _encode(obj):
    """JSON-safe structure: big integers become decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > JSON_INT_LIMIT else obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, mp.mpf):
        return mp.nstr(obj, 50)
    if isinstance(obj, np.integer):
        return _encode(int(obj))
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_encode(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj)!r}")


def emit(command: str, inputs: dict, results: dict, seed=None) -> None:
    envelope = {
        "tool": "frobdist",
        "tool_version": __version__,
        "command": command,
        "inputs": _encode(inputs),
        "seed": seed,
        "results": _encode(results),
    }
    sys.stdout.write(json.dumps(envelope, sort_keys=True, indent=2) + "\n")


def relation_dict(rel: RelationReport) -> dict:
    return {
        "found": list(rel.found) if rel.found is not None else None,
        "residual": rel.residual,
        "search_bound": rel.search_bound,
        "epsilon": rel.epsilon,
        "min_residual": rel.min_residual,
    }


def distribution_dict(rep: DistributionReport) -> dict:
    return {
        "n": rep.n,
        "g": rep.g,
        "sup_deviation": rep.sup_deviation,
        "rows": [asdict(r) for r in rep.rows],
        "histogram": {"bin_edges": rep.bin_edges, "counts": rep.histogram},
    }


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _histogram_csv(out: Path, rep: DistributionReport) -> None:
    edges = rep.bin_edges
    total = max(1, rep.n)
    rows = [
        (repr(edges[i]), repr(edges[i + 1]), c, repr(c / total))
        for i, c in enumerate(rep.histogram)
    ]
    _write_csv(out / "histogram.csv", ["bin_lo", "bin_hi", "count", "frequency"], rows)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def cmd_count(args) -> None:
    spec, curve = load_curve_file(args.curve)
    counts = [{"n": n, "count": count_points(curve, n)}
              for n in range(1, args.n + 1)]
    emit("count", {"curve": spec, "n": args.n}, {"counts": counts})


def cmd_zeta(args) -> None:
    spec, curve = load_curve_file(args.curve)
    z = numerator_from_curve(curve)
    results = {
        "numerator": {"g": z.g, "q": z.q, "e": list(z.e)},
        "jacobian_orders": [
            {"n": n, "order": jacobian_order(z, n)} for n in range(1, 5)
        ],
    }
    emit("zeta", {"curve": spec}, results)


def cmd_angles(args) -> None:
    spec, curve = load_curve_file(args.curve)
    z = numerator_from_curve(curve)
    ang = frobenius_angles(z, digits=args.digits)
    with mp.workdps(args.digits + 10):
        theta_str = [mp.nstr(t, args.digits) for t in ang.theta]
    results = {
        "numerator": {"g": z.g, "q": z.q, "e": list(z.e)},
        "theta": theta_str,
        "theta_float": [float(t) for t in ang.theta],
        "precision_digits": ang.precision_digits,
        "modulus_residual": ang.modulus_residual,
        "reconstruction_error": ang.reconstruction_error,
    }
    emit("angles", {"curve": spec, "digits": args.digits}, results)


def cmd_classify(args) -> None:
    spec, curve = load_curve_file(args.curve)
    z = numerator_from_curve(curve)
    cls = classify_numerator(z, curve.base.p)
    ang = frobenius_angles(z, digits=args.digits)
    rel = find_integer_relation(ang, args.K, args.eps)
    results = {
        "numerator": {"g": z.g, "q": z.q, "e": list(z.e)},
        "classification": {
            "kind": cls.kind,
            "p_rank": cls.p_rank,
            "newton_slopes": list(cls.newton_slopes),
        },
        "irreducible_p": is_irreducible_over_integers(z.poly_coeffs()),
        "irreducible_p2": is_irreducible_over_integers(
            extension_numerator(z, 2).poly_coeffs()
        ),
        "relation": relation_dict(rel),
    }
    emit("classify", {"curve": spec, "K": args.K, "eps": args.eps,
                      "digits": args.digits}, results)


def cmd_alpha(args) -> None:
    spec, curve = load_curve_file(args.curve)
    z = numerator_from_curve(curve)
    seq = ratio_sequence(z, args.N, mode=args.mode)
    values = seq.values
    results = {
        "n": seq.n,
        "mode": seq.mode,
        "head": [float(v) for v in values[:20]],
        "min": float(values.min()),
        "max": float(values.max()),
        "mean": float(values.mean()),
    }
    if args.out:
        out = _ensure_out(args.out)
        _write_csv(out / "alpha.csv", ["n", "alpha"],
                   ((n + 1, repr(float(v))) for n, v in enumerate(values)))
        from .plots import ratio_figure

        ratio_figure(seq, out / "alpha.png")
        results["artifacts"] = ["alpha.csv", "alpha.png"]
    emit("alpha", {"curve": spec, "N": args.N, "mode": args.mode}, results)


def cmd_empirical(args) -> None:
    spec, curve = load_curve_file(args.curve)
    z = numerator_from_curve(curve)
    seq = ratio_sequence(z, args.N, mode=args.mode)
    rep = distribution_report(seq, default_grid(args.grid))
    results = distribution_dict(rep)
    if args.out:
        out = _ensure_out(args.out)
        _histogram_csv(out, rep)
        from .plots import histogram_figure

        histogram_figure(rep, out / "histogram.png")
        results["artifacts"] = ["histogram.csv", "histogram.png"]
    emit("empirical", {"curve": spec, "N": args.N, "grid": args.grid,
                       "mode": args.mode}, results)


def cmd_density(args) -> None:
    query = _parse_interval(args.beta, args.gamma)
    dens = limit_density(args.g, query, args.tol)
    results = {
        "density": {
            "value": dens.value,
            "method": dens.method,
            "error_bound": dens.error_bound,
        }
    }
    seed = None
    if args.mc:
        seed = args.seed
        mc = monte_carlo_density(args.g, query, args.mc, seed=args.seed)
        results["monte_carlo"] = {
            "value": mc.value,
            "samples": args.mc,
            "stderr": mc.stderr,
        }
    emit("density", {"g": args.g, "beta": args.beta, "gamma": args.gamma,
                     "tol": args.tol, "mc": args.mc}, results, seed=seed)


def cmd_discrepancy(args) -> None:
    spec, curve = load_curve_file(args.curve)
    z = numerator_from_curve(curve)
    ang = frobenius_angles(z, digits=args.digits)
    pts = kronecker_points(ang, args.N)
    rep = star_discrepancy(pts)
    results = {
        "n": rep.n,
        "dimension": rep.dimension,
        "star_discrepancy": rep.star_discrepancy,
        "method": rep.method,
        "extreme_upper_bound": rep.extreme_upper_bound,
    }
    if args.out:
        out = _ensure_out(args.out)
        header = ["n"] + [f"frac_{j + 1}" for j in range(pts.shape[1])]
        _write_csv(out / "kronecker.csv", header,
                   ((i + 1, *(repr(float(v)) for v in row))
                    for i, row in enumerate(pts)))
        from .plots import kronecker_figure

        kronecker_figure(pts, out / "kronecker.png")
        results["artifacts"] = ["kronecker.csv", "kronecker.png"]
    emit("discrepancy", {"curve": spec, "N": args.N, "digits": args.digits},
         results)


def cmd_census(args) -> None:
    rep = census(
        args.p, args.genus,
        relation_bound=args.K, epsilon=args.eps,
        sample_limit=args.sample, seed=args.seed,
    )
    results = _census_dict(rep)
    if args.out:
        out = _ensure_out(args.out)
        _write_csv(
            out / "census.csv",
            ["coeffs", "trace", "kind", "p_rank", "irreducible_p",
             "irreducible_p2", "relation_found", "min_residual"],
            (
                (" ".join(map(str, e.coeffs)), e.trace, e.kind, e.p_rank,
                 e.irreducible_p, e.irreducible_p2, e.relation_found,
                 repr(e.min_residual))
                for e in rep.entries
            ),
        )
        from .plots import census_figure

        census_figure(rep.fractions, [e.trace for e in rep.entries],
                      out / "census.png")
        results["artifacts"] = ["census.csv", "census.png"]
    emit("census", {"p": args.p, "genus": args.genus, "K": args.K,
                    "eps": args.eps, "sample": args.sample}, results,
         seed=rep.seed)


def _census_dict(rep: CensusReport) -> dict:
    return {
        "p": rep.p,
        "genus": rep.genus,
        "family": rep.family,
        "total": rep.total,
        "skipped_singular": rep.skipped_singular,
        "sampled": rep.sampled,
        "relation_bound": rep.relation_bound,
        "epsilon": rep.epsilon,
        "note": "irreducibility of P and P_2 is evidence toward a simple "
                "Jacobian, not a proof",
        "fractions": rep.fractions,
        "entries": [asdict(e) for e in rep.entries],
    }


def cmd_kloosterman(args) -> None:
    rep = kappa_distribution_report(
        args.p, args.a, args.N, default_grid(args.grid),
        relation_bound=args.K, epsilon=args.eps,
    )
    results = {
        "p": rep.p,
        "a": rep.a,
        "kloosterman_sum": rep.value,
        "phi": rep.phi,
        "kappa_1": rep.kappa_1,
        "relation": relation_dict(rep.relation),
        "equidistributed_hypothesis": rep.relation.found is None,
        "distribution": distribution_dict(rep.distribution),
    }
    if args.out:
        out = _ensure_out(args.out)
        _histogram_csv(out, rep.distribution)
        from .plots import histogram_figure

        histogram_figure(rep.distribution, out / "histogram.png")
        results["artifacts"] = ["histogram.csv", "histogram.png"]
    emit("kloosterman", {"p": args.p, "a": args.a, "N": args.N,
                         "grid": args.grid, "K": args.K, "eps": args.eps},
         results)


def _parse_interval(beta: float, gamma: float) -> Interval:
    try:
        return Interval(beta, gamma)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _ensure_out(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="frobdist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def curve_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--curve", required=True, help="curve spec file (JSON or TOML)")
        return sp

    sp = curve_cmd("count", "point counts over F_q^n for n = 1..N")
    sp.add_argument("--n", type=int, required=True)

    curve_cmd("zeta", "zeta numerator and Jacobian orders")

    sp = curve_cmd("angles", "Frobenius angles at high precision")
    sp.add_argument("--digits", type=int, default=50)

    sp = curve_cmd("classify", "Newton polygon, irreducibility, relation search")
    sp.add_argument("--K", type=int, default=50)
    sp.add_argument("--eps", type=float, default=1e-9)
    sp.add_argument("--digits", type=int, default=50)

    sp = curve_cmd("alpha", "normalized trace ratios")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--mode", choices=["exact", "angle"], default="exact")
    sp.add_argument("--out")

    sp = curve_cmd("empirical", "interval frequencies against the limit density")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--grid", type=int, default=21)
    sp.add_argument("--mode", choices=["exact", "angle"], default="exact")
    sp.add_argument("--out")

    sp = sub.add_parser("density", help="limit density of an interval")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--mc", type=int, default=None,
                    help="also run a Monte-Carlo estimate with this many samples")
    sp.add_argument("--seed", type=int, default=0)

    sp = curve_cmd("discrepancy", "star discrepancy of the Kronecker points")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--digits", type=int, default=50)
    sp.add_argument("--out")

    sp = sub.add_parser("census", help="classify a whole curve family")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--K", type=int, default=50)
    sp.add_argument("--eps", type=float, default=1e-9)
    sp.add_argument("--sample", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = sub.add_parser("kloosterman", help="Kloosterman sums and their angle statistics")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--grid", type=int, default=21)
    sp.add_argument("--K", type=int, default=50)
    sp.add_argument("--eps", type=float, default=1e-9)
    sp.add_argument("--out")

    return parser


HANDLERS = {
    "count": cmd_count,
    "zeta": cmd_zeta,
    "angles": cmd_angles,
    "classify": cmd_classify,
    "alpha": cmd_alpha,
    "empirical": cmd_empirical,
    "density": cmd_density,
    "discrepancy": cmd_discrepancy,
    "census": cmd_census,
    "kloosterman": cmd_kloosterman,
}


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        HANDLERS[args.command](args)
    except UsageError as exc:
        return _fail("UsageError", str(exc), EXIT_USAGE)
    except CURVE_ERRORS as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_CURVE)
    except NUMERIC_ERRORS as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_NUMERIC)
    except SIZE_ERRORS as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_SIZE)
    except ValueError as exc:
        return _fail("ValueError", str(exc), EXIT_USAGE)
    except FrobdistError as exc:  # anything uncategorized
        return _fail(type(exc).__name__, str(exc), EXIT_NUMERIC)
    # wall-clock stays off stdout so reports are byte-identical
    sys.stderr.write(json.dumps(
        {"diagnostic": "timing", "elapsed_seconds": time.perf_counter() - start}
    ) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
