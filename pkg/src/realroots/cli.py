"""Command-line interface: ``realroots {predict,verify,asymptotics,beta-table,inequalities}``.

Exit codes: 0 success, 2 invalid input, 3 a statistical or property check failed.
Set ``REALROOTS_LOG=debug`` (or info, warning) for log output on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from importlib import resources

import numpy as np

from . import __version__
from ._rational import to_json_number
from .errors import RealRootsError, ValidationError
from .geometry import Ellipsoid, convex_hull, ellipsoid_in_polytope, ellipsoid_volume, hausdorff_distance, volume
from .lattice import Ball, dilate_and_intersect, load_body, load_support, random_support
from .mixedvol import (
    af_inequality_gap,
    bkk_count,
    expected_real_roots,
    expected_real_roots_estimate,
    limit_real_fraction,
    real_fraction,
)
from .moments import ball_limit_constants, beta_n, limit_moment_matrix, moment_matrix, sigma_n
from .rootcount import mc_expected_roots

logger = logging.getLogger("realroots")

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 2, 3
Z_LIMIT = 4.0


BALL_NOTE = (
    "Two candidate limits are reported for balls. 'inertia' is the mixed-volume ratio of the limit "
    "ellipsoid (radius 1/sqrt(n+2)); 'beta_ratio' is (beta_n/sigma_n)^(n/2), which omits the "
    "sigma_(n-1) slice factor. They agree only for n = 1."
)


def load_schema(name: str) -> dict:
    """Shipped JSON schema for a report or input type (e.g. ``"predict"``, ``"support"``)."""
    return json.loads(resources.files("realroots").joinpath("schemas", f"{name}.schema.json").read_text())


class CheckFailed(Exception):
    def __init__(self, payload):
        self.payload = payload


def _polytope_json(P):
    return {
        "vertices": [[to_json_number(c) for c in v] for v in P.vertices],
        "intrinsic_dim": P.intrinsic_dim,
        "volume": to_json_number(volume(P)),
    }


def _parse_m_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            start, stop = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            out.extend(range(start, stop + 1, step))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise ValidationError(f"bad --m-list {text!r}: need positive integers")
    return out


def _load_supports(paths):
    if not paths:
        raise ValidationError("give at least one --support FILE")
    supports = [load_support(p) for p in paths]
    n = len(supports)
    for p, s in zip(paths, supports):
        if s.dim != n:
            raise ValidationError(f"{p}: support has dimension {s.dim} but {n} supports were given")
    return supports


# ---------------------------------------------------------------------------
# commands


def cmd_predict(args) -> dict:
    supports = _load_supports(args.support)
    n = len(supports)
    if n > 3:
        raise ValidationError("predict handles 1 <= n <= 3 supports")
    stats = real_fraction(*supports)
    ells = [moment_matrix(s) for s in supports]
    report = {
        "dim": n,
        "expected_real": stats.expected_real,
        "bkk": stats.bkk,
        "fraction": stats.fraction,
        "ellipsoids": [{"shape": E.shape.tolist(), "volume": ellipsoid_volume(E)} for E in ells],
        "polytopes": [_polytope_json(convex_hull(s.points)) for s in supports],
        "seed": args.seed,
    }
    if args.samples:
        est = expected_real_roots_estimate(*supports, samples=args.samples, seed=args.seed, workers=args.workers)
        report["estimate"] = est.to_json()
    return report


def cmd_verify(args) -> dict:
    supports = _load_supports(args.support)
    n = len(supports)
    if n > 2:
        raise ValidationError("verify handles n <= 2")
    if args.kind == "complex":
        target = float(bkk_count(*supports))
    else:
        target = expected_real_roots(*supports)
    est = mc_expected_roots(*supports, samples=args.samples, seed=args.seed, kind=args.kind,
                            workers=args.workers, grid=args.grid)
    z = est.zscore(target)
    report = {
        "dim": n,
        "kind": args.kind,
        "prediction": target,
        "estimate": est.value,
        "std_error": est.std_error,
        "samples": est.samples,
        "seed": args.seed,
        "z": z if np.isfinite(z) else None,
        "passed": bool(abs(z) <= Z_LIMIT),
        "diagnostics": {k: v for k, v in est.diagnostics.items() if k in _DIAG_KEYS},
    }
    if not report["passed"]:
        raise CheckFailed(report)
    return report


_DIAG_KEYS = ("kind", "samples", "seed", "workers", "resamples", "newton_failures", "grid_retries", "grid")


def cmd_asymptotics(args) -> dict:
    body = load_body(args.body)
    n = body.dim
    if n > 3:
        raise ValidationError("asymptotics handles n <= 3")
    ms = _parse_m_list(args.m_list)
    limit_ell = limit_moment_matrix(body)
    limit = limit_real_fraction(*([body] * n))
    const = ball_limit_constants(n) if isinstance(body, Ball) else None
    rows = []
    for m in ms:
        L = dilate_and_intersect(body, m)
        stats = real_fraction(*([L] * n)) if _bkk_positive(L, n) else None
        E = moment_matrix(L)
        row = {
            "m": m,
            "N": L.size,
            "fraction": stats.fraction if stats else None,
            "limit": limit,
            "hausdorff": hausdorff_distance(Ellipsoid(E.shape / m**2), limit_ell, directions=256),
        }
        if const is not None:
            row["beta_ratio_limit"] = const["beta_ratio"]
        if args.samples and n <= 2 and stats and m <= args.mc_max_m:
            est = mc_expected_roots(*([L] * n), samples=args.samples, seed=args.seed + m, workers=args.workers,
                                    grid=args.grid)
            row["mc_fraction"] = est.value / stats.bkk
            row["mc_std_error"] = est.std_error / stats.bkk
        rows.append(row)
        logger.info("m=%d N=%d fraction=%s", m, L.size, row["fraction"])
    report = {"dim": n, "body": body.to_json(), "limit": limit, "rows": rows}
    if const is not None:
        report["limits"] = {"inertia": const["inertia"], "beta_ratio": const["beta_ratio"]}
        report["note"] = BALL_NOTE
        report["verdict"] = _verdict(rows, const)
    return report


def _bkk_positive(L, n):
    return bkk_count(*([L] * n)) > 0


def _verdict(rows, const) -> dict:
    """Which candidate limit the finite-m fractions (and Monte Carlo, if any) approach."""
    usable = [r for r in rows if r["fraction"] is not None]
    last = usable[-1]
    series = [r["fraction"] for r in usable]
    d_in = abs(last["fraction"] - const["inertia"])
    d_beta = abs(last["fraction"] - const["beta_ratio"])
    supported = "inertia" if d_in < d_beta else "beta_ratio"
    if abs(const["inertia"] - const["beta_ratio"]) < 1e-12:
        supported = "both (constants coincide)"
    mc = [r for r in usable if "mc_fraction" in r]
    out = {
        "supported": supported,
        "last_m": last["m"],
        "last_fraction": last["fraction"],
        "distance_to_inertia": d_in,
        "distance_to_beta_ratio": d_beta,
        "trend_monotone": bool(np.all(np.diff(series) <= 1e-15) or np.all(np.diff(series) >= -1e-15)),
    }
    if mc:
        out["mc_max_abs_z_vs_theory"] = max(
            abs(r["mc_fraction"] - r["fraction"]) / r["mc_std_error"] if r["mc_std_error"] > 0 else 0.0 for r in mc
        )
        out["mc_z_vs_beta_ratio_at_last"] = (
            (mc[-1]["mc_fraction"] - const["beta_ratio"]) / mc[-1]["mc_std_error"] if mc[-1]["mc_std_error"] > 0 else None
        )
    out["statement"] = (
        f"finite-m fractions approach {out['supported']} "
        f"(inertia limit {const['inertia']:.6g}, beta-ratio limit {const['beta_ratio']:.6g}; "
        f"fraction {last['fraction']:.6g} at m = {last['m']})"
    )
    return out


def cmd_beta_table(args) -> dict:
    if not 1 <= args.n_max <= 64:
        raise ValidationError("--n-max must be between 1 and 64")
    rows = []
    for n in range(1, args.n_max + 1):
        b = beta_n(n)
        c = ball_limit_constants(n)
        rows.append({
            "n": n,
            "beta_closed_form": b.closed_form,
            "beta_quadrature": b.quadrature,
            "sigma": sigma_n(n),
            "beta_ratio_limit": c["beta_ratio"],
            "inertia_limit": c["inertia_via_slices"],
        })
    return {"rows": rows}


def cmd_inequalities(args) -> dict:
    rng = np.random.default_rng(args.seed)
    n = args.dim
    failures = []
    contained = vol_ok = 0
    for i in range(args.count):
        L = random_support(n, args.max_freq, rng)
        P, E = convex_hull(L.points), moment_matrix(L)
        if ellipsoid_in_polytope(E, P, within_span=True):
            contained += 1
        else:
            failures.append({"check": "containment", "support": L.to_json()})
        if ellipsoid_volume(E) <= float(volume(P)) * (1 + 1e-12):
            vol_ok += 1
        else:
            failures.append({"check": "volume", "support": L.to_json()})
    af_ok = 0
    worst = 0.0
    if n >= 2:
        for _ in range(args.af_count):
            tup = [random_support(n, min(args.max_freq, 3 if n == 3 else args.max_freq), rng) for _ in range(n)]
            g = af_inequality_gap(*tup)
            rel = min(g.first, g.second) / g.scale
            worst = min(worst, rel)
            if rel >= -args.tol:
                af_ok += 1
            else:
                failures.append({"check": "alexandrov-fenchel", "supports": [s.to_json() for s in tup],
                                 "gaps": [g.first, g.second]})
    report = {
        "dim": n,
        "seed": args.seed,
        "supports_checked": args.count,
        "containment_passed": contained,
        "volume_passed": vol_ok,
        "af_tuples_checked": args.af_count if n >= 2 else 0,
        "af_passed": af_ok,
        "af_worst_relative_gap": worst,
        "passed": not failures,
        "failures": failures[:10],
    }
    if failures:
        raise CheckFailed(report)
    return report


# ---------------------------------------------------------------------------
# output


def _flatten_rows(report):
    if "rows" in report:
        return report["rows"]
    return [{k: v for k, v in report.items() if not isinstance(v, (list, dict))}]


def _emit(report, fmt, out):
    if fmt == "json":
        json.dump(report, out, indent=2, default=_json_default)
        out.write("\n")
        return
    rows = _flatten_rows(report)
    cols = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    verdict = report.get("verdict")
    if verdict:
        out.write(f"# {verdict['statement']}\n")


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realroots", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="json"):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--format", choices=("json", "csv"), default=fmt)

    sp = sub.add_parser("predict", help="expected real roots, BKK count and real fraction")
    sp.add_argument("--support", action="append", metavar="FILE", default=[])
    sp.add_argument("--samples", type=int, default=0, help="also report a Monte Carlo mixed-volume estimate")
    common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("verify", help="compare the prediction with sampled root counts")
    sp.add_argument("--support", action="append", metavar="FILE", default=[])
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--kind", choices=("real", "complex"), default="real")
    sp.add_argument("--grid", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("asymptotics", help="real fraction of dilated supports m*body")
    sp.add_argument("--body", metavar="FILE", required=True)
    sp.add_argument("--m-list", default="1:20", help="e.g. 1:50, 1:60:5 or 1,2,5,10")
    sp.add_argument("--samples", type=int, default=0, help="Monte Carlo root counts per m (n <= 2)")
    sp.add_argument("--mc-max-m", type=int, default=5, help="largest m for which Monte Carlo counts are run")
    sp.add_argument("--grid", type=int, default=None)
    common(sp, fmt="csv")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("beta-table", help="ball constants beta_n and sigma_n")
    sp.add_argument("--n-max", type=int, default=20)
    common(sp, fmt="csv")
    sp.set_defaults(func=cmd_beta_table)

    sp = sub.add_parser("inequalities", help="containment, volume and Alexandrov-Fenchel checks on random supports")
    sp.add_argument("--dim", type=int, default=2, choices=(1, 2, 3))
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--af-count", type=int, default=50)
    sp.add_argument("--max-freq", type=int, default=6)
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp)
    sp.set_defaults(func=cmd_inequalities)
    return p


def _configure_logging():
    level = os.environ.get("REALROOTS_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None, out=None) -> int:
    _configure_logging()
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except CheckFailed as exc:
        _emit(exc.payload, args.format, out)
        print("realroots: check failed", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (RealRootsError, ValueError, OSError) as exc:
        print(f"realroots: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(report, args.format, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
