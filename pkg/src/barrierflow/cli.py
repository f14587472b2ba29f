"""Command-line entry point.

Exit codes: 0 success, 1 bad configuration, 2 an iteration cap was reached,
3 a verification check failed.  Reports are JSON with sorted keys and carry
no timings unless ``--timings`` is given, so identical inputs produce
identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (
    BarrierFlowError,
    CapExceeded,
    NonCanonical,
    PigeonholeFailed,
    SchemaError,
    VerificationFailed,
)
from .numeric import Coord, FieldElement, make_alpha

EXIT_OK, EXIT_CONFIG, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3


class _ConfigError(Exception):
    pass


def _exact(v, alpha=None):
    if isinstance(v, FieldElement):
        return {"coeffs": [str(c) for c in v.c], "float": float("%.17g" % float(v))}
    if alpha is not None:
        v = Coord.of(v, alpha)
    if isinstance(v, Coord):
        return {"rat": str(v.rat), "mult": v.mult, "float": float("%.17g" % float(v))}
    v = Fraction(v)
    return {"rat": str(v), "mult": 0, "float": float("%.17g" % float(v))}


def _digest(instance) -> str:
    from .surface import serialize_instance

    return hashlib.sha256(serialize_instance(instance).encode()).hexdigest()


def _load_instance(path):
    from .surface import parse_instance, validate

    if path is None:
        raise _ConfigError("--config is required")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _ConfigError(f"cannot read {path}: {exc.strerror}") from None
    inst = parse_instance(text)
    return inst, validate(inst)


def _write(path, text: str):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(report: dict, path):
    _write(path, json.dumps(report, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------

def cmd_attractor(args) -> int:
    from .ergodic import analyse_recurrent_set
    from .extension import minimal_clear_region, report_json, run_extension, verify_partition
    from .regions import dump_region, render_svg, square_areas

    t0 = time.perf_counter()
    inst, vrep = _load_instance(args.config)
    result, trace = run_extension(inst, round_cap=args.round_cap, cap=args.step_cap)
    checks = verify_partition(inst, result)
    t1 = time.perf_counter()
    alpha = inst.alpha
    R, W = result.recurrent, result.transient

    results = report_json(inst, result, trace)
    results["square_areas_R"] = {str(k): _exact(v) for k, v in sorted(square_areas(R, inst.surface).items())}
    report = {
        "command": "attractor",
        "instance": {"name": inst.name, "digest": _digest(inst), "validation": vrep.to_json()},
        "results": results,
        "regions": {"R": json.loads(dump_region(R)), "W": json.loads(dump_region(W))},
        "verification": dict(checks),
    }
    if args.cross_check:
        other = minimal_clear_region(inst, cap=args.step_cap)
        diff = (other.trace - R.trace) | (R.trace - other.trace)
        report["verification"]["cross_check_equal"] = not diff
        report["results"]["cross_check_difference"] = _exact(diff.measure(), alpha)
    if args.minimality:
        info = analyse_recurrent_set(inst, R)
        report["results"]["minimality"] = {
            "minimal": info["minimal"],
            "partition": info["partition"],
            "vertices": info["vertices"],
            "edges": sorted([list(e) for e in info["graph"].edges]),
            "components": info["components"],
        }
    if args.svg:
        svg = render_svg([("transient", W, "#d0d0d0"), ("recurrent", R, "#3a6ea5")], inst.surface,
                         title=inst.name or None)
        Path(args.svg).write_text(svg)
        report["artifacts"] = {"svg": str(args.svg)}
    if args.timings:
        report["timings"] = {"partition_s": t1 - t0, "total_s": time.perf_counter() - t0}
    _emit(report, args.report)
    return EXIT_OK if all(report["verification"].values()) else EXIT_VERIFY


def cmd_simulate(args) -> int:
    from .extension import run_extension
    from .flow import batch_csv, simulate_batch

    inst, _ = _load_instance(args.config)
    t0 = time.perf_counter()
    pos, ok = simulate_batch(inst, args.trajectories, args.steps, warmup=args.warmup, seed=args.seed,
                             threads=args.threads, backend=args.backend)
    t1 = time.perf_counter()
    report = {
        "command": "simulate",
        "instance": {"name": inst.name, "digest": _digest(inst)},
        "parameters": {"trajectories": args.trajectories, "steps": args.steps, "warmup": args.warmup,
                       "seed": args.seed},
        "results": {"clean_trajectories": int(ok.sum())},
    }
    if not args.no_partition:
        result, _ = run_extension(inst, round_cap=args.round_cap, cap=args.step_cap)
        R = result.recurrent.trace
        los = np.array([float(a) for a, _ in R])
        his = np.array([float(b) for _, b in R])
        pts = pos[ok].ravel()
        idx = np.searchsorted(los, pts, side="right") - 1
        inside = (idx >= 0) & (pts < his[np.clip(idx, 0, None)])
        frac = float(inside.mean()) if pts.size else 0.0
        expected = float(result.recurrent.area()) / inst.s
        report["results"].update({
            "inside_R_fraction": frac,
            "area_R": _exact(result.recurrent.area()),
            "expected_occupancy": expected,
        })
    if args.csv:
        Path(args.csv).write_text(batch_csv(pos, ok, args.warmup))
    if args.timings:
        report["timings"] = {"simulate_s": t1 - t0}
    _emit(report, args.report)
    return EXIT_OK


def cmd_small_attractor(args) -> int:
    from .constructions import build_small_attractor
    from .extension import run_extension
    from .regions import render_svg
    from .surface import serialize_instance

    try:
        alpha = make_alpha(json.loads(args.alpha))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise _ConfigError(f"bad --alpha: {exc}") from None
    inst, cert = build_small_attractor(alpha, args.n, args.k, cap=args.step_cap)
    report = {
        "command": "small-attractor",
        "instance": {"name": inst.name, "digest": _digest(inst), "config": json.loads(serialize_instance(inst))},
        "certificate": cert.to_json(),
    }
    if args.svg:
        result, _ = run_extension(inst, cap=args.step_cap)
        svg = render_svg([("transient", result.transient, "#d0d0d0"), ("recurrent", result.recurrent, "#3a6ea5")],
                         inst.surface, title=inst.name)
        Path(args.svg).write_text(svg)
    _emit(report, args.report)
    return EXIT_OK if cert.ok else EXIT_VERIFY


def cmd_bk_demo(args) -> int:
    from .constructions import (
        bk_attractor_decay,
        bk_conjugacy_residual,
        bk_expected,
        bk_induce,
        bk_map,
    )

    T = bk_map()
    induced = {}
    ok = True
    for which in ("I1", "I2"):
        ind = bk_induce(T, which)
        exp = bk_expected(T, which)
        match = len(ind.pieces) == len(exp) and all(
            p.lo == lo and p.hi == hi and p.shift == sh for p, (lo, hi, sh) in zip(ind.pieces, exp))
        conj = bk_conjugacy_residual(which, T)
        ok = ok and match and conj
        induced[which] = {
            "branches": [{"lo": _exact(p.lo), "hi": _exact(p.hi), "shift": _exact(p.shift), "steps": p.steps}
                         for p in ind.pieces],
            "matches_expected": match,
            "conjugacy_exact": conj,
        }
    lengths = bk_attractor_decay(T, args.levels)
    monotone = all(b <= a for a, b in zip(lengths, lengths[1:]))
    report = {
        "command": "bk-demo",
        "alpha": _exact(T.field.gen),
        "induced": induced,
        "decay": [_exact(x) for x in lengths],
        "verification": {"identities": ok, "decay_monotone": monotone},
    }
    _emit(report, args.report)
    return EXIT_OK if ok and monotone else EXIT_VERIFY


def cmd_verify(args) -> int:
    from .extension import _aligned
    from .flow import build_dissipative_map
    from .regions import RegionSet, load_region

    inst, _ = _load_instance(args.config)
    if not args.recurrent:
        raise _ConfigError("--recurrent is required")
    try:
        R = load_region(Path(args.recurrent).read_text(), inst.s, inst.alpha)
        W = (load_region(Path(args.transient).read_text(), inst.s, inst.alpha) if args.transient
             else RegionSet.whole(inst.s, inst.alpha) - R)
    except OSError as exc:
        raise _ConfigError(f"cannot read region dump: {exc.strerror}") from None
    f = build_dissipative_map(inst)
    whole = RegionSet.whole(inst.s, inst.alpha).trace
    area_r = R.area()
    checks = {
        "areas_sum_to_s": R.area() + W.area() == inst.s,
        "disjoint": not (R.trace & W.trace),
        "cover": (R.trace | W.trace) == whole,
        "recurrent_invariant": f.image(R.trace) == R.trace,
    }
    if _aligned(inst):
        c = Coord.of(area_r, inst.alpha)
        checks["recurrent_area_integer"] = c.mult == 0 and c.rat.denominator == 1
    report = {
        "command": "verify",
        "instance": {"name": inst.name, "digest": _digest(inst)},
        "results": {"area_R": _exact(area_r, inst.alpha), "area_W": _exact(W.area(), inst.alpha)},
        "verification": checks,
    }
    _emit(report, args.report)
    return EXIT_OK if all(checks.values()) else EXIT_VERIFY


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .flow import DEFAULT_STEP_CAP

    parser = argparse.ArgumentParser(prog="barrierflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="instance JSON file")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--round-cap", type=int, default=10 ** 4)
        p.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
        p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    p = sub.add_parser("attractor", help="recurrent and transient sets of an instance")
    common(p)
    p.add_argument("--svg")
    p.add_argument("--cross-check", action="store_true", help="compare with the shrinking algorithm")
    p.add_argument("--minimality", action="store_true", help="overlapping-graph analysis of the recurrent set")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("simulate", help="floating point trajectories")
    common(p)
    p.add_argument("--trajectories", type=int, default=1000)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--warmup", type=int, default=1000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--backend", choices=("cython", "python"))
    p.add_argument("--csv", help="write post-warm-up crossings as CSV")
    p.add_argument("--no-partition", action="store_true", help="skip the exact comparison")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("small-attractor", help="torus with an attractor below 4/sqrt(n)")
    common(p, config=False)
    p.add_argument("--alpha", required=True, help='slope as JSON, e.g. \'{"surd": {"p":-15,"q":7,"d":5,"r":2}}\'')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_small_attractor)

    p = sub.add_parser("bk-demo", help="self-similarity and decay of the cubic interval translation map")
    common(p, config=False)
    p.add_argument("--levels", type=int, default=12)
    p.set_defaults(func=cmd_bk_demo)

    p = sub.add_parser("verify", help="check a recurrent-set dump against an instance")
    common(p)
    p.add_argument("--recurrent", help="region dump of the recurrent set")
    p.add_argument("--transient", help="region dump of the transient set (default: complement)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_ConfigError, SchemaError, NonCanonical, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (VerificationFailed, PigeonholeFailed) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (BarrierFlowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
