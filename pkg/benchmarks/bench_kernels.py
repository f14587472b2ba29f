"""Time the compiled and pure-Python trajectory kernels on the same batch.

    python benchmarks/bench_kernels.py --trajectories 2000 --steps 2000
"""

import argparse
import json
import time
from fractions import Fraction

import numpy as np

from barrierflow import kernels
from barrierflow.flow import build_geodesic_map, sampled_return_times, simulate_batch
from barrierflow.numeric import AlphaValue
from barrierflow.surface import l_surface


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trajectories", type=int, default=2000)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--samples", type=int, default=100000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args(argv)

    alpha = AlphaValue.from_surd(0, 1, 2, 2)
    inst = l_surface(alpha, ((0, Fraction(1, 4)),))
    g = build_geodesic_map(inst.surface, alpha)
    S = inst.barrier_positions()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    rows = {}
    ref = None
    for name in backends:
        t_batch, (pos, ok) = _best(lambda: simulate_batch(inst, args.trajectories, args.steps,
                                                          seed=1, backend=name), args.repeat)
        t_ret, times = _best(lambda: sampled_return_times(g, S, args.samples, seed=1, backend=name), args.repeat)
        if ref is None:
            ref = (pos, times)
        rows[name] = {
            "trajectory_batch_s": round(t_batch, 4),
            "return_times_s": round(t_ret, 4),
            "crossings_per_s": round(args.trajectories * args.steps / t_batch),
            "matches_python": bool(np.array_equal(pos, ref[0]) and np.array_equal(times, ref[1])),
        }
    if kernels.BACKEND == "cython" and args.threads > 1:
        t, _ = _best(lambda: simulate_batch(inst, args.trajectories, args.steps, seed=1, threads=args.threads),
                     args.repeat)
        rows[f"cython_{args.threads}_threads"] = {"trajectory_batch_s": round(t, 4)}
    if "cython" in rows:
        rows["speedup"] = round(rows["python"]["trajectory_batch_s"] / rows["cython"]["trajectory_batch_s"], 1)
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
