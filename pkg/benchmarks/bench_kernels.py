"""Benchmark the compiled kernel against the pure-Python fallback.

Runs the two hot loops on representative workloads: the cohomology
weight scan (the dominant cost of large vanishing checks) and integer
boundary-matrix ranks.  Timings are reported in integer microseconds.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import sys
import time

from tfm import _pykernel

try:
    from tfm import _speedups
except ImportError:
    _speedups = None


def timed(fn, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        result = fn()
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def scan_workload(box):
    """A 3-fold-sized weight scan: 12 rays with small coordinates."""
    rng = random.Random(99)
    rays = []
    while len(rays) < 12:
        v = tuple(rng.randint(-2, 2) for _ in range(3))
        if any(v):
            rays.append(v)
    flat = [x for r in rays for x in r]
    nums = [rng.randint(-6, 6) for _ in rays]
    dens = [rng.choice([1, 1, 2]) for _ in rays]
    return flat, 3, nums, dens, box, 10**9


def rank_workload():
    rng = random.Random(7)
    mats = []
    for _ in range(60):
        nr = rng.randint(6, 14)
        nc = rng.randint(6, 14)
        mats.append(
            [[rng.choice([-1, 0, 0, 1]) for _ in range(nc)] for _ in range(nr)]
        )
    return mats


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--box", type=int, default=40)
    args = parser.parse_args()

    backends = [("python", _pykernel)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled backend unavailable; showing fallback only")

    print("weight scan over (2*%d+1)^3 cells, 12 rays" % args.box)
    scan_args = scan_workload(args.box)
    results = {}
    for name, mod in backends:
        us, out = timed(lambda m=mod: m.scan_weight_masks(*scan_args), args.repeat)
        results[name] = (us, out)
        print("  %-8s %10d us  (%d masks)" % (name, us // 1000, len(out)))
    if len(results) == 2:
        assert results["python"][1] == results["compiled"][1], "backends disagree"
        ratio_pct = results["python"][0] * 100 // max(results["compiled"][0], 1)
        print("  speedup: %d%%" % ratio_pct)

    print("boundary-matrix ranks, 60 random sign matrices")
    mats = rank_workload()
    results = {}
    for name, mod in backends:
        us, out = timed(
            lambda m=mod: [m.bareiss_rank(mat) for mat in mats], args.repeat
        )
        results[name] = (us, out)
        print("  %-8s %10d us" % (name, us // 1000))
    if len(results) == 2:
        assert results["python"][1] == results["compiled"][1], "backends disagree"
        ratio_pct = results["python"][0] * 100 // max(results["compiled"][0], 1)
        print("  speedup: %d%%" % ratio_pct)
    return 0


if __name__ == "__main__":
    sys.exit(main())
