"""Timing comparison of the jitted sampling kernels against their numpy
reference implementations, asserting output equality on every case.

Run:  python3 benchmarks/bench_kernels.py [--samples N]

The jitted path is warmed once before timing so compilation cost is not
attributed to the kernel.  Set GAUGELAB_NO_NUMBA=1 to confirm the fallback
wiring (the script then only times the numpy path).
"""

import argparse
import time

import numpy as np

from gaugelab import _kernels


def best_of(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def build_cases(n_samples: int, rng: np.random.Generator):
    cases = []

    samples = rng.random(n_samples)
    cuts = np.sort(rng.random(63))
    cases.append(("piece_counts", (samples, cuts)))

    lengths = rng.random(200) / 200
    cum = np.cumsum(lengths)
    los = np.sort(rng.random(200))
    unit = rng.random(n_samples)
    cases.append(("map_unit_to_region", (unit, cum, los)))

    n_tuples = max(1, n_samples // 10)
    t_pts = rng.random((n_tuples, 1))
    u_pts = rng.random((n_tuples, 2))
    cuts_chunks = [np.sort(rng.random(rng.integers(2, 12))) for _ in range(48)]
    vals_chunks = [rng.random(len(c) + 1) for c in cuts_chunks]
    cuts_off = np.cumsum([0] + [len(c) for c in cuts_chunks]).astype(np.int64)
    vals_off = np.cumsum([0] + [len(v) for v in vals_chunks]).astype(np.int64)
    cases.append(("step_family_hits",
                  (t_pts, u_pts, np.concatenate(cuts_chunks), cuts_off,
                   np.concatenate(vals_chunks), vals_off, 0.3, 0.7)))

    h_lo = np.array([0.25, 0.75])
    h_hi = np.array([0.5, 1.25])
    cases.append(("pairsum_family_hits", (t_pts, u_pts, h_lo, h_hi)))
    return cases


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    args = ap.parse_args()

    rng = np.random.default_rng(12345)
    cases = build_cases(args.samples, rng)

    print(f"backend in use: {'numba' if _kernels.USING_NUMBA else 'numpy'}"
          f"  ({args.samples} samples)")
    header = f"{'kernel':24s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}  equal"
    print(header)
    print("-" * len(header))

    for name, argv in cases:
        ref = getattr(_kernels, f"{name}_numpy")
        t_np, out_np = best_of(ref, *argv)
        if _kernels.USING_NUMBA:
            jit = getattr(_kernels, f"{name}_numba")
            jit(*argv)  # warm the compile cache
            t_nb, out_nb = best_of(jit, *argv)
            if isinstance(out_np, np.ndarray):
                equal = np.array_equal(out_np, out_nb)
            else:
                equal = out_np == out_nb
            print(f"{name:24s} {t_np*1e3:9.2f}ms {t_nb*1e3:9.2f}ms "
                  f"{t_np/max(t_nb, 1e-12):7.1f}x  {equal}")
            if not equal:
                raise SystemExit(f"backend mismatch in {name}")
        else:
            print(f"{name:24s} {t_np*1e3:9.2f}ms {'-':>10s} {'-':>8s}  -")


if __name__ == "__main__":
    main()
