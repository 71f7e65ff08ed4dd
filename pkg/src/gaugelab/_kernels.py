"""Hot sampling loops with a jitted backend and a pure-numpy fallback.

Set GAUGELAB_NO_NUMBA=1 to force the numpy path.  Both backends are written
to produce bit-identical outputs: the jitted loops replicate numpy's
searchsorted(side="right") convention and all reductions are integer counts,
so backend choice can never change a reported number.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("GAUGELAB_NO_NUMBA", "").strip() not in ("", "0")

try:  # pragma: no cover - exercised via the backend flag tests
    if _FORCE_NUMPY:
        raise ImportError("numba disabled by GAUGELAB_NO_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


USING_NUMBA = HAS_NUMBA


# -- numpy reference implementations ----------------------------------------


def piece_counts_numpy(samples: np.ndarray, cuts: np.ndarray) -> np.ndarray:
    """Histogram of samples over cells cut by `cuts` (right-open cells)."""
    idx = np.searchsorted(cuts, samples, side="right")
    return np.bincount(idx, minlength=len(cuts) + 1).astype(np.int64)


def map_unit_to_region_numpy(unit: np.ndarray, cum: np.ndarray, los: np.ndarray) -> np.ndarray:
    """Inverse-CDF map of uniforms in [0,1) onto a region given part offsets."""
    total = cum[-1]
    t = unit * total
    idx = np.searchsorted(cum, t, side="right")
    idx = np.minimum(idx, len(cum) - 1)
    before = np.concatenate((np.zeros(1), cum))[idx]
    return los[idx] + (t - before)


def step_family_hits_numpy(
    t_pts: np.ndarray,
    u_pts: np.ndarray,
    cuts_flat: np.ndarray,
    cuts_off: np.ndarray,
    vals_flat: np.ndarray,
    vals_off: np.ndarray,
    alpha: float,
    beta: float,
) -> int:
    n_members = len(cuts_off) - 1
    hit = np.zeros(t_pts.shape[0], dtype=bool)
    for m in range(n_members):
        cuts = cuts_flat[cuts_off[m]:cuts_off[m + 1]]
        vals = vals_flat[vals_off[m]:vals_off[m + 1]]
        tv = vals[np.searchsorted(cuts, t_pts, side="right")]
        uv = vals[np.searchsorted(cuts, u_pts, side="right")]
        ok = np.all(tv <= alpha, axis=1) & np.all(uv >= beta, axis=1)
        hit |= ok
    return int(np.count_nonzero(hit))


def pairsum_family_hits_numpy(
    t_pts: np.ndarray, u_pts: np.ndarray, h_lo: np.ndarray, h_hi: np.ndarray
) -> int:
    s, n = u_pts.shape
    ok = np.ones(s, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            sums = u_pts[:, i] + u_pts[:, j]
            in_h = np.zeros(s, dtype=bool)
            k = np.searchsorted(h_lo, sums, side="right") - 1
            valid = k >= 0
            in_h[valid] = sums[valid] <= h_hi[k[valid]]
            same = u_pts[:, i] == u_pts[:, j]
            ok &= same | ~in_h
    for i in range(t_pts.shape[1]):
        clash = np.zeros(s, dtype=bool)
        for j in range(n):
            clash |= t_pts[:, i] == u_pts[:, j]
        ok &= ~clash
    return int(np.count_nonzero(ok))


# -- jitted implementations ---------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _searchsorted_right(arr, x):
        lo, hi = 0, arr.shape[0]
        while lo < hi:
            mid = (lo + hi) // 2
            if x < arr[mid]:
                hi = mid
            else:
                lo = mid + 1
        return lo

    @njit(cache=True)
    def piece_counts_numba(samples, cuts):
        out = np.zeros(cuts.shape[0] + 1, dtype=np.int64)
        for i in range(samples.shape[0]):
            out[_searchsorted_right(cuts, samples[i])] += 1
        return out

    @njit(cache=True)
    def map_unit_to_region_numba(unit, cum, los):
        total = cum[cum.shape[0] - 1]
        out = np.empty(unit.shape[0], dtype=np.float64)
        for i in range(unit.shape[0]):
            t = unit[i] * total
            idx = _searchsorted_right(cum, t)
            if idx > cum.shape[0] - 1:
                idx = cum.shape[0] - 1
            before = 0.0 if idx == 0 else cum[idx - 1]
            out[i] = los[idx] + (t - before)
        return out

    @njit(cache=True)
    def step_family_hits_numba(
        t_pts, u_pts, cuts_flat, cuts_off, vals_flat, vals_off, alpha, beta
    ):
        hits = 0
        n_members = cuts_off.shape[0] - 1
        for s in range(t_pts.shape[0]):
            found = False
            for m in range(n_members):
                c0, c1 = cuts_off[m], cuts_off[m + 1]
                v0 = vals_off[m]
                ok = True
                for i in range(t_pts.shape[1]):
                    idx = _searchsorted_right(cuts_flat[c0:c1], t_pts[s, i])
                    if not (vals_flat[v0 + idx] <= alpha):
                        ok = False
                        break
                if ok:
                    for j in range(u_pts.shape[1]):
                        idx = _searchsorted_right(cuts_flat[c0:c1], u_pts[s, j])
                        if not (vals_flat[v0 + idx] >= beta):
                            ok = False
                            break
                if ok:
                    found = True
                    break
            if found:
                hits += 1
        return hits

    @njit(cache=True)
    def pairsum_family_hits_numba(t_pts, u_pts, h_lo, h_hi):
        hits = 0
        s_count, n = u_pts.shape
        for s in range(s_count):
            ok = True
            for i in range(n):
                if not ok:
                    break
                for j in range(i + 1, n):
                    if u_pts[s, i] == u_pts[s, j]:
                        continue
                    total = u_pts[s, i] + u_pts[s, j]
                    k = _searchsorted_right(h_lo, total) - 1
                    if k >= 0 and total <= h_hi[k]:
                        ok = False
                        break
            if ok:
                for i in range(t_pts.shape[1]):
                    for j in range(n):
                        if t_pts[s, i] == u_pts[s, j]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                hits += 1
        return hits

    piece_counts = piece_counts_numba
    map_unit_to_region = map_unit_to_region_numba
    step_family_hits = step_family_hits_numba
    pairsum_family_hits = pairsum_family_hits_numba
else:
    piece_counts = piece_counts_numpy
    map_unit_to_region = map_unit_to_region_numpy
    step_family_hits = step_family_hits_numpy
    pairsum_family_hits = pairsum_family_hits_numpy
