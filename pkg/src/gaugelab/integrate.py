"""Gauge-limit, dual-pairing, empirical-mean and simple-function integration.

Every operation here reports either exact rationals or certified enclosures,
and the approximate verdicts (convergence, residual checks, stability of
empirical means) always state the finite protocol that produced them: a
convergence status is relative to the gauge schedule that was run, never a
claim about all gauges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import OverlappingItems, UnsupportedExactIntegration
from .exact import D0, D1, Dyadic, Interval, Region, UNIT_REGION, floor_to_depth
from .gauges import Gauge, MCSHANE, TaggedPartition, cousin_partition
from .integrands import (
    EVALUATOR,
    POLY,
    STEP,
    IntegrandFn,
    adapted_gauge,
    exact_vector_integral,
    restrict_integrand,
    scalar_integral,
)
from .rng import stream
from .spaces import DualFunctional, ValueSpace, VectorValue, distance

DEFAULT_TOL = Fraction(1, 1 << 10)


# -- finite sums -------------------------------------------------------------


def riemann_sum(phi: IntegrandFn, p: TaggedPartition) -> VectorValue:
    """Sum of |interval| * phi(tag); exact in the integrand's value space."""
    acc = VectorValue.zero(phi.space)
    for it in p.items:
        length = it.interval.length.as_fraction()
        if length:
            acc = acc + phi.eval(it.tag) * length
    return acc


def generalized_sum(phi: IntegrandFn, items: Sequence[tuple[Region, Dyadic]]) -> VectorValue:
    """Sum of mu(E_i) * phi(t_i) over tagged regions; regions must be
    non-overlapping up to null sets."""
    total = D0
    for region, _ in items:
        total = total + region.measure()
    union = Region(part for region, _ in items for part in region.parts)
    if union.measure() != total:
        raise OverlappingItems("tagged regions overlap in positive measure")
    acc = VectorValue.zero(phi.space)
    for region, tag in items:
        mu = region.measure().as_fraction()
        if mu:
            acc = acc + phi.eval(tag) * mu
    return acc


# -- gauge-limit integration ---------------------------------------------------


@dataclass
class IntegralEstimate:
    value: VectorValue
    oscillation: Fraction
    status: str  # converged | oscillation-floor | max-level
    trace: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == "converged"


_STRATEGIES = ("mid", "left", "sampled")


def _schedule_gauges(phi: IntegrandFn, schedule, max_levels: int):
    if isinstance(schedule, str):
        if schedule == "auto":
            return [Gauge.const(Fraction(1, 1 << k)) for k in range(max_levels)]
        if schedule == "adapted":
            if phi.klass == EVALUATOR:
                raise UnsupportedExactIntegration(
                    "adapted schedule needs piecewise structure; use auto"
                )
            return [adapted_gauge(phi, k) for k in range(2, 2 + max_levels)]
        raise ValueError(f"unknown schedule {schedule!r}")
    return list(schedule)


def mcshane_integrate(
    phi: IntegrandFn,
    schedule="auto",
    tol: Fraction = DEFAULT_TOL,
    trials_per_level: int = 3,
    max_levels: int = 12,
    seed: int = 0,
    flavor: str = MCSHANE,
    max_depth: int = 60,
) -> IntegralEstimate:
    """Riemann sums over subordinate partitions along a gauge schedule.

    Each level draws trials with varied tag strategies; the level oscillation
    is the largest pairwise distance between trial sums.  `converged` means
    the oscillation fell below tol for the schedule that was run — a
    schedule-relative statement, deterministic given the seed.  "auto" is the
    constant schedule delta_k = 2^-k; "adapted" follows the integrand's
    piecewise structure and is what the closed-form-aware callers use.
    """
    if trials_per_level < 2:
        raise ValueError("need at least two trials per level to measure oscillation")
    gauges = _schedule_gauges(phi, schedule, max_levels)
    trace: list[dict] = []
    osc_history: list[Fraction] = []
    osc = Fraction(0)
    last = VectorValue.zero(phi.space)
    for level, g in enumerate(gauges):
        sums = []
        for i in range(trials_per_level):
            p = cousin_partition(
                g,
                flavor=flavor,
                tag_strategy=_STRATEGIES[i % len(_STRATEGIES)],
                max_depth=max_depth,
                seed=seed * 100003 + level * 97 + i,
            )
            sums.append(riemann_sum(phi, p))
        osc = Fraction(0)
        for i in range(len(sums)):
            for j in range(i + 1, len(sums)):
                d = distance(sums[i], sums[j]).hi
                if d > osc:
                    osc = d
        last = sums[-1]
        trace.append(
            {"level": level, "gauge": g.descriptor["kind"], "oscillation": str(osc)}
        )
        if osc <= tol:
            return IntegralEstimate(last, osc, "converged", trace)
        osc_history.append(osc)
    # floor: the last level barely improved on the one before it
    floored = len(osc_history) >= 2 and 2 * osc_history[-1] >= osc_history[-2]
    return IntegralEstimate(last, osc, "oscillation-floor" if floored else "max-level", trace)


def indefinite_integral(
    phi: IntegrandFn,
    region: Region,
    tol: Fraction = DEFAULT_TOL,
    seed: int = 0,
    max_levels: int = 12,
) -> IntegralEstimate:
    """Gauge integral of phi restricted to the region (the set map E -> nu(E))."""
    restricted = restrict_integrand(phi, region)
    schedule = "auto" if phi.klass == EVALUATOR else "adapted"
    return mcshane_integrate(
        restricted, schedule=schedule, tol=tol, seed=seed, max_levels=max_levels
    )


# -- dual-route checks ---------------------------------------------------------


def pettis_check(
    phi: IntegrandFn,
    functionals: Sequence[DualFunctional],
    regions: Sequence[Region],
    tol: Fraction = DEFAULT_TOL,
    seed: int = 0,
    inner_tol: Fraction | None = None,
) -> dict:
    """Compare f(nu(E)) from gauge sums against the exact scalar closed form.

    Two genuinely different routes: nu(E) comes from subordinate-partition
    Riemann sums of the restricted integrand, the scalar side from per-cell
    antiderivatives.  Functionals must carry norm_bound <= 1.
    """
    for f in functionals:
        if f.norm_bound > 1:
            raise ValueError(f"functional {f.label} has norm bound {f.norm_bound} > 1")
    inner = inner_tol if inner_tol is not None else tol / 4
    entries = []
    max_residual = Fraction(0)
    for ei, region in enumerate(regions):
        est = indefinite_integral(phi, region, tol=inner, seed=seed + ei)
        for fi, f in enumerate(functionals):
            gauge_side = f(est.value)
            exact_side = scalar_integral(f, phi, region)
            residual = abs(gauge_side - exact_side)
            if residual > max_residual:
                max_residual = residual
            entries.append(
                {
                    "region": [[str(p.lo), str(p.hi)] for p in region.parts],
                    "functional": fi,
                    "residual": str(residual),
                    "converged": est.converged,
                }
            )
    return {
        "max_residual": max_residual,
        "pass": max_residual <= tol,
        "tol": tol,
        "entries": entries,
        "n_functionals": len(functionals),
        "n_regions": len(regions),
    }


def interval_series_check(
    phi: IntegrandFn,
    blocks: Sequence[Region],
    tol: Fraction = DEFAULT_TOL,
    window_start: int | None = None,
    seed: int = 0,
) -> dict:
    """Partial sums of nu(block_i); reports the worst late-window gap.

    Unconditional-convergence probe: the blocks may come in any order, and the
    check passes iff max over window_start <= j < k <= N of |S_k - S_j| <= tol.
    """
    partials = [VectorValue.zero(phi.space)]
    acc = partials[0]
    block_norms = []
    for bi, block in enumerate(blocks):
        est = indefinite_integral(phi, block, tol=tol / 4, seed=seed + bi)
        acc = acc + est.value
        partials.append(acc)
        block_norms.append(est.value.norm().hi)
    n = len(blocks)
    lo = n // 2 if window_start is None else window_start
    tail_max = Fraction(0)
    for j in range(lo, n + 1):
        for k in range(j + 1, n + 1):
            d = distance(partials[k], partials[j]).hi
            if d > tail_max:
                tail_max = d
    return {
        "n_blocks": n,
        "window_start": lo,
        "tail_max": tail_max,
        "pass": tail_max <= tol,
        "tol": tol,
        "block_norms": [str(b) for b in block_norms],
        "partials": partials,
    }


def _trim_region_to_measure(region: Region, target: Fraction) -> Region:
    """Largest prefix of the region's parts with measure <= target (exact)."""
    kept = []
    budget = target
    for part in region.parts:
        length = part.length.as_fraction()
        if length <= budget:
            kept.append(part)
            budget -= length
        elif budget > 0:
            hi = floor_to_depth(part.lo.as_fraction() + budget, max(part.lo.exp, 40) + 12)
            if hi > part.lo:
                kept.append(Interval(part.lo, hi))
            budget = Fraction(0)
    return Region(kept)


def sample_regions(
    count: int, seed: int, max_measure: Fraction = Fraction(1), depth: int = 8, max_parts: int = 3
) -> list[Region]:
    """Deterministic pool of dyadic regions with measure <= max_measure."""
    rng = stream(seed, 0)
    out = []
    target = min(Fraction(1), max_measure)
    canonical = [
        _trim_region_to_measure(UNIT_REGION, target),
        _trim_region_to_measure(Region.make((D0, Dyadic(1, 1))), target),
        _trim_region_to_measure(Region.make((Dyadic(1, 1), D1)), target),
    ]
    out.extend(canonical[: min(count, 3)])
    while len(out) < count:
        parts = []
        for _ in range(int(rng.integers(1, max_parts + 1))):
            a = int(rng.integers(0, 1 << depth))
            b = int(rng.integers(a + 1, (1 << depth) + 1))
            parts.append(Interval(Dyadic(a, depth), Dyadic(b, depth)))
        region = _trim_region_to_measure(Region(parts), target)
        if not region.is_empty():
            out.append(region)
    return out


def absolute_continuity(
    phi: IntegrandFn,
    etas: Sequence[Fraction],
    regions_per_eta: int = 8,
    seed: int = 0,
    tol: Fraction = DEFAULT_TOL,
) -> dict:
    """Modulus table eta -> sup ||nu(E)|| over a sampled pool with mu(E) <= eta.

    The pool is shared across etas (each region counts for every eta at or
    above its measure), so the table is nondecreasing by construction.
    """
    etas = sorted(Fraction(e) for e in etas)
    pool: list[Region] = []
    for i, eta in enumerate(etas):
        pool.extend(
            sample_regions(regions_per_eta, seed + 31 * i, max_measure=eta)
        )
    measured = []
    for region in pool:
        est = indefinite_integral(phi, region, tol=tol, seed=seed)
        measured.append((region, region.measure().as_fraction(), est.value.norm().hi))
    rows = []
    for eta in etas:
        best = Fraction(0)
        witness = None
        for region, mu, norm_hi in measured:
            if mu <= eta and norm_hi > best:
                best = norm_hi
                witness = region
        rows.append(
            {
                "eta": eta,
                "modulus": best,
                "witness": [[str(p.lo), str(p.hi)] for p in witness.parts] if witness else [],
            }
        )
    return {"rows": rows, "pool_size": len(pool)}


def lower_norm_integral(phi: IntegrandFn, grid_depth: int = 8) -> Fraction:
    """Lower Darboux sum of ||phi|| over the dyadic grid refined by the
    integrand's own breakpoints (per-cell certified infimum lower bounds)."""
    cuts = {Fraction(i, 1 << grid_depth) for i in range((1 << grid_depth) + 1)}
    if phi.klass in (STEP, POLY):
        cuts |= {b.as_fraction() for b in phi.breaks}
    points = sorted(cuts)
    total = Fraction(0)
    for a, b in zip(points, points[1:]):
        iv = Interval(Dyadic.from_fraction(a), Dyadic.from_fraction(b))
        total += (b - a) * phi.norm_lower_on(iv)
    return total


# -- empirical-mean integration --------------------------------------------------


@dataclass
class TalagrandReport:
    means: list[VectorValue]
    variances: list[Fraction]  # per-batch sample variance in the space norm
    pooled: VectorValue
    spread: Fraction  # max pairwise distance between batch means
    n: int
    batches: int
    seed: int
    exact: bool  # True when the counting path produced exact rational means


def _float_breaks(phi: IntegrandFn) -> np.ndarray:
    return np.array([float(b) for b in phi.breaks[1:-1]], dtype=np.float64)


def talagrand_integrate(
    phi: IntegrandFn, seed: int = 0, n: int = 10_000, batches: int = 30
) -> TalagrandReport:
    """Empirical means of phi over seeded uniform samples, batch by batch.

    Piecewise-step integrands take the exact path: batch b counts samples per
    piece (integer histogram, backend-invariant), so means and dispersions are
    exact rationals.  Other classes evaluate in float64; the rounding noise is
    ~n*2^-52, far below any tolerance used here.
    """
    if phi.klass == STEP:
        cuts = _float_breaks(phi)
        means: list[VectorValue] = []
        variances: list[Fraction] = []
        pooled_counts = np.zeros(len(phi.values), dtype=np.int64)
        for b in range(batches):
            u = stream(seed, b + 1).random(n)
            counts = _kernels.piece_counts(u, cuts)
            pooled_counts += counts
            mean = VectorValue.zero(phi.space)
            for c, val in zip(counts.tolist(), phi.values):
                if c:
                    mean = mean + val * Fraction(c, n)
            means.append(mean)
            var = Fraction(0)
            for c, val in zip(counts.tolist(), phi.values):
                if c:
                    var += Fraction(c) * distance(val, mean).hi ** 2
            variances.append(var / (n - 1) if n > 1 else Fraction(0))
        pooled = VectorValue.zero(phi.space)
        total = n * batches
        for c, val in zip(pooled_counts.tolist(), phi.values):
            if c:
                pooled = pooled + val * Fraction(int(c), total)
        exact = True
    else:
        means = []
        variances = []
        acc = None
        for b in range(batches):
            u = stream(seed, b + 1).random(n)
            vals = _eval_float_matrix(phi, u)
            mean_vec = vals.mean(axis=0)
            err = vals - mean_vec
            sigma2 = float((err * err).sum(axis=1).mean()) * n / max(n - 1, 1)
            means.append(
                VectorValue.coords(phi.space, [Fraction(float(x)) for x in mean_vec])
            )
            variances.append(Fraction(sigma2))
            acc = mean_vec if acc is None else acc + mean_vec
        pooled = VectorValue.coords(
            phi.space, [Fraction(float(x / batches)) for x in acc]
        )
        exact = False
    spread = Fraction(0)
    for i in range(len(means)):
        for j in range(i + 1, len(means)):
            d = distance(means[i], means[j]).hi
            if d > spread:
                spread = d
    return TalagrandReport(means, variances, pooled, spread, n, batches, seed, exact)


def _eval_float_matrix(phi: IntegrandFn, samples: np.ndarray) -> np.ndarray:
    if phi.klass == POLY:
        cuts = _float_breaks(phi)
        idx = np.searchsorted(cuts, samples, side="right")
        out = np.zeros((len(samples), phi.space.dim))
        for cell in range(len(phi.polys)):
            mask = idx == cell
            if not mask.any():
                continue
            ts = samples[mask]
            for c, coeffs in enumerate(phi.polys[cell]):
                acc = np.zeros_like(ts)
                for ck in reversed(coeffs):
                    acc = acc * ts + float(ck)
                out[mask, c] = acc
        return out
    if phi.space.is_step:
        raise UnsupportedExactIntegration("float path needs coordinate values")
    rows = [
        [float(x) for x in phi.eval(Fraction(float(s))).data] for s in samples
    ]
    return np.array(rows, dtype=np.float64)


# -- simple-function integration ---------------------------------------------------


@dataclass
class BochnerCertificate:
    parts: list  # (Interval, VectorValue) pieces of the simple approximation
    dominator_integral: Fraction  # integral of the dominating error bound h
    value: VectorValue
    epsilon: Fraction

    @property
    def n_parts(self) -> int:
        return len(self.parts)


@dataclass
class NotApproximable:
    lower_bound: Fraction  # proven floor for the L1 distance to simple maps
    piece_budget: int
    separation: Fraction
    cell_measure: Fraction
    reason: str


def bochner_integrate(phi: IntegrandFn, eps: Fraction, max_pieces: int = 64):
    """Simple-function certificate with dominated error, or a proven refusal.

    Integrands flagged with pairwise-separated values (metadata "separation"
    and "separation_cell_measure") get the counting argument: a simple map
    with at most max_pieces pieces is within separation/2 of the integrand on
    at most max_pieces value cells, so the L1 error is at least
    (separation/2) * (1 - max_pieces * cell_measure).  That bound is returned
    when it exceeds eps; it is a statement about the stated piece budget.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    sep = phi.metadata.get("separation")
    cell = phi.metadata.get("separation_cell_measure")
    if sep is not None and cell is not None:
        bound = Fraction(sep) / 2 * (1 - max_pieces * Fraction(cell))
        if bound > eps:
            return NotApproximable(
                lower_bound=bound,
                piece_budget=max_pieces,
                separation=Fraction(sep),
                cell_measure=Fraction(cell),
                reason=(
                    "values are pairwise separated; any simple map with "
                    f"<= {max_pieces} pieces misses by >= {bound}"
                ),
            )
    if phi.klass == STEP:
        parts = [
            (Interval(lo, hi), val)
            for lo, hi, val in zip(phi.breaks, phi.breaks[1:], phi.values)
        ]
        value = exact_vector_integral(phi)
        return BochnerCertificate(parts, Fraction(0), value, eps)
    if phi.klass == POLY:
        lip = phi.lipschitz_bound()
        depth = 1
        # dominating bound: |phi(t) - phi(mid)| <= lip * h/2 on each cell
        while lip * Fraction(1, 1 << (depth + 1)) > eps and depth < 30:
            depth += 1
        cuts = sorted(
            {Fraction(i, 1 << depth) for i in range((1 << depth) + 1)}
            | {b.as_fraction() for b in phi.breaks}
        )
        parts = []
        value = VectorValue.zero(phi.space)
        dom = Fraction(0)
        for a, b in zip(cuts, cuts[1:]):
            mid = (a + b) / 2
            x = phi.eval(mid)
            parts.append((Interval(Dyadic.from_fraction(a), Dyadic.from_fraction(b)), x))
            value = value + x * (b - a)
            dom += (b - a) * lip * (b - a) / 2
        if dom > eps:
            raise UnsupportedExactIntegration(
                f"refinement floor {dom} > eps; raise eps or depth cap"
            )
        return BochnerCertificate(parts, dom, value, eps)
    raise UnsupportedExactIntegration("simple-function certificates need piecewise structure")


def uniform_integrability(
    phis: Sequence[IntegrandFn],
    functionals: Sequence[DualFunctional],
    etas: Sequence[Fraction],
    regions_per_eta: int = 8,
    seed: int = 0,
) -> dict:
    """Family modulus eta -> sup over (phi, f, mu(E) <= eta) of |int_E f(phi)|."""
    etas = sorted(Fraction(e) for e in etas)
    pool: list[Region] = []
    for i, eta in enumerate(etas):
        pool.extend(sample_regions(regions_per_eta, seed + 57 * i, max_measure=eta))
    rows = []
    for eta in etas:
        best = Fraction(0)
        witness = None
        for region in pool:
            mu = region.measure().as_fraction()
            if mu > eta:
                continue
            for pi, phi in enumerate(phis):
                for fi, f in enumerate(functionals):
                    v = abs(scalar_integral(f, phi, region))
                    if v > best:
                        best = v
                        witness = {"phi": pi, "functional": fi,
                                   "region": [[str(p.lo), str(p.hi)] for p in region.parts]}
        rows.append({"eta": eta, "modulus": best, "witness": witness})
    return {"rows": rows}


# -- convergence-under-domination harness ----------------------------------------


def vitali_limit(
    phi_seq: Callable[[int], IntegrandFn],
    phi_limit: IntegrandFn,
    functionals: Sequence[DualFunctional],
    regions: Sequence[Region],
    tol: Fraction = DEFAULT_TOL,
    n_max: int = 16,
    seed: int = 0,
    sample_depth: int = 6,
    weak_h1: bool = False,
) -> dict:
    """Finite-sample convergence verdict for phi_n -> phi.

    H1: pointwise closeness of phi_{n_max} to the limit on a deterministic
    interior dyadic sample (weak_h1=True swaps the norm for |f(.)| over the
    supplied functionals; experimental, no correctness claim attached).
    H2: late-window Cauchy check of the scalar integrals over each region.
    C:  only claimed when H1 and H2 hold — the gauge integral of the limit
    matches the last scalar-route vector integral within 3*tol.
    """
    n_pts = 1 << sample_depth
    sample = [Fraction(2 * i + 1, 2 * n_pts) for i in range(n_pts)]
    phi_last = phi_seq(n_max)
    h1_worst = Fraction(0)
    h1_witness = None
    for x in sample:
        if weak_h1:
            gap = max(
                (abs(f(phi_last.eval(x)) - f(phi_limit.eval(x))) for f in functionals),
                default=Fraction(0),
            )
        else:
            gap = distance(phi_last.eval(x), phi_limit.eval(x)).hi
        if gap > h1_worst:
            h1_worst = gap
            h1_witness = x
    h1_pass = h1_worst <= tol

    h2_worst = Fraction(0)
    h2_witness = None
    lo = max(1, n_max // 2)
    cache: dict[int, IntegrandFn] = {}

    def seq(n: int) -> IntegrandFn:
        if n not in cache:
            cache[n] = phi_seq(n)
        return cache[n]

    for ri, region in enumerate(regions):
        for fi, f in enumerate(functionals):
            vals = [scalar_integral(f, seq(n), region) for n in range(lo, n_max + 1)]
            gap = max(vals) - min(vals)
            if gap > h2_worst:
                h2_worst = gap
                h2_witness = {"region": ri, "functional": fi}
    h2_pass = h2_worst <= tol

    verdict = {
        "h1": {"pass": h1_pass, "worst": h1_worst, "witness": str(h1_witness)},
        "h2": {"pass": h2_pass, "worst": h2_worst, "witness": h2_witness},
        "n_max": n_max,
        "tol": tol,
    }
    if h1_pass and h2_pass:
        limit_est = mcshane_integrate(
            phi_limit,
            schedule="auto" if phi_limit.klass == EVALUATOR else "adapted",
            tol=tol,
            seed=seed,
        )
        seq_vec = exact_vector_integral(phi_last)
        gap = distance(limit_est.value, seq_vec).hi
        c_pass = gap <= 3 * tol
        verdict["c"] = {"pass": c_pass, "gap": gap, "limit_status": limit_est.status}
        verdict["pass"] = c_pass
    else:
        seq_vec = exact_vector_integral(phi_last)
        limit_est = mcshane_integrate(
            phi_limit,
            schedule="auto" if phi_limit.klass == EVALUATOR else "adapted",
            tol=tol,
            seed=seed,
        )
        gap = distance(limit_est.value, seq_vec).hi
        verdict["c"] = {
            "skipped": "H1/H2 did not both hold on the sample",
            "gap_anyway": gap,
            "pass": False,
        }
        verdict["pass"] = False
    return verdict


# -- default inventories -----------------------------------------------------------


def default_functionals(space: ValueSpace, count: int, seed: int = 0) -> list[DualFunctional]:
    """Coordinates first, then seeded normalized combinations (or pairings)."""
    rng = stream(seed, 3)
    out: list[DualFunctional] = []
    if space.is_step:
        n_cells = 1 << space.grid_depth
        for i in range(min(count, 8)):
            out.append(DualFunctional.coordinate(space, (i * max(1, n_cells // 8)) % n_cells))
        while len(out) < count:
            # density = sign pattern on a random dyadic window, L1-normalized
            a = int(rng.integers(0, n_cells))
            b = int(rng.integers(a + 1, n_cells + 1))
            lo, hi = Dyadic(a, space.grid_depth), Dyadic(b, space.grid_depth)
            width = (hi - lo).as_fraction()
            sign = 1 if int(rng.integers(0, 2)) else -1
            breaks = [x for x in (D0, lo, hi, D1)]
            breaks = sorted(set(breaks), key=lambda d: d.as_fraction())
            levels = []
            for c0, c1 in zip(breaks, breaks[1:]):
                inside = lo.as_fraction() <= (c0.as_fraction() + c1.as_fraction()) / 2 < hi.as_fraction()
                levels.append(Fraction(sign, 1) / width if inside else Fraction(0))
            density = VectorValue.step(space, breaks, levels)
            out.append(DualFunctional.step_pairing(space, density))
        return out[:count]
    for i in range(min(count, space.dim)):
        out.append(DualFunctional.coordinate(space, i))
    while len(out) < count:
        raw = [Fraction(int(rng.integers(-8, 9)), 8) for _ in range(space.dim)]
        probe = DualFunctional.combination(space, raw)
        if probe.norm_bound == 0:
            continue
        scaled = [c / probe.norm_bound for c in raw]
        out.append(DualFunctional.combination(space, scaled))
    return out[:count]
