"""Integrand gallery: the fat-set machinery, jump families, and three
purpose-built vector integrands.

The centerpiece is a pair of Riemann sums over the same gauge whose gap has an
exact rational lower bound: a closed "fat" set H with positive measure in
every dyadic cell constrains a family of {0,1} jump functions (no two points
of a member's support may sum into H), and two tag searches produce partitions
whose sums differ in a designated coordinate by at least (m-1)/k.  Everything
is verified with exact region arithmetic after the randomized searches finish,
so a returned witness is a theorem about the specific partitions in hand.
"""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ResolutionExceeded, SearchExhausted
from .exact import (D0, D1, Dyadic, Interval, Region, UNIT_REGION,
                    region_intersect, region_subtract)
from .gauges import (Gauge, MCSHANE, TaggedInterval, TaggedPartition,
                     extend_to_partition, is_partition, is_subordinate)
from .integrands import IntegrandFn, exact_vector_integral, restrict_integrand
from .integrate import riemann_sum
from .spaces import ValueSpace, VectorValue, distance
from .stability import FunctionFamily, Member


# -- fat set -----------------------------------------------------------------


@dataclass
class FatSet:
    """Increasing closed sets H_0 = empty set up to H_L inside [0,2], with
    positive measure but never full measure in every dyadic cell at the
    declared resolution."""

    stages: list  # Region, index 0..L
    resolution: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def levels(self) -> int:
        return len(self.stages) - 1

    @property
    def top(self) -> Region:
        return self.stages[-1]

    def stage(self, l: int) -> Region:
        """H_l, held stationary at H_L for l beyond the built levels."""
        if l < 0:
            raise ValueError("stage index must be >= 0")
        return self.stages[min(l, self.levels)]


def build_fat_set(L: int, r: int = 3, seed: int = 0) -> FatSet:
    """Deterministic fat set: stage s centers one closed interval of length
    2^-(r+2+s) in every dyadic cell of [0,2] at scale 2^-(r+s-1).

    The seed is accepted for interface uniformity; the construction is fully
    deterministic.  Stages at different scales overlap, so per-cell mass grows
    slower than L*2^-(r+3); rather than trusting any closed form, the full-
    and null-cell halves of the invariant are checked exhaustively over every
    scale-r cell and violating parameters are rejected with diagnostics.
    """
    if L < 1:
        raise ValueError("need at least one stage")
    if r < 2:
        raise ValueError("resolution must be >= 2")
    stages = [Region.empty()]
    acc: list[Interval] = []
    for s in range(1, L + 1):
        cell_exp = r + s - 1
        half = Dyadic(1, r + 3 + s)  # half of the placed length 2^-(r+2+s)
        for c in range(2 << cell_exp):
            center = Dyadic(2 * c + 1, cell_exp + 1)
            acc.append(Interval(center - half, center + half))
        stages.append(Region(acc))
    top = stages[-1]
    worst = check_fat_invariant(top, r)
    if worst is not None:
        raise ValueError(
            f"fat-set invariant failed at L={L}, r={r}: cell {worst['cell']} "
            f"holds mass {worst['mass']} (need strictly between 0 and 2^-{r})"
        )
    diag = {
        "L": L,
        "r": r,
        "measure": str(top.measure()),
        "parts": len(top.parts),
    }
    return FatSet(stages=stages, resolution=r, diagnostics=diag)


def check_fat_invariant(H: Region, r: int):
    """Exhaustive positive-but-not-full mass check of H over every dyadic
    cell of [0,2] at scale 2^-r.  Returns None, or diagnostics for the first
    violating cell."""
    for j in range(2 << r):
        cell = Interval(Dyadic(j, r), Dyadic(j + 1, r))
        mu = region_intersect(H, Region((cell,))).measure()
        if not (D0 < mu < cell.length):
            return {"cell": [str(cell.lo), str(cell.hi)], "mass": str(mu)}
    return None


def _erode(region: Region, num: int = 1, exp: int = 2) -> Region:
    """Shrink each part by num/2^exp of its length per side (default 1/4).

    Points of the eroded set sit at interior depth >= len/4 of their part, so
    exact membership afterwards is robust to endpoint coincidences.
    """
    factor = Dyadic(num, exp)
    parts = []
    for iv in region.parts:
        margin = iv.length * factor
        lo, hi = iv.lo + margin, iv.hi - margin
        if lo < hi:
            parts.append(Interval(lo, hi))
    return Region(parts)


# -- inductive tag searches ---------------------------------------------------


def inductive_tag_sequences(
    H: Region,
    windows: Sequence[Region],
    mode: str,
    seed: int = 0,
    max_attempts: int = 200,
) -> list[Dyadic]:
    """Greedy randomized tags t_j in window_j with pairwise sums inside H
    (mode "sums-in", i < j) or outside H (mode "sums-out", i <= j, so doubled
    tags are excluded too).

    Each accepted tag shrinks the remaining windows to the exact preimage of
    the eroded target set; picks are midpoints of seeded part choices, which
    keeps every sum strictly interior.  On window collapse the whole attempt
    restarts with a fresh stream.  Results are verified against H itself
    before returning.
    """
    if mode not in ("sums-in", "sums-out"):
        raise ValueError(f"unknown mode {mode!r}")
    if any(w.is_empty() or w.measure() == D0 for w in windows):
        raise ValueError("windows must have positive measure")
    if mode == "sums-in":
        core = _erode(H)
        base = list(windows)
    else:
        hull = Interval(D0, Dyadic(2, 0))
        if H.parts:
            b = H.bounding()
            hull = Interval(dyadic_min(D0, b.lo), dyadic_max(Dyadic(2, 0), b.hi))
        core = _erode(region_subtract(Region((hull,)), H))
        # self-sum exclusion: 2t must land in the eroded complement as well
        half_core = core.scale_half()
        base = [region_intersect(w, half_core) for w in windows]
    trace = []
    last_fail = 0
    for attempt in range(max_attempts):
        rng = random.Random(f"tags|{seed}|{attempt}")
        current = list(base)
        tags: list[Dyadic] = []
        failed = False
        for j in range(len(current)):
            parts = current[j].parts
            if not parts:
                trace.append({"attempt": attempt, "index": j,
                              "windows": [str(w.measure()) for w in current]})
                last_fail = j
                failed = True
                break
            t = parts[rng.randrange(len(parts))].midpoint()
            tags.append(t)
            shifted = core.translate(-t)
            for j2 in range(j + 1, len(current)):
                current[j2] = region_intersect(current[j2], shifted)
        if failed:
            continue
        ok = True
        for i in range(len(tags)):
            lo_pair = i + 1 if mode == "sums-in" else i
            for j in range(lo_pair, len(tags)):
                s = (tags[i] + tags[j]).as_fraction()
                inside = H.contains(s)
                if mode == "sums-in" and not inside:
                    ok = False
                if mode == "sums-out" and inside:
                    ok = False
        if ok:
            return tags
    raise SearchExhausted(
        f"no {mode} tag sequence after {max_attempts} attempts",
        index=last_fail,
        trace=trace[-10:],
    )


def dyadic_min(a: Dyadic, b: Dyadic) -> Dyadic:
    return a if a <= b else b


def dyadic_max(a: Dyadic, b: Dyadic) -> Dyadic:
    return a if a >= b else b


# -- jump-function family ------------------------------------------------------


def _overlap_tables(H: Region):
    los = [p.lo.as_fraction() for p in H.parts]
    prefmax = []
    best = None
    for p in H.parts:
        hi = p.hi.as_fraction()
        best = hi if best is None or hi > best else best
        prefmax.append(best)
    return los, prefmax


def _hits_closed(los, prefmax, lo: Fraction, hi: Fraction) -> bool:
    """Does any H part meet [lo, hi]?"""
    idx = bisect_right(los, hi) - 1
    return idx >= 0 and prefmax[idx] >= lo


def _hits_open(los, prefmax, lo: Fraction, hi: Fraction) -> bool:
    """Does any H part meet the open interval (lo, hi)?  H parts are
    non-degenerate, so this is equivalent to positive-measure overlap."""
    if lo >= hi:
        return False
    idx = bisect_left(los, hi) - 1
    return idx >= 0 and prefmax[idx] > lo


def _pair_violation(los, prefmax, parts: Sequence[tuple], new: tuple) -> bool:
    """Exact pair-constraint check of a new support part against itself and
    all earlier parts: some s < t in the support with s + t in H."""
    a, b = new
    if _hits_open(los, prefmax, 2 * a, 2 * b):
        return True
    for c, d in parts:
        if _hits_closed(los, prefmax, a + c, b + d):
            return True
    return False


def _support_parts(breaks: Sequence[Fraction], levels: Sequence[int]):
    return [(lo, hi) for lo, hi, lev in zip(breaks, breaks[1:], levels) if lev]


def _enumerate_jump_members(H: Region, depth: int, vmax: int, budget: int,
                            check_cap: int = 400_000):
    """Yield (breaks, levels, variation) for {0,1} step functions with jumps
    on the depth grid, variation <= vmax, passing the pair constraint.

    Canonical order: variation ascending, start level 1 before 0, jump tuples
    lexicographic.  Support parts are checked as soon as they complete, and a
    failed completion prunes every later completion of the same run (the
    violating sum interval only grows), which keeps the scan shallow.
    """
    if budget <= 0:
        return
    los, prefmax = _overlap_tables(H)
    grid = 1 << depth
    checks = 0
    yielded = 0

    def to_break(g: int) -> Fraction:
        return Fraction(g, grid)

    # variation 0: constant 0 always passes; constant 1 fails against any
    # fat set (some doubled subinterval lands in H) and is checked honestly
    for const in (0, 1):
        parts = [(Fraction(0), Fraction(1))] if const else []
        if not parts or not _pair_violation(los, prefmax, [], parts[0]):
            yield (Fraction(0), Fraction(1)), (const,), 0
            yielded += 1
            if yielded >= budget:
                return

    for v in range(1, vmax + 1):
        for start in (1, 0):

            def dfs(jumps: list, completed: list):
                nonlocal checks, yielded
                if yielded >= budget or checks >= check_cap:
                    return
                used = len(jumps)
                level_after = start ^ (used & 1)
                if used == v:
                    final = list(completed)
                    if level_after == 1:
                        run_lo = to_break(jumps[-1]) if jumps else Fraction(0)
                        new = (run_lo, Fraction(1))
                        checks += 1
                        if _pair_violation(los, prefmax, final, new):
                            return
                        final.append(new)
                    breaks = (Fraction(0), *map(to_break, jumps), Fraction(1))
                    levels = tuple((start ^ (i & 1)) for i in range(v + 1))
                    yield_list.append((breaks, levels, v))
                    yielded += 1
                    return
                first = (jumps[-1] + 1) if jumps else 1
                for g in range(first, grid - (v - used - 1)):
                    if yielded >= budget or checks >= check_cap:
                        return
                    if level_after == 1:
                        # this jump completes the open run started earlier
                        run_lo = to_break(jumps[-1]) if jumps else Fraction(0)
                        new = (run_lo, to_break(g))
                        checks += 1
                        if _pair_violation(los, prefmax, completed, new):
                            return  # larger g only widens the run: prune
                        dfs(jumps + [g], completed + [new])
                    else:
                        dfs(jumps + [g], completed)

            yield_list: list = []
            dfs([], [])
            for item in yield_list:
                yield item
                if yielded > budget:
                    return
            if yielded >= budget or checks >= check_cap:
                return


def targeted_member(H: Region, tags: Sequence[Dyadic]):
    """Indicator of epsilon-neighborhoods of the tags, with epsilon a dyadic
    quarter of the worst exact distance from any tag sum (doubles included)
    to H.  Returns (breaks, levels) or None with no feasible margin."""
    T = sorted(tags, key=lambda d: d.as_fraction())
    if not T:
        return None
    if len(set(t.as_fraction() for t in T)) != len(T):
        return None
    worst = None
    for i in range(len(T)):
        for j in range(i, len(T)):
            d = H.distance_to_point(T[i].as_fraction() + T[j].as_fraction())
            if d == 0:
                return None
            if worst is None or d < worst:
                worst = d
    bound = worst / 4
    for i in range(len(T) - 1):
        gap = (T[i + 1] - T[i]).as_fraction() / 4
        bound = min(bound, gap)
    if T[0].as_fraction() > 0:
        bound = min(bound, T[0].as_fraction())
    bound = min(bound, 1 - T[-1].as_fraction())
    if bound <= 0:
        return None
    e = 1
    while Fraction(1, 1 << e) > bound and e < 48:
        e += 1
    eps = Dyadic(1, e)
    breaks = [D0]
    levels = []
    for t in T:
        lo, hi = t - eps, t + eps
        if lo.as_fraction() < 0:
            lo = D0
        if hi.as_fraction() > 1:
            hi = D1
        if breaks[-1] != lo:
            levels.append(Fraction(0))
            breaks.append(lo)
        levels.append(Fraction(1))
        breaks.append(hi)
    if breaks[-1] != D1:
        levels.append(Fraction(0))
        breaks.append(D1)
    return tuple(breaks), tuple(levels)


def build_A_family(
    fat: FatSet,
    l: int,
    jump_grid_depth: int = 10,
    cap: int = 64,
    targeted: Sequence[Sequence[Dyadic]] = (),
) -> FunctionFamily:
    """First cap members (canonical order) of the {0,1} jump functions with
    variation <= l passing the pair constraint against H_l, preceded by
    targeted neighborhood indicators for the supplied tag sets.

    Targeted members are exempt from the variation cap and the jump grid
    (their breakpoints are still dyadic); an infeasible tag set is recorded
    in metadata rather than raised, since the enumeration is still useful.
    """
    if l < 2:
        raise ValueError("family level must be >= 2")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    H = fat.stage(l)
    los, prefmax = _overlap_tables(H)
    steps = []
    variations = []
    failures = []
    for ti, T in enumerate(targeted):
        member = targeted_member(H, T)
        if member is None:
            failures.append({"targeted": ti, "reason": "tag sums touch H or margin collapsed"})
            continue
        breaks, levels = member
        support = _support_parts([b.as_fraction() for b in breaks], [int(v) for v in levels])
        bad = False
        done: list = []
        for part in support:
            if _pair_violation(los, prefmax, done, part):
                bad = True
                break
            done.append(part)
        if bad:
            failures.append({"targeted": ti, "reason": "constructed member failed the pair check"})
            continue
        steps.append((breaks, [Fraction(v) for v in levels]))
        variations.append(2 * len(T))
    budget = cap - len(steps)
    for breaks_q, levels, v in _enumerate_jump_members(H, jump_grid_depth, l, budget):
        breaks = tuple(Dyadic.from_fraction(b) for b in breaks_q)
        steps.append((breaks, [Fraction(x) for x in levels]))
        variations.append(v)
        if len(steps) >= cap:
            break
    fam = FunctionFamily.from_steps(steps, label=f"jump-family-level-{l}")
    fam.metadata.update(
        {
            "level": l,
            "grid_depth": jump_grid_depth,
            "variations": variations,
            "n_targeted": len(targeted) - len(failures),
            "targeted_failures": failures,
        }
    )
    return fam


# -- the sequence-valued integrand over a jump family ------------------------


def example_3e(family: FunctionFamily, R: int) -> IntegrandFn:
    """phi(t) = (f_0(t), ..., f_{R-1}(t)) in the sup-norm sequence space.

    Piecewise-step: breakpoints are the union of the member jump points, and
    every coordinate is one member function.
    """
    if family.klass != "piecewise-step":
        raise ValueError("need step members")
    if R < 1 or R > len(family.members):
        raise ValueError(f"R={R} outside 1..{len(family.members)}")
    members = family.members[:R]
    cut_set = {Fraction(0), Fraction(1)}
    for m in members:
        cut_set.update(b.as_fraction() for b in m.breaks)
    cuts = sorted(cut_set)
    space = ValueSpace.seq_sup(R)
    breaks = tuple(Dyadic.from_fraction(c) for c in cuts)
    values = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        values.append(VectorValue.coords(space, [m.eval(mid) for m in members]))
    return IntegrandFn.step(
        space, breaks, values, label=f"jump-sequence-R{R}",
        metadata={"family": family.label, "R": R},
    )


# -- the two-partition oscillation witness ------------------------------------


def _gauge_level_set(delta: Gauge, threshold: Fraction, proxy_depth: int):
    """Region where delta >= threshold: exact for const/piecewise/proximity,
    midpoint-sampled dyadic proxy for evaluator gauges (flagged)."""
    if delta.kind == "const":
        full = delta(Dyadic(1, 1)) >= threshold
        return (UNIT_REGION if full else Region.empty()), False
    if delta.kind == "piecewise":
        desc = delta.descriptor
        breaks = [Dyadic.parse(b) for b in desc["breaks"]]
        vals = [Fraction(v) for v in desc["values"]]
        parts = [
            Interval(lo, hi)
            for lo, hi, v in zip(breaks, breaks[1:], vals)
            if v >= threshold
        ]
        return Region(parts), False
    if delta.kind == "proximity":
        desc = delta.descriptor
        cap = Fraction(desc["cap"])
        if cap < threshold:
            return Region.empty(), False
        if threshold.denominator & (threshold.denominator - 1):
            return Region.empty(), False  # non-dyadic radius: give up exactly
        radius = Dyadic.from_fraction(threshold)
        out = UNIT_REGION
        for b in desc["breakpoints"]:
            bp = Dyadic.parse(b)
            lo = dyadic_max(D0, bp - radius)
            hi = dyadic_min(D1, bp + radius)
            out = region_subtract(out, Region((Interval(lo, hi),)))
        return out, False
    n = 1 << proxy_depth
    parts = []
    for i in range(n):
        mid = Dyadic(2 * i + 1, proxy_depth + 1)
        if delta(mid) >= threshold:
            parts.append(Interval(Dyadic(i, proxy_depth), Dyadic(i + 1, proxy_depth)))
    return Region(parts), True


def oscillation_witness_3e(
    fat: FatSet,
    family: FunctionFamily,
    R: int,
    delta: Gauge,
    seed: int = 0,
    proxy_depth: int = 12,
    max_attempts: int = 200,
) -> dict:
    """Two partitions subordinate to the same gauge whose Riemann sums differ
    by an exact, certified amount.

    Procedure: find the smallest power of two k >= 8 whose level set
    D = {delta >= 1/k} has (outer) measure >= 4/5; take the m width-1/k grid
    cells meeting D; search tags T (pairwise and doubled sums outside H) and
    U (pairwise sums inside H) within those cells; rebuild the family with
    the T-neighborhood indicator as coordinate 0; tag the cells with T and U
    and share one completion.  Coordinate 0 of the sum gap is then exactly
    m/k - (0 or 1/k): the pair constraint lets any member sit at 1 on at most
    one U tag, so gap >= (m-1)/k.
    """
    H = fat.top
    k = None
    level_region = None
    proxy = False
    exp = 3
    while (1 << exp) <= (1 << proxy_depth):
        cand = 1 << exp
        region, used_proxy = _gauge_level_set(delta, Fraction(1, cand), proxy_depth)
        if region.measure().as_fraction() >= Fraction(4, 5):
            k, level_region, proxy = cand, region, used_proxy
            break
        exp += 1
    if k is None:
        raise ResolutionExceeded(
            f"no k <= 2^{proxy_depth} gives the level set outer measure >= 4/5"
        )
    k_exp = exp
    cells = []
    for c in range(k):
        cell = Interval(Dyadic(c, k_exp), Dyadic(c + 1, k_exp))
        meet = region_intersect(level_region, Region((cell,)))
        if meet.measure() > D0:
            cells.append((cell, meet))
    m = len(cells)
    if m < 2:
        raise ResolutionExceeded(f"only {m} cells of width 1/{k} meet the level set")
    windows = [meet for _, meet in cells]
    tags_out = inductive_tag_sequences(H, windows, "sums-out", seed=seed,
                                       max_attempts=max_attempts)
    tags_in = inductive_tag_sequences(H, windows, "sums-in", seed=seed + 1,
                                      max_attempts=max_attempts)
    tm = targeted_member(H, tags_out)
    if tm is None:
        raise SearchExhausted("targeted member infeasible for the found tags",
                              index=0, trace=[])
    breaks, levels = tm
    members = [Member("step", "targeted[T]", breaks=breaks,
                      levels=tuple(Fraction(v) for v in levels))]
    members.extend(family.members[: R - 1])
    fam2 = FunctionFamily("piecewise-step", members, label=family.label + "+targeted")
    fam2.metadata = dict(family.metadata)
    phi = example_3e(fam2, len(members))
    t_items = [TaggedInterval(cell, t) for (cell, _), t in zip(cells, tags_out)]
    u_items = [TaggedInterval(cell, u) for (cell, _), u in zip(cells, tags_in)]
    p1 = extend_to_partition(t_items, delta, flavor=MCSHANE, seed=seed + 7)
    completion = list(p1.items[len(t_items):])
    p2 = TaggedPartition(tuple(u_items + completion), MCSHANE)
    for p in (p1, p2):
        if not is_partition(p):
            raise AssertionError("witness produced a non-partition")
        if not is_subordinate(p, delta):
            raise AssertionError("witness partition is not subordinate")
    s1 = riemann_sum(phi, p1)
    s2 = riemann_sum(phi, p2)
    gap_enc = distance(s1, s2)
    bound = Fraction(m - 1, k)
    hits = sum(1 for u in tags_in if phi.eval(u).data[0] == 1)
    return {
        "k": k,
        "m": m,
        "mu_level_set": level_region.measure().as_fraction(),
        "proxy": proxy,
        "cells": [[str(cell.lo), str(cell.hi)] for cell, _ in cells],
        "tags_out": tags_out,
        "tags_in": tags_in,
        "u_hits_on_targeted": hits,
        "gap": gap_enc.lo,
        "gap_enclosure": gap_enc,
        "bound": bound,
        "partitions": (p1, p2),
        "integrand": phi,
        "family": fam2,
        "coordinate_gap": abs(s1.data[0] - s2.data[0]),
    }


# -- indicator ramp integrand --------------------------------------------------


def example_3f(depth: int = 12) -> dict:
    """phi(t) = grid-step representation of the indicator of [0, t).

    Values are pairwise at sup distance 1 (each grid cell owns its own value),
    which is what defeats simple-function approximation; the exact integral is
    the discretized down-ramp 1 - (j+1)/2^depth on cell j, returned in closed
    form because accumulating 2^depth step merges is quadratic.
    """
    if depth < 1 or depth > 16:
        raise ValueError("depth must be in 1..16")
    space = ValueSpace.step_linf(depth)
    n = 1 << depth
    breaks = tuple(Dyadic(j, depth) for j in range(n + 1))
    values = []
    for j in range(n):
        if j == 0:
            values.append(VectorValue.step(space, (D0, D1), (Fraction(0),)))
        else:
            values.append(
                VectorValue.step(space, (D0, Dyadic(j, depth), D1),
                                 (Fraction(1), Fraction(0)))
            )
    phi = IntegrandFn.step(
        space, breaks, values, label=f"indicator-ramp-{depth}",
        metadata={
            "separation": Fraction(1),
            "separation_cell_measure": Fraction(1, n),
            "grid_depth": depth,
        },
    )
    ramp = VectorValue.step(
        space, breaks, [Fraction(n - j - 1, n) for j in range(n)]
    )
    return {"integrand": phi, "exact_integral": ramp, "grid": Fraction(1, n)}


# -- weighted unit-vector blocks ----------------------------------------------


def example_3g(R: int) -> dict:
    """phi = 2^n (n+1)^-1 e_n on [2^-(n+1), 2^-n), zero on [0, 2^-R).

    Integral coordinate n is exactly 1/(2(n+1)); the lower Darboux sums of
    ||phi|| are harmonic partial sums H_N / 2, unbounded in N while the
    integral stays in the unit ball.
    """
    if R < 1:
        raise ValueError("need R >= 1")
    space = ValueSpace.seq_l2(R)
    breaks = [D0] + [Dyadic(1, n + 1) for n in range(R - 1, -1, -1)] + [D1]
    values = [VectorValue.zero(space)]
    for n in range(R - 1, -1, -1):
        values.append(VectorValue.basis(space, n) * Fraction(1 << n, n + 1))
    breaks = tuple(breaks)
    # breaks: 0, 2^-R, ..., 1/2, 1; cell after 2^-(n+1) carries block n
    phi = IntegrandFn.step(space, breaks, tuple(values),
                           label=f"harmonic-blocks-{R}", metadata={"R": R})
    integral = exact_vector_integral(phi)
    return {
        "integrand": phi,
        "exact_integral": integral,
        "coordinates": [Fraction(1, 2 * (n + 1)) for n in range(R)],
    }


def harmonic_half(N: int) -> Fraction:
    """H_N / 2: the closed form for the N-block lower Darboux sum above."""
    return sum((Fraction(1, j) for j in range(1, N + 1)), Fraction(0)) / 2


# -- truncation sequences -------------------------------------------------------


def truncation_cover(R: int) -> list[Region]:
    """Blocks [2^-(i+1), 2^-i] plus a final [0, 2^-(R-1)]; union is [0,1]."""
    if R < 1:
        raise ValueError("need R >= 1")
    cover = [Region((Interval(Dyadic(1, i + 1), Dyadic(1, i)),)) for i in range(R - 1)]
    cover.append(Region((Interval(D0, Dyadic(1, R - 1)),)))
    return cover


def truncation_sequence(phi: IntegrandFn, cover: Sequence[Region]) -> Callable[[int], IntegrandFn]:
    """n -> phi restricted to the union of the first n+1 cover pieces.

    The full cover must union to [0,1] exactly; past each point's cover index
    the sequence value agrees with phi at that point.
    """
    total = Region(part for r in cover for part in r.parts)
    if region_subtract(UNIT_REGION, total).measure() != D0 or total.measure() != Dyadic(1, 0):
        raise ValueError("cover does not union to [0,1]")
    cache: dict[int, IntegrandFn] = {}
    prefixes: list[Region] = []
    acc = Region.empty()
    for r in cover:
        acc = Region(tuple(acc.parts) + tuple(r.parts))
        prefixes.append(acc)

    def seq(n: int) -> IntegrandFn:
        idx = min(max(n, 0), len(prefixes) - 1)
        if idx not in cache:
            cache[idx] = restrict_integrand(phi, prefixes[idx])
        return cache[idx]

    return seq
