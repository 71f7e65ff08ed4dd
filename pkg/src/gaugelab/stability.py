"""Separation-set measure estimation for finite function families.

For a family A of maps [0,1] -> R, a region E, counts m, n and thresholds
alpha < beta, the separation set Z(A,E,m,n,alpha,beta) collects the tuples
(t_1..t_m, u_1..u_n) in E^(m+n) for which some member sits at or below alpha
on every t and at or above beta on every u.  A family is small in the relevant
sense exactly when some (m,n) makes Z measurably smaller than the full cube
(mu E)^(m+n); the scan below hunts for such a witness with seeded Monte Carlo,
reporting "inconclusive" whenever the estimate sits within the confidence
margin of the threshold rather than resolving boundary cases.

Everything the samples feed is float64, but every verdict is computed from the
integer hit count with exact rational arithmetic, so reports are reproducible
bit for bit across backends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .exact import Dyadic, Interval, Region, UNIT_REGION, format_region, region_intersect
from .integrands import EVALUATOR, POLY, STEP, IntegrandFn
from .rng import stream
from .spaces import DualFunctional, VectorValue, sqrt_enclosure

# 95% two-sided normal quantile, as the rational the reports use
_Z95 = Fraction(196, 100)


@dataclass
class Member:
    kind: str  # "step" | "eval"
    member_id: str
    breaks: tuple = ()  # step: dyadic breakpoints spanning [0,1]
    levels: tuple = ()  # step: one rational level per half-open cell
    fn: Callable | None = None  # eval: exact rational evaluation
    fn_np: Callable | None = None  # eval: vectorized float evaluation

    def eval(self, t) -> Fraction:
        if self.kind == "step":
            tq = Fraction(t) if not hasattr(t, "as_fraction") else t.as_fraction()
            lo, hi = 0, len(self.levels) - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if tq < self.breaks[mid + 1].as_fraction():
                    hi = mid
                else:
                    lo = mid + 1
            return self.levels[lo]
        return Fraction(self.fn(t))


class FunctionFamily:
    """Finite family of evaluable maps [0,1] -> R, or the pair-sum class.

    klass "piecewise-step" members evaluate by breakpoint lookup and feed the
    jitted sampling kernel; "evaluator" members carry an exact callable plus a
    vectorized float twin.  klass "pairsum" is not a finite list: it stands for
    every {0,1}-valued function subject to the constraint that no two distinct
    points summing into the region H may both take the value 1.  Its
    separation predicate is evaluated in closed form, which is what lets the
    scan compare against the exact plane-measure bound.
    """

    def __init__(self, klass: str, members: Sequence[Member] = (), h: Region | None = None,
                 label: str = "family", metadata: dict | None = None):
        if klass not in ("piecewise-step", "evaluator", "pairsum"):
            raise ValueError(f"unknown family class {klass!r}")
        if klass == "pairsum" and h is None:
            raise ValueError("pairsum family needs the avoid region H")
        self.klass = klass
        self.members = list(members)
        self.h = h
        self.label = label
        self.metadata = dict(metadata or {})

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_steps(cls, steps: Sequence[tuple], label: str = "steps") -> "FunctionFamily":
        members = [
            Member("step", f"{label}[{i}]", breaks=tuple(b), levels=tuple(Fraction(v) for v in lv))
            for i, (b, lv) in enumerate(steps)
        ]
        return cls("piecewise-step", members, label=label)

    @classmethod
    def from_callables(cls, fns: Sequence[tuple], label: str = "fns") -> "FunctionFamily":
        """fns: (exact_fn, vector_fn) pairs."""
        members = [
            Member("eval", f"{label}[{i}]", fn=fn, fn_np=fn_np)
            for i, (fn, fn_np) in enumerate(fns)
        ]
        return cls("evaluator", members, label=label)

    @classmethod
    def from_point_sets(cls, point_sets: Sequence[Sequence[Fraction]],
                        label: str = "atoms") -> "FunctionFamily":
        """Indicators of finite point sets (each member is 1 exactly there)."""
        members = []
        for i, pts in enumerate(point_sets):
            pts = tuple(Fraction(p) if not hasattr(p, "as_fraction") else p.as_fraction()
                        for p in pts)

            def fn(t, _pts=pts):
                tq = Fraction(t) if not hasattr(t, "as_fraction") else t.as_fraction()
                return Fraction(1) if tq in _pts else Fraction(0)

            def fn_np(xs, _pts=pts):
                out = np.zeros_like(xs)
                for p in _pts:
                    out[xs == float(p)] = 1.0
                return out

            members.append(Member("eval", f"{label}[{i}]", fn=fn, fn_np=fn_np))
        fam = cls("evaluator", members, label=label)
        fam.metadata["point_sets"] = [tuple(str(p) for p in pts) for pts in point_sets]
        return fam

    @classmethod
    def pairsum(cls, h: Region, label: str = "pairsum") -> "FunctionFamily":
        return cls("pairsum", h=h, label=label)

    @classmethod
    def empty(cls, label: str = "empty") -> "FunctionFamily":
        return cls("piecewise-step", (), label=label)

    def __len__(self):
        return len(self.members)

    def describe(self) -> dict:
        out = {"class": self.klass, "label": self.label, "size": len(self.members)}
        if self.klass == "pairsum":
            out["h"] = format_region(self.h)
        return out


def family_from_integrand(phi: IntegrandFn, functionals: Sequence[DualFunctional],
                          label: str | None = None) -> FunctionFamily:
    """The scalar trace {f o phi : f in functionals} as a FunctionFamily.

    Step integrands produce a piecewise-step family (kernel path); other
    classes produce evaluator members with a vectorized float twin.
    """
    label = label or f"trace({phi.label})"
    if phi.klass == STEP:
        steps = [(phi.breaks, tuple(f(v) for v in phi.values)) for f in functionals]
        return FunctionFamily.from_steps(steps, label=label)
    fns = []
    for f in functionals:
        def fn(t, _f=f, _phi=phi):
            return _f(_phi.eval(t))

        if phi.klass == POLY:
            weights = [f(VectorValue.basis(phi.space, c)) for c in range(phi.space.dim)]
            cells = []
            for cell in phi.polys:
                coeffs = [Fraction(0)] * max(len(c) for c in cell)
                for w, c in zip(weights, cell):
                    for k, ck in enumerate(c):
                        coeffs[k] += w * ck
                cells.append([float(c) for c in coeffs])
            cuts = np.array([float(b) for b in phi.breaks[1:-1]])

            def fn_np(xs, _cuts=cuts, _cells=cells):
                idx = np.searchsorted(_cuts, xs, side="right")
                out = np.zeros_like(xs)
                for ci, coeffs in enumerate(_cells):
                    mask = idx == ci
                    if not mask.any():
                        continue
                    acc = np.zeros(int(mask.sum()))
                    for ck in reversed(coeffs):
                        acc = acc * xs[mask] + ck
                    out[mask] = acc
                return out
        else:
            def fn_np(xs, _fn=fn):
                return np.array([float(_fn(Fraction(float(x)))) for x in xs])

        fns.append((fn, fn_np))
    return FunctionFamily.from_callables(fns, label=label)


@dataclass
class ZQuery:
    region: Region
    m: int
    n: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        self.alpha = Fraction(self.alpha)
        self.beta = Fraction(self.beta)
        if self.alpha >= self.beta:
            raise ValueError("alpha must be < beta")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        if self.region.measure().as_fraction() <= 0:
            raise ValueError("region must have positive measure")

    @property
    def threshold(self) -> Fraction:
        return self.region.measure().as_fraction() ** (self.m + self.n)


def z_member(A: FunctionFamily, ts: Sequence, us: Sequence,
             alpha, beta) -> bool:
    """Exact membership: does some member of A separate the tuple?"""
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if alpha >= beta:
        raise ValueError("alpha must be < beta")
    tq = [Fraction(t) if not hasattr(t, "as_fraction") else t.as_fraction() for t in ts]
    uq = [Fraction(u) if not hasattr(u, "as_fraction") else u.as_fraction() for u in us]
    if A.klass == "pairsum":
        # feasible iff setting f=1 exactly on the u's breaks no constraint;
        # needs 0 <= alpha < 1 <= ... i.e. thresholds that pin f to {0,1}
        if not (0 <= alpha < 1 and 0 < beta <= 1):
            raise ValueError("pairsum membership defined for 0 <= alpha < 1, 0 < beta <= 1")
        for i in range(len(uq)):
            for j in range(i + 1, len(uq)):
                if uq[i] != uq[j] and A.h.contains(uq[i] + uq[j]):
                    return False
        return all(t not in uq for t in tq)
    for member in A.members:
        if all(member.eval(t) <= alpha for t in tq) and all(member.eval(u) >= beta for u in uq):
            return True
    return False


def _region_arrays(region: Region):
    lengths = np.array([float(p.length) for p in region.parts])
    cum = np.cumsum(lengths)
    los = np.array([float(p.lo) for p in region.parts])
    return cum, los


def _draw_points(region: Region, samples: int, cols: int, seed: int) -> np.ndarray:
    raw = stream(seed, 11).random((samples, cols))
    cum, los = _region_arrays(region)
    return _kernels.map_unit_to_region(raw.ravel(), cum, los).reshape(samples, cols)


def _count_hits(A: FunctionFamily, t_pts: np.ndarray, u_pts: np.ndarray,
                alpha: Fraction, beta: Fraction) -> int:
    if A.klass == "pairsum":
        h_lo = np.array([float(p.lo) for p in A.h.parts])
        h_hi = np.array([float(p.hi) for p in A.h.parts])
        return _kernels.pairsum_family_hits(t_pts, u_pts, h_lo, h_hi)
    if not A.members:
        return 0
    if A.klass == "piecewise-step":
        cuts_chunks, vals_chunks = [], []
        for member in A.members:
            cuts_chunks.append(np.array([float(b) for b in member.breaks[1:-1]]))
            vals_chunks.append(np.array([float(v) for v in member.levels]))
        cuts_off = np.cumsum([0] + [len(c) for c in cuts_chunks]).astype(np.int64)
        vals_off = np.cumsum([0] + [len(v) for v in vals_chunks]).astype(np.int64)
        cuts_flat = np.concatenate(cuts_chunks) if cuts_chunks else np.zeros(0)
        vals_flat = np.concatenate(vals_chunks)
        return _kernels.step_family_hits(
            t_pts, u_pts, cuts_flat, cuts_off, vals_flat, vals_off,
            float(alpha), float(beta),
        )
    hit = np.zeros(t_pts.shape[0], dtype=bool)
    af, bf = float(alpha), float(beta)
    for member in A.members:
        tv = np.column_stack([member.fn_np(t_pts[:, i]) for i in range(t_pts.shape[1])])
        uv = np.column_stack([member.fn_np(u_pts[:, j]) for j in range(u_pts.shape[1])])
        hit |= np.all(tv <= af, axis=1) & np.all(uv >= bf, axis=1)
    return int(np.count_nonzero(hit))


def z_measure_mc(A: FunctionFamily, q: ZQuery, samples: int = 100_000,
                 seed: int = 0) -> dict:
    """Seeded Monte Carlo estimate of mu(Z) with a 95% confidence half-width.

    Draws (t,u) tuples uniformly from E^(m+n) via the inverse-CDF map; the
    estimate is the hit fraction scaled by (mu E)^(m+n).  The half-width is a
    normal-approximation interval with continuity correction, computed as an
    exact rational upper bound.  comparison is "strictly-below" only when
    estimate + half_width clears the threshold; boundary cases are
    "inconclusive" by design.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    pts = _draw_points(q.region, samples, q.m + q.n, seed)
    t_pts = np.ascontiguousarray(pts[:, :q.m])
    u_pts = np.ascontiguousarray(pts[:, q.m:])
    hits = _count_hits(A, t_pts, u_pts, q.alpha, q.beta)
    p_hat = Fraction(hits, samples)
    threshold = q.threshold
    se = sqrt_enclosure(p_hat * (1 - p_hat) / samples).hi
    half_width = (_Z95 * se + Fraction(1, 2 * samples)) * threshold
    estimate = p_hat * threshold
    if estimate + half_width < threshold:
        comparison = "strictly-below"
    elif estimate - half_width > threshold:
        comparison = "above-threshold"  # cannot happen for true Z sets; flags bad input
    else:
        comparison = "inconclusive"
    return {
        "family": A.label,
        "m": q.m,
        "n": q.n,
        "alpha": q.alpha,
        "beta": q.beta,
        "samples": samples,
        "seed": seed,
        "hits": hits,
        "estimate": estimate,
        "half_width": half_width,
        "threshold": threshold,
        "comparison": comparison,
    }


def stability_scan(A: FunctionFamily, E_list: Sequence[Region],
                   ab_list: Sequence[tuple], mn_max: int = 3,
                   samples: int = 20_000, seed: int = 0,
                   margin: Fraction = Fraction(1, 100)) -> dict:
    """Search (m,n) with m,n <= mn_max for a certified-strict witness.

    A witness is recorded when estimate + half_width + margin*threshold falls
    below (mu E)^(m+n); cells inside the margin stay "inconclusive" and the
    scan moves on.  Scanning order is by total m+n, then by m, so the first
    witness is the combinatorially cheapest one.
    """
    margin = Fraction(margin)
    if margin <= 0:
        raise ValueError("margin must be > 0")
    rows = []
    run = 0
    for E in E_list:
        for alpha, beta in ab_list:
            cells = []
            witness = None
            for total in range(2, 2 * mn_max + 1):
                for m in range(max(1, total - mn_max), min(mn_max, total - 1) + 1):
                    n = total - m
                    q = ZQuery(E, m, n, Fraction(alpha), Fraction(beta))
                    res = z_measure_mc(A, q, samples=samples, seed=seed + 7919 * run)
                    run += 1
                    certified = res["estimate"] + res["half_width"] + margin * res["threshold"] < res["threshold"]
                    cells.append({**res, "witness": certified})
                    if certified and witness is None:
                        witness = {"m": m, "n": n}
                if witness:
                    break
            rows.append(
                {
                    "region": format_region(E),
                    "alpha": Fraction(alpha),
                    "beta": Fraction(beta),
                    "witness": witness,
                    "cells": cells,
                }
            )
    return {"family": A.describe(), "mn_max": mn_max, "margin": margin, "rows": rows}


def exact_z_measure(A: FunctionFamily, E: Region, m: int, n: int,
                    alpha, beta, max_members: int = 16) -> Fraction:
    """Exact mu(Z) for finite families, by inclusion-exclusion over members.

    Z is the union over members f of A_f^m x B_f^n with A_f = {t in E: f(t) <=
    alpha} and B_f = {u in E: f(u) >= beta}; intersections of such products
    factor coordinate-wise, so the alternating sum is exact.  Only feasible
    for piecewise-step members and modest family sizes (2^size terms, pruned
    when a partial intersection is already null).
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if A.klass != "piecewise-step":
        raise ValueError("exact measure needs piecewise-step members")
    if len(A.members) > max_members:
        raise ValueError(f"family too large for inclusion-exclusion ({len(A.members)})")
    caps = []
    for member in A.members:
        a_parts, b_parts = [], []
        for lo, hi, level in zip(member.breaks, member.breaks[1:], member.levels):
            if level <= alpha:
                a_parts.append(Interval(lo, hi))
            if level >= beta:
                b_parts.append(Interval(lo, hi))
        caps.append((region_intersect(Region(a_parts), E),
                     region_intersect(Region(b_parts), E)))

    total = Fraction(0)

    def rec(i: int, cur_a: Region | None, cur_b: Region | None, size: int):
        nonlocal total
        if i == len(caps):
            if size:
                mu_a = cur_a.measure().as_fraction()
                mu_b = cur_b.measure().as_fraction()
                sign = 1 if size % 2 else -1
                total += sign * mu_a**m * mu_b**n
            return
        rec(i + 1, cur_a, cur_b, size)  # skip member i
        a, b = caps[i]
        na = a if cur_a is None else region_intersect(cur_a, a)
        nb = b if cur_b is None else region_intersect(cur_b, b)
        # a null factor zeroes this term and every deeper superset term
        if (m >= 1 and na.measure().as_fraction() == 0) or (
            n >= 1 and nb.measure().as_fraction() == 0
        ):
            return
        rec(i + 1, na, nb, size + 1)

    rec(0, None, None, 0)
    return total


def _corner(s: Fraction) -> Fraction:
    return s * s / 2 if s > 0 else Fraction(0)


def pairsum_z_bound(H: Region, E: Region) -> Fraction:
    """Exact plane measure of {(u0,u1) in E^2 : u0+u1 in H}.

    Decomposed over part rectangles: the sub-level area {x+y <= s} of a
    rectangle is an alternating sum of corner triangles s^2/2, so each
    (E-part, E-part, H-part) triple contributes a difference of two such
    alternating sums.  Supports the three-point bound
    mu_3 Z <= mu E ((mu E)^2 - gamma).
    """
    gamma = Fraction(0)
    for p in E.parts:
        for q in E.parts:
            a1, b1 = p.lo.as_fraction(), p.hi.as_fraction()
            a2, b2 = q.lo.as_fraction(), q.hi.as_fraction()

            def below(s: Fraction) -> Fraction:
                return (
                    _corner(s - a1 - a2)
                    - _corner(s - b1 - a2)
                    - _corner(s - a1 - b2)
                    + _corner(s - b1 - b2)
                )

            for h in H.parts:
                gamma += below(h.hi.as_fraction()) - below(h.lo.as_fraction())
    return gamma


def pairsum_expected_z(H: Region, E: Region, m: int = 1) -> Fraction:
    """Closed-form mu(Z) for the pair-sum class at (m, 2): mu E^m (mu E^2 - gamma)."""
    mu = E.measure().as_fraction()
    return mu**m * (mu * mu - pairsum_z_bound(H, E))


def properly_measurable_probe(phi: IntegrandFn, functionals: Sequence[DualFunctional],
                              E_list: Sequence[Region] | None = None,
                              ab_list: Sequence[tuple] | None = None,
                              mn_max: int = 2, samples: int = 20_000,
                              seed: int = 0,
                              margin: Fraction = Fraction(1, 100)) -> dict:
    """Finite-sample smallness probe of the scalar trace {f o phi}.

    Runs the witness scan on the composed family.  The verdict is explicitly a
    probe over the supplied functionals and sampled cells, not a proof about
    the full dual ball.
    """
    family = family_from_integrand(phi, functionals)
    if E_list is None:
        quarters = [
            Region((Interval(Dyadic(i, 2), Dyadic(i + 1, 2)),)) for i in range(4)
        ]
        E_list = [UNIT_REGION] + quarters
    if ab_list is None:
        ab_list = [(Fraction(1, 4), Fraction(3, 4))]
    scan = stability_scan(family, E_list, ab_list, mn_max=mn_max,
                          samples=samples, seed=seed, margin=margin)
    scan["probe"] = True
    scan["note"] = (
        "finite-sample probe over the supplied functionals and cells; "
        "not a proof about the full dual ball"
    )
    return scan
