"""Gauges, tagged partitions, and the bisection search for subordinate ones.

A gauge assigns every point of [0,1] a positive width; a tagged partition is a
finite list of non-overlapping closed dyadic intervals covering [0,1], each
carrying a tag.  The partition is subordinate to the gauge when every interval
sits inside [tag - delta(tag), tag + delta(tag)].  Free-tag flavor allows tags
anywhere in [0,1]; pinned-tag flavor ("henstock") requires the tag to lie in
its own interval.  All subordination checks are exact rational comparisons
(evaluator gauges may return floats, which are still compared exactly as the
rationals they are).
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import GaugeNotPositive, MaxDepthExceeded, OverlappingItems
from .exact import D0, D1, Dyadic, Interval, Region, UNIT, region_subtract

SCHEMA = "gauge-lab/1"

MCSHANE = "mcshane"
HENSTOCK = "henstock"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Dyadic):
        return x.as_fraction()
    return Fraction(x)


class Gauge:
    """Positive width function on [0,1].

    kinds:
      const      delta(t) = value everywhere
      piecewise  constant on half-open dyadic cells [b_i, b_{i+1}), last closed
      proximity  min(cap, distance to a breakpoint set), with a positive floor
                 at each breakpoint; the classical witness gauge for step maps
      evaluator  arbitrary callable; positivity is checked at each probe
    """

    def __init__(self, kind: str, eval_fn: Callable, descriptor: dict, floor=None):
        self.kind = kind
        self._eval = eval_fn
        self.descriptor = descriptor
        self.floor = floor

    @classmethod
    def const(cls, value) -> "Gauge":
        v = _as_fraction(value)
        if v <= 0:
            raise GaugeNotPositive(f"constant gauge {v} <= 0")
        return cls("const", lambda t: v, {"kind": "const", "value": str(v)}, floor=v)

    @classmethod
    def piecewise(cls, breaks: Sequence[Dyadic], values: Sequence) -> "Gauge":
        """breaks = b_0 < ... < b_m with b_0 = 0, b_m = 1; values per cell."""
        breaks = list(breaks)
        vals = [_as_fraction(v) for v in values]
        if len(vals) != len(breaks) - 1:
            raise ValueError("need one value per cell")
        if breaks[0] != D0 or breaks[-1] != D1:
            raise ValueError("piecewise gauge must span [0,1]")
        if any(b >= c for b, c in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must increase")
        if any(v <= 0 for v in vals):
            raise GaugeNotPositive("piecewise gauge has a non-positive cell")
        cuts = [b.as_fraction() for b in breaks[1:-1]]

        def ev(t, _cuts=cuts, _vals=vals):
            tq = _as_fraction(t)
            lo, hi = 0, len(_cuts)
            while lo < hi:
                mid = (lo + hi) // 2
                if tq < _cuts[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            return _vals[lo]

        desc = {
            "kind": "piecewise",
            "breaks": [str(b) for b in breaks],
            "values": [str(v) for v in vals],
        }
        return cls("piecewise", ev, desc, floor=min(vals))

    @classmethod
    def proximity(cls, breakpoints: Sequence[Dyadic], cap, floors: Sequence) -> "Gauge":
        """delta(t) = min(cap, min_j |t - b_j|) for t off the breakpoint set,
        and delta(b_j) = floors[j] > 0 on it."""
        bps = list(breakpoints)
        capq = _as_fraction(cap)
        floorq = [_as_fraction(f) for f in floors]
        if capq <= 0 or any(f <= 0 for f in floorq):
            raise GaugeNotPositive("proximity gauge needs positive cap and floors")
        if len(floorq) != len(bps):
            raise ValueError("need one floor per breakpoint")
        order = sorted(range(len(bps)), key=lambda j: bps[j].as_fraction())
        keys = [bps[j].as_fraction() for j in order]
        ordered_floors = [floorq[j] for j in order]

        def ev(t, _keys=keys, _floors=ordered_floors, _cap=capq):
            from bisect import bisect_left

            tq = _as_fraction(t)
            i = bisect_left(_keys, tq)
            if i < len(_keys) and _keys[i] == tq:
                return _floors[i]
            best = _cap
            if i < len(_keys) and _keys[i] - tq < best:
                best = _keys[i] - tq
            if i > 0 and tq - _keys[i - 1] < best:
                best = tq - _keys[i - 1]
            return best

        desc = {
            "kind": "proximity",
            "breakpoints": [str(b) for b in bps],
            "cap": str(capq),
        }
        return cls("proximity", ev, desc, floor=None)

    @classmethod
    def evaluator(cls, fn: Callable, label: str = "evaluator", floor=None) -> "Gauge":
        return cls("evaluator", fn, {"kind": "evaluator", "label": label}, floor=floor)

    def __call__(self, t) -> Fraction:
        v = self._eval(t)
        vq = Fraction(v) if not isinstance(v, Fraction) else v
        if vq <= 0:
            raise GaugeNotPositive(f"gauge evaluated to {v} at t={t}")
        return vq


class TaggedInterval:
    __slots__ = ("interval", "tag")

    def __init__(self, interval: Interval, tag: Dyadic):
        if not (D0 <= tag <= D1):
            raise ValueError(f"tag {tag} outside [0,1]")
        self.interval = interval
        self.tag = tag

    def __eq__(self, other):
        return (
            isinstance(other, TaggedInterval)
            and self.interval == other.interval
            and self.tag == other.tag
        )

    def __repr__(self):
        return f"TaggedInterval([{self.interval.lo}, {self.interval.hi}], tag={self.tag})"


class TaggedPartition:
    """Finite list of tagged non-overlapping intervals, sorted by left endpoint."""

    def __init__(self, items: Iterable[TaggedInterval], flavor: str = MCSHANE):
        if flavor not in (MCSHANE, HENSTOCK):
            raise ValueError(f"unknown flavor {flavor!r}")
        self.items = tuple(
            sorted(items, key=lambda it: (it.interval.lo.as_fraction(), it.interval.hi.as_fraction()))
        )
        self.flavor = flavor

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def intervals_region(self) -> Region:
        return Region(it.interval for it in self.items)


def is_partition(p: TaggedPartition, base: Interval = UNIT) -> bool:
    """True iff the intervals have disjoint interiors and cover base exactly."""
    if not p.items:
        return False
    prev_hi = None
    for it in p.items:
        if prev_hi is None:
            if it.interval.lo != base.lo:
                return False
        else:
            if it.interval.lo != prev_hi:
                return False  # gap or interior overlap
        prev_hi = it.interval.hi
    return prev_hi == base.hi


def has_flavor(p: TaggedPartition) -> bool:
    if p.flavor == HENSTOCK:
        return all(it.interval.contains(it.tag) for it in p.items)
    return True


def is_subordinate(p: TaggedPartition, g: Gauge) -> bool:
    for it in p.items:
        delta = g(it.tag)
        tq = it.tag.as_fraction()
        if not (tq - delta <= it.interval.lo.as_fraction()
                and it.interval.hi.as_fraction() <= tq + delta):
            return False
    return True


def _fits(iv: Interval, tag: Dyadic, g: Gauge) -> bool:
    delta = g(tag)
    tq = tag.as_fraction()
    return tq - delta <= iv.lo.as_fraction() and iv.hi.as_fraction() <= tq + delta


def _sample_dyadic_in(iv: Interval, rng: random.Random, extra_depth: int = 10) -> Dyadic:
    """A dyadic point strictly inside iv (iv must have positive length)."""
    depth = max(iv.lo.exp, iv.hi.exp, iv.length.exp) + extra_depth
    lo_n = iv.lo.num << (depth - iv.lo.exp)
    hi_n = iv.hi.num << (depth - iv.hi.exp)
    return Dyadic(rng.randint(lo_n + 1, hi_n - 1), depth)


def cousin_partition(
    g: Gauge,
    flavor: str = MCSHANE,
    tag_strategy: str = "mid",
    max_depth: int = 40,
    seed: int = 0,
    base: Interval = UNIT,
) -> TaggedPartition:
    """Build a partition of base subordinate to g by repeated bisection.

    Each dyadic subinterval gets the strategy's tag (midpoint, left endpoint,
    or a seeded dyadic sample strictly inside); the interval is kept when the
    gauge ball at that tag swallows it and bisected otherwise.  The strategy
    never falls back to a different tag, so distinct strategies genuinely
    produce distinct Riemann sums — that is what makes oscillation between
    strategies an honest convergence signal.  Raises MaxDepthExceeded with the
    offending subinterval once the depth cap is hit, which bounds the damage a
    pathological gauge can do.
    """
    if tag_strategy not in ("mid", "left", "sampled"):
        raise ValueError(f"unknown tag strategy {tag_strategy!r}")
    items: list[TaggedInterval] = []

    def strategy_tag(iv: Interval) -> Dyadic:
        if tag_strategy == "left":
            return iv.lo
        if tag_strategy == "sampled" and iv.lo < iv.hi:
            rng = random.Random(f"{seed}|{iv.lo}|{iv.hi}")
            return _sample_dyadic_in(iv, rng)
        return iv.midpoint()

    def visit(iv: Interval, depth: int):
        tag = strategy_tag(iv)
        tag_ok = D0 <= tag <= D1 and (flavor != HENSTOCK or iv.contains(tag))
        if tag_ok and _fits(iv, tag, g):
            items.append(TaggedInterval(iv, tag))
            return
        if depth >= max_depth:
            raise MaxDepthExceeded(
                f"no fitting tag for [{iv.lo}, {iv.hi}] within depth {max_depth}",
                interval=iv,
            )
        mid = iv.midpoint()
        visit(Interval(iv.lo, mid), depth + 1)
        visit(Interval(mid, iv.hi), depth + 1)

    visit(base, 0)
    return TaggedPartition(items, flavor)


def restrict_partition(p: TaggedPartition, r: Region) -> TaggedPartition:
    """Clip every interval to r, keeping tags; subordination is preserved."""
    out = []
    for it in p.items:
        for part in r.parts:
            lo = it.interval.lo if it.interval.lo > part.lo else part.lo
            hi = it.interval.hi if it.interval.hi < part.hi else part.hi
            if lo < hi:
                out.append(TaggedInterval(Interval(lo, hi), it.tag))
    return TaggedPartition(out, p.flavor)


def extend_to_partition(
    partial: Sequence[TaggedInterval],
    g: Gauge,
    flavor: str = MCSHANE,
    tag_strategy: str = "mid",
    max_depth: int = 40,
    seed: int = 0,
) -> TaggedPartition:
    """Complete non-overlapping subordinate items to a full partition of [0,1]."""
    covered = Region(it.interval for it in partial)
    total = sum((it.interval.length for it in partial), D0)
    if covered.measure() != total:
        raise OverlappingItems("partial items overlap in positive measure")
    items = list(partial)
    for gap in region_subtract(Region((UNIT,)), covered).parts:
        filler = cousin_partition(
            g, flavor=flavor, tag_strategy=tag_strategy,
            max_depth=max_depth, seed=seed, base=gap,
        )
        items.extend(filler.items)
    return TaggedPartition(items, flavor)


# -- serialization ---------------------------------------------------------


def partition_to_json(p: TaggedPartition) -> str:
    payload = {
        "schema": SCHEMA,
        "flavor": p.flavor,
        "items": [
            {"lo": str(it.interval.lo), "hi": str(it.interval.hi), "tag": str(it.tag)}
            for it in p.items
        ],
    }
    return json.dumps(payload, sort_keys=True)


def partition_from_json(text: str) -> TaggedPartition:
    payload = json.loads(text)
    if payload.get("schema") != SCHEMA:
        raise ValueError(f"unexpected schema {payload.get('schema')!r}")
    items = [
        TaggedInterval(
            Interval(Dyadic.parse(item["lo"]), Dyadic.parse(item["hi"])),
            Dyadic.parse(item["tag"]),
        )
        for item in payload["items"]
    ]
    return TaggedPartition(items, payload["flavor"])
