"""Exact dyadic arithmetic and finite interval unions on the line.

Everything in this module is integer arithmetic underneath: a dyadic rational
is numerator/2**exponent with a canonical form (odd numerator, or exponent 0),
an interval is a closed [lo, hi] with dyadic endpoints, and a region is a
normalized finite union of closed intervals.  Set operations on regions are
computed exactly and work modulo null sets: touching endpoints merge, and the
binary combinators never emit degenerate parts.  No floats enter any code path
here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import MalformedInterval

Rational = Union["Dyadic", Fraction, int]

_DYADIC_RE = re.compile(r"^(-?\d+)(?:/2\^(\d+))?$")
_POW_RE = re.compile(r"^2\^(-?\d+)$")
_PLAIN_FRAC_RE = re.compile(r"^(-?\d+)/(\d+)$")


class Dyadic:
    """Rational with a power-of-two denominator, kept in canonical form.

    Canonical means the numerator is odd or the exponent is 0, so equality is
    structural and serialization round-trips bit-exactly.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # -- construction ----------------------------------------------------

    @classmethod
    def from_fraction(cls, q: Rational) -> "Dyadic":
        if isinstance(q, Dyadic):
            return q
        q = Fraction(q)
        den = q.denominator
        exp = den.bit_length() - 1
        if den != 1 << exp:
            raise ValueError(f"{q} is not dyadic (denominator {den})")
        return cls(q.numerator, exp)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse "p/2^k", "p/q" with q a power of two, a bare integer, or "2^-k"."""
        text = text.strip()
        m = _POW_RE.match(text)
        if m:
            k = int(m.group(1))
            return cls(1, -k) if k < 0 else cls(1 << k, 0)
        m = _DYADIC_RE.match(text)
        if m:
            return cls(int(m.group(1)), int(m.group(2) or 0))
        m = _PLAIN_FRAC_RE.match(text)
        if m:
            return cls.from_fraction(Fraction(int(m.group(1)), int(m.group(2))))
        raise ValueError(f"not a dyadic literal: {text!r}")

    # -- representation --------------------------------------------------

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.exp})"

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    # -- arithmetic -------------------------------------------------------

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp), e

    def __add__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        if isinstance(other, int):
            return Dyadic(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __abs__(self):
        return Dyadic(abs(self.num), self.exp)

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp + 1)

    def scale_pow2(self, k: int) -> "Dyadic":
        """Multiply by 2**k (k may be negative)."""
        return Dyadic(self.num, self.exp - k)

    # -- comparisons ------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            a, b, _ = self._align(other)
            return (a > b) - (a < b)
        q = Fraction(other)
        lhs = self.num * q.denominator
        rhs = q.numerator << self.exp
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


D0 = Dyadic(0)
D1 = Dyadic(1)
D2 = Dyadic(2)


def dyadic_min(*vals: Dyadic) -> Dyadic:
    out = vals[0]
    for v in vals[1:]:
        if v < out:
            out = v
    return out


def dyadic_max(*vals: Dyadic) -> Dyadic:
    out = vals[0]
    for v in vals[1:]:
        if v > out:
            out = v
    return out


def floor_to_depth(x: Rational, depth: int) -> Dyadic:
    """Largest dyadic of exponent <= depth that is <= x."""
    q = x.as_fraction() if isinstance(x, Dyadic) else Fraction(x)
    scaled = q * (1 << depth)
    return Dyadic(scaled.numerator // scaled.denominator, depth)


class Interval:
    """Closed interval [lo, hi] with dyadic endpoints; degenerate (lo == hi) allowed."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Dyadic, hi: Dyadic):
        if not isinstance(lo, Dyadic) or not isinstance(hi, Dyadic):
            raise MalformedInterval("endpoints must be Dyadic")
        if lo > hi:
            raise MalformedInterval(f"endpoints out of order: {lo} > {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @classmethod
    def make(cls, lo, hi) -> "Interval":
        return cls(Dyadic.from_fraction(lo), Dyadic.from_fraction(hi))

    @property
    def length(self) -> Dyadic:
        return self.hi - self.lo

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).half()

    def translate(self, t: Dyadic) -> "Interval":
        return Interval(self.lo + t, self.hi + t)

    def minkowski_sum(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


class Region:
    """Normalized finite union of closed intervals.

    Parts are sorted, and parts that overlap or merely touch are merged, so two
    regions describing the same point set compare equal.  Degenerate parts are
    kept by the constructor (a caller may care about isolated points) but are
    never produced by the binary combinators, which work modulo null sets.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        merged: list[Interval] = []
        for iv in sorted(parts, key=lambda p: (p.lo.as_fraction(), p.hi.as_fraction())):
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        object.__setattr__(self, "parts", tuple(merged))

    def __setattr__(self, name, value):
        raise AttributeError("Region is immutable")

    @classmethod
    def make(cls, *pairs) -> "Region":
        return cls(Interval.make(lo, hi) for lo, hi in pairs)

    @classmethod
    def empty(cls) -> "Region":
        return cls(())

    def is_empty(self) -> bool:
        return not self.parts

    def measure(self) -> Dyadic:
        total = D0
        for iv in self.parts:
            total = total + iv.length
        return total

    def contains(self, x: Rational) -> bool:
        # binary search over sorted parts
        lo, hi = 0, len(self.parts) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            part = self.parts[mid]
            if x < part.lo:
                hi = mid - 1
            elif x > part.hi:
                lo = mid + 1
            else:
                return True
        return False

    def translate(self, t: Dyadic) -> "Region":
        return Region(iv.translate(t) for iv in self.parts)

    def scale_half(self) -> "Region":
        """Image under x -> x/2 (used for self-sum exclusions)."""
        return Region(Interval(iv.lo.half(), iv.hi.half()) for iv in self.parts)

    def bounding(self) -> Interval | None:
        if not self.parts:
            return None
        return Interval(self.parts[0].lo, self.parts[-1].hi)

    def distance_to_point(self, x: Rational) -> Fraction:
        """Exact distance from x to the region (0 if inside); inf for empty -> raises."""
        if not self.parts:
            raise ValueError("distance to empty region")
        xq = x.as_fraction() if isinstance(x, Dyadic) else Fraction(x)
        best = None
        for iv in self.parts:
            if iv.contains(xq):
                return Fraction(0)
            d = iv.lo.as_fraction() - xq if xq < iv.lo else xq - iv.hi.as_fraction()
            if best is None or d < best:
                best = d
        return best

    def __eq__(self, other):
        return isinstance(other, Region) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        inner = ", ".join(f"[{iv.lo}, {iv.hi}]" for iv in self.parts)
        return f"Region({inner})"


def region_normalize(intervals: Iterable[Interval]) -> Region:
    return Region(intervals)


def _positive_parts(region: Region) -> list[Interval]:
    return [iv for iv in region.parts if iv.lo < iv.hi]


def region_combine(a: Region, b: Region, op: str) -> Region:
    """Exact set algebra on regions, modulo null sets.

    op is one of union | intersect | subtract | symmdiff.  The result carries
    no degenerate parts: endpoint-only overlaps count as disjoint, matching the
    non-overlapping convention used for tagged partitions.
    """
    if op not in ("union", "intersect", "subtract", "symmdiff"):
        raise ValueError(f"unknown op {op!r}")
    # membership is decided against positive-length parts only: the combinators
    # work modulo null sets, so isolated points neither add nor remove anything
    pa, pb = Region(_positive_parts(a)), Region(_positive_parts(b))
    cuts = sorted(
        {iv.lo.as_fraction() for iv in pa.parts + pb.parts}
        | {iv.hi.as_fraction() for iv in pa.parts + pb.parts}
    )
    out: list[Interval] = []
    for lo_q, hi_q in zip(cuts, cuts[1:]):
        mid = (lo_q + hi_q) / 2
        in_a = pa.contains(mid)
        in_b = pb.contains(mid)
        keep = {
            "union": in_a or in_b,
            "intersect": in_a and in_b,
            "subtract": in_a and not in_b,
            "symmdiff": in_a != in_b,
        }[op]
        if keep:
            out.append(Interval(Dyadic.from_fraction(lo_q), Dyadic.from_fraction(hi_q)))
    return Region(out)


def region_union(a: Region, b: Region) -> Region:
    return region_combine(a, b, "union")


def region_intersect(a: Region, b: Region) -> Region:
    return region_combine(a, b, "intersect")


def region_subtract(a: Region, b: Region) -> Region:
    return region_combine(a, b, "subtract")


def region_complement(a: Region, ambient: Interval) -> Region:
    return region_subtract(Region((ambient,)), a)


def region_distance(a: Region, b: Region) -> Fraction:
    """Exact distance between two nonempty regions (0 if they meet)."""
    if a.is_empty() or b.is_empty():
        raise ValueError("distance to empty region")
    best = None
    for ia in a.parts:
        for ib in b.parts:
            if ia.lo <= ib.hi and ib.lo <= ia.hi:
                return Fraction(0)
            d = (ib.lo - ia.hi).as_fraction() if ia.hi < ib.lo else (ia.lo - ib.hi).as_fraction()
            if best is None or d < best:
                best = d
    return best


UNIT = Interval(D0, D1)
UNIT_REGION = Region((UNIT,))


def parse_region(text: str) -> Region:
    """Parse "a:b+c:d" with dyadic endpoint literals."""
    pairs = []
    for chunk in text.split("+"):
        lo, _, hi = chunk.partition(":")
        if not hi:
            raise ValueError(f"region part needs lo:hi, got {chunk!r}")
        pairs.append((Dyadic.parse(lo), Dyadic.parse(hi)))
    return Region(Interval(lo, hi) for lo, hi in pairs)


def format_region(region: Region) -> list[list[str]]:
    return [[str(iv.lo), str(iv.hi)] for iv in region.parts]


def parse_fraction(text: str) -> Fraction:
    """Parse a general rational: "p/q", "p/2^k", "2^-k", or an integer."""
    text = text.strip()
    m = _POW_RE.match(text)
    if m:
        k = int(m.group(1))
        return Fraction(1, 1 << -k) if k < 0 else Fraction(1 << k)
    m = _DYADIC_RE.match(text)
    if m:
        return Fraction(int(m.group(1)), 1 << int(m.group(2) or 0))
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))
