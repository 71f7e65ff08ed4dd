"""Integrand functions [0,1] -> ValueSpace and their exact closed forms.

Three classes are supported.  Piecewise-step and piecewise-polynomial
integrands know their dyadic breakpoints and admit exact scalar integrals
(pairing against a dual functional) by antiderivative evaluation; the
evaluator class is an opaque callable and only the sampling-based operations
apply to it.  Piece cells are half-open [b_i, b_{i+1}) with the last cell
closed, matching step values and piecewise gauges.

The proximity ("adapted") gauge built here is the classical witness gauge for
a piecewise map: away from the breakpoints the gauge ball never crosses a
piece boundary, and each breakpoint gets a floor small enough that intervals
tagged on it contribute at most 2^-level in total.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .errors import UnsupportedExactIntegration
from .exact import D0, D1, Dyadic, Interval, Region, UNIT_REGION
from .gauges import Gauge
from .spaces import DualFunctional, ValueSpace, VectorValue

STEP, POLY, EVALUATOR = "step", "poly", "evaluator"


def poly_eval(coeffs: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def poly_integral(coeffs: Sequence[Fraction], a: Fraction, b: Fraction) -> Fraction:
    total = Fraction(0)
    pa = pb = Fraction(1)
    for k, c in enumerate(coeffs):
        pa *= a
        pb *= b
        total += c * (pb - pa) / (k + 1)
    return total


class IntegrandFn:
    """Vector-valued map on [0,1] with a declared class and value space."""

    def __init__(self, space, klass, breaks=None, values=None, polys=None,
                 fn=None, label="phi", metadata=None):
        self.space = space
        self.klass = klass
        self.breaks = tuple(breaks) if breaks is not None else None
        self.values = tuple(values) if values is not None else None
        self.polys = tuple(polys) if polys is not None else None
        self.fn = fn
        self.label = label
        self.metadata = dict(metadata or {})
        if klass in (STEP, POLY):
            if self.breaks is None or self.breaks[0] != D0 or self.breaks[-1] != D1:
                raise ValueError("piecewise integrand must span [0,1]")
            if any(b >= c for b, c in zip(self.breaks, self.breaks[1:])):
                raise ValueError("breakpoints must increase")
        if klass == STEP and len(self.values) != len(self.breaks) - 1:
            raise ValueError("one value per cell")
        if klass == POLY:
            if space.is_step:
                raise ValueError("polynomial coordinates need a coordinate space")
            if len(self.polys) != len(self.breaks) - 1:
                raise ValueError("one polynomial tuple per cell")

    # -- construction --------------------------------------------------------

    @classmethod
    def step(cls, space, breaks, values, label="phi", metadata=None) -> "IntegrandFn":
        return cls(space, STEP, breaks=breaks, values=values, label=label, metadata=metadata)

    @classmethod
    def poly(cls, space, breaks, polys, label="phi", metadata=None) -> "IntegrandFn":
        polys = tuple(tuple(tuple(Fraction(c) for c in coeffs) for coeffs in cell) for cell in polys)
        return cls(space, POLY, breaks=breaks, polys=polys, label=label, metadata=metadata)

    @classmethod
    def evaluator(cls, space, fn: Callable, label="phi", metadata=None) -> "IntegrandFn":
        return cls(space, EVALUATOR, fn=fn, label=label, metadata=metadata)

    # -- evaluation ------------------------------------------------------------

    def _cell_index(self, tq: Fraction) -> int:
        lo, hi = 0, len(self.breaks) - 2
        while lo < hi:
            mid = (lo + hi) // 2
            if tq < self.breaks[mid + 1].as_fraction():
                hi = mid
            else:
                lo = mid + 1
        return lo

    def eval(self, t) -> VectorValue:
        tq = t.as_fraction() if isinstance(t, Dyadic) else Fraction(t)
        if not 0 <= tq <= 1:
            raise ValueError(f"t={tq} outside [0,1]")
        if self.klass == STEP:
            return self.values[self._cell_index(tq)]
        if self.klass == POLY:
            cell = self.polys[self._cell_index(tq)]
            return VectorValue.coords(self.space, [poly_eval(c, tq) for c in cell])
        return self.fn(tq)

    __call__ = eval

    # -- bounds -------------------------------------------------------------

    def sup_norm_bound(self) -> Fraction | None:
        """Certified upper bound for sup‖phi‖, None for evaluator class."""
        if self.klass == STEP:
            return max((v.norm().hi for v in self.values), default=Fraction(0))
        if self.klass == POLY:
            best = Fraction(0)
            for cell in self.polys:
                bound = sum(
                    (sum((abs(c) for c in coeffs), Fraction(0)) for coeffs in cell),
                    Fraction(0),
                )
                best = max(best, bound)
            return best
        return None

    def lipschitz_bound(self) -> Fraction:
        """Upper bound for the within-piece variation rate (0 for step)."""
        if self.klass == STEP:
            return Fraction(0)
        if self.klass == POLY:
            best = Fraction(0)
            for cell in self.polys:
                bound = sum(
                    (sum((Fraction(k) * abs(c) for k, c in enumerate(coeffs)), Fraction(0))
                     for coeffs in cell),
                    Fraction(0),
                )
                best = max(best, bound)
            return best
        raise UnsupportedExactIntegration("no variation bound for evaluator integrands")

    def norm_lower_on(self, iv: Interval, samples: int = 3) -> Fraction:
        """Certified lower bound of inf over iv of ‖phi‖ for piecewise classes
        (the interval must not straddle a breakpoint); sampled surrogate for
        evaluator class (an upper bound of the inf, documented)."""
        if self.klass == STEP:
            return self.values[self._cell_index(iv.midpoint().as_fraction())].norm().lo
        if self.klass == POLY:
            pts = [iv.lo, iv.midpoint(), iv.hi]
            vals = [self.eval(p).norm().lo for p in pts]
            slack = self.lipschitz_bound() * iv.length.as_fraction()
            return max(Fraction(0), min(vals) - slack)
        pts = [iv.lo.as_fraction() + Fraction(2 * i + 1, 2 * samples) * iv.length.as_fraction()
               for i in range(samples)]
        return min(self.eval(p).norm().lo for p in pts)


def restrict_integrand(phi: IntegrandFn, region: Region) -> IntegrandFn:
    """phi * indicator(region), staying in the same class when piecewise."""
    label = f"{phi.label}|restricted"
    if phi.klass == EVALUATOR:
        def fn(t, _phi=phi, _r=region):
            return _phi.eval(t) if _r.contains(t) else VectorValue.zero(_phi.space)
        return IntegrandFn.evaluator(phi.space, fn, label=label, metadata=phi.metadata)

    cuts = sorted(
        {b.as_fraction() for b in phi.breaks}
        | {iv.lo.as_fraction() for iv in region.parts if D0 <= iv.lo <= D1}
        | {iv.hi.as_fraction() for iv in region.parts if D0 <= iv.hi <= D1}
    )
    breaks = [Dyadic.from_fraction(c) for c in cuts]
    zero = VectorValue.zero(phi.space)
    if phi.klass == STEP:
        vals = []
        for lo, hi in zip(breaks, breaks[1:]):
            mid = (lo.as_fraction() + hi.as_fraction()) / 2
            vals.append(phi.values[phi._cell_index(mid)] if region.contains(mid) else zero)
        return IntegrandFn.step(phi.space, breaks, vals, label=label, metadata=phi.metadata)
    zero_cell = tuple((Fraction(0),) for _ in range(phi.space.dim))
    polys = []
    for lo, hi in zip(breaks, breaks[1:]):
        mid = (lo.as_fraction() + hi.as_fraction()) / 2
        polys.append(phi.polys[phi._cell_index(mid)] if region.contains(mid) else zero_cell)
    return IntegrandFn.poly(phi.space, breaks, polys, label=label, metadata=phi.metadata)


def scalar_integral(f: DualFunctional, phi: IntegrandFn, region: Region = UNIT_REGION) -> Fraction:
    """Exact integral of f(phi(t)) over the region, closed form per cell."""
    if phi.klass == EVALUATOR:
        raise UnsupportedExactIntegration(f"{phi.label} has no closed form")
    total = Fraction(0)
    if phi.klass == STEP:
        for lo, hi, val in zip(phi.breaks, phi.breaks[1:], phi.values):
            paired = None
            for part in region.parts:
                a = lo if lo > part.lo else part.lo
                b = hi if hi < part.hi else part.hi
                if a < b:
                    if paired is None:
                        paired = f(val)
                    total += paired * (b - a).as_fraction()
        return total
    weights = [f(VectorValue.basis(phi.space, c)) for c in range(phi.space.dim)]
    for lo, hi, cell in zip(phi.breaks, phi.breaks[1:], phi.polys):
        # f(phi(t)) is the weight-combination of coordinate polynomials
        coeffs = [Fraction(0)] * max(len(c) for c in cell)
        for w, c in zip(weights, cell):
            for k, ck in enumerate(c):
                coeffs[k] += w * ck
        for part in region.parts:
            a = lo.as_fraction() if lo > part.lo else part.lo.as_fraction()
            b = hi.as_fraction() if hi < part.hi else part.hi.as_fraction()
            if a < b:
                total += poly_integral(coeffs, a, b)
    return total


def exact_vector_integral(phi: IntegrandFn, region: Region = UNIT_REGION) -> VectorValue:
    """Coordinate-wise closed form; the independent oracle for gauge sums.

    Supported for piecewise classes only.  Step values integrate to
    sum(len * value); polynomial cells integrate coordinate-wise.
    """
    if phi.klass == STEP:
        acc = VectorValue.zero(phi.space)
        for lo, hi, val in zip(phi.breaks, phi.breaks[1:], phi.values):
            for part in region.parts:
                a = lo if lo > part.lo else part.lo
                b = hi if hi < part.hi else part.hi
                if a < b:
                    acc = acc + val * (b - a).as_fraction()
        return acc
    if phi.klass == POLY:
        coords = [Fraction(0)] * phi.space.dim
        for lo, hi, cell in zip(phi.breaks, phi.breaks[1:], phi.polys):
            for part in region.parts:
                a = lo.as_fraction() if lo > part.lo else part.lo.as_fraction()
                b = hi.as_fraction() if hi < part.hi else part.hi.as_fraction()
                if a < b:
                    for c, coeffs in enumerate(cell):
                        coords[c] += poly_integral(coeffs, a, b)
        return VectorValue.coords(phi.space, coords)
    raise UnsupportedExactIntegration(f"{phi.label} has no closed form")


def adapted_gauge(phi: IntegrandFn, level: int) -> Gauge:
    """Witness gauge at a refinement level for a piecewise integrand.

    delta(t) = min(2^-level, distance to the breakpoint set) off the
    breakpoints; every breakpoint gets the uniform floor
    2^-level / (4 * n_breaks * ceil(1+M)) with M a sup-norm bound, so all
    breakpoint-tagged intervals together contribute < 2^-level and bisection
    depth stays within level + log2(n_breaks * M) + constant.
    """
    if phi.klass == EVALUATOR:
        raise UnsupportedExactIntegration("adapted gauges need piecewise structure")
    m_bound = phi.sup_norm_bound()
    scale = int(m_bound) + 2  # >= ceil(1+M)
    cap = Fraction(1, 1 << level)
    floor = cap / (4 * len(phi.breaks) * scale)
    return Gauge.proximity(phi.breaks, cap, [floor] * len(phi.breaks))


# -- stock integrands --------------------------------------------------------


def identity_integrand() -> IntegrandFn:
    """phi(t) = t in one Euclidean coordinate; integral 1/2."""
    space = ValueSpace.findim(1, "l2")
    return IntegrandFn.poly(space, [D0, D1], [((Fraction(0), Fraction(1)),)], label="identity")


def poly_integrand(coeff_lists, norm="l2", label="poly") -> IntegrandFn:
    """Single-cell polynomial coordinates on [0,1]."""
    space = ValueSpace.findim(len(coeff_lists), norm)
    cell = tuple(tuple(Fraction(c) for c in coeffs) for coeffs in coeff_lists)
    return IntegrandFn.poly(space, [D0, D1], [cell], label=label)


def dyadic_indicator(depth: int) -> IntegrandFn:
    """1 on dyadic grid points of exponent <= depth, 0 elsewhere (evaluator).

    Riemann sums over this map swing between 0 and 1 depending on whether tags
    land on the grid, so constant-gauge schedules show oscillation 1 at level 0
    that shrinks as the uniform cells outgrow the grid.
    """
    space = ValueSpace.findim(1, "l2")

    def fn(tq: Fraction, _d=depth, _sp=space):
        den = tq.denominator
        on_grid = den & (den - 1) == 0 and den <= (1 << _d)
        return VectorValue.coords(_sp, [1 if on_grid else 0])

    return IntegrandFn.evaluator(space, fn, label=f"dyadic-indicator-{depth}")
