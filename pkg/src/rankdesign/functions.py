"""Parametric monotone scalar functions.

Three roles appear throughout the library: a skill quantile on [0, 1],
a concave effort-to-score transfer on [0, inf), and a convex effort cost
on [0, inf).  All are represented by :class:`FunctionSpec` subclasses that
support evaluation, exact or bisection-based inversion, and derivatives.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, ModelError, RangeError

BISECT_REL_TOL = 1e-12
BISECT_MAX_ITER = 200


class Role(enum.Enum):
    SKILL_QUANTILE = "skill_quantile"
    EFFORT_TRANSFER = "effort_transfer"
    COST_FUNCTION = "cost_function"


@dataclass(frozen=True)
class FunctionSpec:
    """Strictly increasing scalar function from a small parametric family."""

    role: Role | None = field(default=None, kw_only=True)

    # subclasses must define: domain, evaluate, invert, derivative,
    # exact_derivative, to_json

    @property
    def domain(self) -> tuple[float, float]:
        raise NotImplementedError

    def _check_domain(self, x: float) -> None:
        lo, hi = self.domain
        if not (lo <= x <= hi):
            raise DomainError(f"x={x!r} outside domain [{lo}, {hi}] of {self!r}")

    def __call__(self, x: float) -> float:
        return self.evaluate(x)


@dataclass(frozen=True)
class Power(FunctionSpec):
    """f(x) = scale * x**exponent on [0, inf)."""

    scale: float
    exponent: float

    exact_derivative = True

    def __post_init__(self):
        if self.scale <= 0 or self.exponent <= 0:
            raise DomainError("Power requires scale > 0 and exponent > 0")
        _check_role_curvature(self)

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def evaluate(self, x: float) -> float:
        self._check_domain(x)
        return self.scale * x**self.exponent

    def invert(self, y: float) -> float:
        if y < 0.0:
            raise RangeError(f"y={y!r} below image of {self!r}")
        return (y / self.scale) ** (1.0 / self.exponent)

    def derivative(self, x: float) -> float:
        self._check_domain(x)
        if x == 0.0 and self.exponent < 1.0:
            return math.inf
        return self.scale * self.exponent * x ** (self.exponent - 1.0)

    def to_json(self) -> dict:
        return {"family": "power", "scale": self.scale, "exponent": self.exponent}


@dataclass(frozen=True)
class AffinePower(FunctionSpec):
    """f(x) = scale * x**exponent + offset on [0, inf)."""

    scale: float
    exponent: float
    offset: float

    exact_derivative = True

    def __post_init__(self):
        if self.scale <= 0 or self.exponent <= 0:
            raise DomainError("AffinePower requires scale > 0 and exponent > 0")
        _check_role_curvature(self)

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def evaluate(self, x: float) -> float:
        self._check_domain(x)
        return self.scale * x**self.exponent + self.offset

    def invert(self, y: float) -> float:
        if y < self.offset:
            raise RangeError(f"y={y!r} below image of {self!r}")
        return ((y - self.offset) / self.scale) ** (1.0 / self.exponent)

    def derivative(self, x: float) -> float:
        self._check_domain(x)
        if x == 0.0 and self.exponent < 1.0:
            return math.inf
        return self.scale * self.exponent * x ** (self.exponent - 1.0)

    def to_json(self) -> dict:
        return {
            "family": "affine_power",
            "scale": self.scale,
            "exponent": self.exponent,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class PiecewiseMonotone(FunctionSpec):
    """Linear interpolation through knots with strictly increasing y.

    Inversion is by bisection (relative tolerance 1e-12, at most 200
    iterations); derivatives are central finite differences and therefore
    approximate, with one-sided differences at the domain boundary.
    """

    knots: tuple[tuple[float, float], ...]

    exact_derivative = False

    def __post_init__(self):
        knots = tuple((float(x), float(y)) for x, y in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2:
            raise DomainError("PiecewiseMonotone needs at least two knots")
        xs = [x for x, _ in knots]
        ys = [y for _, y in knots]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("knot x values must be strictly increasing")
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise DomainError("knot y values must be strictly increasing")
        _check_role_curvature(self)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.knots[0][0], self.knots[-1][0])

    def _slopes(self) -> list[float]:
        return [
            (y1 - y0) / (x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:])
        ]

    def evaluate(self, x: float) -> float:
        self._check_domain(x)
        for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return self.knots[-1][1]

    def invert(self, y: float) -> float:
        y0 = self.knots[0][1]
        y1 = self.knots[-1][1]
        if not (y0 <= y <= y1):
            raise RangeError(f"y={y!r} outside image [{y0}, {y1}] of piecewise spec")
        lo, hi = self.domain
        for _ in range(BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            if self.evaluate(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= BISECT_REL_TOL * max(1.0, abs(hi)):
                break
        return 0.5 * (lo + hi)

    def derivative(self, x: float) -> float:
        self._check_domain(x)
        lo, hi = self.domain
        h = 1e-6 * max(1.0, abs(x))
        if x - h < lo:
            return (self.evaluate(x + h) - self.evaluate(x)) / h
        if x + h > hi:
            return (self.evaluate(x) - self.evaluate(x - h)) / h
        return (self.evaluate(x + h) - self.evaluate(x - h)) / (2.0 * h)

    def to_json(self) -> dict:
        return {"family": "piecewise_monotone", "knots": [list(k) for k in self.knots]}


def _check_role_curvature(spec: FunctionSpec) -> None:
    """Enforce concavity of transfers and convexity of costs at build time."""
    role = spec.role
    if role is None:
        return
    if isinstance(spec, (Power, AffinePower)):
        if role is Role.EFFORT_TRANSFER and spec.exponent > 1.0:
            raise ModelError("effort transfer must be concave (exponent <= 1)")
        if role is Role.COST_FUNCTION and spec.exponent <= 1.0:
            raise ModelError("cost function must be strictly convex (exponent > 1)")
    elif isinstance(spec, PiecewiseMonotone):
        slopes = spec._slopes()
        if role is Role.EFFORT_TRANSFER:
            if any(b > a + 1e-15 for a, b in zip(slopes, slopes[1:])):
                raise ModelError("effort transfer must have non-increasing slopes")
        if role is Role.COST_FUNCTION:
            if any(b <= a for a, b in zip(slopes, slopes[1:])):
                raise ModelError("cost function must have strictly increasing slopes")


# module-level operation aliases; most call sites use the methods directly


def evaluate(spec: FunctionSpec, x: float) -> float:
    return spec.evaluate(x)


def invert(spec: FunctionSpec, y: float) -> float:
    return spec.invert(y)


def derivative(spec: FunctionSpec, x: float) -> float:
    return spec.derivative(x)


_FAMILIES = {"power": Power, "affine_power": AffinePower, "piecewise_monotone": PiecewiseMonotone}


def function_from_json(obj: dict, role: Role | None = None) -> FunctionSpec:
    """Build a FunctionSpec from its JSON object form.

    Accepts {"family": "power", "scale": .., "exponent": ..} and the
    analogous forms for the other families.
    """
    if not isinstance(obj, dict) or "family" not in obj:
        raise DomainError(f"function spec must be an object with a 'family' field, got {obj!r}")
    family = obj["family"]
    if family not in _FAMILIES:
        raise DomainError(f"unknown function family {family!r}")
    if family == "power":
        return Power(obj["scale"], obj["exponent"], role=role)
    if family == "affine_power":
        return AffinePower(obj["scale"], obj["exponent"], obj["offset"], role=role)
    knots = tuple((float(x), float(y)) for x, y in obj["knots"])
    return PiecewiseMonotone(knots, role=role)


@dataclass(frozen=True)
class PopulationSpec:
    """Skill quantile f, effort transfer g, effort cost p, baseline effort e0.

    The cost is normalized so p(e0) = 0; everything downstream relies on it.
    g(e0) may be positive, in which case zero-cost effort already produces
    score and equilibrium schedules acquire within-band switch points.
    """

    f: FunctionSpec
    g: FunctionSpec
    p: FunctionSpec
    e0: float = 0.0

    def __post_init__(self):
        if self.e0 < 0:
            raise DomainError("e0 must be nonnegative")
        lo, hi = self.p.domain
        if not (lo <= self.e0 <= hi):
            raise DomainError("e0 outside the cost function domain")
        if abs(self.p.evaluate(self.e0)) > 1e-12:
            raise ModelError(f"cost normalization violated: p(e0) = {self.p.evaluate(self.e0)!r} != 0")
        for q in (0.0, 1.0):
            v = self.f.evaluate(q)
            if not math.isfinite(v):
                raise ModelError("skill quantile must be finite on [0, 1]")

    def cost_inverse(self, y: float) -> float:
        """Inverse of the cost on its increasing branch [e0, inf)."""
        if y < 0:
            raise RangeError("cost values are nonnegative")
        try:
            return self.p.invert(y)
        except RangeError as exc:
            raise ModelError(f"cost function cannot absorb a reward jump of {y!r}") from exc

    def to_json(self) -> dict:
        return {
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "p": self.p.to_json(),
            "e0": self.e0,
        }

    @staticmethod
    def from_json(obj: dict) -> "PopulationSpec":
        try:
            return PopulationSpec(
                f=function_from_json(obj["f"], Role.SKILL_QUANTILE),
                g=function_from_json(obj["g"], Role.EFFORT_TRANSFER),
                p=function_from_json(obj["p"], Role.COST_FUNCTION),
                e0=float(obj.get("e0", 0.0)),
            )
        except KeyError as exc:
            raise DomainError(f"population spec missing field {exc.args[0]!r}") from exc
