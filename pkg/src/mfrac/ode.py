"""First-order ODE solvers for the kernel derivative.

The linear constant-coefficient equation D v +/- mu^2 v = 0 has the closed
form v(t) = c * exp(-/+ Gamma(beta+1) * mu^2 * t^alpha / alpha); note the
exponent sign is opposite the sign of the mu^2 term, which is what
substituting the closed-form derivative forces (a plus-signed term decays).

A general D v = g(t, v) reduces through the closed form to the classical
equation v' = Gamma(beta+1) * t^(alpha-1) * g(t, v), integrated here with the
classical fourth-order Runge-Kutta scheme and cubic Hermite dense output.
The t^(alpha-1) factor is singular at 0, so integration must start at t0 > 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError, ValidationError
from .expr import DualNumber
from .fracderiv import DualFn, FracParams, RealFn, deriv_closed
from .special import gamma

__all__ = [
    "LinearOdeProblem",
    "OdeSolution",
    "TermSign",
    "solve_general",
    "solve_linear",
    "verify_linear",
]


class TermSign(enum.Enum):
    """Sign of the mu^2 v term in D v +/- mu^2 v = 0."""

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class LinearOdeProblem:
    """D v +/- mu^2 v = 0 with v(0+) = c."""

    mu_sq: float
    sign: TermSign
    c: float
    p: FracParams

    def __post_init__(self):
        if not isinstance(self.sign, TermSign):
            raise ValidationError(f"sign must be a TermSign, got {self.sign!r}")
        if not isinstance(self.mu_sq, (int, float)) or not math.isfinite(self.mu_sq):
            raise ValidationError(f"mu_sq must be a finite real, got {self.mu_sq!r}")
        if self.mu_sq <= 0.0:
            raise ValidationError(f"mu_sq must be positive, got {self.mu_sq}")
        if not isinstance(self.c, (int, float)) or not math.isfinite(self.c):
            raise ValidationError(f"c must be a finite real, got {self.c!r}")
        if not 0.0 < self.p.alpha <= 1.0:
            raise ValidationError(f"alpha must lie in (0, 1], got {self.p.alpha}")


@dataclass(frozen=True)
class OdeSolution:
    """Solution evaluator with its derivative-carrying twin.

    ``description`` holds the closed form when one exists, None for sampled
    solutions.
    """

    evaluator: RealFn
    dual_evaluator: DualFn
    description: str | None = None

    def __call__(self, t: float) -> float:
        return self.evaluator(t)


def solve_linear(prob: LinearOdeProblem) -> OdeSolution:
    """Closed-form solution of D v +/- mu^2 v = 0.

    A plus-signed term yields decay, a minus-signed term growth.
    """
    scale = gamma(prob.p.beta + 1.0)
    coeff = -scale * prob.mu_sq / prob.p.alpha
    if prob.sign is TermSign.MINUS:
        coeff = -coeff
    alpha = prob.p.alpha
    c = prob.c

    def value(t: float) -> float:
        _check_time(t)
        return c * math.exp(coeff * t**alpha)

    def dual(t: float) -> DualNumber:
        _check_time(t)
        v = c * math.exp(coeff * t**alpha)
        return DualNumber(v, v * coeff * alpha * t ** (alpha - 1.0))

    description = f"v(t) = {c!r} * exp({coeff!r} * t^{alpha!r})"
    return OdeSolution(value, dual, description)


def verify_linear(sol: OdeSolution, prob: LinearOdeProblem, ts) -> float:
    """Largest residual |D v +/- mu^2 v| over the sample times."""
    sgn = 1.0 if prob.sign is TermSign.PLUS else -1.0
    worst = 0.0
    for t in ts:
        residual = abs(
            deriv_closed(sol.dual_evaluator, prob.p, t) + sgn * prob.mu_sq * sol.evaluator(t)
        )
        worst = max(worst, residual)
    return worst


def _check_time(t: float):
    if not isinstance(t, (int, float)) or not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"the solution is defined for t > 0, got {t!r}")


def solve_general(
    g: Callable[[float, float], float],
    t0: float,
    v0: float,
    t1: float,
    p: FracParams,
    steps: int,
) -> OdeSolution:
    """Integrate D v = g(t, v) from (t0, v0) to t1 on a uniform grid.

    Classical RK4 on the transformed equation, returning a piecewise-cubic
    Hermite evaluator valid on [t0, t1].
    """
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 4:
        raise ValidationError(f"steps must be an integer >= 4, got {steps!r}")
    if not 0.0 < p.alpha <= 1.0:
        raise ValidationError(f"alpha must lie in (0, 1], got {p.alpha}")
    for name, v in (("t0", t0), ("v0", v0), ("t1", t1)):
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValidationError(f"{name} must be a finite real, got {v!r}")
    if not 0.0 < t0 < t1:
        raise ValidationError(f"need 0 < t0 < t1, got t0={t0}, t1={t1}")

    scale = gamma(p.beta + 1.0)
    exponent = p.alpha - 1.0

    def rhs(t: float, v: float) -> float:
        return scale * t**exponent * g(t, v)

    h = (t1 - t0) / steps
    values = [float(v0)]
    slopes = [rhs(t0, v0)]
    v = float(v0)
    for i in range(steps):
        t = t0 + i * h
        k1 = rhs(t, v)
        k2 = rhs(t + 0.5 * h, v + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, v + 0.5 * h * k2)
        k4 = rhs(t + h, v + h * k3)
        v = v + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not math.isfinite(v) or abs(v) > 1e150:
            raise ConvergenceError(f"integration diverged near t={t + h}")
        values.append(v)
        slopes.append(rhs(t + h, v))

    def hermite(t: float) -> tuple[float, float]:
        if not isinstance(t, (int, float)) or not t0 <= t <= t1:
            raise DomainError(f"t={t!r} outside the integrated range [{t0}, {t1}]")
        i = min(int((t - t0) / h), steps - 1)
        s = (t - (t0 + i * h)) / h
        h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
        h10 = s * (1.0 - s) ** 2
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        value = h00 * values[i] + h10 * h * slopes[i] + h01 * values[i + 1] + h11 * h * slopes[i + 1]
        d00 = 6.0 * s * (s - 1.0)
        d10 = 3.0 * s * s - 4.0 * s + 1.0
        d01 = -d00
        d11 = 3.0 * s * s - 2.0 * s
        slope = (
            d00 * values[i] + d10 * h * slopes[i] + d01 * values[i + 1] + d11 * h * slopes[i + 1]
        ) / h
        return value, slope

    return OdeSolution(
        evaluator=lambda t: hermite(t)[0],
        dual_evaluator=lambda t: DualNumber(*hermite(t)),
        description=None,
    )
