"""Compare three event probabilities with the exclusivity and no-disturbance bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

EXCLUSIVITY_BOUND = 1.0
NO_DISTURBANCE_BOUND = 1.5
ANALYTIC_TOL = 1e-9
GUARD_SIGMAS = 3.0
# float slack for exact backends whose probabilities land at 1 + eps
_ROUNDING = 1e-12


@dataclass(frozen=True)
class BoundReport:
    backend: str
    probabilities: tuple[float, ...]
    sum: float
    stderr: tuple[float, ...] | None
    exclusivity_violated: bool
    no_disturbance_saturated: bool
    no_disturbance_exceeded: bool
    exclusivity_bound: float = EXCLUSIVITY_BOUND
    no_disturbance_bound: float = NO_DISTURBANCE_BOUND

    @property
    def sum_stderr(self) -> float:
        if self.stderr is None:
            return 0.0
        return math.sqrt(sum(s * s for s in self.stderr))

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "probabilities": list(self.probabilities),
            "sum": self.sum,
            "stderr": None if self.stderr is None else list(self.stderr),
            "exclusivity_violated": self.exclusivity_violated,
            "no_disturbance_saturated": self.no_disturbance_saturated,
            "no_disturbance_exceeded": self.no_disturbance_exceeded,
        }


def evaluate_bounds(
    probabilities: Sequence[float],
    stderr: Sequence[float] | None = None,
    backend: str = "quantum",
) -> BoundReport:
    """Sum the probabilities and flag bound violations.

    With ``stderr`` (Monte Carlo input) every comparison carries a guard
    band of three combined standard errors; otherwise saturation means
    ``|sum - 3/2| <= 1e-9``.
    """
    probs = [float(p) for p in probabilities]
    if len(probs) != 3:
        raise ValueError(f"expected three probabilities, got {len(probs)}")
    if stderr is not None:
        stderr = tuple(float(s) for s in stderr)
        if len(stderr) != 3 or any(s < 0 for s in stderr):
            raise ValueError("stderr must be three non-negative numbers")
    sig = stderr or (0.0, 0.0, 0.0)

    clamped = []
    for p, s in zip(probs, sig):
        slack = GUARD_SIGMAS * s + _ROUNDING
        if not -slack <= p <= 1 + slack:
            raise ValueError(f"probability {p} is outside [0, 1] beyond {GUARD_SIGMAS} sigma")
        clamped.append(min(max(p, 0.0), 1.0))

    total = math.fsum(clamped)
    if stderr is None:
        band = ANALYTIC_TOL
    else:
        band = GUARD_SIGMAS * math.sqrt(sum(s * s for s in stderr))
    return BoundReport(
        backend=backend,
        probabilities=tuple(clamped),
        sum=total,
        stderr=stderr,
        exclusivity_violated=total > EXCLUSIVITY_BOUND + band,
        no_disturbance_saturated=abs(total - NO_DISTURBANCE_BOUND) <= band,
        no_disturbance_exceeded=total > NO_DISTURBANCE_BOUND + band,
    )
