"""Bernoulli estimate container and Wilson score interval."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidCounts

__all__ = ["Z95", "wilson_interval", "PLosEstimate"]

#: Two-sided 95% normal quantile used for all confidence intervals.
Z95 = 1.96


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a Bernoulli proportion.

    Args:
        k: success count, 0 <= k <= n.
        n: trial count, n >= 1.
        z: normal quantile (default 1.96 for 95%).

    Returns:
        (lo, hi) clamped to [0, 1]; lo = 0 exactly when k = 0 and
        hi = 1 exactly when k = n.
    """
    if n < 1 or k < 0 or k > n:
        raise InvalidCounts(f"need 0 <= k <= n with n >= 1, got k={k}, n={n}")
    if z <= 0.0:
        raise InvalidCounts(f"z must be positive, got {z}")
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # the degenerate endpoints are exactly 0 and 1 analytically; rounding
    # in the quotient above can miss them by one ulp
    if k == 0:
        lo = 0.0
    if k == n:
        hi = 1.0
    return lo, hi


@dataclass(frozen=True)
class PLosEstimate:
    """A LoS-probability estimate with its Wilson 95% bounds.

    For Monte-Carlo estimates p_hat = k/n.  Closed-form model rows use
    :meth:`exact`, which stores the model value with a degenerate
    interval (n = 1, k = round(p)).
    """

    n: int
    k: int
    p_hat: float
    ci_lo: float
    ci_hi: float

    def __post_init__(self):
        if not (0 <= self.k <= self.n):
            raise InvalidCounts(f"need 0 <= k <= n, got k={self.k}, n={self.n}")
        if not (0.0 <= self.ci_lo <= self.p_hat <= self.ci_hi <= 1.0):
            raise InvalidCounts(
                f"bounds must satisfy 0 <= lo <= p <= hi <= 1, got "
                f"({self.ci_lo}, {self.p_hat}, {self.ci_hi})"
            )

    @classmethod
    def from_counts(cls, k: int, n: int, z: float = Z95) -> "PLosEstimate":
        lo, hi = wilson_interval(k, n, z)
        return cls(n=n, k=k, p_hat=k / n, ci_lo=lo, ci_hi=hi)

    @classmethod
    def exact(cls, p: float) -> "PLosEstimate":
        if not 0.0 <= p <= 1.0:
            raise InvalidCounts(f"probability must be in [0, 1], got {p}")
        return cls(n=1, k=int(round(p)), p_hat=p, ci_lo=p, ci_hi=p)
