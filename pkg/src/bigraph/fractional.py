"""Riemann-Liouville fractional integrals and derivatives of causal signals.

Signals are uniformly sampled on t_k = k*dt and understood to vanish for
t < 0.  The integral of order alpha > 0 is the causal convolution with
t^(alpha-1)/Gamma(alpha); negative orders are obtained by integrating up to
a smooth order and differencing back down.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .errors import BadOrder, CompatibilityWarning

__all__ = ["SampledSignal", "rl_integral", "rl_derivative"]


@dataclass(frozen=True)
class SampledSignal:
    """Causal complex time series on a uniform grid t_k = k*dt, k = 0..K."""

    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("samples must be a 1-d array with at least two entries")
        object.__setattr__(self, "samples", arr)

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.samples.size)

    def with_samples(self, samples: np.ndarray) -> "SampledSignal":
        return SampledSignal(self.dt, samples)

    def to_csv(self, path) -> None:
        from .io import write_csv

        rows = np.column_stack([self.times, self.samples.real, self.samples.imag])
        write_csv(path, ["t", "re", "im"], rows)


_WEIGHT_CACHE: dict[tuple[int, float], np.ndarray] = {}


def product_weights(n: int, alpha: float) -> np.ndarray:
    """Lower-triangular weights for the product-trapezoidal rule.

    Row k approximates (1/Gamma(alpha)) * int_0^{t_k} (t_k - s)^(alpha-1) f(s) ds
    by integrating the kernel exactly against the piecewise-linear interpolant
    of f, so the rule is exact for affine data and stable at the s = t_k
    endpoint singularity when alpha < 1.  Weights exclude the dt^alpha factor;
    callers multiply by dt**alpha.
    """
    key = (n, float(alpha))
    cached = _WEIGHT_CACHE.get(key)
    if cached is not None:
        return cached
    a = np.zeros((n + 1, n + 1))
    k = np.arange(1, n + 1, dtype=float)
    # interior coefficients depend only on the lag
    lag = (k + 1) ** (alpha + 1) - 2.0 * k ** (alpha + 1) + (k - 1) ** (alpha + 1)
    rows = np.arange(1, n + 1)
    for m in rows:
        a[m, m] = 1.0
        a[m, 0] = (m - 1.0) ** (alpha + 1) - m**alpha * (m - alpha - 1.0)
        if m >= 2:
            a[m, 1:m] = lag[m - 2 :: -1]
    a /= gamma(alpha + 2.0)
    _WEIGHT_CACHE[key] = a
    return a


def rl_integral(f: SampledSignal, alpha: float) -> SampledSignal:
    """Fractional integral of order alpha > 0 by exact product quadrature."""
    if alpha <= 0.0:
        raise BadOrder(f"integral order must be positive, got {alpha}")
    n = f.samples.size - 1
    w = product_weights(n, alpha)
    out = (f.dt**alpha) * (w @ f.samples)
    return f.with_samples(out)


def _differentiate(y: np.ndarray, dt: float) -> np.ndarray:
    """Centered first derivative, second-order one-sided at both ends."""
    out = np.empty_like(y)
    out[1:-1] = (y[2:] - y[:-2]) / (2.0 * dt)
    out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt)
    out[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * dt)
    return out


def rl_derivative(f: SampledSignal, alpha: float) -> SampledSignal:
    """Fractional derivative of order alpha in (0, 4).

    Computed as d^k/dt^k applied to the order-(k - alpha) integral with
    k = ceil(alpha), mirroring the distributional identity that lowers the
    kernel power by differentiating a smoother kernel.  Signals should vanish
    at t = 0 together with their first ceil(alpha) derivatives; a nonzero
    f(0) is accepted with a warning.
    """
    if not 0.0 < alpha < 4.0:
        raise BadOrder(f"derivative order must lie in (0, 4), got {alpha}")
    scale = float(np.max(np.abs(f.samples))) or 1.0
    if abs(f.samples[0]) > 1e-9 * scale:
        warnings.warn(
            "signal does not vanish at t = 0; fractional derivative accuracy degraded",
            CompatibilityWarning,
            stacklevel=2,
        )
    k = int(np.ceil(alpha))
    if k == alpha:
        y = f.samples.copy()
    else:
        y = rl_integral(f, k - alpha).samples
    for _ in range(k):
        y = _differentiate(y, f.dt)
    return f.with_samples(y)
