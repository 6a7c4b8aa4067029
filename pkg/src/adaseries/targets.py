"""True functions used in the simulation study and their marginal laws.

Two densities on [0, 1]:

    f1: renormalized restriction to [0, 1] of the Gaussian mixture
        0.3 * N(0.5, 0.1^2) + 0.25 * N(0.7, 0.06^2)
    f2: C * (4 * (1 + |5 (x - 1/2)|)) ** (-3/2)

Two regression functions:

    f1: doppler, sqrt(x (1 - x)) * sin(2.6 pi / (x + 0.3))
    f2: sin(4 x) on [0, 1/4], 1 on (1/4, 1]   (left branch closed at 1/4)

Both mixture weights (3/10 and 1/4) deliberately do not sum to one; the
normalizer C always rescales whatever mass the raw form puts on [0, 1].
MarginalLaw provides a quadrature-backed CDF and its inverse for
quantile-transform sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import TrigBasis
from .quadrature import DEFAULT_GRID, integrate_values, simpson_weights, unit_grid

NOISE_SIGMA = 0.5  # regression noise level used throughout the study


def _check_unit_interval(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("argument outside the support [0, 1]")
    return x


def _gauss_pdf(x: np.ndarray, mu: float, sd: float) -> np.ndarray:
    z = (x - mu) / sd
    return np.exp(-0.5 * z * z) / (sd * np.sqrt(2.0 * np.pi))


@dataclass(frozen=True)
class DensityTarget:
    """Normalized density on [0, 1] with its raw (unnormalized) form."""

    name: str
    raw_fn: Callable[[np.ndarray], np.ndarray]
    normalizer: float = field(init=False, default=0.0)

    def __post_init__(self):
        c = 1.0 / integrate_values(self.raw_fn(unit_grid()))
        object.__setattr__(self, "normalizer", c)

    def raw(self, x) -> np.ndarray:
        return self.raw_fn(_check_unit_interval(x))

    def eval(self, x) -> np.ndarray:
        return self.normalizer * self.raw(x)


@dataclass(frozen=True)
class RegressionTarget:
    """Square-integrable regression function on [0, 1] plus noise level."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    noise_sigma: float = NOISE_SIGMA

    def eval(self, x) -> np.ndarray:
        return self.fn(_check_unit_interval(x))


def _f1_raw(x: np.ndarray) -> np.ndarray:
    return 0.3 * _gauss_pdf(x, 0.5, 0.1) + 0.25 * _gauss_pdf(x, 0.7, 0.06)


def _f2_raw(x: np.ndarray) -> np.ndarray:
    return (4.0 * (1.0 + np.abs(5.0 * (x - 0.5)))) ** -1.5


def density_f1() -> DensityTarget:
    """Two-component Gaussian mixture restricted to [0, 1], renormalized."""
    return DensityTarget("f1", _f1_raw)


def density_f2() -> DensityTarget:
    """Polynomially-decaying density with a kink at x = 1/2."""
    return DensityTarget("f2", _f2_raw)


def uniform_density() -> DensityTarget:
    return DensityTarget("uniform", lambda x: np.ones_like(np.asarray(x, dtype=float)))


def _doppler(x: np.ndarray) -> np.ndarray:
    return np.sqrt(x * (1.0 - x)) * np.sin(2.6 * np.pi / (x + 0.3))


def _sin_step(x: np.ndarray) -> np.ndarray:
    return np.where(x <= 0.25, np.sin(4.0 * x), 1.0)


def regression_f1() -> RegressionTarget:
    """Doppler-type oscillating regression function."""
    return RegressionTarget("f1", _doppler)


def regression_f2() -> RegressionTarget:
    """sin(4x) up to 1/4 (inclusive), constant 1 beyond."""
    return RegressionTarget("f2", _sin_step)


DENSITY_TARGETS = {"f1": density_f1, "f2": density_f2, "uniform": uniform_density}
REGRESSION_TARGETS = {"f1": regression_f1, "f2": regression_f2}


_N_SEG = 4096  # knots of the cumulative-integral table
_BISECT_ITERS = 40  # 2**-40 of a segment ~ 2e-16 interval width


class MarginalLaw:
    """CDF / quantile pair of a density target on [0, 1].

    The CDF is a cumulative per-segment Simpson integral over 4096 uniform
    segments (midpoint refinement inside each segment); the quantile is
    computed by bisection within the bracketing segment, so that
    quantile(u) satisfies |cdf(q) - u| <= 1e-9.
    """

    def __init__(self, density: DensityTarget):
        self.density = density
        self._h = 1.0 / _N_SEG
        knots = np.linspace(0.0, 1.0, _N_SEG + 1)
        mids = knots[:-1] + 0.5 * self._h
        self._knots = knots
        self._f_knots = np.asarray(density.eval(knots), dtype=float)
        f_mids = np.asarray(density.eval(mids), dtype=float)
        seg = (self._h / 6.0) * (self._f_knots[:-1] + 4.0 * f_mids + self._f_knots[1:])
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        self._cum = cum
        self._total = float(cum[-1])

    def _partial_mass(self, k: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Unnormalized integral of the density from knot k to x (x in segment k)."""
        xk = k * self._h
        d = x - xk
        f_hi = self.density.eval(x)
        f_mid = self.density.eval(xk + 0.5 * d)
        return self._cum[k] + (d / 6.0) * (self._f_knots[k] + 4.0 * f_mid + f_hi)

    def cdf(self, x) -> np.ndarray:
        x = _check_unit_interval(x)
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = np.clip((x * _N_SEG).astype(int), 0, _N_SEG - 1)
        out = self._partial_mass(k, x) / self._total
        return float(out[0]) if scalar else out

    def quantile(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if np.any(u < 0.0) or np.any(u > 1.0):
            raise ValueError("quantile argument outside [0, 1]")
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        t = u * self._total
        k = np.clip(np.searchsorted(self._cum, t, side="right") - 1, 0, _N_SEG - 1)
        lo = k * self._h
        hi = lo + self._h
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            below = self._partial_mass(k, mid) < t
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        q = 0.5 * (lo + hi)
        return float(q[0]) if scalar else q


def true_coefficients(fn: Callable[[np.ndarray], np.ndarray], m_max: int,
                      basis: TrigBasis | None = None,
                      n_points: int = DEFAULT_GRID) -> np.ndarray:
    """Quadrature coefficients <fn, phi_j> for j = 0..m_max."""
    basis = basis or TrigBasis(max_index=max(m_max, 1))
    grid = unit_grid(n_points)
    weighted = np.asarray(fn(grid), dtype=float) * simpson_weights(n_points)
    design = basis.design_matrix(grid, m_max)
    return np.sum(design * weighted, axis=1)
