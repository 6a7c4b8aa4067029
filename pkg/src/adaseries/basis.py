"""Trigonometric orthonormal system on [0, 1], smoothness weights, rate benchmark.

Basis indexing (shared by the density and regression models):

    j = 0      -> 1                       (constant)
    j = 2k - 1 -> sqrt(2) * cos(2 pi k x)
    j = 2k     -> sqrt(2) * sin(2 pi k x)

For the density model coefficient 0 is the known constant 1 and only
j >= 1 is estimated; for regression coefficient 0 is estimated like any
other.  The system satisfies sup_x sum_{j=1}^m phi_j(x)^2 <= 2 m (with
equality to m for even m), so the squared sup-norm constant is 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SQRT2 = np.sqrt(2.0)

#: Valid squared sup-norm constant for the trig system at every m
#: (tight at m = 1, where sup sum phi_j^2 = 2).
SUP_NORM_SQ = 2.0


@dataclass(frozen=True)
class TrigBasis:
    """Trigonometric orthonormal basis on [0, 1].

    Parameters
    ----------
    max_index : largest coefficient index j supported.
    constant_fixed : density-model convention, index 0 is the known
        constant 1 rather than an estimated coefficient.
    """

    max_index: int = 400
    constant_fixed: bool = True

    def eval_one(self, j: int, x) -> np.ndarray:
        """Evaluate basis function j at points x in [0, 1]."""
        if j < 0 or j > self.max_index:
            raise ValueError(f"basis index {j} outside [0, {self.max_index}]")
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("basis evaluation points must lie in [0, 1]")
        if j == 0:
            return np.ones_like(x)
        k = (j + 1) // 2
        ang = 2.0 * np.pi * k * x
        return SQRT2 * (np.cos(ang) if j % 2 == 1 else np.sin(ang))

    def design_matrix(self, x, m_max: int) -> np.ndarray:
        """Rows j = 0..m_max of the basis evaluated at points x.

        Shape (m_max + 1, len(x)); row j is phi_j(x).
        """
        if m_max < 0 or m_max > self.max_index:
            raise ValueError(f"m_max {m_max} outside [0, {self.max_index}]")
        x = np.asarray(x, dtype=float).ravel()
        out = np.empty((m_max + 1, x.size))
        out[0] = 1.0
        n_cos = (m_max + 1) // 2
        n_sin = m_max // 2
        if n_cos:
            ang = 2.0 * np.pi * np.outer(np.arange(1, n_cos + 1), x)
            out[1 : 2 * n_cos : 2] = SQRT2 * np.cos(ang)
            if n_sin:
                out[2 : 2 * n_sin + 1 : 2] = SQRT2 * np.sin(ang[:n_sin])
        return out


def eval_basis(j: int, x, basis: TrigBasis | None = None) -> np.ndarray:
    """Functional form of TrigBasis.eval_one."""
    return (basis or TrigBasis()).eval_one(j, x)


@dataclass(frozen=True)
class WeightSequence:
    """Smoothness weights gamma_j, j >= 1, defining the target class.

    kind 'polynomial': gamma_j = j ** (-2 p)
    kind 'exponential': gamma_j = exp(-j ** (2 p))
    kind 'custom': explicit values

    Any p > 0 gives a valid decaying sequence (the sharper p > 1 of the
    polynomial smoothness classes is a theory condition, not a formula
    constraint; the benchmark rates are routinely evaluated at p = 1).
    """

    kind: str
    p: float = 0.0
    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind == "polynomial":
            if self.p <= 0.0:
                raise ValueError("polynomial weights need p > 0")
        elif self.kind == "exponential":
            if self.p <= 0.0:
                raise ValueError("exponential weights need p > 0")
        elif self.kind == "custom":
            vals = np.asarray(self.values, dtype=float)
            if vals.size == 0 or np.any(vals <= 0.0) or np.any(np.diff(vals) > 0.0):
                raise ValueError("custom weights must be positive and non-increasing")
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    def weight(self, j) -> np.ndarray:
        """gamma_j for indices j >= 1 (scalar or array)."""
        j_arr = np.asarray(j)
        if np.any(j_arr < 1):
            raise ValueError("weights are defined for j >= 1")
        if self.kind == "polynomial":
            out = np.asarray(j_arr, dtype=float) ** (-2.0 * self.p)
        elif self.kind == "exponential":
            out = np.exp(-np.asarray(j_arr, dtype=float) ** (2.0 * self.p))
        else:
            vals = np.asarray(self.values, dtype=float)
            if np.any(j_arr > vals.size):
                raise ValueError("custom weight index beyond provided values")
            out = vals[j_arr - 1]
        return out if out.shape else float(out)


def weight(seq: WeightSequence, j):
    """gamma_j of the given weight sequence."""
    return seq.weight(j)


@dataclass(frozen=True)
class RateResult:
    """Minimax benchmark over the dimension grid 1..n.

    m_star is the smallest minimizer of psi_m = max(gamma_m, m / n),
    r_star its minimal value.
    """

    m_star: int
    r_star: float
    per_m_values: np.ndarray


def optimal_dimension(seq: WeightSequence, n: int) -> RateResult:
    """Scan m = 1..n for the smallest minimizer of max(gamma_m, m / n)."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    m = np.arange(1, n + 1)
    psi = np.maximum(seq.weight(m), m / n)
    m_star = int(np.argmin(psi)) + 1  # argmin returns the first minimizer
    return RateResult(m_star=m_star, r_star=float(psi[m_star - 1]), per_m_values=psi)


def rate_slope(seq: WeightSequence, n_grid: Sequence[int]) -> float:
    """Least-squares slope of log r_star against log n over a grid of sizes."""
    n_grid = list(n_grid)
    rates = [optimal_dimension(seq, n).r_star for n in n_grid]
    return float(np.polyfit(np.log(np.asarray(n_grid, float)), np.log(rates), 1)[0])
