"""Sample generators: iid, logistic-map, and bilateral Bernoulli autoregression.

All three cases produce a series V_1..V_n with uniform marginal on [0, 1];
density samples apply the target marginal's quantile transform, regression
samples use V directly as the design and add N(0, sigma^2) noise.

Case 2 starts at the invariant arcsine law (no burn-in) and iterates the
logistic map T(y) = 4 y (1 - y); G(y) = (2 / pi) arcsin(sqrt(y)) maps the
chain back to uniform.

Case 3 realizes the stationary solution of the bilateral recursion

    Y_i = 2 (Y_{i-1} + Y_{i+1}) / 5 + 5 zeta_i / 21,   zeta_i ~ Bernoulli(1/2)

as the two-sided moving average Y_i = (25/63) sum_{|k| <= K} 2^{-|k|}
zeta_{i+k}, truncated at K = 40 (truncation error below 2^-38 * 25/21).
Writing Y = (25/63) (zeta_0 + A + A') with A, A' independent U[0, 1]
(dyadic expansions of the one-sided innovations) gives the closed-form
marginal CDF used to map the chain to uniform.

Randomness: every sample is a pure function of (seed, rep_index); streams
are derived via SeedSequence spawn keys so replications can run in any
order or process layout without affecting results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .targets import MarginalLaw, RegressionTarget

AR_TRUNCATION = 40  # bilateral MA truncation order K
AR_SCALE = 25.0 / 63.0
AR_SUPPORT_MAX = 25.0 / 21.0

CASES = (1, 2, 3)


@dataclass(frozen=True)
class Sample:
    """One generated sample with its provenance.

    Density samples carry x; regression samples carry (y, u).
    """

    model: str
    n: int
    case: int
    seed: int
    rep_index: int
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    u: Optional[np.ndarray] = None


def stream(seed: int, rep_index: int, namespace: int = 0) -> np.random.Generator:
    """Deterministic per-replication RNG stream.

    The (namespace, rep_index) spawn key partitions streams so that e.g.
    calibration (namespace 1) never reuses evaluation randomness
    (namespace 0), regardless of scheduling.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(namespace, rep_index)))


def logistic_path(n: int, u1: float) -> np.ndarray:
    """Logistic-map trajectory started from the invariant law via u1."""
    y = np.empty(n)
    y[0] = np.sin(0.5 * np.pi * u1) ** 2
    cur = y[0]
    for i in range(1, n):
        cur = 4.0 * cur * (1.0 - cur)
        # 0 and 1 are absorbing only through exact rounding (y near 0.5
        # maps to a value that rounds to 1.0); nudge back into (0, 1)
        if cur >= 1.0:
            cur = 1.0 - 2.0**-53
        elif cur <= 0.0:
            cur = 2.0**-53
        y[i] = cur
    return y


def arcsine_cdf(y) -> np.ndarray:
    """G(y) = (2/pi) arcsin(sqrt(y)), the invariant CDF of the logistic map."""
    y = np.clip(np.asarray(y, dtype=float), 0.0, 1.0)
    return (2.0 / np.pi) * np.arcsin(np.sqrt(y))


def ar_path_from_innovations(zeta: np.ndarray, trunc: int = AR_TRUNCATION) -> np.ndarray:
    """Stationary bilateral-MA values from innovations zeta of length n + 2 K."""
    zeta = np.asarray(zeta, dtype=float)
    n = zeta.size - 2 * trunc
    if n < 1:
        raise ValueError("need len(zeta) >= 2 * trunc + 1")
    kernel = AR_SCALE * 2.0 ** -np.abs(np.arange(-trunc, trunc + 1)).astype(float)
    return np.convolve(zeta, kernel, mode="valid")


def bernoulli_ar_path(n: int, rng: np.random.Generator, trunc: int = AR_TRUNCATION) -> np.ndarray:
    """n stationary values of the bilateral Bernoulli autoregression."""
    zeta = rng.integers(0, 2, size=n + 2 * trunc).astype(float)
    return ar_path_from_innovations(zeta, trunc)


def _triangular_cdf(t: np.ndarray) -> np.ndarray:
    """CDF of the sum of two independent U[0, 1] variables, clamped outside [0, 2]."""
    t = np.clip(t, 0.0, 2.0)
    return np.where(t <= 1.0, 0.5 * t * t, 1.0 - 0.5 * (2.0 - t) ** 2)


def marginal_G_case3(y) -> np.ndarray:
    """Closed-form marginal CDF of the bilateral Bernoulli autoregression.

    With Y = (25/63) (zeta_0 + A + A'), A + A' is triangular on [0, 2] and
    zeta_0 a fair coin, so G(y) = (F_tri(63 y / 25) + F_tri(63 y / 25 - 1)) / 2.
    """
    scalar = np.ndim(y) == 0
    t = np.asarray(y, dtype=float) * (1.0 / AR_SCALE)
    out = 0.5 * (_triangular_cdf(t) + _triangular_cdf(t - 1.0))
    return float(out) if scalar else out


def uniform_series(case: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Series of length n with uniform marginal for the requested case."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    if case == 1:
        return rng.uniform(size=n)
    if case == 2:
        return arcsine_cdf(logistic_path(n, rng.uniform()))
    if case == 3:
        return marginal_G_case3(bernoulli_ar_path(n, rng))
    raise ValueError(f"unknown dependence case {case}")


def gen_case1(n: int, law: MarginalLaw, rng: np.random.Generator) -> np.ndarray:
    """iid draws with the target marginal (quantile-transformed uniforms)."""
    return law.quantile(uniform_series(1, n, rng))


def gen_case2(n: int, law: MarginalLaw, rng: np.random.Generator) -> np.ndarray:
    """Logistic-map draws with the target marginal."""
    return law.quantile(uniform_series(2, n, rng))


def gen_case3(n: int, law: MarginalLaw, rng: np.random.Generator) -> np.ndarray:
    """Bilateral Bernoulli-AR draws with the target marginal."""
    return law.quantile(uniform_series(3, n, rng))


def gen_density_sample(n: int, case: int, law: MarginalLaw, seed: int,
                       rep_index: int, namespace: int = 0) -> Sample:
    rng = stream(seed, rep_index, namespace)
    x = law.quantile(uniform_series(case, n, rng))
    return Sample(model="density", n=n, case=case, seed=seed, rep_index=rep_index, x=x)


def gen_regression_sample(n: int, case: int, target: RegressionTarget, seed: int,
                          rep_index: int, namespace: int = 0) -> Sample:
    """Design from the chosen case (uniform marginal), iid Gaussian noise."""
    rng = stream(seed, rep_index, namespace)
    u = uniform_series(case, n, rng)
    eps = rng.standard_normal(n)
    y = target.eval(u) + target.noise_sigma * eps
    return Sample(model="regression", n=n, case=case, seed=seed, rep_index=rep_index, y=y, u=u)


def dump_sample(sample: Sample, path) -> None:
    """Write draws as decimal text, one draw per line, 17 significant digits."""
    with open(path, "w") as fh:
        if sample.model == "density":
            for v in sample.x:
                fh.write(f"{v:.17g}\n")
        else:
            for yv, uv in zip(sample.y, sample.u):
                fh.write(f"{yv:.17g} {uv:.17g}\n")
