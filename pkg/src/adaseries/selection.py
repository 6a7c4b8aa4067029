"""Dimension selectors: penalized contrast (GL), model selection, CV, oracle.

All selectors scan the collection m = 1..M and return the smallest
minimizer of their criterion.  The criteria exclude the index-0
coefficient: it is common to every candidate dimension in both models
and cannot change an argmin.

The penalized-contrast selector minimizes Xi_m + pen(m) with

    Xi_m = max_{m <= k <= M} ( || f_m - f_k ||^2 - pen(k) ),

which by nestedness reduces to suffix maxima of the cumulative
coefficient sums; select_gl with plain penalties is the m-tilde variant,
with sigma_hat^2-scaled penalties the m-hat variant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import SUP_NORM_SQ, TrigBasis
from .dependence import Sample
from .estimators import CoefficientTable, ise_profile
from .quadrature import DEFAULT_GRID, simpson_weights, unit_grid

#: Theorem penalty constants c such that pen(m) = c * m / n (regression
#: schemes additionally scale by sigma_hat^2).
PENALTY_PRESETS = {
    "density_iid": 36.0 * SUP_NORM_SQ,
    "regression_iid": 144.0 * SUP_NORM_SQ,
    "density_dep": 288.0 * SUP_NORM_SQ,
    "regression_dep": 1152.0 * SUP_NORM_SQ,
}


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty shape pen(m) = c_pen * m / n, optionally times sigma_hat^2."""

    scheme: str
    c_pen: float
    uses_sigma_hat: bool

    def __post_init__(self):
        if self.c_pen < 0.0:
            raise ValueError("penalty constant must be nonnegative")

    @classmethod
    def preset(cls, scheme: str) -> "PenaltyConfig":
        if scheme not in PENALTY_PRESETS:
            raise ValueError(f"unknown penalty scheme {scheme!r}")
        return cls(scheme=scheme, c_pen=PENALTY_PRESETS[scheme],
                   uses_sigma_hat=scheme.startswith("regression"))

    @classmethod
    def custom(cls, c_pen: float, uses_sigma_hat: bool = False) -> "PenaltyConfig":
        return cls(scheme="custom", c_pen=c_pen, uses_sigma_hat=uses_sigma_hat)


def theorem_penalty_config(model: str, case: int) -> PenaltyConfig:
    """Theorem preset for a (model, dependence case) pair; case 1 is iid."""
    suffix = "iid" if case == 1 else "dep"
    return PenaltyConfig.preset(f"{model}_{suffix}")


def penalty(cfg: PenaltyConfig, m: int, n: int, sigma_sq: float | None = None) -> float:
    """pen(m) for one dimension."""
    if m < 1 or n < 1:
        raise ValueError("penalty needs m >= 1 and n >= 1")
    scale = 1.0
    if cfg.uses_sigma_hat:
        if sigma_sq is None:
            raise ValueError(f"scheme {cfg.scheme!r} needs sigma_hat^2")
        scale = sigma_sq
    return cfg.c_pen * scale * m / n


def penalty_vector(cfg: PenaltyConfig, M: int, n: int,
                   sigma_sq: float | None = None) -> np.ndarray:
    """pen(m) for m = 1..M (linear in m, hence non-decreasing)."""
    return penalty(cfg, 1, n, sigma_sq) * np.arange(1, M + 1)


@dataclass(frozen=True)
class SelectionResult:
    """Selected dimension plus the per-dimension penalties and criteria."""

    selector: str
    m_selected: int
    penalties: np.ndarray
    criteria: np.ndarray

    @property
    def per_m(self):
        return list(zip(self.penalties.tolist(), self.criteria.tolist()))


def _coef_cumsum(table: CoefficientTable, M: int) -> np.ndarray:
    """S_m = sum_{j=1..m} theta_hat_j^2 for m = 1..M."""
    if M < 1 or M > table.m_max:
        raise ValueError(f"dimension grid 1..{M} outside the table (m_max={table.m_max})")
    sq = table.theta_hat[1 : M + 1] ** 2
    return np.cumsum(sq)


def _smallest_argmin(values: np.ndarray) -> int:
    """Smallest m with values[m-1] minimal (np.argmin takes the first)."""
    return int(np.argmin(values)) + 1


def gl_contrast(table: CoefficientTable, pens) -> np.ndarray:
    """Contrast Xi_m = max_{m <= k <= M} (gap(m, k) - pen(k)) for m = 1..M.

    Evaluated from the pairwise gaps so that the k = m term is an exact
    float zero and Xi_M equals -pen(M) exactly.
    """
    pens = np.asarray(pens, dtype=float)
    S = _coef_cumsum(table, pens.size)
    terms = (S[None, :] - S[:, None]) - pens[None, :]
    keep = np.triu(np.ones((pens.size, pens.size), dtype=bool))
    return np.max(np.where(keep, terms, -np.inf), axis=1)


def select_with_pens(table: CoefficientTable, pens,
                     selector: str = "gl") -> SelectionResult:
    """Penalized-contrast selection with an explicit penalty subsequence.

    The criterion Xi_m + pen(m) equals max_{k >= m}(S_k - pen_k) - (S_m -
    pen_m); evaluating it in this form makes every mathematical tie an
    exact float zero (identical values subtracted), so the smallest
    minimizer is found reliably.  Computing Xi_m and adding pen(m) back
    would leave rounding residue on the tied dimensions instead.
    """
    pens = np.asarray(pens, dtype=float)
    S = _coef_cumsum(table, pens.size)
    shifted = S - pens
    suffix_max = np.maximum.accumulate(shifted[::-1])[::-1]
    crit = suffix_max - shifted
    return SelectionResult(selector=selector, m_selected=_smallest_argmin(crit),
                           penalties=pens, criteria=crit)


def select_gl(table: CoefficientTable, cfg: PenaltyConfig, M: int | None = None,
              sigma_sq: float | None = None) -> SelectionResult:
    """Penalized-contrast selection with pen(m) from a PenaltyConfig."""
    M = table.m_max if M is None else M
    pens = penalty_vector(cfg, M, table.n, sigma_sq)
    return select_with_pens(table, pens, selector="gl")


def select_ms(table: CoefficientTable, c: float, M: int | None = None,
              sigma_sq: float = 1.0) -> SelectionResult:
    """Model selection: smallest argmin of -sum_{j<=m} theta_hat_j^2 + c m sigma^2 / n.

    The density model has no response scale, so sigma_sq defaults to 1.
    """
    if c <= 0.0:
        raise ValueError("model-selection constant must be positive")
    M = table.m_max if M is None else M
    S = _coef_cumsum(table, M)
    pens = c * sigma_sq * np.arange(1, M + 1) / table.n
    crit = -S + pens
    return SelectionResult(selector="ms", m_selected=_smallest_argmin(crit),
                           penalties=pens, criteria=crit)


def _cv_terms(sample: Sample, M: int, basis: TrigBasis | None = None) -> np.ndarray:
    """Per-coefficient CV contributions over the estimated index set.

    Entry for index j is theta_hat_j^2 - 2 [(sum_i psi_j)^2 - sum_i psi_j^2]
    / (n (n - 1)), with psi_j(Z) = phi_j(X) for densities and Y phi_j(U)
    for regression.  The bracket is the off-diagonal double sum over
    observation pairs written in O(n) form.
    """
    if sample.n < 2:
        raise ValueError("cross-validation needs n >= 2")
    basis = basis or TrigBasis(max_index=max(M, 1))
    if sample.model == "density":
        psi = basis.design_matrix(sample.x, M)[1:]
    else:
        psi = basis.design_matrix(sample.u, M) * sample.y
    n = sample.n
    totals = np.sum(psi, axis=1)
    diag = np.sum(psi * psi, axis=1)
    theta = totals / n
    return theta**2 - 2.0 * (totals**2 - diag) / (n * (n - 1))


def cv_profile(sample: Sample, M: int, basis: TrigBasis | None = None) -> np.ndarray:
    """CV(m) for m = 1..M.

    Regression includes the estimated index-0 term in every candidate
    (a shift common to all m), so its cumulative sum starts at j = 0.
    """
    terms = np.cumsum(_cv_terms(sample, M, basis))
    return terms if sample.model == "density" else terms[1:]


def cv_criterion(sample: Sample, m: int, basis: TrigBasis | None = None) -> float:
    """Leave-one-out criterion CV(m) for a single dimension."""
    return float(cv_profile(sample, m, basis)[m - 1])


def select_cv(sample: Sample, M: int, basis: TrigBasis | None = None) -> SelectionResult:
    """Smallest argmin of CV(m) over m = 1..M."""
    crit = cv_profile(sample, M, basis)
    return SelectionResult(selector="cv", m_selected=_smallest_argmin(crit),
                           penalties=np.zeros(M), criteria=crit)


def oracle_criteria(table: CoefficientTable, truth_grid: np.ndarray,
                    basis_grid: np.ndarray, weights: np.ndarray,
                    M: int | None = None) -> np.ndarray:
    """Realized ISE(m), m = 1..M, on a shared Simpson grid."""
    M = table.m_max if M is None else M
    sub = CoefficientTable(model=table.model, n=table.n, m_max=M,
                           theta_hat=table.theta_hat[: M + 1])
    return ise_profile(sub, truth_grid, basis_grid, weights)


def select_oracle(table: CoefficientTable, truth_fn, M: int | None = None,
                  n_points: int = DEFAULT_GRID,
                  basis: TrigBasis | None = None) -> SelectionResult:
    """Infeasible benchmark: smallest minimizer of the realized ISE."""
    M = table.m_max if M is None else M
    basis = basis or TrigBasis(max_index=max(M, 1))
    grid = unit_grid(n_points)
    crit = oracle_criteria(table, np.asarray(truth_fn(grid), dtype=float),
                           basis.design_matrix(grid, M), simpson_weights(n_points), M)
    return SelectionResult(selector="oracle", m_selected=_smallest_argmin(crit),
                           penalties=np.zeros(M), criteria=crit)


@dataclass(frozen=True)
class Lemma1Audit:
    """Pathwise oracle-inequality audit record."""

    m: int
    m_selected: int
    lhs: float
    rhs: float
    bias_sq: float
    passed: bool
    tail_truncated_at: int


def lemma1_audit(table: CoefficientTable, pens, theta_true, m: int,
                 rtol: float = 1e-9) -> Lemma1Audit:
    """Check || f_mtilde - f ||^2 <= 85 max(bias_m^2, pen_m) + 42 max_k (...)_+ .

    theta_true are the target's coefficients 0..J; the audit treats the
    J-truncated projection as the target, for which the inequality is
    exact (it holds pathwise for any coefficient sequence).  Requires a
    non-decreasing, nonnegative penalty subsequence.
    """
    pens = np.asarray(pens, dtype=float)
    M = pens.size
    if np.any(pens < 0.0) or np.any(np.diff(pens) < 0.0):
        raise ValueError("lemma audit needs nonnegative non-decreasing penalties")
    if not 1 <= m <= M:
        raise ValueError(f"audit dimension {m} outside 1..{M}")
    theta_true = np.asarray(theta_true, dtype=float)
    if theta_true.size < M + 1:
        raise ValueError("need true coefficients up to the dimension grid")

    m_sel = select_with_pens(table, pens).m_selected
    diff_sq = (table.theta_hat[: M + 1] - theta_true[: M + 1]) ** 2
    err_norm = np.cumsum(diff_sq)  # || f_hat_k - f_k ||^2 at index k
    tail = np.concatenate((np.cumsum((theta_true**2)[::-1])[::-1], [0.0]))

    lhs = float(err_norm[m_sel] + tail[m_sel + 1])
    bias_sq = float(tail[m + 1])
    dev = err_norm[m : M + 1] - pens[m - 1 :] / 6.0
    rhs = 85.0 * max(bias_sq, float(pens[m - 1])) + 42.0 * max(float(np.max(dev)), 0.0)
    passed = lhs <= rhs * (1.0 + rtol) + 1e-15
    return Lemma1Audit(m=m, m_selected=m_sel, lhs=lhs, rhs=rhs, bias_sq=bias_sq,
                       passed=passed, tail_truncated_at=theta_true.size - 1)
