"""Least squares with per-observation influence scores.

The solver uses a pivoted QR decomposition (never raw normal equations);
the inverse of the scaled Gram matrix (N^-1 sum z_i z_i') needed by the
variance formulas is reconstructed from the R factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, LengthMismatchError, RankDeficientError

# a pivot below RANK_RTOL * (largest pivot) marks its column as dependent
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class LsFit:
    coefficients: np.ndarray
    residuals: np.ndarray
    gram_inverse: np.ndarray  # inverse of N^-1 sum z_i z_i'
    regressors: np.ndarray
    column_names: tuple[str, ...]
    rank_ok: bool = True

    @property
    def n(self) -> int:
        return self.regressors.shape[0]

    @property
    def p(self) -> int:
        return self.regressors.shape[1]


@dataclass(frozen=True)
class ScoreSet:
    scores: np.ndarray

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    def __add__(self, other: "ScoreSet") -> "ScoreSet":
        if self.n != other.n:
            raise LengthMismatchError("score sets have different lengths")
        return ScoreSet(self.scores + other.scores)


def least_squares(design, response, column_names=None) -> LsFit:
    """OLS of response on design.

    Raises RankDeficientError naming a maximal linearly dependent column
    subset when the design is not of full column rank.
    """
    z = np.asarray(design, dtype=float)
    if z.ndim == 1:
        z = z.reshape(-1, 1)
    y = np.asarray(response, dtype=float)
    n, p = z.shape
    if y.shape != (n,):
        raise DimensionMismatchError(f"response has shape {y.shape}, expected ({n},)")
    if n < p:
        raise RankDeficientError(columns=list(range(p)))
    if column_names is None:
        column_names = tuple(f"c{i}" for i in range(p))
    else:
        column_names = tuple(column_names)

    q, r, piv = scipy.linalg.qr(z, mode="economic", pivoting=True)
    pivots = np.abs(np.diag(r))
    tol = RANK_RTOL * (pivots[0] if pivots.size else 0.0)
    rank = int(np.sum(pivots > tol)) if pivots.size and pivots[0] > 0 else 0
    if rank < p:
        dependent = [column_names[j] for j in sorted(piv[rank:])]
        raise RankDeficientError(columns=dependent)

    beta_perm = scipy.linalg.solve_triangular(r, q.T @ y)
    beta = np.empty(p)
    beta[piv] = beta_perm

    r_inv = scipy.linalg.solve_triangular(r, np.eye(p))
    gram_inv_perm = r_inv @ r_inv.T  # inv(R'R) = inv(Z'Z) up to the pivot
    gram_inverse = np.empty((p, p))
    gram_inverse[np.ix_(piv, piv)] = gram_inv_perm
    gram_inverse *= n  # inverse of N^-1 Z'Z

    residuals = y - z @ beta
    return LsFit(beta, residuals, gram_inverse, z, column_names)


def influence_scores(contrast, fit: LsFit) -> ScoreSet:
    """Per-observation scores contrast' (N^-1 sum zz')^-1 z_i resid_i."""
    c = np.asarray(contrast, dtype=float)
    if c.shape != (fit.p,):
        raise DimensionMismatchError(f"contrast has shape {c.shape}, expected ({fit.p},)")
    weights = fit.gram_inverse @ c
    return ScoreSet((fit.regressors @ weights) * fit.residuals)


def variance_of_sum(score_sets: list[ScoreSet]) -> tuple[float, float]:
    """Asymptotic variance omega = N^-1 sum_i (sum_j score_ji)^2 and the
    standard error sqrt(omega / N).

    Sums run in observation-index order with compensated summation so the
    result does not depend on scheduling.
    """
    if not score_sets:
        raise LengthMismatchError("at least one score set required")
    n = score_sets[0].n
    for s in score_sets[1:]:
        if s.n != n:
            raise LengthMismatchError("score sets have different lengths")
    total = np.zeros(n)
    for s in score_sets:
        total = total + s.scores
    omega = math.fsum(float(t) * float(t) for t in total) / n
    return omega, math.sqrt(omega / n)
