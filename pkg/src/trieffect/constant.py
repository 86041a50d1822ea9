"""Constant-effect OLS estimator.

Fits M on W = (1, D, X')' and Y on Z = (1, D, M, DM, X')', then assembles
direct = b_d, indirect = (b_m + b_dm) a_d, interaction = b_dm (a_1 + Xbar' a_x),
with influence-score standard errors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCellError, RankDeficientError
from .ols import LsFit, ScoreSet, influence_scores, least_squares, variance_of_sum
from .types import Dataset, Effect, EffectEstimates

ESTIMATOR_ID = "ols_c"


@dataclass(frozen=True)
class ConstantFit:
    """Artifacts of the two regressions.

    alpha = (a_1, a_d, a_x')' from the M regression;
    beta = (b_1, b_d, b_m, b_dm, b_x')' from the Y regression.
    The coefficient ordering is fixed: the contrast vectors below depend on it.
    """

    alpha: np.ndarray
    beta: np.ndarray
    m_fit: LsFit
    y_fit: LsFit
    xbar: np.ndarray
    x: np.ndarray
    n: int

    @property
    def k_x(self) -> int:
        return self.xbar.shape[0]


def _drop_columns(x: np.ndarray, names: tuple[str, ...], dependent: list[str]):
    keep = [i for i, nm in enumerate(names) if nm not in dependent]
    return x[:, keep], tuple(names[i] for i in keep)


def fit_constant(data: Dataset, drop_collinear: bool = False) -> ConstantFit:
    """Run both regressions. All four (D, M) cells must be non-empty.

    With drop_collinear=True, covariate columns named in a RankDeficientError
    are dropped and the fit retried.
    """
    for (dv, mv), cnt in data.cell_counts().items():
        if cnt == 0:
            raise EmptyCellError(dv, mv)

    x, x_names = data.x, data.column_names
    n = data.n
    ones = np.ones(n)
    while True:
        w = np.column_stack([ones, data.d, x])
        w_names = ("1", "d") + x_names
        z = np.column_stack([ones, data.d, data.m, data.d * data.m, x])
        z_names = ("1", "d", "m", "d*m") + x_names
        try:
            m_fit = least_squares(w, data.m.astype(float), w_names)
            y_fit = least_squares(z, data.y, z_names)
            break
        except RankDeficientError as err:
            droppable = [c for c in err.columns if c in x_names]
            if not drop_collinear or not droppable:
                raise
            x, x_names = _drop_columns(x, x_names, droppable)

    xbar = x.mean(axis=0) if x.shape[1] else np.empty(0)
    return ConstantFit(m_fit.coefficients, y_fit.coefficients, m_fit, y_fit, xbar, x, n)


def constant_scores(fit: ConstantFit) -> tuple[ScoreSet, ScoreSet, ScoreSet]:
    """Influence scores for the direct, indirect and interaction estimators."""
    k = fit.k_x
    a1, ad = fit.alpha[0], fit.alpha[1]
    ax = fit.alpha[2:]
    bm, bdm = fit.beta[2], fit.beta[3]
    m0_share = a1 + (fit.xbar @ ax if k else 0.0)

    c11 = np.concatenate([[0.0, 1.0, 0.0, 0.0], np.zeros(k)])
    eta1 = influence_scores(c11, fit.y_fit)

    c21 = np.concatenate([[0.0, 0.0, ad, ad], np.zeros(k)])
    c22 = np.concatenate([[0.0, bm + bdm], np.zeros(k)])
    eta2 = influence_scores(c21, fit.y_fit) + influence_scores(c22, fit.m_fit)

    c31 = np.concatenate([[0.0, 0.0, 0.0, m0_share], np.zeros(k)])
    c32 = np.concatenate([[bdm, 0.0], bdm * fit.xbar])
    eta3 = influence_scores(c31, fit.y_fit) + influence_scores(c32, fit.m_fit)
    if k:
        # extra term from the sampling error of Xbar; centered, so it sums to 0
        eta3 = eta3 + ScoreSet((fit.x - fit.xbar) @ (bdm * ax))
    return eta1, eta2, eta3


def effects_constant(fit: ConstantFit) -> EffectEstimates:
    a1, ad = fit.alpha[0], fit.alpha[1]
    ax = fit.alpha[2:]
    bd, bm, bdm = fit.beta[1], fit.beta[2], fit.beta[3]
    m0_share = a1 + (fit.xbar @ ax if fit.k_x else 0.0)

    direct = bd
    indirect = (bm + bdm) * ad
    interaction = bdm * m0_share
    total = direct + indirect + interaction

    eta1, eta2, eta3 = constant_scores(fit)
    _, se_dir = variance_of_sum([eta1])
    _, se_ind = variance_of_sum([eta2])
    _, se_int = variance_of_sum([eta3])
    _, se_tot = variance_of_sum([eta1, eta2, eta3])

    return EffectEstimates(
        total=Effect.from_point_se(total, se_tot),
        direct=Effect.from_point_se(direct, se_dir),
        indirect=Effect.from_point_se(indirect, se_ind),
        interaction=Effect.from_point_se(interaction, se_int),
        n=fit.n,
        estimator_id=ESTIMATOR_ID,
        complier_share=float(ad),
    )


def estimate_constant(data: Dataset, drop_collinear: bool = False) -> EffectEstimates:
    return effects_constant(fit_constant(data, drop_collinear=drop_collinear))
