"""Varying-effect OLS estimator.

Approximates covariate-heterogeneous effects with user-specified bases:
    Y  on Q0 = (X0', X1'D, X4'M, X3'DM)'
    DY on D*Q2,  Q2 = (X2', X2'M)'
    M  on Qm = (Xm', Xm'D)'
Effects are weighted coefficient contrasts; inference conditions on the
sample covariate means, so no centered-covariate score terms appear.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BLOCKS, BasisSpec, expand_basis, linear_spec, parse_terms
from .errors import BasisError, RankDeficientError, TreatedCellMissingError
from .ols import LsFit, influence_scores, least_squares, variance_of_sum
from .types import Dataset, Effect, EffectEstimates


@dataclass(frozen=True)
class VaryingFit:
    """Artifacts of the three regressions.

    Coefficient block order is fixed:
      beta0  = (b00 | b1x | b4x | b3x) matching Q0's column blocks;
      beta2  = (b20 | b2x); alpham = (am0 | amx).
    """

    spec: BasisSpec
    q0_fit: LsFit
    q2_fit: LsFit  # DY on D*Q2; gram is N^-1 sum D Q2 Q2'
    qm_fit: LsFit
    dims: dict[str, int]  # k0, k1, k2, k3, k4, km
    x1bar: np.ndarray
    xmbar: np.ndarray
    x2xm: np.ndarray  # sample average of X2 Xm'
    x3xm: np.ndarray  # sample average of X3 Xm'
    n: int

    def _block(self, coefs: np.ndarray, offsets: list[int], idx: int) -> np.ndarray:
        return coefs[offsets[idx]: offsets[idx + 1]]

    @property
    def beta0_blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        k0, k1, k4, k3 = (self.dims[b] for b in ("x0", "x1", "x4", "x3"))
        offs = np.cumsum([0, k0, k1, k4, k3]).tolist()
        c = self.q0_fit.coefficients
        return tuple(c[offs[i]: offs[i + 1]] for i in range(4))  # b00, b1x, b4x, b3x

    @property
    def b1x(self) -> np.ndarray:
        return self.beta0_blocks[1]

    @property
    def b4x(self) -> np.ndarray:
        return self.beta0_blocks[2]

    @property
    def b3x(self) -> np.ndarray:
        return self.beta0_blocks[3]

    @property
    def b2x(self) -> np.ndarray:
        return self.q2_fit.coefficients[self.dims["x2"]:]

    @property
    def am0(self) -> np.ndarray:
        return self.qm_fit.coefficients[: self.dims["xm"]]

    @property
    def amx(self) -> np.ndarray:
        return self.qm_fit.coefficients[self.dims["xm"]:]


def _col_names(block: str, names: tuple[str, ...], suffix: str = "") -> tuple[str, ...]:
    return tuple(f"{block}[{t}]{suffix}" for t in names)


def fit_varying(
    data: Dataset, spec: BasisSpec | None = None, drop_collinear: bool = False
) -> VaryingFit:
    """Fit the three regressions for the given basis spec (default: linear in
    all raw covariates).

    Raises TreatedCellMissingError when the treated subsample lacks an M
    value, and RankDeficientError naming the offending block otherwise.
    With drop_collinear=True, dependent non-intercept terms are removed from
    their block and the fit retried.
    """
    if spec is None:
        spec = linear_spec(data.column_names)

    d = data.d.astype(float)
    m = data.m.astype(float)
    if not np.any(d == 1):
        raise TreatedCellMissingError()
    for mv in (0, 1):
        if not np.any((data.d == 1) & (data.m == mv)):
            raise TreatedCellMissingError(mv)

    while True:
        blocks = expand_basis(data, spec)
        (x0, n0), (x1, n1), (x2, n2), (x3, n3), (x4, n4), (xm, nm) = (
            blocks[b] for b in BLOCKS
        )

        q0 = np.column_stack([x0, x1 * d[:, None], x4 * m[:, None], x3 * (d * m)[:, None]])
        q0_names = (
            _col_names("x0", n0)
            + _col_names("x1", n1, "*d")
            + _col_names("x4", n4, "*m")
            + _col_names("x3", n3, "*d*m")
        )
        dq2 = np.column_stack([x2 * d[:, None], x2 * (d * m)[:, None]])
        q2_names = _col_names("x2", n2, "*d") + _col_names("x2", n2, "*d*m")
        qm = np.column_stack([xm, xm * d[:, None]])
        qm_names = _col_names("xm", nm) + _col_names("xm", nm, "*d")

        try:
            q0_fit = least_squares(q0, data.y, q0_names)
            q2_fit = least_squares(dq2, d * data.y, q2_names)
            qm_fit = least_squares(qm, m, qm_names)
            break
        except RankDeficientError as err:
            dropped = False
            if drop_collinear:
                # at most one term per block per round: a duplicate pair can be
                # reported under two column suffixes (e.g. *d and *d*m) and
                # removing both would empty the block
                handled: set[str] = set()
                for col in err.columns:
                    block, _, rest = col.partition("[")
                    text = rest[: rest.rindex("]")]
                    if text == "1" or block in handled:
                        continue  # never drop a block intercept
                    term = parse_terms(text)[-1]
                    new_spec = spec.drop_term(block, term)
                    if new_spec != spec:
                        spec = new_spec
                        handled.add(block)
                        dropped = True
            if not dropped:
                block = err.columns[0].partition("[")[0]
                raise RankDeficientError(err.columns, block=block) from None

    dims = {b: blocks[b][0].shape[1] for b in BLOCKS}
    return VaryingFit(
        spec=spec,
        q0_fit=q0_fit,
        q2_fit=q2_fit,
        qm_fit=qm_fit,
        dims=dims,
        x1bar=x1.mean(axis=0),
        xmbar=xm.mean(axis=0),
        x2xm=(x2.T @ xm) / data.n,
        x3xm=(x3.T @ xm) / data.n,
        n=data.n,
    )


def varying_contrasts(fit: VaryingFit) -> dict[str, np.ndarray]:
    """Contrast vectors for the three effect estimators.

    By construction, b4x never enters (its slots in g1 and g31 are zero) and
    no centered-covariate term is added to any score.
    """
    k0, k1, k2, k3, k4, km = (fit.dims[b] for b in ("x0", "x1", "x2", "x3", "x4", "xm"))
    g1 = np.concatenate([np.zeros(k0), fit.x1bar, np.zeros(k4 + k3)])
    g21 = np.concatenate([np.zeros(k2), fit.amx @ fit.x2xm.T])
    g22 = np.concatenate([np.zeros(km), fit.b2x @ fit.x2xm])
    g31 = np.concatenate([np.zeros(k0 + k1 + k4), fit.am0 @ fit.x3xm.T])
    g32 = np.concatenate([fit.b3x @ fit.x3xm, np.zeros(km)])
    return {"g1": g1, "g21": g21, "g22": g22, "g31": g31, "g32": g32}


def effects_varying(fit: VaryingFit) -> EffectEstimates:
    direct = float(fit.x1bar @ fit.b1x)
    indirect = float(fit.b2x @ fit.x2xm @ fit.amx)
    interaction = float(fit.b3x @ fit.x3xm @ fit.am0)
    total = direct + indirect + interaction

    g = varying_contrasts(fit)
    lam1 = influence_scores(g["g1"], fit.q0_fit)
    lam2 = influence_scores(g["g21"], fit.q2_fit) + influence_scores(g["g22"], fit.qm_fit)
    lam3 = influence_scores(g["g31"], fit.q0_fit) + influence_scores(g["g32"], fit.qm_fit)

    _, se_dir = variance_of_sum([lam1])
    _, se_ind = variance_of_sum([lam2])
    _, se_int = variance_of_sum([lam3])
    _, se_tot = variance_of_sum([lam1, lam2, lam3])

    return EffectEstimates(
        total=Effect.from_point_se(total, se_tot),
        direct=Effect.from_point_se(direct, se_dir),
        indirect=Effect.from_point_se(indirect, se_ind),
        interaction=Effect.from_point_se(interaction, se_int),
        n=fit.n,
        estimator_id=f"ols_v:{fit.spec.spec_hash()}",
        complier_share=float(fit.xmbar @ fit.amx),
    )


def estimate_varying(
    data: Dataset, spec: BasisSpec | None = None, drop_collinear: bool = False
) -> EffectEstimates:
    return effects_varying(fit_varying(data, spec, drop_collinear=drop_collinear))
