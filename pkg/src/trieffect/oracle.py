"""Ground-truth effect computations.

Covers the closed-form effects of the linear model, the plug-in cell-mean
identification on discrete covariates, population effects from unit-level
potential outcomes, and a seeded Monte-Carlo oracle for designs without a
closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from . import rng
from .designs import LinearParams, SimulationDesign, generate_potentials
from .errors import EmptyStratumCellError, TrieffectError
from .types import Dataset, EffectVector, PotentialTable


@dataclass(frozen=True)
class NaturalEffects:
    """Expected natural direct/indirect effects E delta(d), E mu(d) for the
    linear model. mu1 + delta0 and delta1 + mu0 both equal the total effect."""

    delta0: float
    delta1: float
    mu0: float
    mu1: float


def true_effects_linear(p: LinearParams) -> EffectVector:
    """Closed-form effects of the constant-coefficient linear model."""
    ex_ax = float(np.dot(p.x_mean, p.alpha_x))
    direct = p.beta_d
    indirect = (p.beta_m + p.beta_dm) * p.alpha_d
    interaction = p.beta_dm * (p.alpha1 + ex_ax)
    return EffectVector.from_parts(direct, indirect, interaction)


def natural_effects_linear(p: LinearParams) -> NaturalEffects:
    ex_ax = float(np.dot(p.x_mean, p.alpha_x))

    def delta(d: int) -> float:
        return p.beta_d + p.beta_dm * (p.alpha1 + p.alpha_d * d + ex_ax)

    def mu(d: int) -> float:
        return (p.beta_m + p.beta_dm * d) * p.alpha_d

    return NaturalEffects(delta0=delta(0), delta1=delta(1), mu0=mu(0), mu1=mu(1))


def true_effects_threshold_normal(p: LinearParams, x_variance: float) -> EffectVector:
    """Closed-form effects for a continuous outcome with a standard-normal
    mediator error (threshold 0) and normal covariates.

    Uses the normal-mixture identity E[Phi(a + b'X)] = Phi((a + b'EX) / s)
    with s = sqrt(1 + b' Var(X) b).
    """
    ax = np.asarray(p.alpha_x)
    s = math.sqrt(1.0 + x_variance * float(ax @ ax))
    ex_ax = float(np.dot(p.x_mean, p.alpha_x))

    def e_m(d: int) -> float:
        return float(ndtr((p.alpha1 + p.alpha_d * d + ex_ax) / s))

    direct = p.beta_d
    indirect = (p.beta_m + p.beta_dm) * (e_m(1) - e_m(0))
    interaction = p.beta_dm * e_m(0)
    return EffectVector.from_parts(direct, indirect, interaction)


def population_effects_from_potentials(pt: PotentialTable) -> EffectVector:
    """Population (sample-average) effects from unit-level potentials; also
    cross-checks that the three terms sum to the mean of Y1 - Y0."""
    m0 = pt.m0.astype(float)
    m1 = pt.m1.astype(float)
    direct = float(np.mean(pt.y10 - pt.y00))
    indirect = float(np.mean((pt.y11 - pt.y10) * (m1 - m0)))
    interaction = float(np.mean((pt.y11 - pt.y10 - pt.y01 + pt.y00) * m0))
    out = EffectVector.from_parts(direct, indirect, interaction)

    y0 = pt.y00 + (pt.y01 - pt.y00) * m0
    y1 = pt.y10 + (pt.y11 - pt.y10) * m1
    total_direct = float(np.mean(y1 - y0))
    scale = max(1.0, abs(total_direct))
    if abs(out.total - total_direct) > 1e-12 * scale:
        raise TrieffectError(
            f"decomposition does not sum to the total effect: {out.total} vs {total_direct}"
        )
    return out


def effects_from_cells(data: Dataset, drop_incomplete: bool = False) -> EffectVector:
    """Plug-in identification on discrete covariates: per distinct X row,
    compute cell-mean contrasts, then average over the empirical X law.

    Strata missing a needed (D, M) cell or a D arm raise
    EmptyStratumCellError, or are dropped when drop_incomplete=True (the
    remaining weights are renormalized).
    """
    _, inverse = np.unique(data.x, axis=0, return_inverse=True)
    n_strata = inverse.max() + 1

    weights: list[int] = []
    vecs: list[tuple[float, float, float, float]] = []
    for s in range(n_strata):
        rows = inverse == s
        stratum = data.x[rows][0].tolist()
        d = data.d[rows]
        m = data.m[rows]
        y = data.y[rows]

        try:
            for dv in (0, 1):
                if not np.any(d == dv):
                    raise EmptyStratumCellError(stratum, dv)
                for mv in (0, 1):
                    if not np.any((d == dv) & (m == mv)):
                        raise EmptyStratumCellError(stratum, dv, mv)
        except EmptyStratumCellError:
            if drop_incomplete:
                continue
            raise

        def cell(dv, mv):
            return float(np.mean(y[(d == dv) & (m == mv)]))

        c_dir = cell(1, 0) - cell(0, 0)
        c_ind = (cell(1, 1) - cell(1, 0)) * (
            float(np.mean(m[d == 1])) - float(np.mean(m[d == 0]))
        )
        c_tot = float(np.mean(y[d == 1])) - float(np.mean(y[d == 0]))
        c_int = c_tot - c_dir - c_ind
        weights.append(int(rows.sum()))
        vecs.append((c_tot, c_dir, c_ind, c_int))

    if not weights:
        raise EmptyStratumCellError("all", 0)
    w = np.asarray(weights, dtype=float)
    w /= w.sum()
    arr = np.asarray(vecs)
    tot, dir_, ind, int_ = (float(w @ arr[:, j]) for j in range(4))
    return EffectVector.from_parts(dir_, ind, int_)


@dataclass(frozen=True)
class MonteCarloEffects:
    effects: EffectVector
    mc_se: EffectVector  # per-component simulation standard errors
    draws: int


_MC_CHUNK = 1_000_000


def true_effects_montecarlo(
    design: SimulationDesign, draws: int, seed: int = 0
) -> MonteCarloEffects:
    """Monte-Carlo oracle: average unit-level decomposition terms over fresh
    potential-outcome draws. Draws are generated in fixed-size chunks with
    derived seeds and reduced in chunk order, so results are reproducible
    regardless of parallelism."""
    if draws < 10_000:
        raise ValueError("draws must be at least 10^4")

    sums = np.zeros(4)
    sumsqs = np.zeros(4)
    done = 0
    chunk_index = 0
    while done < draws:
        n = min(_MC_CHUNK, draws - done)
        pt, _ = generate_potentials(design, n, rng.mix_seed(seed, chunk_index))
        m0 = pt.m0.astype(float)
        m1 = pt.m1.astype(float)
        t_dir = pt.y10 - pt.y00
        t_ind = (pt.y11 - pt.y10) * (m1 - m0)
        t_int = (pt.y11 - pt.y10 - pt.y01 + pt.y00) * m0
        t_tot = t_dir + t_ind + t_int
        terms = (t_tot, t_dir, t_ind, t_int)
        sums += np.array([t.sum() for t in terms])
        sumsqs += np.array([np.square(t).sum() for t in terms])
        done += n
        chunk_index += 1

    means = sums / draws
    variances = np.maximum(sumsqs / draws - means**2, 0.0)
    ses = np.sqrt(variances / draws)
    return MonteCarloEffects(
        effects=EffectVector(*(float(v) for v in means)),
        mc_se=EffectVector(*(float(v) for v in ses)),
        draws=draws,
    )


def analytic_effects(design: SimulationDesign) -> EffectVector:
    """Closed-form true effects, available for the continuous-outcome designs."""
    if design.id == 1:
        return true_effects_linear(design.params)
    if design.id == 3:
        return true_effects_threshold_normal(design.params, design.x_variance)
    raise TrieffectError(f"design {design.id} has no closed-form effects; use the MC oracle")


def true_effects(
    design: SimulationDesign,
    method: str = "auto",
    draws: int = 1_000_000,
    seed: int = 0,
) -> tuple[EffectVector, EffectVector | None]:
    """True effects for a design; returns (effects, mc_se or None)."""
    if method not in ("auto", "analytic", "mc"):
        raise ValueError(f"unknown method {method!r}")
    if method == "analytic" or (method == "auto" and design.id in (1, 3)):
        return analytic_effects(design), None
    mc = true_effects_montecarlo(design, draws, seed)
    return mc.effects, mc.mc_se
