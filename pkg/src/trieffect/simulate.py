"""Repetition engine and bias/Sd/Rmse/asymptotic-Sd reporting.

Each repetition draws a fresh dataset from a seed derived by a 64-bit
avalanche mix of (base seed, repetition index), so repetitions are
independent, parallel-safe and order-independent. Metrics are normalized by
the absolute true effect unless that is below 1e-6.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import rng
from .basis import BasisSpec, linear_spec, quadratic_phi_spec, quadratic_spec
from .constant import estimate_constant
from .designs import SimulationDesign, generate_dataset
from .errors import AllRepsFailedError, TrieffectError
from .oracle import true_effects
from .types import EFFECT_NAMES, Dataset, EffectEstimates, EffectVector
from .varying import estimate_varying

NORMALIZATION_FLOOR = 1e-6

EstimatorFn = Callable[[Dataset], EffectEstimates]


def standard_estimator(
    label: str, basis: BasisSpec | str | None = None, drop_collinear: bool = False
) -> EstimatorFn:
    """Resolve a roster label to an estimator callable.

    Labels: "c" (constant), "v1" (linear basis), "v2" (linear + squares),
    "v3" (v2 + normal-CDF transform), "v" (custom basis, required argument).
    """
    if label == "c":
        return lambda data: estimate_constant(data, drop_collinear=drop_collinear)
    spec_builder: Callable[[tuple[str, ...]], BasisSpec]
    if label == "v1":
        spec_builder = linear_spec
    elif label == "v2":
        spec_builder = quadratic_spec
    elif label == "v3":
        spec_builder = quadratic_phi_spec
    elif label == "v" or label.startswith("v:"):
        if basis is None:
            raise ValueError(f"estimator {label!r} requires a basis spec")
        fixed = basis if isinstance(basis, BasisSpec) else BasisSpec.from_text(basis)
        return lambda data: estimate_varying(data, fixed, drop_collinear=drop_collinear)
    else:
        raise ValueError(f"unknown estimator label {label!r}")
    return lambda data: estimate_varying(
        data, spec_builder(data.column_names), drop_collinear=drop_collinear
    )


@dataclass(frozen=True)
class MetricCell:
    bias: float
    sd: float
    rmse: float
    asy_sd: float
    normalized: bool

    def to_dict(self) -> dict:
        return {
            "bias": self.bias,
            "sd": self.sd,
            "rmse": self.rmse,
            "asy_sd": self.asy_sd,
            "normalized": self.normalized,
        }


@dataclass(frozen=True)
class SimulationReport:
    design_id: int
    n: int
    reps: int
    seed: int
    true: EffectVector
    true_mc_se: EffectVector | None
    metrics: dict[str, dict[str, MetricCell]]  # label -> effect -> cell
    estimator_ids: dict[str, str]
    failures: dict[str, int]

    def to_dict(self) -> dict:
        out = {
            "design": self.design_id,
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "true": {name: getattr(self.true, name) for name in EFFECT_NAMES},
            "true_mc_se": (
                {name: getattr(self.true_mc_se, name) for name in EFFECT_NAMES}
                if self.true_mc_se is not None
                else None
            ),
            "estimators": {
                label: {
                    "estimator_id": self.estimator_ids[label],
                    "failed": self.failures[label],
                    "metrics": {
                        name: cell.to_dict() for name, cell in self.metrics[label].items()
                    },
                }
                for label in self.metrics
            },
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        """Aligned grid with |Bias| Sd (Rmse) AsySd cells."""
        short = {"total": "tot", "direct": "dir", "indirect": "ind", "interaction": "int"}
        lines = [
            f"design {self.design_id}  N={self.n}  reps={self.reps}  seed={self.seed}",
            "true:  " + "  ".join(
                f"{short[name]}={getattr(self.true, name):.4f}" for name in EFFECT_NAMES
            ),
            "cells: |Bias| Sd (Rmse) AsySd, each / |true effect|",
        ]
        for label in self.metrics:
            lines.append(f"[{label}]  id={self.estimator_ids[label]}  failed={self.failures[label]}")
            for name in EFFECT_NAMES:
                c = self.metrics[label][name]
                flag = "" if c.normalized else "  (unnormalized)"
                lines.append(
                    f"  {short[name]}  {abs(c.bias):.2f} {c.sd:.2f} ({c.rmse:.2f}) {c.asy_sd:.2f}{flag}"
                )
        return "\n".join(lines)


def _one_rep(design, n, seed, rep, roster):
    data, _ = generate_dataset(design, n, rng.mix_seed(seed, rep))
    out = {}
    for label, fn in roster:
        try:
            out[label] = fn(data)
        except TrieffectError:
            out[label] = None
    return out


def run_study(
    design: SimulationDesign,
    n: int,
    reps: int,
    estimators=("c", "v1"),
    seed: int = 0,
    basis: BasisSpec | str | None = None,
    threads: int = 1,
    true: tuple[EffectVector, EffectVector | None] | None = None,
    true_draws: int = 1_000_000,
) -> SimulationReport:
    """Run the repetition study and return the normalized metric report.

    Repetitions where an estimator raises (e.g. an empty cell at small n)
    are excluded for that estimator and counted in the report.
    """
    if reps < 2:
        raise ValueError("reps must be >= 2")
    roster = [(label, standard_estimator(label, basis)) for label in estimators]

    if true is None:
        true_vec, true_se = true_effects(
            design, "auto", draws=true_draws, seed=rng.mix_seed(seed, 1 << 62)
        )
    else:
        true_vec, true_se = true

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda r: _one_rep(design, n, seed, r, roster), range(reps))
            )
    else:
        results = [_one_rep(design, n, seed, r, roster) for r in range(reps)]

    metrics: dict[str, dict[str, MetricCell]] = {}
    estimator_ids: dict[str, str] = {}
    failures: dict[str, int] = {}
    for label, _ in roster:
        estimates = [res[label] for res in results if res[label] is not None]
        failures[label] = reps - len(estimates)
        if not estimates:
            raise AllRepsFailedError(f"estimator {label!r} failed in every repetition")
        estimator_ids[label] = estimates[0].estimator_id

        cells: dict[str, MetricCell] = {}
        for name in EFFECT_NAMES:
            truth = getattr(true_vec, name)
            points = np.array([est[name].point for est in estimates])
            ses = np.array([est[name].se for est in estimates])
            bias = float(points.mean() - truth)
            sd = float(points.std(ddof=0))
            rmse = float(np.sqrt(np.mean((points - truth) ** 2)))
            asy = float(ses.mean())
            normalized = abs(truth) >= NORMALIZATION_FLOOR
            scale = abs(truth) if normalized else 1.0
            cells[name] = MetricCell(
                bias=bias / scale,
                sd=sd / scale,
                rmse=rmse / scale,
                asy_sd=asy / scale,
                normalized=normalized,
            )
        metrics[label] = cells

    return SimulationReport(
        design_id=design.id,
        n=n,
        reps=reps,
        seed=seed,
        true=true_vec,
        true_mc_se=true_se,
        metrics=metrics,
        estimator_ids=estimator_ids,
        failures=failures,
    )
