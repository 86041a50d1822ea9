"""Data generating processes for the four simulation designs.

All designs share one linear parameterization. The mediator is a threshold
crossing: designs 1-2 use a Uni[0,1] error with threshold 1 (so E(M^d | X)
is linear), designs 3-4 a N(0,1) error with threshold 0. The outcome is
continuous in designs 1 and 3 and binarized at zero ("probit") in 2 and 4.
Covariates are Uni[0,1] in designs 1-2 and N(0, 4) in designs 3-4.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .types import Dataset, PotentialTable, validate_dataset


@dataclass(frozen=True)
class LinearParams:
    """Coefficients of the linear mediator and outcome models plus E(X)."""

    alpha1: float
    alpha_d: float
    alpha_x: tuple[float, ...]
    beta1: float
    beta_d: float
    beta_m: float
    beta_dm: float
    beta_x: tuple[float, ...]
    x_mean: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha_x", tuple(float(v) for v in self.alpha_x))
        object.__setattr__(self, "beta_x", tuple(float(v) for v in self.beta_x))
        object.__setattr__(self, "x_mean", tuple(float(v) for v in self.x_mean))
        if not (len(self.alpha_x) == len(self.beta_x) == len(self.x_mean)):
            raise ValueError("alpha_x, beta_x and x_mean must have equal length")

    @property
    def k_x(self) -> int:
        return len(self.alpha_x)


def default_params(x_mean: float) -> LinearParams:
    return LinearParams(
        alpha1=0.0,
        alpha_d=0.5,
        alpha_x=(0.5,),
        beta1=0.0,
        beta_d=0.5,
        beta_m=0.5,
        beta_dm=0.5,
        beta_x=(-1.0,),
        x_mean=(x_mean,),
    )


@dataclass(frozen=True)
class SimulationDesign:
    """One of the four study designs; the id fixes the covariate law, the
    mediator error and the outcome kind jointly."""

    id: int
    params: LinearParams = field(default=None)  # type: ignore[assignment]
    p_treat: float = 0.5

    def __post_init__(self):
        if self.id not in (1, 2, 3, 4):
            raise ValueError(f"design id must be 1..4, got {self.id}")
        if self.params is None:
            object.__setattr__(self, "params", default_params(self.x_mean_default))

    @property
    def uniform_mediator_error(self) -> bool:
        return self.id in (1, 2)

    @property
    def mediator_threshold(self) -> float:
        return 1.0 if self.uniform_mediator_error else 0.0

    @property
    def probit_outcome(self) -> bool:
        return self.id in (2, 4)

    @property
    def x_sd(self) -> float:
        return 0.0 if self.id in (1, 2) else 2.0  # Uni[0,1] vs N(0, 4)

    @property
    def x_mean_default(self) -> float:
        return 0.5 if self.id in (1, 2) else 0.0

    @property
    def x_variance(self) -> float:
        return 1.0 / 12.0 if self.id in (1, 2) else 4.0


def generate_potentials(design: SimulationDesign, n: int, seed: int) -> tuple[PotentialTable, np.ndarray]:
    """Draw n units of potential outcomes; returns the table and the n x k_x
    covariate matrix. Fixed draw order: X, mediator error, outcome error."""
    p = design.params
    gen = rng.make_generator(seed)
    k = p.k_x
    if design.id in (1, 2):
        x = gen.random((n, k))
    else:
        x = 2.0 * rng.normal(gen, n * k).reshape(n, k)
    e = gen.random(n) if design.uniform_mediator_error else rng.normal(gen, n)
    u = rng.normal(gen, n)

    ax = np.asarray(p.alpha_x)
    bx = np.asarray(p.beta_x)
    index0 = p.alpha1 + x @ ax + e
    thresh = design.mediator_threshold
    m0 = (thresh < index0).astype(np.int8)
    m1 = (thresh < index0 + p.alpha_d).astype(np.int8)

    base = p.beta1 + x @ bx + u
    y = {}
    for d in (0, 1):
        for m in (0, 1):
            cont = base + p.beta_d * d + p.beta_m * m + p.beta_dm * d * m
            y[(d, m)] = (0.0 < cont).astype(float) if design.probit_outcome else cont

    return PotentialTable(m0, m1, y[(0, 0)], y[(0, 1)], y[(1, 0)], y[(1, 1)]), x


def generate_dataset(design: SimulationDesign, n: int, seed: int) -> tuple[Dataset, PotentialTable]:
    """Generate an observed sample: randomized D, then (M, Y) by consistency.
    Identical (design, n, seed) gives bit-identical output."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pt, x = generate_potentials(design, n, rng.mix_seed(seed, 0))
    gen_d = rng.make_generator(rng.mix_seed(seed, 1))
    d = (gen_d.random(n) < design.p_treat).astype(np.int8)
    m, y = pt.observe(d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # tiny samples may have empty cells
        data = validate_dataset(y, d, m, x)
    return data, pt
