"""Core domain types: observed samples, potential-outcome tables, effect estimates."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatchError, NonBinaryColumnError, NonFiniteValueError

EFFECT_NAMES = ("total", "direct", "indirect", "interaction")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Observed sample: real outcome y, binary treatment d, binary mediator m,
    real covariate matrix x (no intercept column).

    Immutable after construction; safe to share across threads.
    """

    y: np.ndarray
    d: np.ndarray
    m: np.ndarray
    x: np.ndarray
    column_names: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def k_x(self) -> int:
        return self.x.shape[1]

    def cell_counts(self) -> dict[tuple[int, int], int]:
        """Observation counts for the four (D, M) cells."""
        return {
            (dv, mv): int(np.sum((self.d == dv) & (self.m == mv)))
            for dv in (0, 1)
            for mv in (0, 1)
        }

    def empty_cells(self) -> list[tuple[int, int]]:
        return [cell for cell, cnt in self.cell_counts().items() if cnt == 0]

    def to_dict(self) -> dict:
        return {
            "y": self.y.tolist(),
            "d": self.d.astype(int).tolist(),
            "m": self.m.astype(int).tolist(),
            "x": self.x.tolist(),
            "column_names": list(self.column_names),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Dataset":
        return validate_dataset(
            payload["y"],
            payload["d"],
            payload["m"],
            payload["x"],
            column_names=payload.get("column_names"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        return cls.from_dict(json.loads(text))


def _check_binary(name: str, values: np.ndarray) -> np.ndarray:
    bad = ~((values == 0) | (values == 1))
    if np.any(bad):
        raise NonBinaryColumnError(name, values[bad][0])
    return values.astype(np.int8)


def validate_dataset(y, d, m, x=None, column_names=None) -> Dataset:
    """Build a Dataset, enforcing its invariants.

    Raises NonBinaryColumnError, LengthMismatchError or NonFiniteValueError.
    Empty (D, M) cells are allowed here but reported as a warning; estimators
    that need a cell reject it themselves.
    """
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    m = np.asarray(m, dtype=float)
    if x is None or (hasattr(x, "__len__") and len(x) == 0):
        x = np.empty((y.shape[0], 0), dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)

    n = y.shape[0]
    if n < 1:
        raise LengthMismatchError("dataset must contain at least one observation")
    for name, col in (("d", d), ("m", m)):
        if col.shape != (n,):
            raise LengthMismatchError(f"column {name!r} has length {col.shape[0]}, expected {n}")
    if x.shape[0] != n:
        raise LengthMismatchError(f"covariate matrix has {x.shape[0]} rows, expected {n}")

    for name, col in (("y", y), ("d", d), ("m", m)):
        if not np.all(np.isfinite(col)):
            raise NonFiniteValueError(name)
    if not np.all(np.isfinite(x)):
        raise NonFiniteValueError("x")

    d = _check_binary("d", d)
    m = _check_binary("m", m)

    if column_names is None:
        column_names = tuple(f"x{i + 1}" for i in range(x.shape[1]))
    else:
        column_names = tuple(column_names)
    if len(column_names) != x.shape[1]:
        raise LengthMismatchError(
            f"{len(column_names)} column names supplied for {x.shape[1]} covariates"
        )

    data = Dataset(_frozen(y), _frozen(d), _frozen(m), _frozen(x), column_names)
    empty = data.empty_cells()
    if empty:
        warnings.warn(f"empty (D, M) cells: {empty}", stacklevel=2)
    return data


@dataclass(frozen=True)
class PotentialTable:
    """Unit-level potential outcomes: mediator under d=0/1 and the four
    outcomes y^{dm}."""

    m0: np.ndarray
    m1: np.ndarray
    y00: np.ndarray
    y01: np.ndarray
    y10: np.ndarray
    y11: np.ndarray

    @property
    def n(self) -> int:
        return self.m0.shape[0]

    def observe(self, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Observed (m, y) under assignment d, by the consistency rule."""
        d = np.asarray(d)
        m = np.where(d == 1, self.m1, self.m0)
        y = (
            (1 - d) * (1 - m) * self.y00
            + (1 - d) * m * self.y01
            + d * (1 - m) * self.y10
            + d * m * self.y11
        )
        return m, y


@dataclass(frozen=True)
class Effect:
    point: float
    se: float
    t: float = field(default=math.nan)

    @staticmethod
    def from_point_se(point: float, se: float) -> "Effect":
        t = point / se if se > 0 else math.nan
        return Effect(float(point), float(se), float(t))


@dataclass(frozen=True)
class EffectVector:
    """Point values of the four effects, for true-effect oracles."""

    total: float
    direct: float
    indirect: float
    interaction: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.total, self.direct, self.indirect, self.interaction)

    @staticmethod
    def from_parts(direct: float, indirect: float, interaction: float) -> "EffectVector":
        return EffectVector(direct + indirect + interaction, direct, indirect, interaction)


@dataclass(frozen=True)
class EffectEstimates:
    """Point estimate, asymptotic SE and t-ratio for each of the four effects."""

    total: Effect
    direct: Effect
    indirect: Effect
    interaction: Effect
    n: int
    estimator_id: str
    complier_share: float

    def __getitem__(self, name: str) -> Effect:
        if name not in EFFECT_NAMES:
            raise KeyError(name)
        return getattr(self, name)

    def points(self) -> EffectVector:
        return EffectVector(
            self.total.point, self.direct.point, self.indirect.point, self.interaction.point
        )

    def to_dict(self) -> dict:
        def eff(e: Effect) -> dict:
            return {
                "point": e.point,
                "se": e.se,
                "t": e.t if math.isfinite(e.t) else None,
            }

        return {
            "estimator": self.estimator_id,
            "n": self.n,
            "effects": {name: eff(self[name]) for name in EFFECT_NAMES},
            "complier_share": self.complier_share,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
