"""CSV ingestion with explicit column mapping, and output serialization.

CSV files are comma-separated, UTF-8, with a header row and '.' decimal
point. A mapping entry is either a plain column name or a derivation:
``ln(col)`` (natural log) or ``threshold(col, c)`` (indicator of col >= c).
Rows with a missing value (empty field or "NA") in any mapped column are
dropped with a reported count; nothing is imputed.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CsvParseError, MissingColumnError, TrieffectError
from .types import EFFECT_NAMES, Dataset, EffectEstimates, validate_dataset

_MISSING = {"", "NA"}

_RULE_RE = re.compile(r"^(ln|threshold)\(\s*([^(),]+?)\s*(?:,\s*([^(),]+?)\s*)?\)$")


@dataclass(frozen=True)
class ColumnRule:
    """A source column plus an optional transform."""

    column: str
    transform: str = "identity"  # identity | ln | threshold
    cutoff: float | None = None

    def apply(self, value: float) -> float:
        if self.transform == "ln":
            return math.log(value)
        if self.transform == "threshold":
            return 1.0 if value >= self.cutoff else 0.0
        return value


def parse_column_rule(text: str) -> ColumnRule:
    text = text.strip()
    m = _RULE_RE.match(text)
    if not m:
        if "(" in text or ")" in text:
            raise TrieffectError(f"cannot parse column rule {text!r}")
        return ColumnRule(text)
    kind, col, arg = m.groups()
    if kind == "ln":
        if arg is not None:
            raise TrieffectError(f"ln() takes one column name, got {text!r}")
        return ColumnRule(col, "ln")
    if arg is None:
        raise TrieffectError(f"threshold() needs a cutoff, got {text!r}")
    return ColumnRule(col, "threshold", float(arg))


@dataclass(frozen=True)
class ColumnMapping:
    """Binds file columns to the (y, d, m, x) roles. Entries accept the rule
    syntax above, e.g. m="threshold(ed, 12)"."""

    y: str
    d: str
    m: str
    x: tuple[str, ...] = ()

    def rules(self) -> dict[str, ColumnRule]:
        out = {"y": parse_column_rule(self.y), "d": parse_column_rule(self.d),
               "m": parse_column_rule(self.m)}
        for i, entry in enumerate(self.x):
            out[f"x{i}"] = parse_column_rule(entry)
        return out

    def x_labels(self) -> tuple[str, ...]:
        return tuple(entry.strip() for entry in self.x)


@dataclass(frozen=True)
class LoadResult:
    dataset: Dataset
    dropped_rows: int
    total_rows: int


def load_csv(path, mapping: ColumnMapping) -> LoadResult:
    """Read a CSV file into a Dataset via the mapping.

    Raises MissingColumnError for unknown columns, CsvParseError for
    non-numeric fields, and the validation errors of validate_dataset (e.g.
    NonBinaryColumnError after a threshold derivation).
    """
    path = Path(path)
    rules = mapping.rules()

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(1, "file is empty") from None
        header = [h.strip() for h in header]
        index = {name: i for i, name in enumerate(header)}
        for rule in rules.values():
            if rule.column not in index:
                raise MissingColumnError(rule.column)

        roles = list(rules)
        columns: dict[str, list[float]] = {role: [] for role in roles}
        total = dropped = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            total += 1
            raw = {}
            missing = False
            for role in roles:
                rule = rules[role]
                field = row[index[rule.column]].strip() if index[rule.column] < len(row) else ""
                if field in _MISSING:
                    missing = True
                    break
                raw[role] = (rule, field)
            if missing:
                dropped += 1
                continue
            for role, (rule, field) in raw.items():
                try:
                    value = float(field)
                except ValueError:
                    raise CsvParseError(
                        lineno, f"non-numeric value {field!r} in column {rule.column!r}"
                    ) from None
                columns[role].append(rule.apply(value))

    x_roles = [r for r in roles if r.startswith("x")]
    x = (
        np.array([columns[r] for r in x_roles]).T
        if x_roles
        else np.empty((len(columns["y"]), 0))
    )
    data = validate_dataset(
        columns["y"], columns["d"], columns["m"], x, column_names=mapping.x_labels()
    )
    return LoadResult(data, dropped, total)


def write_dataset_csv(data: Dataset, path) -> None:
    """Write a Dataset as CSV with full float precision (round-trip exact)."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["y", "d", "m", *data.column_names])
        for i in range(data.n):
            writer.writerow(
                [repr(float(data.y[i])), int(data.d[i]), int(data.m[i])]
                + [repr(float(v)) for v in data.x[i]]
            )


def render_estimates_text(est: EffectEstimates) -> str:
    lines = [f"estimator {est.estimator_id}  N={est.n}"]
    lines.append(f"{'effect':<12} {'point':>10} {'se':>10} {'t':>8}")
    for name in EFFECT_NAMES:
        e = est[name]
        t = f"{e.t:8.2f}" if math.isfinite(e.t) else "      --"
        lines.append(f"{name:<12} {e.point:10.4f} {e.se:10.4f} {t}")
    lines.append(f"complier share: {est.complier_share:.4f}")
    return "\n".join(lines)


def render(obj, fmt: str = "json") -> str:
    if fmt == "json":
        return obj.to_json() + "\n"
    if fmt == "text":
        if isinstance(obj, EffectEstimates):
            return render_estimates_text(obj) + "\n"
        return obj.to_text() + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_outputs(obj, path, fmt: str = "json") -> None:
    """Serialize an EffectEstimates or SimulationReport; identical inputs
    give identical bytes."""
    try:
        Path(path).write_text(render(obj, fmt), encoding="utf-8")
    except OSError as err:
        raise TrieffectError(f"cannot write {path}: {err}") from err
