"""Declarative covariate-basis recipes for the varying-effect estimator.

Grammar (comma-separated terms):
    term   := "1" | factor ("*" factor)*
    factor := name | name "^" k | "phi(" name ")"
where k is a positive integer and phi is the standard normal CDF.
An intercept term "1" is always implicitly first in every block.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import BasisError
from .types import Dataset

BLOCKS = ("x0", "x1", "x2", "x3", "x4", "xm")

_FACTOR_RE = re.compile(r"^(?:phi\(\s*([^()\s]+)\s*\)|([^()*^\s]+)(?:\^(\d+))?)$")


@dataclass(frozen=True)
class Factor:
    name: str
    power: int = 1
    phi: bool = False

    def text(self) -> str:
        if self.phi:
            return f"phi({self.name})"
        return self.name if self.power == 1 else f"{self.name}^{self.power}"


@dataclass(frozen=True)
class Term:
    factors: tuple[Factor, ...]  # empty tuple is the intercept

    def text(self) -> str:
        return "1" if not self.factors else "*".join(f.text() for f in self.factors)

    def names(self) -> set[str]:
        return {f.name for f in self.factors}


INTERCEPT = Term(())


def _parse_factor(text: str) -> Factor:
    m = _FACTOR_RE.match(text)
    if not m:
        raise BasisError(f"cannot parse basis factor {text!r}")
    phi_name, name, power = m.groups()
    if phi_name is not None:
        return Factor(phi_name, phi=True)
    k = int(power) if power else 1
    if k < 1:
        raise BasisError(f"power must be a positive integer in {text!r}")
    return Factor(name, power=k)


def parse_terms(text: str) -> tuple[Term, ...]:
    """Parse a comma-separated term list; intercept is prepended and the
    list de-duplicated preserving order."""
    terms: list[Term] = [INTERCEPT]
    for raw in text.split(","):
        raw = raw.strip()
        if not raw:
            continue
        if raw == "1":
            term = INTERCEPT
        else:
            term = Term(tuple(_parse_factor(p.strip()) for p in raw.split("*")))
        if term not in terms:
            terms.append(term)
    return tuple(terms)


@dataclass(frozen=True)
class BasisSpec:
    """Per-block term lists for the six covariate expansions."""

    x0: tuple[Term, ...]
    x1: tuple[Term, ...]
    x2: tuple[Term, ...]
    x3: tuple[Term, ...]
    x4: tuple[Term, ...]
    xm: tuple[Term, ...]

    def block(self, name: str) -> tuple[Term, ...]:
        return getattr(self, name)

    @classmethod
    def uniform(cls, text: str) -> "BasisSpec":
        """Same term list for all six blocks."""
        terms = parse_terms(text)
        return cls(*(terms for _ in BLOCKS))

    @classmethod
    def from_text(cls, text: str) -> "BasisSpec":
        """Parse either a bare term list (applied to all blocks) or lines of
        the form ``x0: 1, age, age^2`` for individual blocks."""
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) == 1 and ":" not in lines[0]:
            return cls.uniform(lines[0])
        blocks: dict[str, tuple[Term, ...]] = {}
        for ln in lines:
            if ":" not in ln:
                raise BasisError(f"expected 'block: terms', got {ln!r}")
            key, _, rest = ln.partition(":")
            key = key.strip().lower()
            if key not in BLOCKS:
                raise BasisError(f"unknown basis block {key!r}; expected one of {BLOCKS}")
            blocks[key] = parse_terms(rest)
        missing = [b for b in BLOCKS if b not in blocks]
        if missing:
            raise BasisError(f"basis spec is missing blocks {missing}")
        return cls(**blocks)

    def to_text(self) -> str:
        return "\n".join(
            f"{name}: " + ", ".join(t.text() for t in self.block(name)) for name in BLOCKS
        )

    def spec_hash(self) -> str:
        return hashlib.sha1(self.to_text().encode()).hexdigest()[:8]

    def drop_term(self, block: str, term: Term) -> "BasisSpec":
        kept = {b: self.block(b) for b in BLOCKS}
        kept[block] = tuple(t for t in kept[block] if t != term)
        return BasisSpec(**kept)

    def validate(self, column_names: tuple[str, ...]) -> None:
        known = set(column_names)
        for b in BLOCKS:
            for term in self.block(b):
                unknown = term.names() - known
                if unknown:
                    raise BasisError(
                        f"basis block {b!r} references unknown columns {sorted(unknown)}"
                    )


def linear_spec(column_names) -> BasisSpec:
    """Default: linear in all raw covariates for all six blocks."""
    return BasisSpec.uniform(", ".join(column_names))


def quadratic_spec(column_names) -> BasisSpec:
    terms = list(column_names) + [f"{c}^2" for c in column_names]
    return BasisSpec.uniform(", ".join(terms))


def quadratic_phi_spec(column_names) -> BasisSpec:
    terms = list(column_names) + [f"{c}^2" for c in column_names] + [f"phi({c})" for c in column_names]
    return BasisSpec.uniform(", ".join(terms))


def _eval_term(term: Term, columns: dict[str, np.ndarray], n: int) -> np.ndarray:
    out = np.ones(n)
    for f in term.factors:
        col = columns[f.name]
        out = out * (ndtr(col) if f.phi else col**f.power)
    return out


def expand_block(data: Dataset, terms: tuple[Term, ...]) -> tuple[np.ndarray, tuple[str, ...]]:
    columns = {name: data.x[:, j] for j, name in enumerate(data.column_names)}
    mat = np.column_stack([_eval_term(t, columns, data.n) for t in terms])
    return mat, tuple(t.text() for t in terms)


def expand_basis(data: Dataset, spec: BasisSpec) -> dict[str, tuple[np.ndarray, tuple[str, ...]]]:
    """Expand all six blocks; column order follows the spec, intercept first."""
    spec.validate(data.column_names)
    return {b: expand_block(data, spec.block(b)) for b in BLOCKS}
