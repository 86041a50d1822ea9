"""Scikit-learn style wrappers around the two decomposition estimators.

Both accept a Dataset in fit() and expose the fitted decomposition through
``effects_``; parameters round-trip through get_params/set_params so the
estimators compose with sklearn tooling (cloning, grid search over bases).
"""
from __future__ import annotations

from sklearn.base import BaseEstimator

from .basis import BasisSpec
from .constant import effects_constant, fit_constant
from .types import Dataset
from .varying import effects_varying, fit_varying


class ConstantEffectDecomposition(BaseEstimator):
    """Constant-effect OLS decomposition of the total treatment effect."""

    def __init__(self, drop_collinear: bool = False):
        self.drop_collinear = drop_collinear

    def fit(self, data: Dataset, y=None):
        self.fit_ = fit_constant(data, drop_collinear=self.drop_collinear)
        self.effects_ = effects_constant(self.fit_)
        self.n_features_in_ = data.k_x
        return self

    def predict(self, data: Dataset = None):
        """Point estimates (total, direct, indirect, interaction)."""
        return self.effects_.points().as_tuple()


class VaryingEffectDecomposition(BaseEstimator):
    """Covariate-heterogeneous OLS decomposition with a configurable basis.

    ``basis`` is a BasisSpec, a basis-grammar string applied to all six
    blocks, or None for the default linear basis.
    """

    def __init__(self, basis: BasisSpec | str | None = None, drop_collinear: bool = False):
        self.basis = basis
        self.drop_collinear = drop_collinear

    def _spec(self) -> BasisSpec | None:
        if self.basis is None or isinstance(self.basis, BasisSpec):
            return self.basis
        return BasisSpec.from_text(self.basis)

    def fit(self, data: Dataset, y=None):
        self.fit_ = fit_varying(data, self._spec(), drop_collinear=self.drop_collinear)
        self.effects_ = effects_varying(self.fit_)
        self.n_features_in_ = data.k_x
        return self

    def predict(self, data: Dataset = None):
        return self.effects_.points().as_tuple()
