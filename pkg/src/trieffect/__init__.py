"""Three-effect decomposition (direct, indirect, interaction) of a binary
treatment's total effect with a binary mediator."""

from .basis import BasisSpec, expand_basis, linear_spec, quadratic_phi_spec, quadratic_spec
from .constant import ConstantFit, effects_constant, estimate_constant, fit_constant
from .designs import LinearParams, SimulationDesign, generate_dataset, generate_potentials
from .estimators import ConstantEffectDecomposition, VaryingEffectDecomposition
from .io import ColumnMapping, LoadResult, load_csv, write_outputs
from .ols import LsFit, ScoreSet, influence_scores, least_squares, variance_of_sum
from .oracle import (
    MonteCarloEffects,
    NaturalEffects,
    effects_from_cells,
    natural_effects_linear,
    population_effects_from_potentials,
    true_effects,
    true_effects_linear,
    true_effects_montecarlo,
    true_effects_threshold_normal,
)
from .simulate import SimulationReport, run_study, standard_estimator
from .types import (
    Dataset,
    Effect,
    EffectEstimates,
    EffectVector,
    PotentialTable,
    validate_dataset,
)
from .varying import VaryingFit, effects_varying, estimate_varying, fit_varying

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "ColumnMapping",
    "ConstantEffectDecomposition",
    "ConstantFit",
    "Dataset",
    "Effect",
    "EffectEstimates",
    "EffectVector",
    "LinearParams",
    "LoadResult",
    "LsFit",
    "MonteCarloEffects",
    "NaturalEffects",
    "PotentialTable",
    "ScoreSet",
    "SimulationDesign",
    "SimulationReport",
    "VaryingEffectDecomposition",
    "VaryingFit",
    "effects_constant",
    "effects_from_cells",
    "effects_varying",
    "estimate_constant",
    "estimate_varying",
    "expand_basis",
    "fit_constant",
    "fit_varying",
    "generate_dataset",
    "generate_potentials",
    "influence_scores",
    "least_squares",
    "linear_spec",
    "load_csv",
    "natural_effects_linear",
    "population_effects_from_potentials",
    "quadratic_phi_spec",
    "quadratic_spec",
    "run_study",
    "standard_estimator",
    "true_effects",
    "true_effects_linear",
    "true_effects_montecarlo",
    "true_effects_threshold_normal",
    "validate_dataset",
    "variance_of_sum",
    "write_outputs",
]
