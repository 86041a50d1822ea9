import numpy as np
import pytest

from trieffect import BasisSpec, estimate_constant, estimate_varying, validate_dataset
from trieffect.designs import SimulationDesign, generate_dataset
from trieffect.errors import RankDeficientError, TreatedCellMissingError
from trieffect.oracle import analytic_effects, effects_from_cells
from trieffect.varying import fit_varying, varying_contrasts

from conftest import binary_x_dataset, random_dataset, saturated_binary_spec

CONSTANT_BASIS = BasisSpec.uniform("1")


def test_constant_basis_reduces_to_constant_estimator(four_point):
    est = estimate_varying(four_point, CONSTANT_BASIS)
    assert est.points().as_tuple() == pytest.approx((3.0, 2.0, 0.0, 1.0), abs=1e-12)
    ref = estimate_constant(four_point)
    for name in ("total", "direct", "indirect", "interaction"):
        assert est[name].point == pytest.approx(ref[name].point, abs=1e-12)


def test_no_treated_observations_rejected():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        data = validate_dataset(y=[1.0, 2.0], d=[0, 0], m=[0, 1])
    with pytest.raises(TreatedCellMissingError):
        fit_varying(data, CONSTANT_BASIS)


def test_missing_treated_mediator_value_rejected():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        data = validate_dataset(y=[1.0, 2.0, 3.0, 4.0], d=[0, 0, 1, 1], m=[0, 1, 0, 0])
    with pytest.raises(TreatedCellMissingError):
        fit_varying(data, CONSTANT_BASIS)


def test_dy_regression_equals_treated_subsample_fit():
    data = random_dataset(21, n=300)
    fit = fit_varying(data)
    # rebuild Q2 = (X2', X2'M) and fit Y on it over D=1 rows only
    x2 = np.column_stack([np.ones(data.n), data.x])
    q2 = np.column_stack([x2, x2 * data.m.astype(float)[:, None]])
    treated = data.d == 1
    sub, *_ = np.linalg.lstsq(q2[treated], data.y[treated], rcond=None)
    assert np.max(np.abs(fit.q2_fit.coefficients - sub)) <= 1e-10


def test_contrast_zero_patterns():
    # b4x never enters any effect; each contrast touches only its own blocks
    data = random_dataset(22)
    fit = fit_varying(data)
    k0, k1, k2, k3, k4, km = (fit.dims[b] for b in ("x0", "x1", "x2", "x3", "x4", "xm"))
    g = varying_contrasts(fit)
    g1, g31 = g["g1"], g["g31"]
    assert np.all(g1[:k0] == 0) and np.all(g1[k0 + k1:] == 0)
    assert np.any(g1[k0: k0 + k1] != 0)
    assert np.all(g31[: k0 + k1 + k4] == 0)  # covers the b4x slots
    assert np.all(g["g21"][:k2] == 0)
    assert np.all(g["g22"][:km] == 0)
    assert np.all(g["g32"][km:] == 0)


def test_score_families_sum_to_zero():
    from trieffect.ols import influence_scores

    data = random_dataset(23)
    fit = fit_varying(data)
    g = varying_contrasts(fit)
    pairs = [("g1", fit.q0_fit), ("g21", fit.q2_fit), ("g22", fit.qm_fit),
             ("g31", fit.q0_fit), ("g32", fit.qm_fit)]
    for name, lsfit in pairs:
        s = influence_scores(g[name], lsfit).scores
        assert abs(s.sum()) <= 1e-8 * max(1.0, np.abs(s).sum())


def test_additivity_exact_on_fuzzed_data():
    for seed in range(8):
        est = estimate_varying(random_dataset(seed, n=250))
        lhs = est.total.point
        rhs = est.direct.point + est.indirect.point + est.interaction.point
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_saturated_basis_matches_cell_mean_oracle():
    data = binary_x_dataset(31)
    est = estimate_varying(data, saturated_binary_spec())
    oracle = effects_from_cells(data)
    for name in ("total", "direct", "indirect", "interaction"):
        assert abs(est[name].point - getattr(oracle, name)) <= 1e-8


def test_saturated_b2x_is_within_cell_mean_difference():
    data = binary_x_dataset(32)
    fit = fit_varying(data, saturated_binary_spec())
    for xv in (0.0, 1.0):
        rows = data.x[:, 0] == xv
        diff = (
            data.y[rows & (data.d == 1) & (data.m == 1)].mean()
            - data.y[rows & (data.d == 1) & (data.m == 0)].mean()
        )
        assert fit.b2x @ np.array([1.0, xv]) == pytest.approx(diff, abs=1e-10)


def test_consistency_on_linear_design():
    design = SimulationDesign(1)
    data, _ = generate_dataset(design, 200_000, seed=9)
    est = estimate_varying(data)  # default linear basis
    truth = analytic_effects(design)
    for name in ("total", "direct", "indirect", "interaction"):
        assert est[name].point == pytest.approx(getattr(truth, name), abs=0.02)


def test_estimator_id_carries_spec_hash():
    data = random_dataset(33)
    spec = BasisSpec.uniform("1, x1")
    est = estimate_varying(data, spec)
    assert est.estimator_id == f"ols_v:{spec.spec_hash()}"


def test_rank_deficiency_names_block_and_drop_retries():
    data = random_dataset(34, k_x=1)
    # x1^2 of a binary column duplicates x1; force that with a binary covariate
    x = (data.x[:, 0] > 0).astype(float).reshape(-1, 1)
    bin_data = validate_dataset(data.y, data.d, data.m, x, column_names=("x1",))
    spec = BasisSpec.uniform("1, x1, x1^2")
    with pytest.raises(RankDeficientError) as err:
        estimate_varying(bin_data, spec)
    assert err.value.block in ("x0", "x1", "x2", "x3", "x4", "xm")
    est = estimate_varying(bin_data, spec, drop_collinear=True)
    ref = estimate_varying(bin_data, BasisSpec.uniform("1, x1"))
    assert est.total.point == pytest.approx(ref.total.point, rel=1e-9)
