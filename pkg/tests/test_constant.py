import numpy as np
import pytest

from trieffect import estimate_constant, fit_constant, validate_dataset
from trieffect.constant import constant_scores
from trieffect.designs import SimulationDesign, generate_dataset
from trieffect.errors import EmptyCellError, RankDeficientError
from trieffect.oracle import analytic_effects

from conftest import random_dataset


def test_four_point_coefficients(four_point):
    fit = fit_constant(four_point)
    # beta = (b1, bd, bm, bdm); alpha = (a1, ad)
    assert fit.beta[1] == pytest.approx(2.0)
    assert fit.beta[2] == pytest.approx(1.0)
    assert fit.beta[3] == pytest.approx(2.0)
    assert fit.alpha[0] == pytest.approx(0.5)
    assert fit.alpha[1] == pytest.approx(0.0, abs=1e-14)


def test_four_point_effects(four_point):
    est = estimate_constant(four_point)
    assert est.points().as_tuple() == pytest.approx((3.0, 2.0, 0.0, 1.0), abs=1e-12)
    # total equals the raw difference in means of Y by D: 3.5 - 0.5
    assert est.total.point == pytest.approx(3.5 - 0.5, abs=1e-12)
    assert est.complier_share == pytest.approx(0.0, abs=1e-14)
    assert est.estimator_id == "ols_c"


def test_y_equals_d_exact_relation():
    gen = np.random.default_rng(0)
    d = np.array([0, 0, 1, 1, 0, 1, 0, 1])
    m = np.array([0, 1, 0, 1, 1, 0, 0, 1])
    data = validate_dataset(d.astype(float), d, m, gen.standard_normal((8, 1)))
    fit = fit_constant(data)
    assert fit.beta[1] == pytest.approx(1.0, abs=1e-12)
    assert fit.beta[2] == pytest.approx(0.0, abs=1e-12)
    assert fit.beta[3] == pytest.approx(0.0, abs=1e-12)


def test_missing_cell_rejected():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        data = validate_dataset(
            y=[1.0, 2.0, 3.0, 4.0], d=[0, 0, 1, 1], m=[0, 1, 0, 0]
        )
    with pytest.raises(EmptyCellError) as err:
        fit_constant(data)
    assert (err.value.d, err.value.m) == (1, 1)


def test_no_covariate_total_is_difference_in_means():
    for seed in range(5):
        data = random_dataset(seed, n=120, k_x=0)
        est = estimate_constant(data)
        diff = data.y[data.d == 1].mean() - data.y[data.d == 0].mean()
        assert abs(est.total.point - diff) <= 1e-12 * max(1.0, abs(diff))


def test_additivity_exact_on_fuzzed_data():
    for seed in range(10):
        est = estimate_constant(random_dataset(seed))
        lhs = est.total.point
        rhs = est.direct.point + est.indirect.point + est.interaction.point
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_score_families_sum_to_zero():
    data = random_dataset(11)
    fit = fit_constant(data)
    eta1, eta2, eta3 = constant_scores(fit)
    scale = max(np.abs(s.scores).sum() for s in (eta1, eta2, eta3))
    for s in (eta1, eta2, eta3):
        assert abs(s.scores.sum()) <= 1e-8 * scale


def test_interaction_matches_formula_structure():
    # even in finite samples, interaction == bdm * (a1 + xbar' ax) exactly
    data = random_dataset(12)
    fit = fit_constant(data)
    est = estimate_constant(data)
    expected = fit.beta[3] * (fit.alpha[0] + fit.xbar @ fit.alpha[2:])
    assert est.interaction.point == pytest.approx(expected, abs=1e-14)
    assert est.complier_share == pytest.approx(fit.alpha[1])


def test_outcome_affine_equivariance():
    data = random_dataset(13)
    a, b = -2.5, 7.0
    shifted = validate_dataset(a * data.y + b, data.d, data.m, data.x)
    base = estimate_constant(data)
    est = estimate_constant(shifted)
    for name in ("total", "direct", "indirect", "interaction"):
        assert est[name].point == pytest.approx(a * base[name].point, rel=1e-9, abs=1e-11)
        assert est[name].se == pytest.approx(abs(a) * base[name].se, rel=1e-9, abs=1e-11)


def test_consistency_on_linear_design():
    design = SimulationDesign(1)
    data, _ = generate_dataset(design, 200_000, seed=5)
    est = estimate_constant(data)
    truth = analytic_effects(design)
    for name in ("total", "direct", "indirect", "interaction"):
        assert est[name].point == pytest.approx(getattr(truth, name), abs=0.02)


def test_collinear_covariate_drop():
    data = random_dataset(14, k_x=2)
    x = np.column_stack([data.x, data.x[:, 0]])
    dup = validate_dataset(data.y, data.d, data.m, x, column_names=("a", "b", "a_copy"))
    with pytest.raises(RankDeficientError):
        estimate_constant(dup)
    est = estimate_constant(dup, drop_collinear=True)
    ref = estimate_constant(data)
    assert est.total.point == pytest.approx(ref.total.point, rel=1e-9)
