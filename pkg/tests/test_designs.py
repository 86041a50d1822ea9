import numpy as np
import pytest

from trieffect import SimulationDesign, generate_dataset, generate_potentials
from trieffect.ols import least_squares
from trieffect.rng import make_generator, mix_seed, normal


def test_design_id_validated():
    with pytest.raises(ValueError):
        SimulationDesign(5)


def test_design_traits():
    d1, d2, d3, d4 = (SimulationDesign(i) for i in (1, 2, 3, 4))
    assert d1.uniform_mediator_error and d2.uniform_mediator_error
    assert not d3.uniform_mediator_error
    assert (d1.mediator_threshold, d3.mediator_threshold) == (1.0, 0.0)
    assert not d1.probit_outcome and d2.probit_outcome
    assert not d3.probit_outcome and d4.probit_outcome
    assert d1.x_variance == pytest.approx(1 / 12)
    assert d3.x_variance == 4.0


def test_same_seed_identical_dataset():
    a, _ = generate_dataset(SimulationDesign(3), 500, seed=42)
    b, _ = generate_dataset(SimulationDesign(3), 500, seed=42)
    assert a.to_json() == b.to_json()
    c, _ = generate_dataset(SimulationDesign(3), 500, seed=43)
    assert c.to_json() != a.to_json()


def test_treatment_fraction_binomial_bound():
    n = 100_000
    for did in (1, 2, 3, 4):
        data, _ = generate_dataset(SimulationDesign(did), n, seed=7)
        frac = data.d.mean()
        assert abs(frac - 0.5) <= 4 * np.sqrt(0.25 / n)


def test_design1_mediator_regression_recovers_coefficients():
    data, _ = generate_dataset(SimulationDesign(1), 100_000, seed=11)
    w = np.column_stack([np.ones(data.n), data.d.astype(float), data.x])
    fit = least_squares(w, data.m.astype(float))
    assert fit.coefficients == pytest.approx((0.0, 0.5, 0.5), abs=0.02)


def test_observed_consistency_with_potentials():
    data, pt = generate_dataset(SimulationDesign(2), 2_000, seed=13)
    m, y = pt.observe(data.d)
    assert np.array_equal(m, data.m)
    assert np.array_equal(y, data.y)


def test_covariate_laws():
    _, x1 = generate_potentials(SimulationDesign(1), 200_000, seed=1)
    assert 0.0 <= x1.min() and x1.max() <= 1.0
    assert x1.mean() == pytest.approx(0.5, abs=0.01)
    _, x3 = generate_potentials(SimulationDesign(3), 200_000, seed=1)
    assert x3.std() == pytest.approx(2.0, abs=0.02)
    assert x3.mean() == pytest.approx(0.0, abs=0.02)


def test_probit_outcomes_are_binary():
    data, pt = generate_dataset(SimulationDesign(4), 5_000, seed=17)
    for arr in (pt.y00, pt.y01, pt.y10, pt.y11, data.y):
        assert set(np.unique(arr)).issubset({0.0, 1.0})


def test_mediator_monotone_in_treatment():
    _, pt = generate_dataset(SimulationDesign(3), 5_000, seed=19)
    # alpha_d = 0.5 > 0, so m1 >= m0 unit by unit
    assert np.all(pt.m1 >= pt.m0)


def test_mix_seed_avalanche():
    seeds = {mix_seed(0, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert mix_seed(1, 2) != mix_seed(2, 1)
    assert all(0 <= s < 2**64 for s in seeds)


def test_inverse_cdf_normals():
    gen = make_generator(123)
    z = normal(gen, 200_000)
    assert np.all(np.isfinite(z))
    assert z.mean() == pytest.approx(0.0, abs=0.01)
    assert z.std() == pytest.approx(1.0, abs=0.01)
