"""Shared fixtures and helpers for the test suite."""
import numpy as np
import pytest

from trieffect import BasisSpec, Dataset, validate_dataset

# one line per acceptance criterion, filled by tests/test_acceptance.py and
# echoed after the run (the terminal summary is never capture-swallowed)
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def four_point() -> Dataset:
    """One observation per (D, M) cell with Y = (0, 1, 2, 5).

    Cell-mean algebra gives effects (total, direct, indirect, interaction)
    = (3, 2, 0, 1) and M-regression coefficients a1 = 0.5, ad = 0.
    """
    return validate_dataset(
        y=[0.0, 1.0, 2.0, 5.0],
        d=[0, 0, 1, 1],
        m=[0, 1, 0, 1],
    )


def random_dataset(seed: int, n: int = 200, k_x: int = 2) -> Dataset:
    """A generic well-conditioned dataset with all four cells populated."""
    gen = np.random.default_rng(seed)
    while True:
        d = (gen.random(n) < 0.5).astype(int)
        m = (gen.random(n) < 0.4 + 0.2 * d).astype(int)
        if all(np.any((d == dv) & (m == mv)) for dv in (0, 1) for mv in (0, 1)):
            break
    x = gen.standard_normal((n, k_x))
    y = 0.3 * d + 0.7 * m + 0.2 * d * m + x @ gen.standard_normal(k_x) + gen.standard_normal(n)
    return validate_dataset(y, d, m, x)


def binary_x_dataset(seed: int, n: int = 800) -> Dataset:
    """Dataset with a single binary covariate and every (x, d, m) cell filled."""
    gen = np.random.default_rng(seed)
    while True:
        x = (gen.random(n) < 0.5).astype(float)
        d = (gen.random(n) < 0.5).astype(int)
        m = (gen.random(n) < 0.3 + 0.2 * d + 0.2 * x).astype(int)
        ok = all(
            np.any((x == xv) & (d == dv) & (m == mv))
            for xv in (0, 1)
            for dv in (0, 1)
            for mv in (0, 1)
        )
        if ok:
            break
    y = 1.0 + 0.5 * d + m + 0.4 * d * m - 0.8 * x + 0.3 * x * m + gen.standard_normal(n)
    return validate_dataset(y, d, m, x.reshape(-1, 1), column_names=("x1",))


def saturated_binary_spec() -> BasisSpec:
    """For a single binary covariate x1, (1, x1) spans all functions of x1."""
    return BasisSpec.uniform("1, x1")
