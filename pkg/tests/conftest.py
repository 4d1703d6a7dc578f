"""Shared fixtures: potential specs, Dirac parameters, and small operators.

Session scope keeps the single-cell eigensolves from repeating across tests.
"""

import numpy as np
import pytest

from floquet_edge import (
    assemble_dirac_operator,
    builtin_potential,
    dirac_parameters,
    dirac_zero_mode_analytic,
    slow_grid,
)


@pytest.fixture(scope="session")
def spec1():
    return builtin_potential(1, 0.5)


@pytest.fixture(scope="session")
def spec2():
    return builtin_potential(2, 0.5)


@pytest.fixture(scope="session")
def spec3():
    return builtin_potential(3, 0.5)


@pytest.fixture(scope="session")
def params1(spec1):
    return dirac_parameters(spec1)


@pytest.fixture(scope="session")
def params2(spec2):
    return dirac_parameters(spec2)


@pytest.fixture(scope="session")
def dirac_op1(spec1, params1):
    """Family-1 Dirac operator on a box large enough for the slow zero mode."""
    X = slow_grid(100.0, 0.05)
    return assemble_dirac_operator(params1, spec1.kappa, X)


@pytest.fixture(scope="session")
def alpha_star1(spec1, params1, dirac_op1):
    return dirac_zero_mode_analytic(
        spec1.kappa, params1.theta_sharp, params1.v_D, dirac_op1.X
    )


def pytest_addoption(parser):
    parser.addoption(
        "--skip-slow",
        action="store_true",
        default=False,
        help="skip tests marked slow (long evolutions and sweeps)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--skip-slow"):
        marker = pytest.mark.skip(reason="--skip-slow given")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(marker)
