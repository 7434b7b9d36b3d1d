import numpy as np
import pytest

from squeezenhse.lattice import ModelParams, SolvableParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)


@pytest.fixture
def params_a():
    """Square-geometry parameter set with algebraic skin localization."""
    return ModelParams(0, 1j, 1, 3j, -1, 2j)


@pytest.fixture
def params_b():
    """Solvable-regime parameter set used for the impurity experiments."""
    return ModelParams(0, 0, 1j, 4j, 3, 2)


@pytest.fixture
def sp_b():
    """Solvable reduction of params_b: (t_y, t_xy, delta0, delta_x)."""
    return SolvableParams(1.0, 4.0, 3.0, 2.0)


def random_params(rng, scale=1.0):
    """Random couplings; omega0 stays real (a complex on-site energy would
    break Hermiticity of h and the particle-hole structure)."""
    draw = lambda: complex(rng.normal(0, scale), rng.normal(0, scale))
    return ModelParams(omega0=rng.normal(0, scale), j_x=draw(), j_y=draw(),
                       j_xy=draw(), delta0=draw(), delta_x=draw())
