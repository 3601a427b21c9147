from __future__ import annotations

import math

import numpy as np
import pytest

from cqncsim.core import SystemParams, table1_defaults


@pytest.fixture(scope="session")
def table1():
    return table1_defaults()


@pytest.fixture()
def params(table1):
    return table1[0]


@pytest.fixture()
def drive(table1):
    return table1[1]


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


@pytest.fixture()
def draw_stable(rng, params):
    """Callable drawing random stable parameter sets around the reference point.

    tied=True enforces the cancellation conditions (Gamma = 2*gamma_m, g' = g);
    otherwise those are jittered too. G stays below 0.9 * kappa/4.
    """

    def draw(tied: bool = False) -> SystemParams:
        def jitter():
            return 10.0 ** rng.uniform(-0.5, 0.5)

        omega_m = params.omega_m * jitter()
        gamma_m = params.gamma_m * jitter()
        if omega_m / gamma_m <= 2.0:
            gamma_m = omega_m / 10.0
        kappa = params.kappa * jitter()
        g = 0.5 * math.sqrt(kappa * gamma_m) * jitter()
        if tied:
            Gamma = 2.0 * gamma_m
            g_prime = g
        else:
            Gamma = 2.0 * gamma_m * jitter()
            g_prime = g * jitter()
        G = rng.uniform(0.0, 0.9) * kappa / 4.0
        return SystemParams(omega_m=omega_m, gamma_m=gamma_m, kappa=kappa,
                            Gamma=Gamma, g=g, g_prime=g_prime, G_opa=G)

    return draw
