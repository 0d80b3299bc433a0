import math

import numpy as np
import pytest

from mlpd.quadrature import integrate


def test_polynomials_exact_on_one_panel():
    # both rules are exact through degree 13, so one panel suffices
    r = integrate(lambda x: x**12 + 3 * x**5 + 1j, -1.0, 1.0, 1e-14, n_panels=1)
    assert r.nodes == 15 and r.ok
    assert abs(r.value - (2 / 13 + 2j)) < 1e-15


def test_adaptive_refinement_of_endpoint_singularity():
    r = integrate(np.sqrt, 0.0, 1.0, 1e-10)
    assert r.ok and abs(r.value - 2 / 3) < 1e-10 and r.nodes > 15


def test_oscillatory_complex_integrand():
    r = integrate(lambda x: np.exp(1j * x) * np.exp(-(x**2)), -8, 8, 1e-12, n_panels=4)
    assert abs(r.value - math.sqrt(math.pi) * math.exp(-0.25)) < 1e-12
    assert r.error < 1e-12 and r.abs_integral == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_budget_exhaustion_is_reported():
    r = integrate(lambda x: np.sin(1 / (x + 1e-9)), 0.0, 1.0, 1e-14, max_nodes=300)
    assert not r.ok and r.nodes >= 300


def test_deterministic():
    f = lambda x: np.cos(40 * x) / (1 + x * x)  # noqa: E731
    a = integrate(f, -3, 5, 1e-12)
    b = integrate(f, -3, 5, 1e-12)
    assert a == b
