import cmath
import math

import numpy as np
import pytest

from spin2.errors import DomainError
from spin2.potentials import (
    IdentityPotential,
    LogPotential,
    SqrtIntegralPotential,
    make_potential,
)

# int_1^x dy/sqrt(y (y/2 + 1)(y + 3/2)), frozen from a 40-digit quadrature
HALF_SESQUI_AT_QUARTER = -0.61501253747620894095
HALF_SESQUI_AT_3_7 = 0.68813774485550899517
HALF_SESQUI_COMPLEX = complex(-0.10877313247431973081, 0.074414348388365737559)


def closed_form_hardcore(x):
    """int_1^x dy/sqrt(y(y+1)) = 2 asinh(sqrt(x)) - 2 asinh(1)."""
    return 2 * cmath.asinh(cmath.sqrt(x)) - 2 * math.asinh(1.0)


class TestIdentity:
    def test_trivial(self):
        phi = IdentityPotential()
        assert phi.forward(2.5 + 1j) == 2.5 + 1j
        assert phi.inverse(-3) == -3
        assert phi.derivative(9j) == 1


class TestLog:
    def test_unit_values(self):
        phi = LogPotential()
        assert phi.forward(1) == 0
        assert phi.inverse(0) == 1

    def test_branch_cut_is_error(self):
        phi = LogPotential()
        with pytest.raises(DomainError):
            phi.forward(0)
        with pytest.raises(DomainError):
            phi.forward(-2.0)
        # off-axis points are fine
        phi.forward(-2.0 + 0.1j)

    def test_round_trip(self):
        phi = LogPotential()
        rng = np.random.default_rng(0)
        for _ in range(50):
            z = complex(rng.uniform(0.05, 4.0), rng.uniform(-1.0, 1.0))
            assert abs(phi.inverse(phi.forward(z)) - z) <= 1e-12 * abs(z)


class TestSqrtIntegral:
    def test_hardcore_closed_form_real(self):
        phi = SqrtIntegralPotential(0.0, 1.0)
        assert phi.forward(1.0) == 0
        for x in [0.01, 0.2, 1.0, 3.9, 40.0]:
            assert abs(phi.forward(x) - closed_form_hardcore(x)) <= 1e-10

    def test_hardcore_closed_form_strip(self):
        phi = SqrtIntegralPotential(0.0, 1.0)
        rng = np.random.default_rng(1)
        for _ in range(40):
            z = complex(rng.uniform(0.05, 5.0), rng.uniform(-0.2, 0.2))
            assert abs(phi.forward(z) - closed_form_hardcore(z)) <= 1e-10

    def test_frozen_reference_values(self):
        phi = SqrtIntegralPotential(0.5, 1.5)
        assert abs(phi.forward(0.25) - HALF_SESQUI_AT_QUARTER) <= 1e-11
        assert abs(phi.forward(3.7) - HALF_SESQUI_AT_3_7) <= 1e-11
        assert abs(phi.forward(0.8 + 0.12j) - HALF_SESQUI_COMPLEX) <= 1e-11

    @pytest.mark.parametrize("beta,gamma", [(0.0, 1.0), (0.5, 1.5), (0.0, 0.4), (2.0, 0.3)])
    def test_round_trip(self, beta, gamma):
        phi = SqrtIntegralPotential(beta, gamma)
        rng = np.random.default_rng(2)
        for _ in range(25):
            z = complex(rng.uniform(0.1, 4.0), rng.uniform(-0.15, 0.15))
            y = phi.forward(z)
            assert abs(phi.inverse(y) - z) <= 1e-9

    def test_derivative_matches_finite_differences(self):
        phi = SqrtIntegralPotential(0.7, 1.2)
        rng = np.random.default_rng(3)
        h = 1e-6
        for _ in range(40):
            z = complex(rng.uniform(0.2, 3.0), rng.uniform(-0.1, 0.1))
            fd = (phi.forward(z + h) - phi.forward(z - h)) / (2 * h)
            assert abs(phi.derivative(z) - fd) <= 1e-5 * abs(fd)

    def test_derivative_is_reciprocal_sqrt_cubic(self):
        phi = SqrtIntegralPotential(0.5, 2.0)
        z = 1.3 + 0.05j
        want = 1 / cmath.sqrt(z * (0.5 * z + 1) * (z + 2.0))
        assert abs(phi.derivative(z) - want) <= 1e-14

    def test_outside_working_region(self):
        phi = SqrtIntegralPotential(0.0, 1.0)
        with pytest.raises(DomainError):
            phi.forward(-1.0)
        with pytest.raises(DomainError):
            phi.forward(1.0 + 0.5j)

    def test_image_interval_is_increasing(self):
        phi = SqrtIntegralPotential(0.0, 1.0)
        lo, hi = phi.image_interval(0.16, 3.9)
        assert lo < 0 < hi


def test_make_potential_dispatch():
    assert make_potential("identity").kind == "identity"
    assert make_potential("log").kind == "log"
    phi = make_potential("sqrt-integral", 0.5, 1.5)
    assert phi.kind == "sqrt-integral" and phi.beta == 0.5
    with pytest.raises(DomainError):
        make_potential("nope")
