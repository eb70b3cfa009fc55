"""Independent recomputation of every closed-form constant the suite relies on.

Nothing here touches the package's spectral machinery: profile integrals
come from adaptive quadrature on the line, eigenvalues from a plain
second-order finite-difference discretization with Richardson extrapolation.
If one of these tests fails, the frozen constants elsewhere are wrong.
"""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal


def _profile(omega):
    root = np.sqrt(omega)

    def p(x):
        return np.sqrt(2.0 * omega) / np.cosh(root * x)

    def dp(x):
        return -np.sqrt(2.0 * omega) * root * np.tanh(root * x) / np.cosh(root * x)

    return p, dp


@pytest.mark.parametrize("omega", [0.7, 1.0, 1.9])
def test_profile_integrals_match_closed_forms(omega):
    p, dp = _profile(omega)
    mass = quad(lambda x: p(x) ** 2, -60, 60)[0]
    grad = quad(lambda x: dp(x) ** 2, -60, 60)[0]
    quart = quad(lambda x: p(x) ** 4, -60, 60)[0]
    assert mass == pytest.approx(4.0 * np.sqrt(omega), rel=1e-9)
    assert grad == pytest.approx(4.0 / 3.0 * omega**1.5, rel=1e-9)
    assert quart == pytest.approx(16.0 / 3.0 * omega**1.5, rel=1e-9)


def test_wave_functional_values_at_unit_parameters():
    # E = (1/2) int p'^2 - (1/4) int p^4, Q = (1/2) int p^2, S = E + Q
    p, dp = _profile(1.0)
    e = 0.5 * quad(lambda x: dp(x) ** 2, -60, 60)[0] \
        - 0.25 * quad(lambda x: p(x) ** 4, -60, 60)[0]
    q = 0.5 * quad(lambda x: p(x) ** 2, -60, 60)[0]
    assert e == pytest.approx(-2.0 / 3.0, rel=1e-9)
    assert q == pytest.approx(2.0, rel=1e-9)
    assert e + q == pytest.approx(4.0 / 3.0, rel=1e-9)


def test_wave_hessian_pairing_at_unit_parameters():
    # <H wave, wave> reduces to int p'^2 + p^2 - 3 p^4 = -32/3
    p, dp = _profile(1.0)
    val = quad(lambda x: dp(x) ** 2 + p(x) ** 2 - 3.0 * p(x) ** 4, -60, 60)[0]
    assert val == pytest.approx(-32.0 / 3.0, rel=1e-9)


@pytest.mark.parametrize("kappa2,nu1,nu0", [(2.0, -64.0, -4.0 / 3.0),
                                            (1.0, -32.0, 0.0)])
def test_degenerate_quartic_coefficients(kappa2, nu1, nu0):
    # nu1 = -6*kappa2*I/kappa1^2 and nu0 = (kappa1-kappa2)*I/(4*kappa1^2)
    # with I the quartic integral of the profile; kappa1 = omega = 1 here.
    p, _ = _profile(1.0)
    quart = quad(lambda x: p(x) ** 4, -60, 60)[0]
    assert -6.0 * kappa2 * quart == pytest.approx(nu1, rel=1e-9)
    assert (1.0 - kappa2) * quart / 4.0 == pytest.approx(nu0, abs=1e-9)


def test_escape_time_heuristic_value():
    # blow-down of the moment ODE: time scale 1/(8*|nu0|*lambda0^2)
    nu0 = -4.0 / 3.0
    lam0 = 0.1
    assert 1.0 / (8.0 * abs(nu0) * lam0**2) == pytest.approx(9.375, rel=1e-12)


def _fd_lowest_even_eigenvalue(a, half_length=25.0, m=4001):
    """Dirichlet finite differences for -v'' + v - 2a*sech(x)^2 v."""
    x = np.linspace(-half_length, half_length, m)
    h = x[1] - x[0]
    inner = x[1:-1]
    diag = 2.0 / h**2 + 1.0 - 2.0 * a / np.cosh(inner) ** 2
    off = np.full(m - 3, -1.0 / h**2)
    vals, vecs = eigh_tridiagonal(diag, off, select="i",
                                  select_range=(0, 5))
    for i in range(len(vals)):
        v = vecs[:, i]
        if np.max(np.abs(v - v[::-1])) < 1e-6 * np.max(np.abs(v)):
            return vals[i]
    raise AssertionError("no even eigenvector among the lowest six")


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.0])
def test_linearized_ground_state_matches_solvable_potential(a):
    # s(s+1) = 2a gives the bottom of the even spectrum at 1 - s^2
    s = 0.5 * (-1.0 + np.sqrt(1.0 + 8.0 * a))
    expected = 1.0 - s**2
    coarse = _fd_lowest_even_eigenvalue(a, m=2001)
    fine = _fd_lowest_even_eigenvalue(a, m=4001)
    richardson = fine + (fine - coarse) / 3.0
    assert richardson == pytest.approx(expected, abs=5e-7)
