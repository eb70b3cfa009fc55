import numpy as np
import pytest

from cnls_lab import Coupling, FieldPair, Params, make_grid
from cnls_lab.fields import (
    complex_pairing,
    deinterleave,
    even_defect,
    inner_h1,
    inner_l2,
    interleave,
    norm_h1,
    norm_l2,
    quadrature,
    reflect,
    require_even,
    spectral_derivative,
    symmetrize_even,
)


def test_grid_layout():
    g = make_grid(64, 8.0)
    assert g.dx == pytest.approx(0.25)
    assert g.x[0] == -8.0
    assert g.x[-1] == pytest.approx(8.0 - g.dx)
    assert g.k[1] == pytest.approx(np.pi / 8.0)
    assert g.k[-1] == pytest.approx(-np.pi / 8.0)
    assert not g.x.flags.writeable


@pytest.mark.parametrize("n", [300, 8, 0])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ValueError):
        make_grid(n, 10.0)


def test_grid_rejects_bad_length():
    with pytest.raises(ValueError):
        make_grid(64, 0.0)


def test_params_validation():
    with pytest.raises(ValueError):
        Params(kappa1=0.0, kappa2=1.0, gamma=1.0, omega=1.0)
    with pytest.raises(ValueError):
        Params(kappa1=1.0, kappa2=1.0, gamma=-1.0, omega=1.0)
    with pytest.raises(ValueError):
        Params(kappa1=1.0, kappa2=1.0, gamma=1.0, omega=0.0)
    p = Params(kappa1=1.0, kappa2=2.0, gamma=1.0, omega=1.0,
               coupling="incoherent")
    assert p.coupling is Coupling.INCOHERENT
    assert p.degenerate
    assert not Params(kappa1=1.0, kappa2=1.0, gamma=2.0, omega=1.0).degenerate


def test_quadrature_gaussian(grid_small):
    vals = np.exp(-grid_small.x**2)
    assert quadrature(grid_small, vals).real == pytest.approx(
        np.sqrt(np.pi), rel=1e-12)


def test_spectral_derivative_accuracy(grid_small):
    f = 1.0 / np.cosh(grid_small.x)
    df = -np.tanh(grid_small.x) / np.cosh(grid_small.x)
    d2f = f - 2.0 * f**3
    # error floor: sech(20) ~ 4e-9 at the periodic seam
    assert np.max(np.abs(spectral_derivative(f, grid_small) - df)) < 1e-7
    assert np.max(np.abs(
        spectral_derivative(f, grid_small, order=2) - d2f)) < 5e-6


def test_odd_order_derivative_drops_nyquist(grid_small):
    nyq = np.cos(grid_small.k[grid_small.n // 2] * grid_small.x)
    d1 = spectral_derivative(nyq, grid_small)
    assert np.max(np.abs(d1)) < 1e-10
    assert np.max(np.abs(d1.imag)) < 1e-12


def test_parity_helpers(grid_small):
    even = np.cos(np.pi * grid_small.x / grid_small.half_length)
    odd = np.sin(np.pi * grid_small.x / grid_small.half_length)
    assert np.allclose(reflect(even), even)
    assert even_defect(even) < 1e-15
    assert even_defect(odd) > 1.0
    require_even(even)
    with pytest.raises(ValueError):
        require_even(odd)
    assert even_defect(symmetrize_even(odd + even)) < 1e-15


def test_field_pair_construction_and_immutability(grid_small):
    u = FieldPair.from_components(grid_small, np.exp(-grid_small.x**2),
                                  np.zeros(grid_small.n))
    assert u.u.shape == (2, grid_small.n)
    with pytest.raises(ValueError):
        FieldPair(grid_small, np.zeros((3, grid_small.n)))
    with pytest.raises(ValueError):
        u.u[0, 0] = 1.0


def test_field_pair_arithmetic(grid_small):
    f = np.exp(-grid_small.x**2)
    u = FieldPair.from_components(grid_small, f, 2.0 * f)
    v = FieldPair.from_components(grid_small, f, -f)
    w = u + v - (2.0 * u)
    assert np.allclose(w.u, (v - u).u)
    assert np.allclose((-u).u, -u.u)
    # numpy scalars must not absorb the pair into an object array
    s = np.complex128(2.0j)
    left = s * u
    assert isinstance(left, FieldPair)
    assert np.allclose(left.u, 2.0j * u.u)
    other = make_grid(128, 20.0)
    with pytest.raises(ValueError):
        u + FieldPair.zero(other)


def test_pairing_conventions(grid_small):
    f = np.exp(-grid_small.x**2)
    a = FieldPair.from_components(grid_small, f, 1j * f)
    b = FieldPair.from_components(grid_small, (1 + 1j) * f, f)
    assert complex_pairing(a, b) == pytest.approx(
        np.conj(complex_pairing(b, a)))
    assert inner_l2(a, b) == pytest.approx(complex_pairing(a, b).real)
    # (a, i*b) == Im sum a*conj(b) dx fixes the sign convention
    ib = 1j * b
    assert inner_l2(a, ib) == pytest.approx(complex_pairing(a, b).imag)


def test_h1_norm_decomposition(grid_small):
    f = np.exp(-grid_small.x**2) * (1.0 + 0.5j)
    u = FieldPair.from_components(grid_small, f, 0.3 * f)
    expected = norm_l2(u) ** 2 + float(
        np.sum(np.abs(spectral_derivative(u.u, grid_small)) ** 2)
        * grid_small.dx)
    assert norm_h1(u) ** 2 == pytest.approx(expected, rel=1e-12)
    assert inner_h1(u, u) == pytest.approx(expected, rel=1e-12)


def test_interleave_round_trip():
    z = np.array([1.0 + 2.0j, -3.0j, 4.0])
    flat = interleave(z)
    assert flat == [1.0, 2.0, 0.0, -3.0, 4.0, 0.0]
    assert np.allclose(deinterleave(flat), z)
