import numpy as np
import pytest

from cnls_lab import (
    FieldPair,
    Params,
    hessian_constrained_minimum,
    hessian_form,
    linearized_operator,
    lowest_eigenpairs,
    make_grid,
    partner_wave,
    scalar_constrained_minimum,
    semitrivial_wave,
    soliton,
)
from cnls_lab.fields import inner_l2, norm_h1
from cnls_lab.functionals import action
from cnls_lab.linops import (
    apply_linearized,
    even_basis,
    even_coefficients,
    linearized_quadratic_form,
)
from cnls_lab.waves import profile_quartic_norm

# lowest even eigenvalue of the operator with weight a at omega = 1 is
# 1 - s^2 with s(s+1) = 2a (rechecked independently in test_oracles.py)
FROZEN_GROUND = {
    0.5: 0.6180339887498949,
    1.0: 0.0,
    2.0: -1.4384471871911697,
    3.0: -3.0,
}


def test_even_basis_orthonormal(grid_small):
    basis = even_basis(grid_small)
    assert basis.modes.shape == (grid_small.n, grid_small.n // 2 + 1)
    gram = basis.modes.T @ basis.modes * grid_small.dx
    assert np.max(np.abs(gram - np.eye(basis.size))) < 1e-12


def test_even_coefficients_round_trip(grid_small):
    basis = even_basis(grid_small)
    v = soliton(grid_small, 1.0).values
    c = even_coefficients(basis, v)
    assert np.max(np.abs(basis.modes @ c - v)) < 1e-12


@pytest.mark.parametrize("a", sorted(FROZEN_GROUND))
def test_ground_state_eigenvalues(grid_fine, a):
    rep = lowest_eigenpairs(linearized_operator(grid_fine, a, 1.0), 4)
    assert rep.eigenvalues[0] == pytest.approx(FROZEN_GROUND[a], abs=1e-10)
    assert np.all(np.diff(rep.eigenvalues) >= 0)


def test_kernel_eigenvector_is_profile(grid_fine):
    rep = lowest_eigenpairs(linearized_operator(grid_fine, 1.0, 1.0), 1)
    prof = soliton(grid_fine, 1.0).values
    prof = prof / np.sqrt(float(np.sum(prof**2)) * grid_fine.dx)
    overlap = float(np.sum(rep.eigenvectors[0] * prof)) * grid_fine.dx
    assert abs(overlap) > 1.0 - 1e-10


def test_eigenvector_solves_grid_eigenproblem(grid_small):
    rep = lowest_eigenpairs(linearized_operator(grid_small, 2.0, 1.0), 1)
    v = rep.eigenvectors[0]
    residual = apply_linearized(grid_small, 2.0, 1.0, v) \
        - rep.eigenvalues[0] * v
    assert np.max(np.abs(residual)) < 1e-7


def test_quadratic_form_matches_matrix(grid_small):
    basis = even_basis(grid_small)
    op = linearized_operator(grid_small, 1.5, 1.0)
    v = soliton(grid_small, 1.0).values * np.cos(
        np.pi * grid_small.x / grid_small.half_length)
    c = even_coefficients(basis, v)
    assert linearized_quadratic_form(grid_small, 1.5, v, 1.0) == pytest.approx(
        float(c @ op.entries @ c), rel=1e-10)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.0])
def test_profile_pairing_closed_form(grid_small, a):
    # <L_a p, p> = (1 - a) * integral p^4
    prof = soliton(grid_small, 1.0).values
    val = linearized_quadratic_form(grid_small, a, prof, 1.0)
    assert val == pytest.approx((1.0 - a) * profile_quartic_norm(1.0),
                                rel=1e-9, abs=1e-9)


def test_constrained_minimum_restores_coercivity(grid_small):
    prof = soliton(grid_small, 1.0).values
    # weight 3 has a negative direction; orthogonality to the profile
    # restores a positive H1 Rayleigh minimum
    assert scalar_constrained_minimum(grid_small, 3.0, 1.0) < -0.5
    cmin = scalar_constrained_minimum(grid_small, 3.0, 1.0,
                                      orthogonal_to=(prof,))
    assert cmin > 0.1
    # weight below 1 is coercive without any constraint
    assert scalar_constrained_minimum(grid_small, 0.5, 1.0) > 0.3


def test_constrained_minimum_rejects_parallel_constraints(grid_small):
    prof = soliton(grid_small, 1.0).values
    with pytest.raises(ValueError):
        scalar_constrained_minimum(grid_small, 1.0, 1.0,
                                   orthogonal_to=(prof, 1.0000001 * prof))


def test_hessian_form_is_second_variation(grid_small):
    params = Params(kappa1=1.0, kappa2=2.0, gamma=1.0, omega=1.0)
    wave = semitrivial_wave(grid_small, params)
    env = 1.0 / np.cosh(0.4 * grid_small.x)
    v = FieldPair.from_components(
        grid_small, env * (0.6 + 0.2j),
        env * np.cos(np.pi * grid_small.x / grid_small.half_length) * 0.5j)
    h = 1e-3
    second = (action(wave + h * v, params) - 2.0 * action(wave, params)
              + action(wave + (-h) * v, params)) / h**2
    assert hessian_form(v, params) == pytest.approx(second, rel=1e-4)


def test_hessian_form_requires_even_fields(grid_small):
    params = Params(kappa1=1.0, kappa2=1.0, gamma=0.5, omega=1.0)
    odd = np.sin(np.pi * grid_small.x / grid_small.half_length)
    v = FieldPair.from_components(grid_small, odd, np.zeros_like(odd))
    with pytest.raises(ValueError):
        hessian_form(v, params)


def test_hessian_constrained_minimum_blocks(grid_small):
    params = Params(kappa1=1.0, kappa2=2.0, gamma=1.0, omega=1.0)
    wave = semitrivial_wave(grid_small, params)
    partner = partner_wave(grid_small, params)
    # unconstrained: the wave block carries a negative direction
    assert hessian_constrained_minimum(grid_small, params) < -0.1
    constrained = hessian_constrained_minimum(
        grid_small, params, constraints=(wave, 1j * wave, partner))
    assert constrained > 0.0
    # a constraint mixing two blocks is not representable
    mixed = wave + partner
    with pytest.raises(ValueError):
        hessian_constrained_minimum(grid_small, params, constraints=(mixed,))


def test_hessian_minimum_bounds_rayleigh_quotients(grid_small):
    params = Params(kappa1=1.0, kappa2=2.0, gamma=1.0, omega=1.0)
    wave = semitrivial_wave(grid_small, params)
    partner = partner_wave(grid_small, params)
    cmin = hessian_constrained_minimum(
        grid_small, params, constraints=(wave, 1j * wave, partner))
    env = 1.0 / np.cosh(0.3 * grid_small.x)
    v = FieldPair.from_components(grid_small, env * (0.2 - 0.7j), env * 1j)
    for b, coef in ((wave, None), (1j * wave, None), (partner, None)):
        v = v + (-inner_l2(v, b) / inner_l2(b, b)) * b
    assert hessian_form(v, params) >= cmin * norm_h1(v) ** 2 - 1e-10
