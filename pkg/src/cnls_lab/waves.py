"""Standing-wave profiles and the states the stability experiments start from.

The scalar profile sqrt(2*omega)*sech(sqrt(omega)*x) solves
-p'' + omega*p - p^3 = 0.  The semitrivial wave carries it in the first
component only, scaled by 1/sqrt(kappa1); the partner wave carries the same
profile in the second component and spans the direction along which the
degenerate-coupling analysis happens.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import FieldPair, Grid, Params, norm_h1, quadrature, spectral_derivative


@dataclass(frozen=True)
class SolitonProfile:
    grid: Grid
    omega: float
    values: np.ndarray  # real samples

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError("profile shape does not match the grid")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def default_half_length(omega: float) -> float:
    """Box size with fixed decay margin: tails ~ exp(-40) at the boundary."""
    return 40.0 / np.sqrt(omega)


def soliton(grid: Grid, omega: float) -> SolitonProfile:
    if omega <= 0:
        raise ValueError("wave frequency must be positive")
    root = np.sqrt(omega)
    values = np.sqrt(2.0 * omega) / np.cosh(root * grid.x)
    return SolitonProfile(grid=grid, omega=omega, values=values)


def profile_residual(profile: SolitonProfile) -> float:
    """L2 norm of -p'' + omega*p - p^3 for the sampled profile."""
    p = profile.values
    d2 = spectral_derivative(p, profile.grid, order=2).real
    r = -d2 + profile.omega * p - p**3
    return float(np.sqrt(quadrature(profile.grid, r**2).real))


# Closed-form integrals of the scalar profile, frozen against independent
# quadrature before use.
def profile_mass(omega: float) -> float:
    """integral p^2 dx = 4*sqrt(omega)."""
    return 4.0 * np.sqrt(omega)


def profile_gradient_energy(omega: float) -> float:
    """integral p'^2 dx = (4/3)*omega^(3/2)."""
    return 4.0 / 3.0 * omega**1.5


def profile_quartic_norm(omega: float) -> float:
    """integral p^4 dx = (16/3)*omega^(3/2)."""
    return 16.0 / 3.0 * omega**1.5


def semitrivial_wave(grid: Grid, params: Params) -> FieldPair:
    """Standing wave with all mass in the first component."""
    p = soliton(grid, params.omega).values / np.sqrt(params.kappa1)
    return FieldPair.from_components(grid, p, np.zeros_like(p))


def partner_wave(grid: Grid, params: Params) -> FieldPair:
    """Same profile placed in the second component; spans the direction the
    semitrivial wave exchanges mass with."""
    p = soliton(grid, params.omega).values / np.sqrt(params.kappa1)
    return FieldPair.from_components(grid, np.zeros_like(p), p)


def charge_matched_seed(grid: Grid, params: Params, amplitude: float) -> FieldPair:
    """Wave displaced along the partner direction with total charge preserved
    exactly: (1 + sigma)*wave + amplitude*partner, sigma = sqrt(1 - amplitude^2) - 1.
    """
    if not abs(amplitude) < 1.0:
        raise ValueError("seed amplitude must satisfy |amplitude| < 1")
    p = soliton(grid, params.omega).values / np.sqrt(params.kappa1)
    scale = np.sqrt(1.0 - amplitude**2)
    return FieldPair.from_components(grid, scale * p, amplitude * p)


def perturbed_wave(grid: Grid, params: Params, eps: float, seed: int = 0) -> FieldPair:
    """Semitrivial wave plus an even random smooth perturbation of H1 size eps
    in both components, rescaled so the total charge matches the wave's.

    The perturbation uses the first 8 cosine modes with seeded complex
    coefficients, so identical (eps, seed) gives identical states.  eps = 0
    returns the wave itself.
    """
    if eps < 0:
        raise ValueError("perturbation size must be nonnegative")
    wave = semitrivial_wave(grid, params)
    if eps == 0.0:
        return wave
    rng = np.random.default_rng(seed)
    n_modes = 8
    coeffs = rng.standard_normal((2, n_modes)) + 1j * rng.standard_normal((2, n_modes))
    modes = np.cos(np.outer(np.arange(n_modes) * np.pi / grid.half_length, grid.x))
    bump = FieldPair(grid, coeffs @ modes)
    bump = (eps / norm_h1(bump)) * bump
    state = wave + bump
    # exact charge match by global rescale
    mass_wave = float(np.sum(np.abs(wave.u) ** 2)) * grid.dx
    mass_state = float(np.sum(np.abs(state.u) ** 2)) * grid.dx
    return float(np.sqrt(mass_wave / mass_state)) * state
