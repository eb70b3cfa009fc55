"""Phase alignment around the standing-wave orbit and the Lyapunov pair.

States near the orbit are aligned by the phase that maximizes the overlap
with the wave; the aligned state decomposes into coordinates along the
partner wave (kernel direction), the wave itself, and an orthogonal
remainder.  The pair of functionals (moment, rate) drives the degenerate
instability argument: along any solution d/dt moment == rate, and on
charge-matched states the energy is pinned from below through the rate.

All operations except the distance itself refuse states outside the tube of
H1 radius 0.5*||wave||_H1 around the orbit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    FieldPair,
    Grid,
    Params,
    complex_pairing,
    inner_l2,
    norm_h1,
    norm_l2,
    spectral_derivative,
)
from .functionals import action_gradient, charge, energy, energy_gradient
from .waves import partner_wave, semitrivial_wave


def optimal_phase(u: FieldPair, ref: FieldPair) -> float:
    """Phase alpha minimizing ||u - exp(i*alpha)*ref||_L2."""
    p = complex_pairing(u, ref)
    if abs(p) < 1e-12 * norm_l2(u) * norm_l2(ref):
        raise ValueError("optimal phase undefined: pairing with the reference is degenerate")
    return float(np.angle(p))


def aligned_state(u: FieldPair, params: Params) -> FieldPair:
    """u rotated back by its optimal phase against the semitrivial wave."""
    wave = semitrivial_wave(u.grid, params)
    alpha = optimal_phase(u, wave)
    return np.exp(-1j * alpha) * u


def _h1_pairing(a: FieldPair, b: FieldPair) -> complex:
    da = spectral_derivative(a.u, a.grid)
    db = spectral_derivative(b.u, b.grid)
    return complex((np.sum(a.u * np.conj(b.u)) + np.sum(da * np.conj(db))) * a.grid.dx)


def orbital_distance(u: FieldPair, params: Params) -> float:
    """H1 distance from u to the phase orbit of the semitrivial wave."""
    wave = semitrivial_wave(u.grid, params)
    p = _h1_pairing(u, wave)
    d2 = norm_h1(u) ** 2 + norm_h1(wave) ** 2 - 2.0 * abs(p)
    return float(np.sqrt(max(d2, 0.0)))


def tube_radius(grid: Grid, params: Params) -> float:
    return 0.5 * norm_h1(semitrivial_wave(grid, params))


def _require_tube(u: FieldPair, params: Params) -> float:
    dist = orbital_distance(u, params)
    radius = tube_radius(u.grid, params)
    if dist > radius:
        raise ValueError(
            f"state outside the modulation tube: distance {dist:.4f} exceeds {radius:.4f}")
    return dist


def lyapunov_moment(u: FieldPair, params: Params) -> float:
    """L2 pairing of i*(aligned state) with the partner wave.

    Gauge invariant; grows linearly in time at the rate below along any
    solution inside the tube.
    """
    _require_tube(u, params)
    m = aligned_state(u, params)
    partner = partner_wave(u.grid, params)
    return float(-complex_pairing(m, partner).imag)


def phase_corrected_partner(u: FieldPair, params: Params) -> FieldPair:
    """Covector of the moment's derivative: exp(i*alpha) * (partner -
    (ratio)*wave), with the ratio canceling the phase correction."""
    _require_tube(u, params)
    wave = semitrivial_wave(u.grid, params)
    partner = partner_wave(u.grid, params)
    alpha = optimal_phase(u, wave)
    m = np.exp(-1j * alpha) * u
    ratio = inner_l2(m, partner) / inner_l2(m, wave)
    return np.exp(1j * alpha) * (partner + (-ratio) * wave)


def lyapunov_rate(u: FieldPair, params: Params) -> float:
    """Instantaneous growth rate of the moment along the flow, computed from
    the action gradient at the aligned state."""
    _require_tube(u, params)
    m = aligned_state(u, params)
    wave = semitrivial_wave(u.grid, params)
    partner = partner_wave(u.grid, params)
    grad = action_gradient(m, params)
    ratio = inner_l2(m, partner) / inner_l2(m, wave)
    return inner_l2(grad, partner) - ratio * inner_l2(grad, wave)


def lyapunov_rate_direct(u: FieldPair, params: Params) -> float:
    """Same rate from the energy gradient paired with the moment covector
    (the two representations agree to roundoff)."""
    _require_tube(u, params)
    return inner_l2(energy_gradient(u, params), phase_corrected_partner(u, params))


@dataclass(frozen=True)
class Decomposition:
    alpha: float
    kernel_coordinate: float  # along the partner wave
    wave_coordinate: float  # radial, along the wave itself
    remainder: FieldPair  # L2-orthogonal to wave, i*wave, partner

    def reconstruct(self, params: Params) -> FieldPair:
        grid = self.remainder.grid
        wave = semitrivial_wave(grid, params)
        partner = partner_wave(grid, params)
        aligned = (wave + self.kernel_coordinate * partner
                   + self.wave_coordinate * wave + self.remainder)
        return np.exp(1j * self.alpha) * aligned


def decompose(u: FieldPair, params: Params) -> Decomposition:
    """Split the aligned state around the wave into partner/wave coordinates
    and an orthogonal remainder."""
    _require_tube(u, params)
    wave = semitrivial_wave(u.grid, params)
    partner = partner_wave(u.grid, params)
    alpha = optimal_phase(u, wave)
    v = np.exp(-1j * alpha) * u - wave
    lam = inner_l2(v, partner) / inner_l2(partner, partner)
    mu = inner_l2(v, wave) / inner_l2(wave, wave)
    w = v + (-lam) * partner + (-mu) * wave
    return Decomposition(alpha=alpha, kernel_coordinate=lam,
                         wave_coordinate=mu, remainder=w)


def rate_consistency_report(record) -> dict:
    """Compare the centered difference of the sampled moment series against
    the sampled rate series (duck-typed over any run record)."""
    times = np.asarray(record.times)
    moment = record.moment_series
    rate = record.rate_series
    if moment is None or rate is None:
        raise ValueError("record carries no moment/rate series")
    if len(times) < 3:
        raise ValueError("need at least 3 samples for a centered difference")
    h = times[1] - times[0]
    if not np.allclose(np.diff(times), h, rtol=1e-9, atol=1e-12):
        raise ValueError("sampling is not uniform")
    moment = np.asarray(moment, dtype=float)
    rate = np.asarray(rate, dtype=float)
    diff = (moment[2:] - moment[:-2]) / (2.0 * h)
    defect = np.abs(diff - rate[1:-1])
    valid = np.isfinite(defect)
    if not np.any(valid):
        raise ValueError("no finite interior samples to compare")
    return {
        "max_defect": float(np.max(defect[valid])),
        "spacing": float(h),
        "samples_compared": int(np.sum(valid)),
    }


def energy_floor_report(u: FieldPair, params: Params, tol: float = 1e-9) -> dict:
    """Check the energy lower bound through the rate on a charge-matched
    tube state: energy(u) - (kernel coordinate / 2)*rate >= energy(wave).

    Requires the degenerate coherent coupling with kappa2 > kappa1.
    """
    if params.gamma != params.kappa1:
        raise ValueError("the energy floor requires gamma == kappa1")
    if not params.kappa2 > params.kappa1:
        raise ValueError("the energy floor requires kappa2 > kappa1")
    wave = semitrivial_wave(u.grid, params)
    qw = charge(wave)
    if abs(charge(u) - qw) > 1e-10 * qw:
        raise ValueError("state is not charge-matched to the wave")
    _require_tube(u, params)
    m = aligned_state(u, params)
    partner = partner_wave(u.grid, params)
    lam = inner_l2(m, partner) / inner_l2(partner, partner)
    rate = lyapunov_rate(u, params)
    margin = energy(u, params) - energy(wave, params) - 0.5 * lam * rate
    return {
        "margin": float(margin),
        "kernel_coordinate": float(lam),
        "rate": float(rate),
        "tolerance": tol,
        "passed": bool(margin >= -tol),
    }
