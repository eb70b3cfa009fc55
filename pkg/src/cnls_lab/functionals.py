"""Conserved functionals, their derivatives, and the degenerate-case expansions.

The energy couples the components either coherently
(-(gamma/2) Re integral u1^2 conj(u2)^2) or incoherently
(-(gamma/2) integral |u1|^2 |u2|^2); the charge is half the total L2 mass,
and the action is energy + omega*charge.  The semitrivial wave is a critical
point of the action.

Directional derivatives of the action are computed with 5-point central
stencils.  Along fixed directions the action is a polynomial of degree 4 in
the step, so the stencils are exact up to roundoff and large steps are the
accurate choice.

When gamma == kappa1 the action is flat to third order along the partner
wave, and the quartic coefficients of the expansion have closed forms; the
report functions verify the exact quartic identity and the claimed
remainder orders numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    Coupling,
    FieldPair,
    Grid,
    Params,
    inner_l2,
    norm_h1,
    norm_l2,
    quadrature,
    spectral_derivative,
)
from .linops import hessian_form
from .waves import (
    partner_wave,
    profile_quartic_norm,
    semitrivial_wave,
    soliton,
)


def charge(u: FieldPair) -> float:
    """Half the total L2 mass of both components."""
    return 0.5 * float(quadrature(u.grid, np.abs(u.u) ** 2).real)


def energy(u: FieldPair, params: Params) -> float:
    du = spectral_derivative(u.u, u.grid)
    dens = 0.5 * np.sum(np.abs(du) ** 2, axis=0)
    a1 = np.abs(u.u1) ** 2
    a2 = np.abs(u.u2) ** 2
    dens = dens - 0.25 * (params.kappa1 * a1**2 + params.kappa2 * a2**2)
    if params.coupling is Coupling.COHERENT:
        dens = dens - 0.5 * params.gamma * (u.u1**2 * np.conj(u.u2) ** 2).real
    else:
        dens = dens - 0.5 * params.gamma * a1 * a2
    return float(quadrature(u.grid, dens).real)


def action(u: FieldPair, params: Params) -> float:
    return energy(u, params) + params.omega * charge(u)


def action_gradient(u: FieldPair, params: Params) -> FieldPair:
    """L2 gradient of the action (vanishes at the semitrivial wave)."""
    d2 = spectral_derivative(u.u, u.grid, order=2)
    u1, u2 = u.u1, u.u2
    g1 = -d2[0] + params.omega * u1 - params.kappa1 * np.abs(u1) ** 2 * u1
    g2 = -d2[1] + params.omega * u2 - params.kappa2 * np.abs(u2) ** 2 * u2
    if params.coupling is Coupling.COHERENT:
        g1 = g1 - params.gamma * u2**2 * np.conj(u1)
        g2 = g2 - params.gamma * u1**2 * np.conj(u2)
    else:
        g1 = g1 - params.gamma * np.abs(u2) ** 2 * u1
        g2 = g2 - params.gamma * np.abs(u1) ** 2 * u2
    return FieldPair(u.grid, np.stack([g1, g2]))


def energy_gradient(u: FieldPair, params: Params) -> FieldPair:
    """L2 gradient of the energy: action gradient minus omega*u."""
    return action_gradient(u, params) + (-params.omega) * u


# 5-point central stencils (offset: weight), exact for polynomials of
# degree 4, with the residual error order used for Richardson combination.
_STENCILS = {
    1: ({-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}, 12.0, 4),
    2: ({-2: -1.0, -1: 16.0, 0: -30.0, 1: 16.0, 2: -1.0}, 12.0, 4),
    3: ({-2: -1.0, -1: 2.0, 1: -2.0, 2: 1.0}, 2.0, 2),
    4: ({-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0}, 1.0, 2),
}


def _stencil_value(func, order: int, h: float) -> float:
    weights, scale, _ = _STENCILS[order]
    acc = 0.0
    for off, w in weights.items():
        acc += w * func(off * h)
    return acc / (scale * h**order)


def directional_derivative(u: FieldPair, dirs: list, params: Params,
                           order: int) -> float:
    """k-th derivative of the action at u along directions, paired with the
    last one: d^k/dt^(k-1)ds  action(u + t*d + s*d_last).

    All directions except the last must coincide.  Uses steps 1e-2 and 5e-3
    with a Richardson combination; for the (polynomial) action both steps
    agree to roundoff.
    """
    if not 1 <= order <= 4:
        raise ValueError("derivative order must be between 1 and 4")
    if len(dirs) != order:
        raise ValueError("need exactly `order` directions")
    lead, last = dirs[0], dirs[-1]
    for d in dirs[1:-1]:
        if not np.array_equal(d.u, lead.u):
            raise ValueError("all directions except the last must coincide")
    mixed = order > 1 and not np.array_equal(last.u, lead.u)

    if not mixed:
        def value(h):
            return _stencil_value(lambda t: action(u + t * lead, params), order, h)
    else:
        inner_order = order - 1

        def value(h):
            def s_slice(t):
                base = u + t * lead
                return _stencil_value(lambda s: action(base + s * last, params), 1, h)
            if inner_order == 0:
                return s_slice(0.0)
            return _stencil_value(s_slice, inner_order, h)

    p = _STENCILS[order][2]
    v1, v2 = value(1e-2), value(5e-3)
    return v2 + (v2 - v1) / (2**p - 1)


@dataclass(frozen=True)
class DegenerateCoefficients:
    """Quartic coefficients controlling the degenerate (gamma == kappa1) case.

    action_fourth: fourth derivative of the action along the partner wave
    (the action equals its value at the wave plus action_fourth * t^4 / 24
    exactly along that line).
    sphere_quartic: quartic coefficient of the energy along the partner
    direction on the fixed-charge sphere; its sign decides stability.
    """

    action_fourth: float
    sphere_quartic: float


def degenerate_coefficients(params: Params) -> DegenerateCoefficients:
    if params.gamma != params.kappa1:
        raise ValueError("closed forms require the degenerate coupling gamma == kappa1")
    quart = profile_quartic_norm(params.omega)
    k1, k2 = params.kappa1, params.kappa2
    return DegenerateCoefficients(
        action_fourth=-6.0 * k2 / k1**2 * quart,
        sphere_quartic=(k1 - k2) / (4.0 * k1**2) * quart,
    )


def kernel_cubic_response(grid: Grid, params: Params) -> FieldPair:
    """The field (-2*profile^3/sqrt(kappa1), 0): both the Hessian applied to
    the wave and the third variation along the partner wave, when
    gamma == kappa1."""
    p = soliton(grid, params.omega).values
    g1 = -2.0 / np.sqrt(params.kappa1) * p**3
    return FieldPair.from_components(grid, g1, np.zeros_like(g1))


def quartic_identity_report(grid: Grid, params: Params,
                            amplitudes=(0.1, 0.5, 1.5), tol: float = 1e-9) -> dict:
    """Check that along the partner direction the action and its gradient
    pairing follow the exact quartic law (no asymptotics involved)."""
    if params.gamma != params.kappa1:
        raise ValueError("the quartic identity requires gamma == kappa1")
    wave = semitrivial_wave(grid, params)
    partner = partner_wave(grid, params)
    base = action(wave, params)
    fourth = degenerate_coefficients(params).action_fourth
    rows = []
    for lam in amplitudes:
        state = wave + lam * partner
        action_defect = abs(action(state, params) - base - fourth * lam**4 / 24.0)
        pairing = inner_l2(action_gradient(state, params), partner)
        pairing_defect = abs(pairing - fourth * lam**3 / 6.0)
        rows.append({"amplitude": lam, "action_defect": action_defect,
                     "pairing_defect": pairing_defect})
    worst = max(max(r["action_defect"], r["pairing_defect"]) for r in rows)
    return {"rows": rows, "max_defect": worst, "tolerance": tol,
            "passed": bool(worst < tol)}


def fitted_order(amplitudes, remainders) -> float:
    """Least-squares slope of log remainder against log amplitude."""
    rem = np.asarray(remainders, dtype=float)
    if np.all(rem < 1e-14):
        return float("inf")
    rem = np.maximum(rem, 1e-16)
    return float(np.polyfit(np.log(np.asarray(amplitudes)), np.log(rem), 1)[0])


def _orthogonalize(z: FieldPair, against: list) -> FieldPair:
    for b in against:
        z = z + (-inner_l2(z, b) / inner_l2(b, b)) * b
    return z


def _test_directions(grid: Grid, params: Params):
    """Fixed smooth even fields with content in every Hessian block; one
    generic, one projected onto the admissible subspace (orthogonal to the
    wave, i*wave, and partner)."""
    env = 1.0 / np.cosh(0.35 * grid.x)
    c1 = np.cos(np.pi * grid.x / grid.half_length)
    c2 = np.cos(2.0 * np.pi * grid.x / grid.half_length)
    z1 = (0.7 * c1 + 0.4j * c2) * env
    z2 = (0.5 * c2 - 0.3j * c1) * env
    z0 = FieldPair.from_components(grid, z1, z2)
    z0 = (1.0 / norm_h1(z0)) * z0
    wave = semitrivial_wave(grid, params)
    partner = partner_wave(grid, params)
    w0 = _orthogonalize(z0, [wave, 1j * wave, partner])
    w0 = (1.0 / norm_h1(w0)) * w0
    return wave, partner, z0, w0


def _sphere_state(wave, partner, w, lam):
    """lam along the partner plus w, with the wave rescaled so the total
    charge matches the wave's exactly."""
    mass_wave = norm_l2(wave) ** 2
    radicand = 1.0 - (lam**2 * norm_l2(partner) ** 2 + norm_l2(w) ** 2) / mass_wave
    if radicand <= 0.0:
        raise ValueError("displacement too large for the charge sphere")
    mu = np.sqrt(radicand) - 1.0
    return wave + lam * partner + mu * wave + w


def expansion_order_report(grid: Grid, params: Params,
                           amplitudes=(0.2, 0.1, 0.05, 0.025)) -> dict:
    """Measure remainder decay orders of the degenerate expansions.

    Each entry fits the log-log slope of the remainder over the amplitude
    list and passes when the slope exceeds the claimed order by at least 0.5
    (constants in the o(.) terms are never asserted).
    """
    if params.gamma != params.kappa1:
        raise ValueError("expansion checks require gamma == kappa1")
    wave, partner, z0, w0 = _test_directions(grid, params)
    cubic = kernel_cubic_response(grid, params)
    coeff = degenerate_coefficients(params)
    nu1, nu0 = coeff.action_fourth, coeff.sphere_quartic
    base_action = action(wave, params)
    base_energy = energy(wave, params)
    cubic_on_wave = inner_l2(cubic, wave)

    def rem_gradient(lam):
        grad = action_gradient(wave + lam * partner, params)
        return norm_l2(grad + (-0.5 * lam**2) * cubic)

    def rem_action(lam):
        z = lam**2 * z0
        val = action(wave + lam * partner + z, params) - base_action
        model = (nu1 * lam**4 / 24.0 + 0.5 * lam**2 * inner_l2(cubic, z)
                 + 0.5 * hessian_form(z, params))
        return abs(val - model)

    def rem_kernel_pairing(lam):
        z = lam**2 * z0
        grad = action_gradient(wave + lam * partner + z, params)
        val = lam * inner_l2(grad, partner)
        model = nu1 * lam**4 / 6.0 + lam**2 * inner_l2(cubic, z)
        return abs(val - model)

    def rem_wave_pairing(lam):
        z = lam**2 * z0
        grad = action_gradient(wave + lam * partner + z, params)
        val = lam**2 * inner_l2(grad, wave)
        model = 0.5 * lam**4 * cubic_on_wave + lam**2 * inner_l2(cubic, z)
        return abs(val - model)

    def rem_sphere_energy(lam):
        w = lam**2 * w0
        state = _sphere_state(wave, partner, w, lam)
        val = energy(state, params) - base_energy
        model = nu0 * lam**4 + 0.5 * hessian_form(w, params)
        return abs(val - model)

    def rem_sphere_pairing(lam):
        w = lam**2 * w0
        state = _sphere_state(wave, partner, w, lam)
        grad = action_gradient(state, params)
        val = lam * inner_l2(grad, partner) - lam**2 * inner_l2(grad, wave)
        return abs(val - 4.0 * nu0 * lam**4)

    checks = {
        "gradient_expansion": (rem_gradient, 2),
        "action_expansion": (rem_action, 4),
        "kernel_pairing_expansion": (rem_kernel_pairing, 4),
        "wave_pairing_expansion": (rem_wave_pairing, 4),
        "sphere_energy_expansion": (rem_sphere_energy, 4),
        "sphere_pairing_expansion": (rem_sphere_pairing, 4),
    }
    report = {}
    for name, (fn, claimed) in checks.items():
        rems = [fn(lam) for lam in amplitudes]
        slope = fitted_order(amplitudes, rems)
        report[name] = {
            "amplitudes": list(amplitudes),
            "remainders": rems,
            "claimed_order": claimed,
            "fitted_order": slope,
            "passed": bool(slope > claimed + 0.5),
        }
    report["passed"] = bool(all(v["passed"] for v in report.values()
                                if isinstance(v, dict)))
    return report
