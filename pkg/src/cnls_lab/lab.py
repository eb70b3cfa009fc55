"""Experiment orchestration: single runs, phase-diagram sweeps, and reports.

A sweep integrates one perturbed wave per (gamma, kappa2) cell and classifies
the run from its orbital-distance history:

* Unstable -- the distance ever reaches ``unstable_threshold``;
* Stable -- the run reaches the horizon with the distance always below
  ``stable_factor * eps`` (for cells started from the charge-matched kernel
  seed, below ``stable_factor *`` the seed's own initial distance, since that
  displacement is macroscopic by design);
* Undecided -- anything else.  A finite horizon cannot certify asymptotic
  stability, so the middle verdict is unavoidable in principle.

Each row also carries the theoretical verdict for its cell: stable for
gamma < kappa1, unstable for gamma > kappa1, on the degenerate line decided
by kappa2 vs kappa1 with the triple-degenerate point left open, and
stable-all for the incoherent system.

Cells run in a process pool (``workers`` argument, else the LAB_WORKERS
environment variable, else the CPU count); results do not depend on the
worker count.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from itertools import product

import numpy as np

from .dynamics import EvolveConfig, RunRecord, evolve
from .fields import Coupling, Params, interleave, make_grid
from .functionals import (
    degenerate_coefficients,
    directional_derivative,
    expansion_order_report,
    quartic_identity_report,
)
from .linops import (
    linearized_operator,
    linearized_quadratic_form,
    lowest_eigenpairs,
    scalar_constrained_minimum,
)
from .waves import (
    charge_matched_seed,
    partner_wave,
    perturbed_wave,
    profile_quartic_norm,
    semitrivial_wave,
    soliton,
)

# distance between recorded samples in time units (sweeps classify from the
# distance series; finer sampling than this buys nothing)
_SWEEP_SAMPLE_SPACING = 0.02


def resolve_workers(explicit=None) -> int:
    if explicit is not None:
        if explicit < 1:
            raise ValueError("worker count must be positive")
        return int(explicit)
    env = os.environ.get("LAB_WORKERS")
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError("LAB_WORKERS must be an integer") from exc
        if value < 1:
            raise ValueError("LAB_WORKERS must be positive")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SingleRunConfig:
    gamma: float
    kappa1: float = 1.0
    kappa2: float = 1.0
    omega: float = 1.0
    coupling: str = "coherent"
    n: int = 1024
    half_length: float = 40.0
    dt: float = 5e-4
    t_end: float = 50.0
    sample_every: int = 10
    eps: float = 0.0
    seed: int = 0
    seed_lambda: float | None = None
    blowup_threshold: float = 1e6
    symmetrize: bool = False

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if self.seed_lambda is not None and not 0 < abs(self.seed_lambda) < 1:
            raise ValueError("seed_lambda must satisfy 0 < |seed_lambda| < 1")


def _initial_state(grid, params: Params, eps: float, seed: int,
                   seed_lambda: float | None):
    """Kernel seed if an amplitude is given, else the eps-perturbed wave
    (the exact wave when eps == 0)."""
    if seed_lambda is not None:
        return charge_matched_seed(grid, params, seed_lambda)
    return perturbed_wave(grid, params, eps, seed)


def run_single(cfg: SingleRunConfig) -> RunRecord:
    grid = make_grid(cfg.n, cfg.half_length)
    params = Params(kappa1=cfg.kappa1, kappa2=cfg.kappa2, gamma=cfg.gamma,
                    omega=cfg.omega, coupling=Coupling(cfg.coupling))
    u0 = _initial_state(grid, params, cfg.eps, cfg.seed, cfg.seed_lambda)
    econf = EvolveConfig(dt=cfg.dt, t_end=cfg.t_end,
                         sample_every=cfg.sample_every,
                         blowup_threshold=cfg.blowup_threshold,
                         symmetrize=cfg.symmetrize)
    return evolve(u0, params, econf, track_wave=True)


@dataclass(frozen=True)
class SweepConfig:
    kappa1: float
    omega: float
    gamma_values: tuple
    kappa2_values: tuple
    eps: float
    t_end: float
    stable_factor: float = 10.0
    unstable_threshold: float = 0.3
    n: int = 1024
    half_length: float = 40.0
    dt: float = 5e-4
    coupling: str = "coherent"
    seed: int = 0
    seed_lambda: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "gamma_values",
                           tuple(float(g) for g in self.gamma_values))
        object.__setattr__(self, "kappa2_values",
                           tuple(float(k) for k in self.kappa2_values))
        if not self.gamma_values or not self.kappa2_values:
            raise ValueError("gamma_values and kappa2_values must be nonempty")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not self.unstable_threshold > self.stable_factor * self.eps:
            raise ValueError(
                "unstable_threshold must exceed stable_factor * eps")
        if self.seed_lambda is not None and not 0 < abs(self.seed_lambda) < 1:
            raise ValueError("seed_lambda must satisfy 0 < |seed_lambda| < 1")
        Coupling(self.coupling)


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    kappa2: float
    verdict: str
    theory: str
    max_distance: float
    first_crossing_time: float | None
    max_energy_drift: float
    max_charge_drift: float
    error: str | None = None


def theory_verdict(coupling: Coupling, gamma: float, kappa1: float,
                   kappa2: float) -> str:
    if Coupling(coupling) is Coupling.INCOHERENT:
        return "stable-all"
    if gamma < kappa1:
        return "stable"
    if gamma > kappa1:
        return "unstable"
    if kappa2 < kappa1:
        return "stable"
    if kappa2 > kappa1:
        return "unstable"
    return "open"


def classify(times, distance, reached_horizon: bool, stable_bound: float,
             unstable_threshold: float):
    """Verdict plus (max distance, first crossing time or None)."""
    d = np.asarray(distance, dtype=float)
    t = np.asarray(times, dtype=float)
    max_d = float(np.max(d))
    crossed = d >= unstable_threshold
    if np.any(crossed):
        return "Unstable", max_d, float(t[int(np.argmax(crossed))])
    if reached_horizon and max_d < stable_bound:
        return "Stable", max_d, None
    return "Undecided", max_d, None


def _sweep_cell(args) -> SweepRow:
    cfg, gamma, kappa2 = args
    theory = theory_verdict(cfg.coupling, gamma, cfg.kappa1, kappa2)
    try:
        grid = make_grid(cfg.n, cfg.half_length)
        params = Params(kappa1=cfg.kappa1, kappa2=kappa2, gamma=gamma,
                        omega=cfg.omega, coupling=Coupling(cfg.coupling))
        seeded = (cfg.seed_lambda is not None and gamma == cfg.kappa1
                  and Coupling(cfg.coupling) is Coupling.COHERENT)
        if seeded:
            u0 = charge_matched_seed(grid, params, cfg.seed_lambda)
        else:
            u0 = perturbed_wave(grid, params, cfg.eps, cfg.seed)
        sample_every = max(1, int(round(_SWEEP_SAMPLE_SPACING / cfg.dt)))
        econf = EvolveConfig(dt=cfg.dt, t_end=cfg.t_end,
                             sample_every=sample_every)
        record = evolve(u0, params, econf, track_wave=True, track_pair=False)
        if seeded:
            stable_bound = cfg.stable_factor * float(record.distance[0])
        else:
            stable_bound = cfg.stable_factor * cfg.eps
        verdict, max_d, crossing = classify(
            record.times, record.distance,
            reached_horizon=not record.terminated_early,
            stable_bound=stable_bound,
            unstable_threshold=cfg.unstable_threshold)
        return SweepRow(
            gamma=gamma, kappa2=kappa2, verdict=verdict, theory=theory,
            max_distance=max_d, first_crossing_time=crossing,
            max_energy_drift=float(np.max(np.abs(record.energy_drift))),
            max_charge_drift=float(np.max(np.abs(record.charge_drift))),
        )
    except Exception as exc:  # record the failure, do not abort the sweep
        return SweepRow(gamma=gamma, kappa2=kappa2, verdict="", theory=theory,
                        max_distance=float("nan"), first_crossing_time=None,
                        max_energy_drift=float("nan"),
                        max_charge_drift=float("nan"), error=str(exc))


def run_sweep(cfg: SweepConfig, workers=None) -> list:
    """One classified row per (gamma, kappa2) cell, in config order."""
    cells = [(cfg, g, k2) for g, k2 in product(cfg.gamma_values,
                                               cfg.kappa2_values)]
    count = resolve_workers(workers)
    if count == 1 or len(cells) == 1:
        return [_sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=min(count, len(cells))) as pool:
        return list(pool.map(_sweep_cell, cells))


def _clean(x) -> float | None:
    x = float(x)
    return x if np.isfinite(x) else None


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def sweep_csv_text(rows, generated_at: str | None = None) -> str:
    buf = io.StringIO()
    buf.write(f"# generated: {generated_at or _timestamp()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["gamma", "kappa2", "verdict", "theory", "max_distance",
                     "first_crossing_time", "max_energy_drift",
                     "max_charge_drift", "error"])
    for r in rows:
        writer.writerow([
            repr(r.gamma), repr(r.kappa2), r.verdict, r.theory,
            repr(r.max_distance),
            "" if r.first_crossing_time is None else repr(r.first_crossing_time),
            repr(r.max_energy_drift), repr(r.max_charge_drift),
            r.error or "",
        ])
    return buf.getvalue()


def sweep_rows_json(rows) -> list:
    out = []
    for r in rows:
        d = asdict(r)
        d["max_distance"] = _clean(r.max_distance)
        d["max_energy_drift"] = _clean(r.max_energy_drift)
        d["max_charge_drift"] = _clean(r.max_charge_drift)
        out.append(d)
    return out


def run_csv_text(record: RunRecord, generated_at: str | None = None) -> str:
    buf = io.StringIO()
    buf.write(f"# generated: {generated_at or _timestamp()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "E_drift", "Q_drift", "dist_X", "A", "P"])
    m = len(record.times)
    nan_col = np.full(m, np.nan)
    dist = record.distance if record.distance is not None else nan_col
    mom = record.moment_series if record.moment_series is not None else nan_col
    rate = record.rate_series if record.rate_series is not None else nan_col
    for i in range(m):
        writer.writerow([repr(float(record.times[i])),
                         repr(float(record.energy_drift[i])),
                         repr(float(record.charge_drift[i])),
                         repr(float(dist[i])), repr(float(mom[i])),
                         repr(float(rate[i]))])
    return buf.getvalue()


def run_json_dict(record: RunRecord) -> dict:
    def series(arr):
        if arr is None:
            return None
        return [_clean(v) for v in np.asarray(arr, dtype=float)]

    params = record.params
    cfg = record.config
    return {
        "params": {
            "kappa1": params.kappa1, "kappa2": params.kappa2,
            "gamma": params.gamma, "omega": params.omega,
            "coupling": params.coupling.value,
        },
        "config": {
            "dt": cfg.dt, "t_end": cfg.t_end, "sample_every": cfg.sample_every,
            "blowup_threshold": cfg.blowup_threshold,
            "symmetrize": cfg.symmetrize,
        },
        "initial_energy": record.initial_energy,
        "initial_charge": record.initial_charge,
        "final_time": record.final_time,
        "terminated_early": record.terminated_early,
        "termination_reason": record.termination_reason,
        "termination_time": record.termination_time,
        "series": {
            "t": series(record.times),
            "E_drift": series(record.energy_drift),
            "Q_drift": series(record.charge_drift),
            "dist_X": series(record.distance),
            "A": series(record.moment_series),
            "P": series(record.rate_series),
        },
        "final_state": {
            "n": record.final_state.grid.n,
            "half_length": record.final_state.grid.half_length,
            "u1": interleave(record.final_state.u1),
            "u2": interleave(record.final_state.u2),
        },
    }


def spectral_report_job(a_values, omega: float, n: int = 1024,
                        half_length: float = 40.0,
                        num_eigenvalues: int = 6) -> dict:
    """Eigenvalues and coercivity verdicts of the linearized operator family
    on the even subspace, per potential weight."""
    if not a_values:
        raise ValueError("a_values must be nonempty")
    grid = make_grid(n, half_length)
    prof = soliton(grid, omega).values
    prof_norm2 = float(np.sum(prof**2)) * grid.dx
    entries = []
    for a in a_values:
        a = float(a)
        op = linearized_operator(grid, a, omega)
        rep = lowest_eigenpairs(op, num_eigenvalues)
        ground = rep.eigenvectors[0]
        sim = abs(float(np.sum(ground * prof)) * grid.dx) / np.sqrt(
            prof_norm2 * float(np.sum(ground**2)) * grid.dx)
        pairing = linearized_quadratic_form(grid, a, prof, omega)
        closed = (1.0 - a) * profile_quartic_norm(omega)
        cmin = scalar_constrained_minimum(grid, a, omega, orthogonal_to=(prof,))
        umin = scalar_constrained_minimum(grid, a, omega)
        ev0 = float(rep.eigenvalues[0])
        if a < 1.0:
            verdict = (f"coercive without constraints: lowest even eigenvalue "
                       f"{ev0:.6f}, H1 Rayleigh minimum {umin:.6f}")
        elif a == 1.0:
            verdict = (f"kernel at the profile: lowest even eigenvalue "
                       f"{ev0:.2e}, eigenvector cosine similarity to the "
                       f"profile {sim:.6f}, coercive orthogonal to it "
                       f"(minimum {cmin:.6f})")
        elif a <= 3.0:
            verdict = (f"one negative direction (lowest even eigenvalue "
                       f"{ev0:.6f}), coercive orthogonal to the profile "
                       f"(minimum {cmin:.6f})")
        else:
            verdict = (f"lowest even eigenvalue {ev0:.6f}; "
                       f"orthogonal-to-profile minimum {cmin:.6f}")
        entry = rep.to_dict()
        entry.update({
            "profile_pairing": pairing,
            "profile_pairing_closed_form": closed,
            "kernel_similarity": sim,
            "constrained_minimum": cmin,
            "unconstrained_minimum": umin,
            "verdict": verdict,
        })
        entries.append(entry)
    return {"omega": float(omega), "n": int(n),
            "half_length": float(half_length), "entries": entries}


def expansion_check_job(kappa1: float, kappa2: float, gamma: float,
                        omega: float, n: int = 1024,
                        half_length: float = 40.0) -> dict:
    """Exact quartic identity, closed-form vs finite-difference quartic
    coefficients, and expansion remainder orders, on the degenerate line."""
    if gamma != kappa1:
        raise ValueError("expansion checks require gamma == kappa1")
    grid = make_grid(n, half_length)
    params = Params(kappa1=kappa1, kappa2=kappa2, gamma=gamma, omega=omega)
    wave = semitrivial_wave(grid, params)
    partner = partner_wave(grid, params)

    coeffs = degenerate_coefficients(params)
    fourth_fd = directional_derivative(wave, [partner] * 4, params, order=4)
    wave_pairing_fd = directional_derivative(wave, [wave, wave], params, order=2)
    cubic_pairing_fd = directional_derivative(wave, [partner, partner, wave],
                                              params, order=3)
    sphere_fd = (wave_pairing_fd / 8.0 - cubic_pairing_fd / 4.0
                 + fourth_fd / 24.0)
    rtol = 1e-5
    fourth_rel = abs(fourth_fd - coeffs.action_fourth) / abs(coeffs.action_fourth)
    sphere_scale = max(abs(coeffs.sphere_quartic), 1e-6)
    sphere_rel = abs(sphere_fd - coeffs.sphere_quartic) / sphere_scale
    agreement = bool(fourth_rel < rtol and sphere_rel < rtol)

    quartic = quartic_identity_report(grid, params)
    orders = expansion_order_report(grid, params)
    return {
        "params": {"kappa1": kappa1, "kappa2": kappa2, "gamma": gamma,
                   "omega": omega, "n": n, "half_length": half_length},
        "coefficients": {
            "action_fourth": coeffs.action_fourth,
            "sphere_quartic": coeffs.sphere_quartic,
            "action_fourth_fd": fourth_fd,
            "sphere_quartic_fd": sphere_fd,
            "relative_tolerance": rtol,
            "passed": agreement,
        },
        "quartic_identity": quartic,
        "expansion_orders": orders,
        "passed": bool(agreement and quartic["passed"] and orders["passed"]),
    }
