"""Request and response models for the HTTP service.

Requests reject unknown fields so config typos fail loudly (as a 422).
Responses replace non-finite floats with null; the run CSV renders them as
"nan" instead.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpectralRequest(StrictModel):
    a_values: list[float] = Field(min_length=1)
    omega: float = Field(default=1.0, gt=0)
    n: int = Field(default=1024, ge=16)
    half_length: float = Field(default=40.0, gt=0)
    num_eigenvalues: int = Field(default=6, ge=1)


class SpectralEntry(StrictModel):
    a: float
    omega: float
    n: int
    half_length: float
    eigenvalues: list[float]
    constraint_tags: list[str]
    profile_pairing: float
    profile_pairing_closed_form: float
    kernel_similarity: float
    constrained_minimum: float
    unconstrained_minimum: float
    verdict: str


class SpectralResponse(StrictModel):
    omega: float
    n: int
    half_length: float
    entries: list[SpectralEntry]


class SingleRunRequest(StrictModel):
    gamma: float = Field(gt=0)
    kappa1: float = Field(default=1.0, gt=0)
    kappa2: float = Field(default=1.0, gt=0)
    omega: float = Field(default=1.0, gt=0)
    coupling: Literal["coherent", "incoherent"] = "coherent"
    n: int = Field(default=1024, ge=16)
    half_length: float = Field(default=40.0, gt=0)
    dt: float = Field(default=5e-4, gt=0, le=0.1)
    t_end: float = Field(default=50.0, gt=0)
    sample_every: int = Field(default=10, ge=1)
    eps: float = Field(default=0.0, ge=0)
    seed: int = 0
    seed_lambda: float | None = None
    blowup_threshold: float = Field(default=1e6, gt=0)
    symmetrize: bool = False

    @model_validator(mode="after")
    def _check_seed_lambda(self):
        if self.seed_lambda is not None and not 0 < abs(self.seed_lambda) < 1:
            raise ValueError("seed_lambda must satisfy 0 < |seed_lambda| < 1")
        return self


class ParamsOut(StrictModel):
    kappa1: float
    kappa2: float
    gamma: float
    omega: float
    coupling: str


class EvolveConfigOut(StrictModel):
    dt: float
    t_end: float
    sample_every: int
    blowup_threshold: float
    symmetrize: bool


class SeriesOut(StrictModel):
    t: list[float | None]
    E_drift: list[float | None]
    Q_drift: list[float | None]
    dist_X: list[float | None] | None
    A: list[float | None] | None
    P: list[float | None] | None


class FinalStateOut(StrictModel):
    n: int
    half_length: float
    u1: list[float]  # interleaved re, im
    u2: list[float]


class SingleRunResponse(StrictModel):
    params: ParamsOut
    config: EvolveConfigOut
    initial_energy: float
    initial_charge: float
    final_time: float
    terminated_early: bool
    termination_reason: str | None
    termination_time: float | None
    series: SeriesOut
    final_state: FinalStateOut
    csv: str


class SweepRequest(StrictModel):
    kappa1: float = Field(gt=0)
    omega: float = Field(gt=0)
    gamma_values: list[float] = Field(min_length=1)
    kappa2_values: list[float] = Field(min_length=1)
    eps: float = Field(gt=0)
    t_end: float = Field(gt=0)
    stable_factor: float = Field(default=10.0, gt=0)
    unstable_threshold: float = Field(default=0.3, gt=0)
    n: int = Field(default=1024, ge=16)
    half_length: float = Field(default=40.0, gt=0)
    dt: float = Field(default=5e-4, gt=0, le=0.1)
    coupling: Literal["coherent", "incoherent"] = "coherent"
    seed: int = 0
    seed_lambda: float | None = None

    @model_validator(mode="after")
    def _check_thresholds(self):
        if not self.unstable_threshold > self.stable_factor * self.eps:
            raise ValueError(
                "unstable_threshold must exceed stable_factor * eps")
        if self.seed_lambda is not None and not 0 < abs(self.seed_lambda) < 1:
            raise ValueError("seed_lambda must satisfy 0 < |seed_lambda| < 1")
        return self


class SweepRowOut(StrictModel):
    gamma: float
    kappa2: float
    verdict: str
    theory: str
    max_distance: float | None
    first_crossing_time: float | None
    max_energy_drift: float | None
    max_charge_drift: float | None
    error: str | None


class SweepResponse(StrictModel):
    rows: list[SweepRowOut]
    csv: str


class ExpansionRequest(StrictModel):
    kappa1: float = Field(gt=0)
    kappa2: float = Field(gt=0)
    gamma: float = Field(gt=0)
    omega: float = Field(default=1.0, gt=0)
    n: int = Field(default=1024, ge=16)
    half_length: float = Field(default=40.0, gt=0)

    @model_validator(mode="after")
    def _check_degenerate(self):
        if self.gamma != self.kappa1:
            raise ValueError("expansion checks require gamma == kappa1")
        return self


class ExpansionParamsOut(StrictModel):
    kappa1: float
    kappa2: float
    gamma: float
    omega: float
    n: int
    half_length: float


class CoefficientsOut(StrictModel):
    action_fourth: float
    sphere_quartic: float
    action_fourth_fd: float
    sphere_quartic_fd: float
    relative_tolerance: float
    passed: bool


class QuarticRowOut(StrictModel):
    amplitude: float
    action_defect: float
    pairing_defect: float


class QuarticOut(StrictModel):
    rows: list[QuarticRowOut]
    max_defect: float
    tolerance: float
    passed: bool


class OrderCheckOut(StrictModel):
    amplitudes: list[float]
    remainders: list[float]
    claimed_order: int
    # null when every remainder sits at machine zero (order beyond measurable)
    fitted_order: float | None
    passed: bool


class ExpansionOrdersOut(StrictModel):
    gradient_expansion: OrderCheckOut
    action_expansion: OrderCheckOut
    kernel_pairing_expansion: OrderCheckOut
    wave_pairing_expansion: OrderCheckOut
    sphere_energy_expansion: OrderCheckOut
    sphere_pairing_expansion: OrderCheckOut
    passed: bool


class ExpansionResponse(StrictModel):
    params: ExpansionParamsOut
    coefficients: CoefficientsOut
    quartic_identity: QuarticOut
    expansion_orders: ExpansionOrdersOut
    passed: bool
