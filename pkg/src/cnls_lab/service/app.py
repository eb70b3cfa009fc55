"""HTTP service exposing the lab operations.

Error mapping: malformed or invalid request bodies fail pydantic validation
(422); values that pass validation but are rejected by the lab (for example
a grid size that is not a power of two) surface as 400 with the reason in
``detail``.  Early-terminated runs are not errors; the response carries the
termination fields and clients decide.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException, Query

from .. import lab
from .schemas import (
    ExpansionRequest,
    ExpansionResponse,
    SingleRunRequest,
    SingleRunResponse,
    SpectralRequest,
    SpectralResponse,
    SweepRequest,
    SweepResponse,
)


def _finite_or_none(x: float) -> float | None:
    return x if math.isfinite(x) else None


def create_app() -> FastAPI:
    app = FastAPI(title="cnls-lab", version="0.1.0")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/spectral-report", response_model=SpectralResponse)
    def spectral_report(req: SpectralRequest):
        try:
            return lab.spectral_report_job(
                req.a_values, req.omega, req.n, req.half_length,
                req.num_eigenvalues)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/single-run", response_model=SingleRunResponse)
    def single_run(req: SingleRunRequest):
        try:
            cfg = lab.SingleRunConfig(**req.model_dump())
            record = lab.run_single(cfg)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        payload = lab.run_json_dict(record)
        payload["csv"] = lab.run_csv_text(record)
        return payload

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest,
              workers: int | None = Query(default=None, ge=1)):
        try:
            cfg = lab.SweepConfig(**req.model_dump())
            rows = lab.run_sweep(cfg, workers=workers)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"rows": lab.sweep_rows_json(rows),
                "csv": lab.sweep_csv_text(rows)}

    @app.post("/expansion-check", response_model=ExpansionResponse)
    def expansion_check(req: ExpansionRequest):
        try:
            report = lab.expansion_check_job(
                req.kappa1, req.kappa2, req.gamma, req.omega, req.n,
                req.half_length)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        for check in report["expansion_orders"].values():
            if isinstance(check, dict):
                check["fitted_order"] = _finite_or_none(check["fitted_order"])
        return report

    return app


app = create_app()
