"""FastAPI service wrapping the core package.

Scenario validation errors surface as HTTP 422 with the violated invariant
in the detail; optimizer non-convergence is reported in-band (flags in the
payload), never as an HTTP error.
"""

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..capacity import ergodic_capacity
from ..checks import run_all_checks
from ..optimizer import optimize, optimize_los, optimize_omni
from ..scenario import ScenarioError, scenario_from_mapping
from ..sensing import threshold_from_kappa
from ..sweeps import SweepSpec, run_figure, run_sweep, table_any_nonconverged
from .models import (CapacityRequest, CapacityResponse, CheckModel,
                     ChecksRequest, ChecksResponse, FigureRequest,
                     OptimizeRequest, OptimizeResponse, SweepRequest,
                     TableResponse)

_OPTIMIZERS = {"dir": optimize, "omni": optimize_omni, "los": optimize_los}


def create_app():
    app = FastAPI(title="cogbeam", version=__version__,
                  description="Capacity optimization for a cognitive radio "
                              "link with steerable directional antennas")

    @app.exception_handler(ScenarioError)
    async def scenario_error_handler(request: Request, exc: ScenarioError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/optimize", response_model=OptimizeResponse)
    def optimize_endpoint(req: OptimizeRequest):
        scenario = scenario_from_mapping(req.scenario)
        cfg = req.search.to_search_config()
        res = _OPTIMIZERS[req.variant](scenario, cfg)
        return OptimizeResponse(
            tau_opt_s=res.tau_opt,
            phi_t_opt_deg=math.degrees(res.phi_t_opt),
            phi_r_opt_deg=math.degrees(res.phi_r_opt),
            p_opt_w=res.p_opt,
            c_opt=res.c_opt,
            binding=res.binding,
            iterations=res.iterations,
            converged=res.converged,
        )

    @app.post("/capacity", response_model=CapacityResponse)
    def capacity_endpoint(req: CapacityRequest):
        scenario = scenario_from_mapping(req.scenario)
        theta = scenario.geometry.theta
        phi_t = theta if req.phi_t_deg is None else math.radians(req.phi_t_deg)
        phi_r = math.pi + theta if req.phi_r_deg is None else math.radians(req.phi_r_deg)
        xi = req.xi if req.xi is not None else threshold_from_kappa(
            scenario, phi_t, req.xi_kappa)
        cap = ergodic_capacity(scenario, req.p, phi_t, phi_r, req.tau, xi)
        return CapacityResponse(
            capacity=cap, xi_used=xi,
            phi_t_deg=math.degrees(phi_t), phi_r_deg=math.degrees(phi_r))

    @app.post("/sweep", response_model=TableResponse)
    def sweep_endpoint(req: SweepRequest):
        scenario = scenario_from_mapping(req.scenario)
        spec = SweepSpec(variable=req.sweep.variable,
                         values=tuple(req.sweep.values),
                         mode=req.sweep.mode,
                         baselines=tuple(req.sweep.baselines))
        table = run_sweep(scenario, spec, req.search.to_search_config())
        return TableResponse(header=list(table.header),
                             rows=[list(r) for r in table.rows],
                             any_nonconverged=table_any_nonconverged(table))

    @app.post("/figures/{name}", response_model=TableResponse)
    def figure_endpoint(name: str, req: FigureRequest):
        scenario = scenario_from_mapping(req.scenario)
        table = run_figure(name, scenario, req.search.to_search_config())
        return TableResponse(header=list(table.header),
                             rows=[list(r) for r in table.rows],
                             any_nonconverged=table_any_nonconverged(table))

    @app.post("/checks", response_model=ChecksResponse)
    def checks_endpoint(req: ChecksRequest):
        scenario = scenario_from_mapping(req.scenario)
        results = run_all_checks(scenario, seed=req.seed, mc_samples=req.mc_samples)
        checks = [CheckModel(name=r.name, passed=r.passed, detail=r.detail)
                  for r in results]
        return ChecksResponse(checks=checks,
                              all_passed=all(r.passed for r in results))

    return app
