"""Pydantic request/response models of the HTTP service.

The scenario itself travels as the raw JSON tree of the config-file schema;
the core loader owns its validation so the file and the API cannot drift.
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..optimizer import SearchConfig


class SearchOverrides(BaseModel):
    """Optional overrides of the search configuration."""

    model_config = ConfigDict(extra="forbid")

    phi_t_grid: Optional[int] = None
    tau_grid: Optional[int] = None
    phi_r_scan: Optional[int] = None
    tol: Optional[float] = None
    max_iters: Optional[int] = None
    xi_kappa: Optional[float] = None
    tau_max_frac: Optional[float] = None

    def to_search_config(self):
        given = {k: v for k, v in self.model_dump().items() if v is not None}
        return SearchConfig(**given)


class OptimizeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict[str, Any] = Field(default_factory=dict)
    search: SearchOverrides = Field(default_factory=SearchOverrides)
    variant: Literal["dir", "omni", "los"] = "dir"


class OptimizeResponse(BaseModel):
    tau_opt_s: float
    phi_t_opt_deg: float
    phi_r_opt_deg: float
    p_opt_w: float
    c_opt: float
    binding: str
    iterations: int
    converged: bool


class CapacityRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict[str, Any] = Field(default_factory=dict)
    p: float
    tau: float
    phi_t_deg: Optional[float] = None      # default: pointed at SU_rx
    phi_r_deg: Optional[float] = None      # default: pointed at SU_tx
    xi: Optional[float] = None             # default: kappa-window midpoint
    xi_kappa: float = 0.5


class CapacityResponse(BaseModel):
    capacity: float
    xi_used: float
    phi_t_deg: float
    phi_r_deg: float


class SweepSpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variable: Literal["tau", "epsilon", "theta", "p_p", "phi_3db", "p_pk"]
    values: list[float]
    mode: Literal["evaluate-only", "full-reoptimize"] = "full-reoptimize"
    baselines: list[Literal["dir", "omni", "los"]] = ["dir"]


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict[str, Any] = Field(default_factory=dict)
    sweep: SweepSpecModel
    search: SearchOverrides = Field(default_factory=SearchOverrides)


class FigureRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict[str, Any] = Field(default_factory=dict)
    search: SearchOverrides = Field(default_factory=SearchOverrides)


class TableResponse(BaseModel):
    header: list[str]
    rows: list[list[Any]]
    any_nonconverged: bool


class ChecksRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: dict[str, Any] = Field(default_factory=dict)
    seed: int = 20250809
    mc_samples: int = 10 ** 6


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class ChecksResponse(BaseModel):
    checks: list[CheckModel]
    all_passed: bool
