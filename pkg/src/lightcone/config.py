"""Run configuration: pydantic models shared by the service and the CLI,
plus construction of the surface they describe."""

from __future__ import annotations

from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .errors import ConfigError, LightconeError
from .lorentz import MetricField, validate_signature
from .surface import Box, GraphHypersurface


class DomainSpec(BaseModel):
    min: List[float]
    max: List[float]

    @model_validator(mode="after")
    def _check(self):
        if len(self.min) != len(self.max):
            raise ValueError("domain min/max length mismatch")
        if any(a >= b for a, b in zip(self.min, self.max)):
            raise ValueError("domain box is empty")
        return self


class ToleranceSpec(BaseModel):
    tol_b: Optional[float] = Field(
        default=None, description="|B| tolerance for classification and "
        "locus refinement; None means the adaptive default")
    tol_grad: float = 1e-7
    zmc: float = 1e-7
    containment: float = 1e-8
    b_axis: float = 1e-8
    grad_axis: float = 1e-6
    ode: float = 1e-6
    initial: float = 1e-9


class GeodesicSpec(BaseModel):
    point: List[float]
    velocity: List[float]


class OdeInitSpec(BaseModel):
    a: float = 0.0
    a_prime: float = 1.0
    b: List[float] = Field(default_factory=list)
    b_prime: List[float] = Field(default_factory=list)


class RunConfig(BaseModel):
    n: int = Field(ge=2)
    f: str
    metric: Union[str, List[str]] = "minkowski"
    phi: str = "0"
    domain: DomainSpec
    grid: List[int]
    base_point: Optional[List[float]] = None
    t_span: Tuple[float, float] = (-1.0, 1.0)
    steps: int = Field(default=1000, ge=2)
    seed: int = 0
    tolerances: ToleranceSpec = Field(default_factory=ToleranceSpec)
    geodesic: Optional[GeodesicSpec] = None
    ode_init: Optional[OdeInitSpec] = None

    @model_validator(mode="after")
    def _check(self):
        if len(self.domain.min) != self.n:
            raise ValueError("domain dimension does not match n")
        if len(self.grid) != self.n:
            raise ValueError("grid must give one node count per axis")
        if any(g < 2 for g in self.grid):
            raise ValueError("grid needs >= 2 nodes per axis")
        if isinstance(self.metric, str) and self.metric != "minkowski":
            raise ValueError('metric must be "minkowski" or a list of '
                             "upper-triangle expression strings")
        return self


def build_metric(cfg: RunConfig) -> MetricField:
    if isinstance(cfg.metric, str):
        return MetricField.minkowski(cfg.n)
    try:
        return MetricField.from_strings(cfg.n, cfg.metric)
    except LightconeError as err:
        raise ConfigError(f"metric: {err}") from None
    except ValueError as err:
        raise ConfigError(f"metric: {err}") from None


def build_surface(cfg: RunConfig) -> GraphHypersurface:
    """Surface described by the config, with the metric signature checked
    at the base point (ambient origin by default)."""
    metric = build_metric(cfg)
    box = Box(tuple(cfg.domain.min), tuple(cfg.domain.max))
    try:
        S = GraphHypersurface.from_strings(cfg.n, cfg.f, metric,
                                           phi=cfg.phi, domain=box)
    except LightconeError as err:
        raise ConfigError(f"surface: {err}") from None
    except ValueError as err:
        raise ConfigError(f"surface: {err}") from None
    base = cfg.base_point if cfg.base_point is not None \
        else [0.0] * (cfg.n + 1)
    if len(base) != cfg.n + 1:
        raise ConfigError("base_point must have n+1 coordinates")
    try:
        validate_signature(metric, np.asarray(base, dtype=float))
    except LightconeError as err:
        raise ConfigError(f"metric at base point: {err}") from None
    return S
