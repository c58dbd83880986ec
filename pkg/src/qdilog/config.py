"""Quadrature / summation policy shared by every integral over a group."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_panel_depth: int = 8
    initial_radius: float = 6.0
    radius_growth: float = 1.5
    max_radius: float = 120.0
    # trapezoid step before the first halving
    initial_step: float = 0.25
    # rotation of the continuous contour about its centre, radians
    contour_rotation: float = 0.0
    # imaginary offset of the continuous contour (R + i*shift, or a shifted circle)
    contour_shift: float = 0.0
    discrete_cutoff: int = 8
    max_discrete_cutoff: int = 400
    pole_guard: float = 1e-6
    seed: int = 20240601
    circle_nodes: int = 64
    max_shift_depth: int = 64
    extended_precision: bool = False

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ConfigError("tolerances must be positive")
        if not self.initial_radius > 0:
            raise ConfigError("initial_radius must be positive")
        if not self.radius_growth > 1:
            raise ConfigError("radius_growth must exceed 1")
        if self.max_radius < self.initial_radius:
            raise ConfigError("max_radius below initial_radius")
        if not abs(self.contour_rotation) < np.pi / 2:
            raise ConfigError("|contour_rotation| must be below pi/2")
        if self.discrete_cutoff < 0 or self.max_discrete_cutoff < self.discrete_cutoff:
            raise ConfigError("bad discrete cutoff bounds")
        if not self.initial_step > 0 or self.circle_nodes < 4 or self.max_panel_depth < 1:
            raise ConfigError("quadrature resolution too small")

    def replace(self, **changes) -> "QuadConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "QuadConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown quadrature options: {sorted(unknown)}")
        return cls(**data)


DEFAULT = QuadConfig()
