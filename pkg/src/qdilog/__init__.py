"""Quantum dilogarithms on self-dual groups, Boltzmann weights built from
them, and numerical checks of the identities they satisfy."""
from .config import DEFAULT, QuadConfig
from .dilog import AndersenKashaev, DilogSpec, Faddeev, ModularParam, Woronowicz
from .errors import (
    ConfigError,
    ConstraintViolated,
    DegenerateTriangle,
    DomainError,
    NoConvergence,
    PoleProximity,
    QDilogError,
    SectorViolation,
)
from .groups import CircleByZ, GroupKind, GroupPoint, RealByZN, RealLine, fourier_kernel, gaussian

__version__ = "0.1.0"
