"""Spherical-triangle parametrisation and per-site free energies.

The spectral parameters are parametrised by the angles theta_i of a
spherical triangle with sides a_i.  The four angles

    beta_0 = pi - (a1 + a2 + a3) / 2,    beta_j = pi - beta_0 - a_j,

sum to pi and enter every free-energy formula through the Lobachevsky
function Lambda(beta) = -int_0^beta log(2 sin x) dx.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .dilog import ModularParam
from .errors import DegenerateTriangle, DomainError

CATALAN = 0.915965594177219015054603514932
DEGENERACY_TOL = 1e-9

VERTEX = "vertex"
FIELD = "field"
ZBB = "zbb"


@dataclass(frozen=True)
class SphericalTriangle:
    theta: tuple
    sides: tuple
    betas: tuple

    def cosine_residual(self) -> float:
        """Largest deviation from the angle cosine rule."""
        return float(np.max(np.abs(np.cos(self.sides) - _cos_sides(self.theta))))


@dataclass(frozen=True)
class FreeEnergyResult:
    log_z: complex
    z: complex
    betas: tuple
    b: complex | None
    formula: str
    N: int | None = None


def _cos_sides(theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float)
    out = np.empty(3)
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        out[i] = (np.cos(t[i]) + np.cos(t[j]) * np.cos(t[k])) / (np.sin(t[j]) * np.sin(t[k]))
    return out


def betas_from_sides(a) -> tuple:
    a1, a2, a3 = (float(x) for x in a)
    b0 = np.pi - (a1 + a2 + a3) / 2
    betas = (b0, np.pi - b0 - a1, np.pi - b0 - a2, np.pi - b0 - a3)
    for j, b in enumerate(betas):
        if not (DEGENERACY_TOL < b < np.pi - DEGENERACY_TOL):
            raise DegenerateTriangle(f"beta_{j} = {b:.6g} is not inside (0, pi); choose a less degenerate triangle")
    return betas


def triangle_from_thetas(theta1: float, theta2: float, theta3: float) -> SphericalTriangle:
    """Sides from the angle cosine rule, then the four betas."""
    theta = (float(theta1), float(theta2), float(theta3))
    for i, t in enumerate(theta, 1):
        if not (DEGENERACY_TOL < t < np.pi - DEGENERACY_TOL):
            raise DegenerateTriangle(f"theta_{i} = {t:.6g} is not inside (0, pi)")
    c = _cos_sides(theta)
    if np.any(np.abs(c) >= 1):
        raise DegenerateTriangle(f"cosine rule gives cos a = {c.tolist()}, outside (-1, 1)")
    sides = tuple(float(x) for x in np.arccos(c))
    return SphericalTriangle(theta, sides, betas_from_sides(sides))


def thetas_from_sides(a) -> tuple:
    """Inverse of the angle cosine rule (the side cosine rule)."""
    a = np.asarray(a, dtype=float)
    out = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        out.append(float(np.arccos((np.cos(a[i]) - np.cos(a[j]) * np.cos(a[k])) / (np.sin(a[j]) * np.sin(a[k])))))
    return tuple(out)


def lambdas_from_triangle(tri: SphericalTriangle, eta: complex) -> tuple:
    """lambda_i with exp(i pi lambda_i / eta) = tan^2, cot^2, tan^2 of theta_i / 2."""
    eta = complex(eta)
    if eta == 0:
        raise DomainError("eta must be nonzero")
    t1, t2, t3 = tri.theta
    logs = (np.log(np.tan(t1 / 2) ** 2), np.log(1 / np.tan(t2 / 2) ** 2), np.log(np.tan(t3 / 2) ** 2))
    return tuple(complex(eta / (1j * np.pi) * v) for v in logs)


def lambdas_from_betas(tri: SphericalTriangle, eta: complex) -> tuple:
    """Same parameters written through sine ratios of the betas."""
    s0, s1, s2, s3 = np.sin(tri.betas)
    ratios = (s2 * s3 / (s0 * s1), s0 * s2 / (s1 * s3), s1 * s2 / (s0 * s3))
    return tuple(complex(complex(eta) / (1j * np.pi) * np.log(r)) for r in ratios)


# ---------------------------------------------------------------------------
# Lobachevsky function


def lobachevsky(beta, tol: float = 1e-15):
    """Lambda(beta) = Cl_2(2 beta) / 2, vectorised.

    Uses Cl_2(t) = t - t log|t| + t sum_k zeta(2k) / (k (2k + 1)) (t / 2 pi)^(2k)
    on |t| <= pi after reduction mod 2 pi.  The terms fall like 4^-k, so
    about 25 of them reach double precision.
    """
    t = np.asarray(beta, dtype=float) * 2
    t = np.mod(t + np.pi, 2 * np.pi) - np.pi
    u = (t / (2 * np.pi)) ** 2
    acc = np.zeros_like(t)
    p = np.ones_like(t)
    for k in range(1, 200):
        p = p * u
        term = special.zeta(2 * k) / (k * (2 * k + 1)) * p
        acc = acc + term
        if np.all(term <= tol):
            break
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = np.where(t == 0, 0.0, t * np.log(np.abs(np.where(t == 0, 1.0, t))))
    out = 0.5 * (t - lg + t * acc)
    return out[()] if out.ndim == 0 else out


def lobachevsky_quad(beta: float) -> float:
    """-int_0^beta log(2 sin x) dx by adaptive quadrature, for 0 <= beta <= pi.

    The log singularities at 0 and pi are split off and integrated exactly,
    leaving a smooth integrand.
    """
    beta = float(beta)
    if not 0 <= beta <= np.pi:
        raise DomainError("quadrature oracle only covers [0, pi]")
    if beta == 0:
        return 0.0

    def smooth(x):
        return np.log(2 * np.sin(x) / (x * (np.pi - x))) if 0 < x < np.pi else np.log(2 / np.pi)

    body, _ = integrate.quad(smooth, 0, beta, epsabs=1e-13, epsrel=1e-13, limit=200)
    log_x = beta * np.log(beta) - beta
    r = np.pi - beta
    log_r = (np.pi * np.log(np.pi) - np.pi) - ((r * np.log(r) if r > 0 else 0.0) - r)
    return float(-(body + log_x + log_r))


# ---------------------------------------------------------------------------
# free energies


def _eta(m) -> complex:
    return (m if isinstance(m, ModularParam) else ModularParam(m)).eta


def _result(log_z, betas, m, formula, N=None) -> FreeEnergyResult:
    b = (m if isinstance(m, ModularParam) else ModularParam(m)).b
    return FreeEnergyResult(complex(log_z), complex(np.exp(log_z)), tuple(betas), b, formula, N)


def z_vert_inf(tri: SphericalTriangle, m) -> FreeEnergyResult:
    eta = _eta(m)
    bt = np.asarray(tri.betas)
    s = np.sum(lobachevsky(bt) + (bt - np.pi / 4) * np.log(2 * np.sin(bt)))
    return _result(4 * eta**2 / np.pi * s, tri.betas, m, VERTEX)


def field_sides(fields, m) -> tuple:
    """Linear angles a_i = 2 pi phi_i / eta; they must come out real."""
    eta = _eta(m)
    a = [2 * np.pi * complex(p) / eta for p in fields]
    if any(abs(x.imag) > 1e-12 * (1 + abs(x)) for x in a):
        raise DomainError(f"fields give non-real linear angles {a}; use phi_i on the line eta * R")
    return tuple(x.real for x in a)


def z_field_inf(fields, m) -> FreeEnergyResult:
    eta = _eta(m)
    betas = betas_from_sides(field_sides(fields, m))
    s = np.sum(lobachevsky(np.asarray(betas)))
    return _result(4 * eta**2 / np.pi * s, betas, m, FIELD)


def kappa_zbb(N: int, tri: SphericalTriangle) -> FreeEnergyResult:
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    bt = np.asarray(tri.betas)
    s = np.sum(lobachevsky(bt) + bt / 2 * np.log(2 * np.sin(bt)) - np.pi / 2 * np.log(np.sqrt(2) * np.cos(bt / 2)))
    log_k = 2 * (N - 1) / (N * np.pi) * s
    return FreeEnergyResult(complex(log_k), complex(np.exp(log_k)), tri.betas, None, ZBB, int(N))
