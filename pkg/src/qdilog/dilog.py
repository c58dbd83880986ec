"""Quantum dilogarithms over R, R x Z_N and T x Z.

* Faddeev's Phi_b on R, evaluated either from the q-Pochhammer product
  (needs Im b^2 > 0) or from its Fourier integral (needs Re b > 0, which
  includes real b and |b| = 1).
* The Andersen-Kashaev function on R x Z_N, a product of N Faddeev factors.
* The Woronowicz function on T x Z, a ratio of two q-Pochhammer symbols.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT, QuadConfig
from .errors import (
    DivergentProduct,
    DomainError,
    NonFinite,
    PoleProximity,
    StripExhausted,
    ZeroDenominator,
)
from .groups import CircleByZ, GroupKind, GroupPoint, RealByZN, RealLine, gaussian

PI = np.pi


def pochhammer_inf(x, q, tol: float = 1e-16, max_terms: int = 100_000):
    """(x; q)_inf = prod_{k>=0} (1 - q^k x), vectorised over ``x``.

    Terms are accumulated until the remainder bound
    ``|q^k x| / ((1 - |q|)(1 - |q^k x|))`` on the log of the tail drops
    below ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=complex)
    q = complex(q)
    if not (np.all(np.isfinite(x)) and np.isfinite(q)):
        raise NonFinite("non-finite argument to pochhammer_inf")
    aq = abs(q)
    if aq >= 1:
        raise DivergentProduct(f"|q| = {aq} >= 1")
    result = np.ones_like(x)
    term = x.copy()
    ax = np.abs(x)
    amax = float(ax.max()) if ax.size else 0.0
    for _ in range(max_terms):
        if amax < 1 and amax / ((1 - aq) * (1 - amax)) < tol:
            break
        result = result * (1 - term)
        term = term * q
        amax *= aq
    else:
        raise DivergentProduct("pochhammer_inf did not reach tolerance")
    return result[()] if result.ndim == 0 else result


def log_pochhammer_inf(x, q, tol: float = 1e-16, max_terms: int = 100_000):
    """Sum of log(1 - q^k x); exp of it is (x; q)_inf without overflow for huge |x|."""
    x = np.asarray(x, dtype=complex)
    q = complex(q)
    if not (np.all(np.isfinite(x)) and np.isfinite(q)):
        raise NonFinite("non-finite argument to log_pochhammer_inf")
    aq = abs(q)
    if aq >= 1:
        raise DivergentProduct(f"|q| = {aq} >= 1")
    acc = np.zeros_like(x)
    term = x.copy()
    amax = float(np.abs(x).max()) if x.size else 0.0
    for _ in range(max_terms):
        if amax < 1 and amax / ((1 - aq) * (1 - amax)) < tol:
            break
        acc = acc + np.log(1 - term)
        term = term * q
        amax *= aq
    else:
        raise DivergentProduct("log_pochhammer_inf did not reach tolerance")
    return acc[()] if acc.ndim == 0 else acc


# ---------------------------------------------------------------------------
# modular parameter


@dataclass(frozen=True)
class ModularParam:
    """Faddeev modular parameter b with q = e^{i pi b^2}, q~ = e^{-i pi / b^2}."""

    b: complex

    def __post_init__(self):
        b = complex(self.b)
        if not np.isfinite(b) or b == 0:
            raise DomainError("b must be finite and nonzero")
        if b.real <= 0:
            raise DomainError("Re b must be positive")
        object.__setattr__(self, "b", b)

    @property
    def q(self) -> complex:
        return complex(np.exp(1j * PI * self.b**2))

    @property
    def qt(self) -> complex:
        return complex(np.exp(-1j * PI / self.b**2))

    @property
    def eta(self) -> complex:
        return 1j * (self.b + 1 / self.b) / 2

    @property
    def product_regime(self) -> bool:
        return (self.b**2).imag > 0

    @property
    def unimodular_regime(self) -> bool:
        b = self.b
        return b.imag == 0 or abs(abs(b) - 1) < 1e-14

    @property
    def regime(self) -> str:
        if self.product_regime:
            return "product"
        if self.unimodular_regime:
            return "unimodular"
        return "integral"

    @property
    def strip(self) -> float:
        """Half-width of the strip |Im x| < Im eta_b where the integral converges."""
        return self.eta.imag


def _as_modular(m) -> ModularParam:
    return m if isinstance(m, ModularParam) else ModularParam(m)


def pole_distance(x, m) -> np.ndarray:
    """Distance from ``x`` to the nearest pole eta + imb + in/b or zero -(...)."""
    m = _as_modular(m)
    x = np.asarray(x, dtype=complex)
    b = m.b
    step = min(abs(b), abs(1 / b))
    reach = float(np.max(np.abs(x))) if x.size else 0.0
    K = int(min(60, np.ceil((reach + abs(m.eta)) / step) + 2))
    mm, nn = np.meshgrid(np.arange(K + 1), np.arange(K + 1), indexing="ij")
    lattice = (m.eta + 1j * mm * b + 1j * nn / b).ravel()
    pts = np.concatenate([lattice, -lattice])
    flat = x.ravel()
    out = np.empty(flat.shape, dtype=float)
    chunk = max(1, 200_000 // pts.size)
    for s in range(0, flat.size, chunk):
        seg = flat[s : s + chunk]
        out[s : s + chunk] = np.abs(seg[:, None] - pts[None, :]).min(axis=1)
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def _cone_distance(x, m: ModularParam) -> np.ndarray:
    """Lower bound for pole_distance: distance to the cones eta + i(R+ b + R+ / b) and its negative."""
    b = m.b
    d1 = 1j * b / abs(b)
    d2 = 1j * np.conj(b) / abs(b)  # direction of i/b
    out = None
    for apex_sign in (1, -1):
        p = apex_sign * np.asarray(x, dtype=complex) - m.eta
        det = (np.conj(d1) * d2).imag
        dist = np.full(p.shape, np.inf)
        for d in (d1, d2):
            t = np.maximum(0.0, (p * np.conj(d)).real)
            dist = np.minimum(dist, np.abs(p - t * d))
        if abs(det) > 1e-14:
            # coordinates of p in the (d1, d2) basis; inside the cone means both >= 0
            alpha = (np.conj(p) * d2).imag / (np.conj(d1) * d2).imag
            beta = (np.conj(d1) * p).imag / det
            dist = np.where((alpha >= 0) & (beta >= 0), 0.0, dist)
        out = dist if out is None else np.minimum(out, dist)
    return out


# ---------------------------------------------------------------------------
# Faddeev


def _faddeev_log_product(x, m: ModularParam):
    b = m.b
    q, qt = m.q, m.qt
    # Re x > 0 goes through the inversion relation so the exponentials stay small
    flip = x.real > 0
    y = np.where(flip, -x, x)
    # exponents are formed in log space so that large |x| cannot overflow
    num = log_pochhammer_inf(-np.exp(1j * PI * b * b + 2 * PI * b * y), q * q)
    den = log_pochhammer_inf(-np.exp(-1j * PI / (b * b) + 2 * PI * y / b), qt * qt)
    if not np.all(np.isfinite(den.real)):
        raise ZeroDenominator("Faddeev product denominator vanished")
    out = num - den
    e = m.eta
    log_phi0_sq = -1j * PI * e * e / 3 - 1j * PI / 6
    return np.where(flip, log_phi0_sq + 1j * PI * x * x - out, out)


@lru_cache(maxsize=64)
def _line_rule(b: complex):
    """Trapezoid nodes/weights for the Fourier integral of log Phi_b.

    The contour is the horizontal line at height +delta (passing above the
    triple pole at 0); the mirrored line at -delta is used for Re x > 0 via
    the residue at the origin.  Arguments are pre-shifted so that
    |Im x| <= step/2, which fixes the decay rate and hence the window.
    """
    first_pole = PI * min(b.real / abs(b) ** 2, b.real)
    delta = 0.5 * first_pole
    d = 0.6 * delta  # analyticity half-width used for the step size
    h = 2 * PI * d / 38.0
    width = (b + 1 / b).real  # decay rate of 1/(sinh(bz) sinh(z/b))
    step = min(b.real, (1 / b).real)
    rate = width - step
    T = 40.0 / rate + 2.0
    t = np.arange(-np.ceil(T / h), np.ceil(T / h) + 1) * h
    rules = {}
    for sign in (1, -1):
        z = t + 1j * sign * delta
        g = h / (4 * np.sinh(b * z) * np.sinh(z / b) * z)
        rules[sign] = (z, g)
    return rules


def _line_step(b: complex) -> float:
    z = _line_rule(b)[1][0]
    return float((z[1] - z[0]).real)


def _faddeev_log_strip(x, m: ModularParam):
    """log Phi_b(x) from the integral, for |Im x| <= step/2 (vectorised)."""
    b = m.b
    rules = _line_rule(b)
    out = np.empty(x.shape, dtype=complex)
    s = (b * b + 1 / (b * b))
    h = _line_step(b)
    for sign, mask in ((1, x.real <= 0), (-1, x.real > 0)):
        if not mask.any():
            continue
        z, g = rules[sign]
        xs = x[mask]
        # equispaced nodes: sum_k g_k e^{-2i x (z0 + k h)} = e^{-2i x z0} P(e^{-2i x h}),
        # with P evaluated by Horner's rule
        r = np.exp(-2j * h * xs)
        acc = np.full(xs.shape, g[-1])
        for gk in g[-2::-1]:
            acc = acc * r + gk
        vals = np.exp(-2j * xs * z[0]) * acc
        if sign == -1:
            # residue of the integrand at z = 0 picked up when moving the line down
            vals = vals + 1j * PI * xs**2 + 1j * PI * s / 12
        out[mask] = vals
    return out


def _faddeev_log_integral(x, m: ModularParam, cfg: QuadConfig):
    b = m.b
    # shift in the direction with the smaller imaginary step
    shift = 1j * b if b.real <= (1 / b).real else 1j / b
    kappa = b if b.real <= (1 / b).real else 1 / b
    step = shift.imag
    n = np.rint(x.imag / step).astype(int)
    if np.abs(n).max(initial=0) > cfg.max_shift_depth:
        raise StripExhausted(f"needs {np.abs(n).max()} shifts (max {cfg.max_shift_depth})")
    y = x - n * shift
    acc = _faddeev_log_strip(y, m)
    # Phi(u) = Phi(u - shift) / (1 + exp(2 pi kappa u - i pi kappa^2))  moves down
    # Phi(u) = (1 + exp(2 pi kappa u + i pi kappa^2)) Phi(u + shift)   moves up
    for k in range(int(np.abs(n).max(initial=0))):
        down = n > k  # x above strip: x = y + n*shift, walk from y upward
        up = n < -k
        if down.any():
            u = y[down] + (k + 1) * shift
            acc[down] -= _log1pexp(2 * PI * kappa * u - 1j * PI * kappa**2)
        if up.any():
            u = y[up] - (k + 1) * shift
            acc[up] += _log1pexp(2 * PI * kappa * u + 1j * PI * kappa**2)
    return acc


def _log1pexp(w):
    """log(1 + e^w) without overflow (branch irrelevant, result is exponentiated)."""
    w = np.asarray(w, dtype=complex)
    big = w.real > 30
    out = np.empty_like(w)
    out[big] = w[big] + np.log1p(np.exp(-w[big]))
    out[~big] = np.log1p(np.exp(w[~big]))
    return out


def faddeev_phi(x, m, cfg: QuadConfig | None = None, method: str = "auto"):
    """Faddeev's quantum dilogarithm Phi_b(x), vectorised over ``x``.

    ``method`` is ``"product"``, ``"integral"`` or ``"auto"`` (product when
    Im b^2 is comfortably positive, integral otherwise).
    """
    cfg = cfg or DEFAULT
    m = _as_modular(m)
    xa = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(xa)):
        raise NonFinite("non-finite argument to faddeev_phi")
    if cfg.pole_guard > 0 and xa.size:
        guard = cfg.pole_guard * abs(m.eta)
        near = _cone_distance(xa, m) < guard
        if near.any():
            dist = pole_distance(xa[near], m)
            if np.min(dist) < guard:
                raise PoleProximity(f"argument within {np.min(dist):.3g} of a pole/zero of Phi_b")
    if method == "auto":
        method = "product" if (m.b**2).imag > 0.2 else "integral"
    if method == "product":
        if not m.product_regime:
            raise DomainError("product formula needs Im b^2 > 0")
        logv = _faddeev_log_product(xa, m)
    elif method == "integral":
        logv = _faddeev_log_integral(np.atleast_1d(xa), m, cfg).reshape(xa.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = np.exp(logv)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Andersen-Kashaev


def _frac_pos(j, n, N):
    return np.mod(j + np.asarray(n), N) / N


def ak_phi(x: GroupPoint, m, cfg: QuadConfig | None = None, method: str = "auto"):
    """Andersen-Kashaev dilogarithm on R x Z_N as a product of N Phi_b factors."""
    if x.kind.name != "real-zn":
        raise DomainError("ak_phi needs a point of R x Z_N")
    m = _as_modular(m)
    N = x.kind.N
    b, eta = m.b, m.eta
    xi = np.asarray(x.cont, dtype=complex)
    n = np.asarray(x.disc)
    xi, n = np.broadcast_arrays(xi, n)
    base = xi / np.sqrt(N) + (1 - 1 / N) * eta
    out = np.ones(xi.shape, dtype=complex)
    for j in range(N):
        arg = base - 1j * j / (b * N) - 1j * b * _frac_pos(j, n, N)
        out = out * faddeev_phi(arg, m, cfg, method)
    return out[()] if out.ndim == 0 else out


def ak_phi_prodrep(x: GroupPoint, m, tol: float = 1e-16):
    """The same function from its two-Pochhammer representation (Im b^2 > 0)."""
    m = _as_modular(m)
    if not m.product_regime:
        raise DomainError("product representation needs Im b^2 > 0")
    N = x.kind.N
    b, eta = m.b, m.eta
    xi = np.asarray(x.cont, dtype=complex)
    n = np.asarray(x.disc)
    xi, n = np.broadcast_arrays(xi, n)
    omega = np.exp(2j * PI / N)
    qN = np.exp(2j * PI * b * b / N)
    qtN = np.exp(-2j * PI / (b * b * N))
    out = np.empty(xi.shape, dtype=complex)
    for idx in np.ndindex(xi.shape):
        a = omega ** int(n[idx]) * np.exp(2 * PI * b * (xi[idx] * np.sqrt(N) + eta) / N)
        c = omega ** (-int(n[idx])) * np.exp(2 * PI / b * (xi[idx] * np.sqrt(N) - eta) / N)
        out[idx] = pochhammer_inf(a, omega * qN, tol) / pochhammer_inf(c, qtN / omega, tol)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Woronowicz


def wor_phi(x: GroupPoint, q, tol: float = 1e-17, guard: float = 1e-12):
    """Woronowicz dilogarithm (-q^{1-m} e^{i theta}; q^2) / (-q^{1-m} e^{-i theta}; q^2).

    Numerator and denominator factors are paired; for |q^{1-m+2k}| > 1 the
    pair is rewritten as e^{2 i theta} times a ratio of small corrections,
    and the exactly cancelling pair q^0 contributes e^{i theta}.
    """
    if x.kind.name != "circle-z":
        raise DomainError("wor_phi needs a point of T x Z")
    q = complex(q)
    if not np.isfinite(q):
        raise NonFinite("non-finite q")
    if abs(q) >= 1:
        raise DivergentProduct(f"|q| = {abs(q)} >= 1")
    if q == 0:
        raise DomainError("q must be nonzero")
    theta = np.asarray(x.cont, dtype=complex)
    mm = np.asarray(x.disc)
    theta, mm = np.broadcast_arrays(theta, mm)
    logq = np.log(q)
    L = -np.log(abs(q))
    ep, em = np.exp(1j * theta), np.exp(-1j * theta)
    acc = np.zeros(theta.shape, dtype=complex)
    kmax = max(1, int(np.ceil((np.log(1 / tol) / L + mm.max(initial=0) - 1) / 2)) + 1)
    for k in range(kmax):
        j = 1 - mm + 2 * k  # exponent of q
        small = j > 0
        big = j < 0
        unit = j == 0
        if small.any():
            c = np.exp(j[small] * logq)
            num = 1 + c * ep[small]
            den = 1 + c * em[small]
            if np.any(np.abs(den) < guard):
                raise ZeroDenominator("Woronowicz denominator vanishes")
            acc[small] += np.log(num) - np.log(den)
        if big.any():
            ci = np.exp(-j[big] * logq)  # 1/c, small
            num = 1 + ci * em[big]
            den = 1 + ci * ep[big]
            if np.any(np.abs(den) < guard):
                raise ZeroDenominator("Woronowicz denominator vanishes")
            acc[big] += 2j * theta[big] + np.log(num) - np.log(den)
        if unit.any():
            acc[unit] += 1j * theta[unit]
    out = np.exp(acc)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# unified interface


class DilogSpec:
    """A quantum dilogarithm together with its group and structure constants."""

    kind: GroupKind
    name: str

    def phi(self, x: GroupPoint, cfg: QuadConfig | None = None):
        raise NotImplementedError

    @property
    def gamma(self) -> complex:
        raise NotImplementedError

    @property
    def phi0_sq(self) -> complex:
        raise NotImplementedError

    @property
    def eta(self) -> GroupPoint:
        raise NotImplementedError

    @property
    def crossing_height(self) -> float:
        """Im of the continuous part of eta; sets the scale of admissible offsets."""
        return float(np.imag(self.eta.cont))

    def point(self, cont=0.0, disc=0) -> GroupPoint:
        return GroupPoint(self.kind, cont, disc)

    def zero(self) -> GroupPoint:
        return GroupPoint(self.kind, 0.0, 0)

    def constants(self) -> dict:
        return dilog_constants(self)

    def describe(self) -> dict:
        raise NotImplementedError


class Faddeev(DilogSpec):
    name = "faddeev"

    def __init__(self, b, method: str = "auto"):
        self.modular = _as_modular(b)
        self.kind = RealLine()
        self.method = method

    def phi(self, x, cfg=None):
        return faddeev_phi(x.cont, self.modular, cfg, self.method)

    @property
    def gamma(self):
        return complex(np.exp(1j * PI / 4))

    @property
    def phi0_sq(self):
        e = self.modular.eta
        return complex(np.exp(-1j * PI * e * e / 3 - 1j * PI / 6))

    @property
    def eta(self):
        return GroupPoint(self.kind, self.modular.eta, 0)

    def describe(self):
        b = self.modular.b
        return {"dilog": self.name, "group": str(self.kind), "b": [b.real, b.imag]}


class AndersenKashaev(DilogSpec):
    name = "andersen-kashaev"

    def __init__(self, b, N: int, method: str = "auto", allow_trivial: bool = False):
        self.modular = _as_modular(b)
        self.kind = RealByZN(N, allow_trivial=allow_trivial)
        self.N = int(N)
        self.method = method

    def phi(self, x, cfg=None):
        return ak_phi(x, self.modular, cfg, self.method)

    @property
    def gamma(self):
        return complex(np.exp(1j * PI * self.N / 4))

    @property
    def phi0_sq(self):
        e, N = self.modular.eta, self.N
        return complex(np.exp(-1j * PI * (N + 2 * e * e / N) / 6))

    @property
    def eta(self):
        return GroupPoint(self.kind, self.modular.eta / np.sqrt(self.N), 0)

    def describe(self):
        b = self.modular.b
        return {"dilog": self.name, "group": str(self.kind), "b": [b.real, b.imag], "N": self.N}


class Woronowicz(DilogSpec):
    name = "woronowicz"

    def __init__(self, q):
        q = complex(q)
        if not 0 < abs(q) < 1:
            raise DivergentProduct("Woronowicz dilogarithm needs 0 < |q| < 1")
        self.q = q
        self.kind = CircleByZ()

    @classmethod
    def from_polar(cls, modulus: float, phase: float = PI) -> "Woronowicz":
        return cls(modulus * np.exp(1j * phase))

    @property
    def eta0(self) -> complex:
        # q = -e^{i eta0}
        return complex(-1j * np.log(-self.q))

    def phi(self, x, cfg=None):
        return wor_phi(x, self.q)

    @property
    def gamma(self):
        return 1.0 + 0j

    @property
    def phi0_sq(self):
        return 1.0 + 0j

    @property
    def eta(self):
        return GroupPoint(self.kind, self.eta0, 0)

    def describe(self):
        return {"dilog": self.name, "group": str(self.kind), "q": [self.q.real, self.q.imag]}


def dilog_constants(spec: DilogSpec) -> dict:
    return {"gamma": spec.gamma, "phi0_sq": spec.phi0_sq, "eta": spec.eta}


def constraint_product(spec: DilogSpec) -> complex:
    """gamma^2 phi(0)^6 G(eta); equals 1 for a self-dual dilogarithm."""
    return complex(spec.gamma**2 * spec.phi0_sq**3 * gaussian(spec.eta))
