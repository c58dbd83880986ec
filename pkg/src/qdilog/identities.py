"""Numerical checks of the defining relations of a quantum dilogarithm.

Every check returns an IdentityCheck holding both sides and the relative
residual |lhs - rhs| / max(|lhs|, |rhs|, 1e-30).

Integral identities only converge for complexified arguments inside
certain strips.  The helpers below place the integration contour in the
middle of the admissible window; if the caller's arguments leave no
window the quadrature reports NoConvergence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import DEFAULT, QuadConfig
from .dilog import DilogSpec
from .groups import GroupPoint, fourier_kernel, gaussian
from .quad import CircleTransform, integrate

RESIDUAL_FLOOR = 1e-30

INVERSION = "inversion"
FIVE1 = "five-term/five1"
FTERM3A = "five-term/fterm3a"
FTERM3B = "five-term/fterm3b"
SELF_DUALITY = "self-duality"
SELF_DUALITY_BAR = "self-duality/bar"
CONSTANTS = "constant-constraint"


def relative_residual(lhs, rhs) -> float:
    den = max(abs(lhs), abs(rhs), RESIDUAL_FLOOR)
    return float(abs(lhs - rhs) / den)


@dataclass
class IdentityCheck:
    identity: str
    spec: dict
    inputs: list
    lhs: complex
    rhs: complex
    residual: float
    tol: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def build(cls, identity, spec, inputs, lhs, rhs, tol, **diag) -> "IdentityCheck":
        lhs, rhs = complex(lhs), complex(rhs)
        r = relative_residual(lhs, rhs)
        return cls(identity, spec.describe(), list(inputs), lhs, rhs, r, tol, bool(r <= tol), diag)


def _batched(x: GroupPoint) -> GroupPoint:
    """Give x a trailing axis so it broadcasts against quadrature nodes."""
    c = np.asarray(x.cont)[..., None]
    d = np.asarray(x.disc)[..., None] if np.ndim(x.disc) else x.disc
    return GroupPoint(x.kind, c, d)


def _window_mid(lo: float, hi: float) -> float:
    # an empty window still gets a contour; the quadrature will then fail to converge
    return 0.5 * (lo + hi)


@lru_cache(maxsize=32)
def _widened(cfg: QuadConfig, *points) -> QuadConfig:
    """Start the discrete sum wide enough to cover shifts by the given points."""
    extra = max(int(np.max(np.abs(p.disc))) for p in points) if points[0].kind.name == "circle-z" else 0
    return cfg.replace(discrete_cutoff=cfg.discrete_cutoff + extra) if extra else cfg


@lru_cache(maxsize=32)
def _circle_transformer(spec: DilogSpec, cfg: QuadConfig, shift: float, sign: int) -> CircleTransform:
    if sign > 0:
        g = lambda y: spec.phi(y, cfg)  # noqa: E731
    else:
        g = lambda y: 1.0 / spec.phi(y, cfg)  # noqa: E731
    return CircleTransform(g, spec.kind, cfg, shift=shift, sign=sign)


def fourier_phi(spec: DilogSpec, x: GroupPoint, cfg: QuadConfig | None = None, *, shift=None, scale=None, strict=True):
    """phi~(x) = int f(x, y) phi(y) dy, vectorised over the points in ``x``.

    Converges for -h < Im x < 0 (h the crossing height); the contour Im y = s
    needs -Im x < s < h.
    """
    cfg = cfg or DEFAULT
    h = spec.crossing_height
    if shift is None:
        shift = _window_mid(float(np.max(-np.imag(x.cont))), h)
        shift = round(shift, 12)  # stable cache key along a horizontal outer contour
    if x.kind.name == "circle-z":
        return _circle_transformer(spec, cfg, float(shift), 1)(x, scale=scale, strict=strict).value
    xb = _batched(x)
    res = integrate(
        lambda y: fourier_kernel(xb, y) * spec.phi(y, cfg), x.kind, cfg,
        shift=shift, scale=scale, strict=strict,
    )
    return res.value


def fourier_phi_bar(spec: DilogSpec, x: GroupPoint, cfg: QuadConfig | None = None, *, shift=None, scale=None, strict=True):
    """int dy / (f(x, y) phi(y)); converges for 0 < Im x < h with -h < s < -Im x."""
    cfg = cfg or DEFAULT
    h = spec.crossing_height
    if shift is None:
        shift = round(_window_mid(-h, float(np.min(-np.imag(x.cont)))), 12)
    if x.kind.name == "circle-z":
        return _circle_transformer(spec, cfg, float(shift), -1)(x, scale=scale, strict=strict).value
    xb = _batched(x)
    res = integrate(
        lambda y: 1.0 / (fourier_kernel(xb, y) * spec.phi(y, cfg)), x.kind, cfg,
        shift=shift, scale=scale, strict=strict,
    )
    return res.value


def self_dual_rhs(spec: DilogSpec, x: GroupPoint, cfg=None):
    """Closed form gamma phi(0)^2 G(x)^-1 phi(x + eta) of the transform."""
    return spec.gamma * spec.phi0_sq / gaussian(x) * spec.phi(x + spec.eta, cfg)


# ---------------------------------------------------------------------------
# checks


def check_inversion(spec: DilogSpec, x: GroupPoint, cfg=None, tol: float = 1e-9) -> IdentityCheck:
    lhs = spec.phi(x, cfg) * spec.phi(-x, cfg)
    rhs = spec.phi0_sq * gaussian(x)
    return IdentityCheck.build(INVERSION, spec, [x], lhs, rhs, tol)


def check_constant_constraint(spec: DilogSpec, tol: float = 1e-12) -> IdentityCheck:
    lhs = spec.gamma**2 * spec.phi0_sq**3 * gaussian(spec.eta)
    return IdentityCheck.build(CONSTANTS, spec, [], lhs, 1.0, tol)


def check_self_duality(spec: DilogSpec, x: GroupPoint, cfg=None, tol: float = 1e-6) -> IdentityCheck:
    lhs = fourier_phi(spec, x, cfg)
    rhs = self_dual_rhs(spec, x, cfg)
    return IdentityCheck.build(SELF_DUALITY, spec, [x], lhs, rhs, tol)


def check_self_duality_bar(spec: DilogSpec, x: GroupPoint, cfg=None, tol: float = 1e-6) -> IdentityCheck:
    """1/phi(x - eta) = gamma phi(0)^2 G(x)^-1 int dy / (f(x,y) phi(y))."""
    lhs = 1.0 / spec.phi(x - spec.eta, cfg)
    rhs = spec.gamma * spec.phi0_sq / gaussian(x) * fourier_phi_bar(spec, x, cfg)
    return IdentityCheck.build(SELF_DUALITY_BAR, spec, [x], lhs, rhs, tol)


def fterm3_integral(spec: DilogSpec, x, y, z, cfg=None, *, shift=None):
    """int phi(w+x)/phi(w+y) f(z,w) dw.

    Converges for Im z < 0 < Im(x - y) + Im z; the contour Im w = s must keep
    w + x below the poles and w + y above the zeros: -h - Im y < s < h - Im x.
    """
    cfg = cfg or DEFAULT
    h = spec.crossing_height
    if shift is None:
        shift = _window_mid(-h - np.imag(y.cont), h - np.imag(x.cont))

    def f(w):
        return spec.phi(w + x, cfg) / spec.phi(w + y, cfg) * fourier_kernel(z, w)

    return integrate(f, x.kind, _widened(cfg, x, y, z), shift=shift).value


def fterm3a_rhs(spec: DilogSpec, x, y, z, cfg=None):
    eta = spec.eta
    num = spec.phi(x - y - eta, cfg) * spec.phi(z + eta, cfg)
    return spec.gamma * spec.phi0_sq / fourier_kernel(z, y + eta) * num / spec.phi(x - y + z - eta, cfg)


def fterm3b_rhs(spec: DilogSpec, x, y, z, cfg=None):
    eta = spec.eta
    num = spec.phi(-x + y - z + eta, cfg)
    den = spec.phi(-x + y + eta, cfg) * spec.phi(-z - eta, cfg)
    return fourier_kernel(z, eta - x) / (spec.gamma * spec.phi0_sq) * num / den


def five1_integral(spec: DilogSpec, x, y, z, cfg=None, *, shift=None):
    """phi(0)^2 int phi~(x-w) G(w-z) phi~(w-y) dw, both transforms by quadrature.

    Needs Im x < s < Im x + h and Im y - h < s < Im y for the contour Im w = s.
    """
    cfg = cfg or DEFAULT
    h = spec.crossing_height
    ix, iy = float(np.imag(x.cont)), float(np.imag(y.cont))
    if shift is None:
        shift = _window_mid(max(ix, iy - h), min(ix + h, iy))
    inner = cfg.replace(rel_tol=cfg.rel_tol / 10, abs_tol=cfg.abs_tol / 10)
    rough = cfg.replace(rel_tol=1e-4, max_panel_depth=3)

    def f(w):
        g = gaussian(w - z)
        # coarse pass: only used to weight the inner errors by the other factors
        a0 = fourier_phi(spec, x - w, rough, strict=False)
        b0 = fourier_phi(spec, w - y, rough, strict=False)
        a = fourier_phi(spec, x - w, inner, scale=np.abs(g * b0))
        b = fourier_phi(spec, w - y, inner, scale=np.abs(g * a0))
        return a * g * b

    # the inner transforms are only good to inner.rel_tol relative to the mass
    res = integrate(f, x.kind, _widened(cfg, x, y, z), shift=shift, mass_tol=cfg.rel_tol)
    return spec.phi0_sq * res.value


def five1_lhs(spec: DilogSpec, x, y, z, cfg=None):
    return spec.phi(z - x, cfg) * fourier_phi(spec, x - y, cfg) * spec.phi(y - z, cfg)


def check_five_term(spec: DilogSpec, x, y, z, form: str = "fterm3a", cfg=None, tol: float = 1e-6) -> IdentityCheck:
    if form == "five1":
        lhs = five1_lhs(spec, x, y, z, cfg)
        rhs = five1_integral(spec, x, y, z, cfg)
        return IdentityCheck.build(FIVE1, spec, [x, y, z], lhs, rhs, tol)
    if form not in ("fterm3a", "fterm3b"):
        raise ValueError(f"unknown five-term form {form!r}")
    lhs = fterm3_integral(spec, x, y, z, cfg)
    rhs = (fterm3a_rhs if form == "fterm3a" else fterm3b_rhs)(spec, x, y, z, cfg)
    return IdentityCheck.build(FTERM3A if form == "fterm3a" else FTERM3B, spec, [x, y, z], lhs, rhs, tol)


# ---------------------------------------------------------------------------
# sampling

# which offset family and how many arguments each identity takes
_FAMILIES = {
    INVERSION: (None, ("x",)),
    SELF_DUALITY: ("self_duality", ("x",)),
    SELF_DUALITY_BAR: ("self_duality_bar", ("x",)),
    FTERM3A: ("fterm3", ("x", "y", "z")),
    FTERM3B: ("fterm3", ("x", "y", "z")),
    FIVE1: ("five1", ("x", "y", "z")),
    CONSTANTS: (None, ()),
}


def sample_point(spec: DilogSpec, rng: np.random.Generator, imag: float = 0.0, doc: dict | None = None) -> GroupPoint:
    """Random group element with continuous part shifted by ``imag`` (absolute)."""
    from .defaults import defaults

    samp = (doc or defaults())["sampling"]
    kind = spec.kind
    if kind.name == "circle-z":
        c = rng.uniform(0, 2 * np.pi)
        m = int(rng.integers(-samp["circle_m_range"], samp["circle_m_range"] + 1))
    else:
        r = samp["real_range"]
        c = rng.uniform(-r, r)
        m = int(rng.integers(0, kind.N)) if kind.name == "real-zn" else 0
    return GroupPoint(kind, c + 1j * imag if imag else c, m)


def sample_inputs(spec: DilogSpec, identity: str, n: int, seed: int, doc: dict | None = None) -> list:
    """n admissible argument tuples for an identity, reproducible from ``seed``.

    Imaginary parts come from the configured offsets, in units of the
    crossing height.  The first five1 sample has z = 0.
    """
    from .defaults import defaults

    doc = doc or defaults()
    family, names = _FAMILIES[identity]
    offs = doc["offsets"][family] if family else {}
    h = spec.crossing_height
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        pts = [sample_point(spec, rng, offs.get(nm, 0.0) * h, doc) for nm in names]
        if identity == FIVE1 and i == 0:
            pts[2] = spec.zero() + GroupPoint(spec.kind, 1j * offs["z"] * h, 0) if offs["z"] else spec.zero()
        out.append(tuple(pts))
    return out


def run_check(spec: DilogSpec, identity: str, args, cfg=None, tol=None) -> IdentityCheck:
    """Dispatch one identity check by name."""
    kw = {} if tol is None else {"tol": tol}
    if identity == INVERSION:
        return check_inversion(spec, *args, cfg, **kw)
    if identity == CONSTANTS:
        return check_constant_constraint(spec, **kw)
    if identity == SELF_DUALITY:
        return check_self_duality(spec, *args, cfg, **kw)
    if identity == SELF_DUALITY_BAR:
        return check_self_duality_bar(spec, *args, cfg, **kw)
    form = {FTERM3A: "fterm3a", FTERM3B: "fterm3b", FIVE1: "five1"}.get(identity)
    if form is None:
        raise ValueError(f"unknown identity {identity!r}")
    return check_five_term(spec, *args, form=form, cfg=cfg, **kw)
