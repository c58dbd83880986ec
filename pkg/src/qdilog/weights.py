"""Boltzmann weights built from a quantum dilogarithm.

Vertex weights are returned on their delta-function support: the
distributional factor is dropped and one spin is treated as dependent
(x3' = x2 + x3 - x2' for the vertex R-matrix).  Evaluating a kernel off its
support raises ConstraintViolated instead of returning zero.

Square roots of constant normalisation factors use the principal branch.
Fractional powers of the Fourier kernel, f(x, y)^p, are taken by scaling
its exponent, so they vary continuously with the spins; the per-spin
factors sqrt(phi(s)) of the IRC-derived R-matrix use the principal branch
of each factor, which amounts to a diagonal gauge choice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, QuadConfig
from .dilog import DilogSpec
from .errors import ConstraintViolated, DomainError
from .groups import GroupPoint, fourier_kernel, gaussian, same_group
from .identities import _batched, _window_mid, fourier_phi, fourier_phi_bar
from .quad import integrate

CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class SpectralTriple:
    l1: GroupPoint
    l2: GroupPoint
    l3: GroupPoint

    def __iter__(self):
        return iter((self.l1, self.l2, self.l3))


@dataclass(frozen=True)
class FieldTriple:
    p1: GroupPoint
    p2: GroupPoint
    p3: GroupPoint

    def __iter__(self):
        return iter((self.p1, self.p2, self.p3))

    @classmethod
    def trivial(cls, spec: DilogSpec) -> "FieldTriple":
        """Fields eta/4, for which every dressing factor equals one."""
        q = spec.eta.scaled(1, 4)
        return cls(q, q, q)


@dataclass(frozen=True)
class EdgeConfig:
    """Six edge spins around a vertex: (x1, x2, x3) in, (x1', x2', x3') out."""

    x1: GroupPoint
    x2: GroupPoint
    x3: GroupPoint
    x1p: GroupPoint
    x2p: GroupPoint
    x3p: GroupPoint

    @classmethod
    def reduced(cls, x1, x2, x3, x1p, x2p) -> "EdgeConfig":
        """Config on the support of the delta, with x3' = x2 + x3 - x2'."""
        return cls(x1, x2, x3, x1p, x2p, x2 + x3 - x2p)

    @property
    def constraint_residual(self) -> GroupPoint:
        return self.x2 + self.x3 - self.x2p - self.x3p

    @property
    def constraint_satisfied(self) -> bool:
        return _vanishes(self.constraint_residual)


@dataclass(frozen=True)
class CornerConfig:
    """Corner spins of a cube, W(a|e,f,g|b,c,d|h)."""

    a: GroupPoint
    b: GroupPoint
    c: GroupPoint
    d: GroupPoint
    e: GroupPoint
    f: GroupPoint
    g: GroupPoint
    h: GroupPoint

    def shifted(self, s: GroupPoint) -> "CornerConfig":
        return CornerConfig(*(p + s for p in self.as_tuple()))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h)


@dataclass
class ReducedVertexWeight:
    value: complex
    convention: str = "delta stripped; x3' = x2 + x3 - x2'"

    def __complex__(self):
        return complex(self.value)


def _vanishes(p: GroupPoint, tol: float = CONSTRAINT_TOL) -> bool:
    if np.any(np.abs(p.cont) > tol):
        return False
    return bool(np.all(np.asarray(p.disc) == 0))


def _mag(p: GroupPoint) -> float:
    return float(np.max(np.abs(p.cont), initial=0.0))


def kernel_power(x: GroupPoint, y: GroupPoint, power: float):
    """f(x, y)^power with the exponent of the kernel scaled by ``power``.

    On groups with a discrete factor this is only single valued when the
    discrete components make the scaled phase independent of the chosen
    representatives; that is checked for power 1/2 and 1/4 via divisibility.
    """
    kind = same_group(x, y)
    if kind.name == "real":
        return np.exp(2j * np.pi * power * x.cont * y.cont)
    m, mp = np.asarray(x.disc), np.asarray(y.disc)
    den = int(round(1 / power)) if power < 1 else 1
    if den > 1 and (np.any(m % den) or np.any(mp % den)):
        raise DomainError(f"f^{power} needs discrete components divisible by {den} on {kind}")
    if kind.name == "real-zn":
        return np.exp(power * (2j * np.pi * x.cont * y.cont - 2j * np.pi * m * mp / kind.N))
    return np.exp(1j * power * (x.cont * mp + y.cont * m))


# ---------------------------------------------------------------------------
# hypergeometric integral


SHIFT_FRACTIONS = (0.05, 0.15, 0.3, 0.5, 0.7, 0.85, 0.95)
SCAN_POINTS = 48


def _hyper_integrand(a1, a2, b1, b2, c, spec, cfg):
    eta = spec.eta
    A1, A2 = _batched(a1), _batched(a2)
    B1, B2 = _batched(b1 - eta), _batched(b2 - eta)
    C = _batched(c - eta)

    def f(x):
        num = spec.phi(x + A1, cfg) * spec.phi(x + A2, cfg)
        den = spec.phi(x + B1, cfg) * spec.phi(x + B2, cfg)
        return fourier_kernel(x, C) * num / den

    return f


def _scan_heights(f, kind, lo, hi, reach):
    """Per entry, the index into SHIFT_FRACTIONS whose contour has the smallest peak |f|.

    Off the midpoint the kernel and the phi ratios pick up factors
    exp(+-2 pi s X) with X the size of the arguments.  The quadrature error
    is roundoff of the peak, so the lowest peak gives the smallest absolute
    error.  For widely separated arguments even that can exceed the
    integral itself; nested callers only need that error to be small
    against the other factors.
    """
    t = np.linspace(-reach, reach, SCAN_POINTS)
    N = kind.N if kind.name == "real-zn" else 1
    peaks = []
    with np.errstate(all="ignore"):
        for fr in SHIFT_FRACTIONS:
            z = np.tile(t + 1j * (lo + fr * (hi - lo)), N)
            v = np.abs(np.asarray(f(GroupPoint(kind, z, np.repeat(np.arange(N), t.size)))))
            v = np.where(np.isfinite(v), v, np.inf)
            peaks.append(np.log(np.max(v, axis=-1) + 1e-300))
    peaks = np.array(peaks)
    # prefer the midpoint unless an edge contour is much smaller
    peaks[SHIFT_FRACTIONS.index(0.5)] -= np.log(10.0)
    return np.argmin(peaks, axis=0)


def hyper2F2(a1, a2, b1, b2, c, spec: DilogSpec, cfg: QuadConfig | None = None, *, shift=None, scale=None, strict=True):
    """int f(x, c - eta) phi(x+a1) phi(x+a2) / (phi(x+b1-eta) phi(x+b2-eta)) dx.

    The contour Im x = s must keep x + a_i below the poles of phi and
    x + b_i - eta above its zeros, i.e. -Im b_i < s < h - Im a_i.  The
    integral converges for Im c < h and Im(a1 + a2 - b1 - b2 + c) + h > 0.
    Arguments may carry arrays; the result then has their broadcast shape.
    Without an explicit ``shift`` on R and R x Z_N each entry is integrated
    on the height from a coarse scan of the window (see _scan_heights).
    """
    cfg = cfg or DEFAULT
    kind = same_group(a1, a2, b1, b2, c)
    h = spec.crossing_height
    lo = max(float(np.max(-np.imag(b.cont))) for b in (b1, b2))
    hi = min(h - float(np.min(np.imag(a.cont))) for a in (a1, a2))
    if shift is not None or kind.name == "circle-z" or hi <= lo:
        s = _window_mid(lo, hi) if shift is None else shift
        f = _hyper_integrand(a1, a2, b1, b2, c, spec, cfg)
        return integrate(f, kind, cfg, shift=s, scale=scale, strict=strict).value

    args = (a1, a2, b1, b2, c)
    shape = np.broadcast_shapes(*(np.shape(p.cont) for p in args), *(np.shape(p.disc) for p in args), np.shape(scale))
    flat = [GroupPoint(kind, np.broadcast_to(p.cont, shape).ravel(), np.broadcast_to(p.disc, shape).ravel()) for p in args]
    sc = None if scale is None else np.broadcast_to(scale, shape).ravel()
    reach = cfg.initial_radius + max(float(np.max(np.abs(np.real(p.cont)))) for p in args)
    choice = _scan_heights(_hyper_integrand(*flat, spec, cfg), kind, lo, hi, reach)
    out = np.empty(choice.shape, dtype=complex)
    for i, fr in enumerate(SHIFT_FRACTIONS):
        mask = choice == i
        if not mask.any():
            continue
        sub = [GroupPoint(kind, p.cont[mask], p.disc[mask] if np.ndim(p.disc) else p.disc) for p in flat]
        f = _hyper_integrand(*sub, spec, cfg)
        out[mask] = integrate(f, kind, cfg, shift=lo + fr * (hi - lo), scale=None if sc is None else sc[mask], strict=strict).value
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# vertex weights


def rho1(t: SpectralTriple, spec: DilogSpec) -> complex:
    """Normalisation (f(eta - l3, eta + l1 - l2) / f(l1, l2))^(1/2), principal root."""
    eta = spec.eta
    r = fourier_kernel(eta - t.l3, eta + t.l1 - t.l2) / fourier_kernel(t.l1, t.l2)
    return complex(np.sqrt(complex(r)))


def rho_from_rho1(r1: complex, t: SpectralTriple, spec: DilogSpec) -> complex:
    """Invert rho1 = rho G(eta) f(eta, l1 - l2) f(l2, l3 - l1) / G(l3)."""
    eta = spec.eta
    fac = gaussian(eta) * fourier_kernel(eta, t.l1 - t.l2) * fourier_kernel(t.l2, t.l3 - t.l1) / gaussian(t.l3)
    return complex(r1 / fac)


def _require_support(e: EdgeConfig):
    if not e.constraint_satisfied:
        raise ConstraintViolated(f"x2 + x3 - x2' - x3' = {e.constraint_residual!r} is not zero")


def selfdual_kernel(x1, x2, x3, x1p, x2p, x3p, t: SpectralTriple, spec: DilogSpec, cfg=None, rho=None):
    """Self-dual vertex kernel on its support, without checking the constraint.

    Spins may carry arrays; x3 only enters through the dependent x3p.
    """
    eta = spec.eta
    l1, l2, l3 = t
    r = rho1(t, spec) if rho is None else rho
    return (
        r
        * fourier_kernel(x3p - l1, x1 - x1p)
        * fourier_kernel(l3 - eta, x2 - x1p)
        * spec.phi(-l1 - x1 + x2, cfg)
        * spec.phi(l2 - x1p + x2p, cfg)
        / (spec.phi(-eta - x1 + x2p, cfg) * spec.phi(-eta - l1 + l2 - x1p + x2, cfg))
    )


def vertex_weight_selfdual(e: EdgeConfig, t: SpectralTriple, spec: DilogSpec, cfg=None, rho=None) -> ReducedVertexWeight:
    """Vertex R-matrix element in the simplified form valid for self-dual phi.

    ``rho`` overrides the default normalisation rho1(t).
    """
    _require_support(e)
    return ReducedVertexWeight(selfdual_kernel(e.x1, e.x2, e.x3, e.x1p, e.x2p, e.x3p, t, spec, cfg, rho))


def bracket(u: GroupPoint):
    """<u> in the general vertex weight, taken to be the Gaussian G(u).

    This reading is a hypothesis; vertex_weight_crosscheck tests it against
    the self-dual form.
    """
    return gaussian(u)


def vertex_weight_general(
    e: EdgeConfig, t: SpectralTriple, rho: complex, spec: DilogSpec, cfg=None, *, closed_form: bool = False
) -> ReducedVertexWeight:
    """General vertex weight with both Fourier transforms done by quadrature.

    The transforms need -h < Im(l1 - l2 + x1' - x2) < 0 and
    0 < Im(x2' - x1) < h.  With ``closed_form`` they are replaced by the
    self-duality formulas instead (a consistency probe, not a definition).
    """
    _require_support(e)
    l1, l2, l3 = t
    u = l1 - l2 + e.x1p - e.x2
    v = e.x2p - e.x1
    if closed_form:
        k = spec.gamma * spec.phi0_sq
        pt = k / gaussian(u) * spec.phi(u + spec.eta, cfg)
        pbt = gaussian(v) / (k * spec.phi(v - spec.eta, cfg))
    else:
        pt = fourier_phi(spec, u, cfg)
        pbt = fourier_phi_bar(spec, v, cfg)
    val = (
        rho
        * bracket(l1) * bracket(e.x2) / (bracket(l3) * bracket(e.x2p))
        * fourier_kernel(e.x1, e.x3) / fourier_kernel(e.x1p, e.x3p)
        * fourier_kernel(e.x1p - e.x2 - l2, l1 - l3)
        * spec.phi(l2 - e.x1p + e.x2p, cfg) / spec.phi(l1 + e.x1 - e.x2, cfg)
        * pt * pbt
    )
    return ReducedVertexWeight(complex(val))


# ---------------------------------------------------------------------------
# IRC weights


def rho_w(t: SpectralTriple, spec: DilogSpec) -> complex:
    eta = spec.eta
    r = fourier_kernel(t.l1, t.l3) * fourier_kernel(eta + t.l2, eta + t.l1 - t.l3)
    return complex(np.sqrt(complex(r)))


def irc_hyper_args(k: CornerConfig, t: SpectralTriple):
    """The five arguments of the hypergeometric factor of W, in order a1, a2, b1, b2, c."""
    l1, l2, l3 = t
    return (
        k.d - k.e,
        k.b - k.g - l1 + l3,
        k.h - k.c - l1,
        k.f - k.a + l3,
        k.e + k.g - k.a - k.c - l2,
    )


def irc_weight(k: CornerConfig, t: SpectralTriple, spec: DilogSpec, cfg=None, *, scale=None, strict=True, normalised=True):
    """W(a|e,f,g|b,c,d|h; l1, l2, l3).  Corner spins may carry arrays."""
    l1, l2, _ = t
    eta = spec.eta
    pre = fourier_kernel(eta + l1, k.c - k.h) * fourier_kernel(l1 - l2, k.b - k.g)
    if normalised:
        pre = pre * rho_w(t, spec)
    hs = None if scale is None else np.abs(pre) * scale
    return pre * hyper2F2(*irc_hyper_args(k, t), spec, cfg, scale=hs, strict=strict)


def sigma_map(k: CornerConfig, t: SpectralTriple):
    """Edge spins (s1, s2, s3, s1', s2', s3') of the vertex form of W."""
    a, b, c, d, e, f, g, h = k.as_tuple()
    l1, l2, l3 = t
    return (
        c + d - e - h + l1,
        f + h - b - d + l2,
        b + c - g - h + l3,
        f + g - a - b + l1,
        a + c - e - g + l2,
        e + f - a - d + l3,
    )


def qr1_constraints(sig) -> tuple[GroupPoint, GroupPoint]:
    s1, s2, s3, s1p, s2p, s3p = sig
    return s1 + s2 - s1p - s2p, s2 + s3 - s2p - s3p


def r_from_irc(sig, spec: DilogSpec, cfg=None, *, scale=None, strict=True, check=True):
    """The R-matrix of the IRC model in vertex form, on the support of its deltas."""
    s1, s2, s3, s1p, s2p, s3p = sig
    if check:
        for k, res in enumerate(qr1_constraints(sig), 1):
            if not _vanishes(res, CONSTRAINT_TOL * (1 + max(_mag(p) for p in sig))):
                raise ConstraintViolated(f"delta constraint {k} violated: {res!r}")
    eta = spec.eta

    def sq(x):
        return np.sqrt(spec.phi(x, cfg).astype(complex) if np.ndim(x.cont) else complex(spec.phi(x, cfg)))

    gauge = sq(s1p) * sq(s2p) * sq(s3p) / (sq(s1) * sq(s2) * sq(s3))
    pre = gauge * kernel_power(s1, s3, 0.5) / kernel_power(eta, s2 - s2p, 0.25)
    hs = None if scale is None else np.abs(pre) * scale
    hyp = hyper2F2(
        (eta + s1 - s3).half(),
        (eta - s1 + s3).half(),
        (eta - s1 - s3).half(),
        (eta + s1p + s3p).half(),
        -s2p,
        spec,
        cfg,
        scale=hs,
        strict=strict,
    )
    return pre * hyp


def field_dressing(sig, fields: FieldTriple, spec: DilogSpec):
    s1, s2, s3, s1p, s2p, s3p = sig
    q = spec.eta.scaled(1, 4)
    return (
        fourier_kernel(q - fields.p1, s1 + s1p)
        * fourier_kernel(q - fields.p2, -s2 - s2p)
        * fourier_kernel(q - fields.p3, s3 + s3p)
    )


def field_r(sig, fields: FieldTriple, spec: DilogSpec, cfg=None, *, scale=None, strict=True, check=True):
    d = field_dressing(sig, fields, spec)
    hs = None if scale is None else np.abs(d) * scale
    return d * r_from_irc(sig, spec, cfg, scale=hs, strict=strict, check=check)


# ---------------------------------------------------------------------------
# cross-check of the two vertex forms


@dataclass
class CrosscheckResult:
    general: complex
    selfdual: complex
    residual: float
    tol: float
    passed: bool
    hypothesis: str = "bracket <u> = G(u)"

    @property
    def verdict(self) -> str:
        return "consistent" if self.passed else "falsified"


def vertex_weight_crosscheck(e: EdgeConfig, t: SpectralTriple, spec: DilogSpec, cfg=None, tol: float = 1e-6) -> CrosscheckResult:
    """Compare the general weight (rho from rho1) with the self-dual form."""
    from .identities import relative_residual

    r1 = rho1(t, spec)
    sd = vertex_weight_selfdual(e, t, spec, cfg).value
    gen = vertex_weight_general(e, t, rho_from_rho1(r1, t, spec), spec, cfg).value
    res = relative_residual(gen, sd)
    return CrosscheckResult(complex(gen), complex(sd), res, tol, bool(res <= tol))


def sample_crosscheck(spec: DilogSpec, seed: int, span: float = 1.0):
    """Random (EdgeConfig, SpectralTriple) where both transforms of the general weight converge.

    x1' sits at -0.3 h and x2' at +0.3 h (h the crossing height); all other
    spins and the spectral parameters are real.
    """
    rng = np.random.default_rng(seed)
    h = spec.crossing_height
    kind = spec.kind

    def pt(imag=0.0):
        if kind.name == "circle-z":
            c, m = rng.uniform(0, 2 * np.pi), int(rng.integers(-2, 3))
        else:
            c = rng.uniform(-span, span)
            m = int(rng.integers(0, kind.N)) if kind.name == "real-zn" else 0
        return GroupPoint(kind, c + 1j * imag if imag else c, m)

    x1, x2, x3 = pt(), pt(), pt()
    x1p, x2p = pt(-0.3 * h), pt(0.3 * h)
    t = SpectralTriple(pt(), pt(), pt())
    return EdgeConfig.reduced(x1, x2, x3, x1p, x2p), t
