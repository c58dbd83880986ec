"""Integration over R, R x Z_N and T x Z with their self-dual measures.

    R        : int dx
    R x Z_N  : N^{-1/2} sum_{n in Z_N} int dxi
    T x Z    : (2 pi)^{-1} sum_{m in Z} int_0^{2 pi} dtheta

The continuous contour may be shifted off the real axis (``shift``) and,
on R, rotated about its centre (``rotation``).  Both are Cauchy-equivalent
to the real contour only when the integrand is analytic and decaying in
the swept region; the caller is responsible for that.

Integrands are vectorised: they receive a GroupPoint whose components are
1-d arrays of nodes and return an array whose last axis runs over the
nodes.  Leading axes are carried through, so one call can integrate a
whole batch of parameter values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT, QuadConfig
from .errors import NoConvergence, SectorViolation
from .groups import GroupKind, GroupPoint


@dataclass
class Integrand:
    """Evaluation rule plus the sector of permitted contour rotations."""

    func: Callable[[GroupPoint], np.ndarray]
    sector: tuple = (0.0, 0.0)

    def __call__(self, x: GroupPoint):
        return self.func(x)

    def allows(self, angle: float) -> bool:
        lo, hi = self.sector
        return lo - 1e-15 <= angle <= hi + 1e-15


@dataclass
class QuadResult:
    value: complex | np.ndarray
    err_estimate: float
    evaluations: int = 0
    depth: int = 0
    radius: float = 0.0
    cutoff: int = 0
    extra: dict = field(default_factory=dict)

    def __complex__(self):
        return complex(self.value)


def _as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


ROUNDOFF = 1e-14


def _norm(v) -> float:
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


class _Counter:
    def __init__(self):
        self.n = 0


def _make_line_eval(f: Integrand, kind: GroupKind, shift: float, rotation: float, count: _Counter):
    """Returns ev(t) -> (sum of f along nodes t, L1 mass), both times dz/dt."""
    direction = np.exp(1j * rotation)
    centre = 1j * shift

    def ev(t):
        z = centre + t * direction
        if kind.name == "real":
            vals = np.asarray(f(GroupPoint(kind, z, 0)))
            count.n += t.size
            return vals.sum(axis=-1) * direction, np.abs(vals).sum(axis=-1)
        N = kind.N
        nn = np.repeat(np.arange(N), t.size)
        vals = np.asarray(f(GroupPoint(kind, np.tile(z, N), nn)))
        count.n += t.size * N
        vals = vals.reshape(vals.shape[:-1] + (N, t.size))
        scale = 1 / np.sqrt(N)
        return (
            vals.sum(axis=(-2, -1)) * direction * scale,
            np.abs(vals).sum(axis=(-2, -1)) * scale,
        )

    return ev


def _weighted(scale):
    if scale is None:
        return _norm
    w = np.asarray(scale, dtype=float)
    return lambda v: _norm(w * np.abs(v))


def _integrate_line(f, kind, cfg: QuadConfig, shift, rotation, count, scale=None, strict=True, mass_tol=None):
    """Trapezoid rule: grow the window at the coarse step, then halve the step.

    The trapezoid rule converges geometrically for analytic integrands only
    once the truncation edges are negligible, hence the order.
    """
    ev = _make_line_eval(f, kind, shift, rotation, count)
    h = cfg.initial_step
    norm = _weighted(scale)
    mass = [0.0]

    def tol_for(v):
        # below ROUNDOFF * int |f| the sum cannot improve, whatever the cancellation
        floor = max(mass_tol or 0.0, ROUNDOFF)
        return max(cfg.abs_tol, cfg.rel_tol * norm(v), floor * norm(h * mass[0]))

    k = int(np.floor(cfg.initial_radius / h))
    total, mass[0] = ev(h * np.arange(-k, k + 1))
    tail = np.inf
    while True:
        k_new = int(np.ceil(k * cfg.radius_growth))
        if k_new * h > cfg.max_radius + 1e-9:
            if not strict:
                break
            raise NoConvergence(
                f"window reached max_radius={cfg.max_radius} without the tail decaying"
            )
        idx = np.concatenate([np.arange(-k_new, -k), np.arange(k + 1, k_new + 1)])
        ann, l1 = ev(h * idx)
        total = total + ann
        mass[0] = mass[0] + l1
        k = k_new
        tail = norm(h * l1)
        if tail <= tol_for(h * total):
            break

    prev = h * total
    R = k * h
    depth = 0
    err = np.inf
    while True:
        if depth >= cfg.max_panel_depth:
            if not strict:
                break
            raise NoConvergence(f"step refinement did not converge (err {err:.3g})")
        depth += 1
        h /= 2
        k *= 2
        add, l1 = ev(h * np.arange(-k + 1, k, 2))
        total = total + add
        mass[0] = mass[0] + l1
        cur = h * total
        err = norm(cur - prev)
        prev = cur
        if err <= tol_for(cur):
            break
    return QuadResult(prev, float(err + tail), count.n, depth, float(R), extra={"mass": h * mass[0]})


def _circle_block(f, kind, shift, ms, K, count, offset=0.0):
    theta = 1j * shift + 2 * np.pi * (np.arange(K) + offset) / K
    th = np.tile(theta, ms.size)
    mm = np.repeat(ms, K)
    vals = np.asarray(f(GroupPoint(kind, th, mm)))
    count.n += th.size
    vals = vals.reshape(vals.shape[:-1] + (ms.size, K))
    return vals.mean(axis=-1)  # (1/2pi) * (2pi/K) * sum


def _integrate_circle(f, kind, cfg: QuadConfig, shift, count, scale=None, strict=True):
    norm = _weighted(scale)

    def tol_for(v):
        return max(cfg.abs_tol, cfg.rel_tol * norm(v))

    M = max(1, cfg.discrete_cutoff)
    K = cfg.circle_nodes
    ms = np.arange(-M, M + 1)
    prev = _circle_block(f, kind, shift, ms, K, count)
    depth = 0
    while True:
        if depth >= cfg.max_panel_depth:
            if not strict:
                break
            raise NoConvergence("circle refinement did not converge")
        depth += 1
        # midpoints of the current K-point rule give the 2K-point rule
        mid = _circle_block(f, kind, shift, ms, K, count, offset=0.5)
        cur = (prev + mid) / 2
        K *= 2
        err = norm(cur.sum(axis=-1) - prev.sum(axis=-1))
        prev = cur
        if err <= tol_for(cur.sum(axis=-1)):
            break
    terms = prev
    while True:
        total = terms.sum(axis=-1)
        tail = _geometric_tail(terms, tol_for(total), scale)
        if tail <= tol_for(total):
            return QuadResult(total, float(err + tail), count.n, depth, 0.0, int(M))
        M_new = 2 * M
        if M_new > cfg.max_discrete_cutoff:
            if not strict:
                return QuadResult(total, float(err + tail), count.n, depth, 0.0, int(M))
            raise NoConvergence(
                f"discrete sum not converged at cutoff {M} (tail estimate {tail:.3g})"
            )
        left = np.arange(-M_new, -M)
        right = np.arange(M + 1, M_new + 1)
        tl = _circle_block(f, kind, shift, left, K, count)
        tr = _circle_block(f, kind, shift, right, K, count)
        terms = np.concatenate([tl, terms, tr], axis=-1)
        M = M_new


def _geometric_tail(terms, tol: float, scale=None) -> float:
    """Bound on the neglected terms beyond both ends from the last few ratios."""
    mags = np.abs(terms)
    if scale is not None:
        mags = mags * np.asarray(scale, dtype=float)[..., None]
    if mags.ndim > 1:
        mags = mags.reshape(-1, mags.shape[-1]).max(axis=0)
    bound = 0.0
    for seq in (mags[:4][::-1], mags[-4:]):
        # seq runs towards the edge; seq[-1] is the outermost term
        last = seq[-1]
        if seq.max() <= 1e-3 * tol:
            bound += seq.max()
            continue
        ratios = seq[1:] / np.maximum(seq[:-1], 1e-300)
        r = float(np.max(ratios))
        if r >= 1:
            return np.inf
        bound += last * r / (1 - r)
    return bound


def integrate(
    f,
    kind: GroupKind,
    cfg: QuadConfig | None = None,
    *,
    shift: float | None = None,
    rotation: float | None = None,
    scale=None,
    strict: bool = True,
    mass_tol: float | None = None,
) -> QuadResult:
    """Integral of ``f`` over the group ``kind`` with its self-dual measure.

    For batched integrands ``scale`` (broadcastable to the batch shape) weights
    each element's error in the convergence tests.  Nested integrals use it to
    measure inner errors against the outer integrand they feed.  With
    ``strict=False`` the best estimate is returned instead of raising when a
    resolution limit is hit.  ``mass_tol`` also accepts an error below
    mass_tol * int |f|, the honest target when f carries its own noise.
    """
    cfg = cfg or DEFAULT
    f = _as_integrand(f)
    shift = cfg.contour_shift if shift is None else float(shift)
    rotation = cfg.contour_rotation if rotation is None else float(rotation)
    if rotation != 0 and not f.allows(rotation):
        raise SectorViolation(f"rotation {rotation} outside declared sector {f.sector}")
    count = _Counter()
    if kind.name == "circle-z":
        if rotation != 0:
            raise SectorViolation("contour rotation is not defined on the circle")
        return _integrate_circle(f, kind, cfg, shift, count, scale, strict)
    return _integrate_line(f, kind, cfg, shift, rotation, count, scale, strict, mass_tol)


def integrate_2d(
    f: Callable[[GroupPoint, GroupPoint], np.ndarray],
    kinds: Sequence[GroupKind],
    cfg: QuadConfig | None = None,
    *,
    shifts: Sequence[float] = (0.0, 0.0),
    rotations: Sequence[float] = (0.0, 0.0),
) -> QuadResult:
    """Iterated integral over kinds[0] (outer) and kinds[1] (inner).

    The inner integral runs with tolerances ten times tighter than the outer.
    """
    cfg = cfg or DEFAULT
    inner_cfg = cfg.replace(rel_tol=cfg.rel_tol / 10, abs_tol=cfg.abs_tol / 10)
    evals = [0]

    def outer(x: GroupPoint):
        xb = GroupPoint(x.kind, np.asarray(x.cont)[:, None], np.asarray(x.disc)[:, None] if np.ndim(x.disc) else x.disc)
        res = integrate(
            lambda y: f(xb, y),
            kinds[1],
            inner_cfg,
            shift=shifts[1],
            rotation=rotations[1],
        )
        evals[0] += res.evaluations
        return res.value

    res = integrate(outer, kinds[0], cfg, shift=shifts[0], rotation=rotations[0])
    res.evaluations = evals[0]
    return res


class CircleTransform:
    """(2 pi)^-1 sum_m' int dtheta' f(x, y)^sign g(y) on T x Z, for batches of x.

    For fixed m' the theta' integral is a Fourier coefficient of g(., m') on
    the circle Im theta' = shift, so one FFT per m' serves every x.  The
    coefficient rows are cached, which makes repeated calls (an outer
    quadrature asking for the transform at many nodes) cheap.  The circle
    resolution K and the cutoff M are doubled until successive results agree.
    """

    def __init__(self, g, kind: GroupKind, cfg: QuadConfig | None = None, *, shift: float = 0.0, sign: int = 1):
        self.g = g
        self.kind = kind
        self.cfg = cfg or DEFAULT
        self.shift = float(shift)
        self.sign = 1 if sign > 0 else -1
        self._rows: dict = {}  # K -> {m': coefficient row}
        self.evaluations = 0

    def _coef(self, ms, K):
        rows = self._rows.setdefault(K, {})
        missing = np.array([m for m in ms if m not in rows], dtype=int)
        if missing.size:
            t = 2 * np.pi * np.arange(K) / K
            th = np.tile(t + 1j * self.shift, missing.size)
            mm = np.repeat(missing, K)
            vals = np.asarray(self.g(GroupPoint(self.kind, th, mm))).reshape(missing.size, K)
            self.evaluations += th.size
            # row[k] = K^-1 sum_j e^{sign 2 pi i j k / K} vals[j]
            coef = np.fft.ifft(vals, axis=1) if self.sign > 0 else np.fft.fft(vals, axis=1) / K
            for m, row in zip(missing, coef):
                rows[int(m)] = row
        return np.stack([rows[int(m)] for m in ms])

    def _terms(self, ms, K, th_x, m_x):
        coef = self._coef(ms, K)[:, np.mod(m_x, K)]
        # e^{sign i (t + i shift) m_x} carries the factor e^{-sign shift m_x}
        c = coef * np.exp(-self.sign * self.shift * m_x)[None, :]
        return c * np.exp(self.sign * 1j * np.outer(ms, th_x))  # [m', batch]

    def __call__(self, x: GroupPoint, *, scale=None, strict: bool = True) -> QuadResult:
        cfg = self.cfg
        norm = _weighted(scale)
        out_shape = np.shape(x.cont)
        th_x = np.asarray(x.cont, dtype=complex).ravel()
        m_x = np.broadcast_to(np.asarray(x.disc), out_shape).ravel().astype(int)
        sc = None if scale is None else np.broadcast_to(scale, out_shape).ravel()
        start = self.evaluations

        def tol_for(v):
            return max(cfg.abs_tol, cfg.rel_tol * norm(v.reshape(out_shape)))

        # the m' terms concentrate near -m_x, so the window must reach that far
        M = max(1, cfg.discrete_cutoff) + int(np.abs(m_x).max(initial=0))
        K = cfg.circle_nodes
        while K <= 2 * (np.abs(m_x).max(initial=0) + 1):
            K *= 2
        ms = np.arange(-M, M + 1)
        terms = self._terms(ms, K, th_x, m_x)
        depth = 0
        err = np.inf
        while True:
            if depth >= cfg.max_panel_depth:
                if not strict:
                    break
                raise NoConvergence("circle transform refinement did not converge")
            depth += 1
            K *= 2
            new = self._terms(ms, K, th_x, m_x)
            err = norm((new.sum(axis=0) - terms.sum(axis=0)).reshape(out_shape))
            terms = new
            if err <= tol_for(terms.sum(axis=0)):
                break
        tail = 0.0
        while True:
            total = terms.sum(axis=0)
            tail = _geometric_tail(terms.T, tol_for(total), sc)
            if tail <= tol_for(total):
                break
            M_new = 2 * M
            if M_new > cfg.max_discrete_cutoff:
                if not strict:
                    break
                raise NoConvergence(f"discrete sum not converged at cutoff {M} (tail estimate {tail:.3g})")
            ms_new = np.concatenate([np.arange(-M_new, -M), np.arange(M + 1, M_new + 1)])
            extra = self._terms(ms_new, K, th_x, m_x)
            terms = np.concatenate([extra[: M_new - M], terms, extra[M_new - M :]], axis=0)
            M = M_new
        total = terms.sum(axis=0).reshape(out_shape)
        value = total if total.ndim else complex(total)
        return QuadResult(value, float(err + tail), self.evaluations - start, depth, 0.0, int(M))
