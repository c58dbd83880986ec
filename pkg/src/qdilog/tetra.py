"""Numerical checks of the tetrahedron equations.

Three forms are covered:

* the IRC form: one integral over a corner spin z of four cube weights W,
  each containing its own hypergeometric integral;
* the vertex form R123 R145 R246 R356 = R356 R246 R145 R123 of operators on
  six spin spaces, with either the self-dual vertex kernel or the R-matrix
  obtained from the IRC weights;
* the vertex form with field-dressed IRC R-matrices.

Operator products are taken as kernels, (AB)(x, x'') = int A(x, y) B(y, x'') dy.
Each space carries one intermediate spin per side.  The delta functions of
the kernels are removed by symbolic elimination; what remains is an
integral over the free intermediates (three for the self-dual kernel, one
for the IRC kernel) plus constraints on the external spins.

The free-variable integral is a sum over a tensor grid.  Every kernel
depends on at most two free variables, so the sum is a tensor contraction
of small factor tables and never touches the full grid.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, QuadConfig
from .dilog import DilogSpec
from .elimination import Elimination, Lin, check_residuals, eliminate
from .errors import ConstraintViolated, DomainError, NoConvergence
from .groups import GroupPoint
from .identities import relative_residual
from .quad import integrate
from .weights import (
    CornerConfig,
    FieldTriple,
    SpectralTriple,
    field_r,
    irc_weight,
    r_from_irc,
    selfdual_kernel,
)

SPACES = (1, 2, 3, 4, 5, 6)
FACTORS = ((1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 5, 6))

# default imaginary levels per space, in units of the crossing height; they
# keep every phi argument of the self-dual kernel off its pole lattice
VERTEX_LEVELS = (0.0, 0.25, 0.0, 0.5, 0.25, 0.0)


@dataclass
class TetraInstance:
    kind: object
    lambdas: list | None = None
    corners: dict | None = None
    edges: dict | None = None
    fields: tuple | None = None  # (phi triple, phi' triple, (phi''_1, phi''_2))
    factor_fields: list | None = None
    levels: tuple | None = None
    seed: int | None = None


@dataclass
class TetraReport:
    form: str
    lhs: complex
    rhs: complex
    residual: float
    tol: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)


def _report(form, lhs, rhs, tol, **diag) -> TetraReport:
    r = relative_residual(complex(lhs), complex(rhs))
    return TetraReport(form, complex(lhs), complex(rhs), r, tol, bool(r <= tol), diag)


def _lam(inst: TetraInstance, spaces) -> SpectralTriple:
    return SpectralTriple(*(inst.lambdas[k - 1] for k in spaces))


# ---------------------------------------------------------------------------
# IRC form

IRC_CORNERS = ("a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4", "c5", "c6")

# (spectral spaces, W arguments a|e,f,g|b,c,d|h) with "z" the summed corner
IRC_LHS = (
    ((1, 2, 3), ("z", "a3", "a2", "a1", "c5", "c6", "c4", "b4")),
    ((1, 4, 5), ("a4", "z", "c3", "c2", "b3", "a1", "a2", "c5")),
    ((2, 4, 6), ("c1", "a3", "a4", "b2", "c2", "c6", "z", "a1")),
    ((3, 5, 6), ("b1", "c4", "c3", "c1", "a4", "a3", "a2", "z")),
)
IRC_RHS = (
    ((3, 5, 6), ("z", "b4", "b3", "b2", "c2", "c6", "c5", "a1")),
    ((2, 4, 6), ("b1", "c4", "c3", "z", "b3", "b4", "a2", "c5")),
    ((1, 4, 5), ("c1", "a3", "b1", "b2", "z", "c6", "c4", "b4")),
    ((1, 2, 3), ("a4", "c1", "c3", "c2", "b3", "b2", "b1", "z")),
)


def _cube(names, env) -> CornerConfig:
    a, e, f, g, b, c, d, h = (env[n] for n in names)
    return CornerConfig(a, b, c, d, e, f, g, h)


def irc_side(side, inst: TetraInstance, spec: DilogSpec, cfg: QuadConfig | None = None, *, rough=None):
    """Integrand z -> product of the four W's of one side, vectorised in z.

    A coarse pass estimates each factor; the accurate pass then weights the
    error of each inner integral by the size of the other three factors.
    """
    cfg = cfg or DEFAULT
    inner = cfg.replace(rel_tol=cfg.rel_tol / 10, abs_tol=cfg.abs_tol / 10)
    rough = rough or cfg.replace(rel_tol=1e-4, max_panel_depth=3)

    def f(z):
        env = dict(inst.corners)
        env["z"] = z
        items = [(_cube(names, env), _lam(inst, sp)) for sp, names in side]
        mags = [np.abs(irc_weight(k, t, spec, rough, strict=False)) for k, t in items]
        out = 1.0
        for i, (k, t) in enumerate(items):
            other = np.prod([m for j, m in enumerate(mags) if j != i], axis=0)
            out = out * irc_weight(k, t, spec, inner, scale=other)
        return out

    return f


def verify_irc_tetra(inst: TetraInstance, spec: DilogSpec, cfg: QuadConfig | None = None, tol: float = 1e-4) -> TetraReport:
    # the sides can be far below the default abs_tol; judge them relative to their own size
    cfg = cfg or DEFAULT.replace(rel_tol=1e-8, abs_tol=1e-30)
    res = []
    for side in (IRC_LHS, IRC_RHS):
        # the inner integrals cancel heavily in the z tails and leave a noise
        # floor there; resolve the outer sum to a small fraction of tol only
        res.append(integrate(irc_side(side, inst, spec, cfg), spec.kind, cfg, mass_tol=tol * 1e-3))
    return _report(
        "irc",
        res[0].value,
        res[1].value,
        tol,
        evaluations=[r.evaluations for r in res],
        depth=[r.depth for r in res],
        err_estimate=[r.err_estimate for r in res],
        mass=[r.extra.get("mass") for r in res],
    )


# ---------------------------------------------------------------------------
# vertex form: structure


@dataclass
class Entry:
    spaces: tuple
    rows: list
    cols: list


def chain(factors, prefix: str):
    """Matrix-element bookkeeping for the operator product of ``factors``.

    Space k starts at external x{k}, passes through intermediate {prefix}{k}
    between its two factors and ends at external y{k}.
    """
    total = {k: sum(k in f for f in factors) for k in SPACES}
    seen = dict.fromkeys(SPACES, 0)
    cur = {k: Lin.var(f"x{k}") for k in SPACES}
    entries, unknowns = [], []
    for spaces in factors:
        rows, cols = [], []
        for k in spaces:
            rows.append(cur[k])
            seen[k] += 1
            if seen[k] == total[k]:
                nxt = Lin.var(f"y{k}")
            else:
                name = f"{prefix}{k}"
                nxt = Lin.var(name)
                unknowns.append(name)
            cols.append(nxt)
            cur[k] = nxt
        entries.append(Entry(tuple(spaces), rows, cols))
    return entries, unknowns


def kernel_deltas(kernel: str, e: Entry) -> list:
    r, c = e.rows, e.cols
    if kernel == "selfdual":
        return [r[1] + r[2] - c[1] - c[2]]
    if kernel in ("irc", "field"):
        return [r[0] + r[1] - c[0] - c[1], r[1] + r[2] - c[1] - c[2]]
    raise DomainError(f"unknown vertex kernel {kernel!r}")


@dataclass
class Side:
    entries: list
    unknowns: list
    elim: Elimination


def build_side(kernel: str, factors, prefix: str, order=None) -> Side:
    entries, unknowns = chain(factors, prefix)
    eqs = [d for e in entries for d in kernel_deltas(kernel, e)]
    elim = eliminate(eqs, unknowns, order)
    return Side(entries, unknowns, elim)


def external_constraints(kernel: str) -> list:
    """Constraints the externals must satisfy for both sides to have support."""
    out = []
    for factors, prefix in ((FACTORS, "m"), (FACTORS[::-1], "n")):
        for r in build_side(kernel, factors, prefix).elim.residual:
            if r not in out and -r not in out:
                out.append(r)
    return out


def external_names():
    return [f"x{k}" for k in SPACES] + [f"y{k}" for k in SPACES]


def solve_externals(kernel: str, order=None) -> Elimination:
    """Express some externals through the others so all constraints hold."""
    cons = external_constraints(kernel)
    pref = order or [f"y{k}" for k in reversed(SPACES)] + [f"x{k}" for k in reversed(SPACES)]
    return eliminate(cons, external_names(), pref)


# ---------------------------------------------------------------------------
# vertex form: numerics


def _factor_value(kernel, entry: Entry, env, inst: TetraInstance, spec, cfg, fields=None, scale=None, strict=True):
    args = [f.evaluate(env) for f in entry.rows + entry.cols]
    if kernel == "selfdual":
        x1, x2, x3 = args[:3]
        x1p, x2p, x3p = args[3:]
        return selfdual_kernel(x1, x2, x3, x1p, x2p, x3p, _lam(inst, entry.spaces), spec, cfg)
    s1, s2, s3, s1p, s2p, s3p = args
    sig = (s1, s2, s3, s1p, s2p, s3p)
    if kernel == "irc":
        return r_from_irc(sig, spec, cfg, check=False, scale=scale, strict=strict)
    return field_r(sig, fields, spec, cfg, check=False, scale=scale, strict=strict)


class _Nodes:
    """Quadrature nodes for one free variable on a shifted contour."""

    def __init__(self, kind, shift: float, extent: float, fine: float):
        self.kind = kind
        if kind.name == "circle-z":
            M, K = int(extent), int(fine)
            th = 2 * np.pi * np.arange(K) / K + 1j * shift
            ms = np.arange(-M, M + 1)
            self.cont = np.tile(th, ms.size)
            self.disc = np.repeat(ms, K)
            self.w = np.full(self.cont.size, 1.0 / K)
            self.outer = np.abs(self.disc) > M // 2
            return
        n = int(round(extent / fine))
        t = fine * np.arange(-n, n + 1)
        N = kind.N if kind.name == "real-zn" else 1
        self.cont = np.tile(t, N) + 1j * shift
        self.disc = np.repeat(np.arange(N), t.size) if N > 1 else np.zeros(t.size, dtype=int)
        self.w = np.full(self.cont.size, fine / np.sqrt(N))
        self.outer = np.abs(np.tile(t, N)) > extent / 1.5

    def point(self, axis: int, ndim: int) -> GroupPoint:
        shape = [1] * ndim
        shape[axis] = self.cont.size
        d = self.disc.reshape(shape) if self.kind.name != "real" else 0
        return GroupPoint(self.kind, self.cont.reshape(shape), d)


def _contract(tables, weights, masks=None, absolute=False):
    """Sum over all free variables of the product of factor tables."""
    letters = string.ascii_lowercase
    ops, subs = [], []
    for axes, arr in tables:
        ops.append(np.abs(arr) if absolute else arr)
        subs.append("".join(letters[a] for a in axes))
    for a, w in enumerate(weights):
        if masks is not None:
            w = w * masks[a]
        ops.append(w)
        subs.append(letters[a])
    return np.einsum(",".join(subs) + "->", *ops, optimize="greedy")


def _tables(side: Side, kernel, inst, env, free, nodes, spec, cfg, fields_by_factor, scales=None, strict=True):
    nd = len(free)
    out = []
    for i, e in enumerate(side.entries):
        flds = fields_by_factor[i] if fields_by_factor else None
        deps = set()
        for f in e.rows + e.cols:
            for name in f.substitute(side.elim.solution).names():
                if name in free:
                    deps.add(free.index(name))
        sc = None if scales is None else scales[i]
        if kernel == "selfdual":
            val = _factor_value(kernel, e, env, inst, spec, cfg, flds)
        else:
            val = _factor_value(kernel, e, env, inst, spec, cfg, flds, scale=sc, strict=strict)
        val = np.asarray(val)
        axes = tuple(sorted(deps))
        if nd:
            val = np.broadcast_to(val, [nodes[a].cont.size if a in deps else 1 for a in range(nd)])
            val = val.reshape([nodes[a].cont.size for a in axes])
        out.append((axes, val))
    return out


def _other_scales(tables, nd):
    """For each factor, the size of the product of the others over its own axes."""
    if nd > 1:
        raise DomainError("weighted inner quadrature is only set up for one free variable")
    mags = [np.abs(v) for _, v in tables]
    out = []
    for i, (axes, _) in enumerate(tables):
        other = np.ones(1)
        for j, m in enumerate(mags):
            if j != i:
                other = other * (m if m.ndim else np.full(1, float(m)))
        out.append(other if axes else None)
    return out


def side_value(side: Side, kernel, inst: TetraInstance, env0, spec, cfg, shifts, extent, fine, fields_by_factor=None):
    """Trapezoid / circle-rule value of one side at the given resolution.

    Kernels with an inner integral get two passes: a rough one for the
    factor sizes, then one in which every inner error is weighted by the
    size of the other factors at the same node.
    """
    free = side.elim.free
    nd = len(free)
    nodes = [_Nodes(spec.kind, shifts[v], extent, fine) for v in free]
    env = dict(env0)
    for a, v in enumerate(free):
        env[v] = nodes[a].point(a, nd)
    env = side.elim.complete(env)
    if kernel == "selfdual":
        tables = _tables(side, kernel, inst, env, free, nodes, spec, cfg, fields_by_factor)
    else:
        rough = cfg.replace(rel_tol=1e-4, max_panel_depth=3)
        inner = cfg.replace(rel_tol=cfg.rel_tol / 10, abs_tol=cfg.abs_tol / 10)
        t0 = _tables(side, kernel, inst, env, free, nodes, spec, rough, fields_by_factor, strict=False)
        scales = _other_scales(t0, nd) if nd else None
        tables = _tables(side, kernel, inst, env, free, nodes, spec, inner, fields_by_factor, scales)
    if nd == 0:
        return complex(np.prod([t[1] for t in tables])), 0.0, 0
    weights = [n.w for n in nodes]
    total = complex(_contract(tables, weights))
    shell = 0.0
    for a in range(nd):
        masks = [np.ones(n.w.size) if b != a else n.outer.astype(float) for b, n in enumerate(nodes)]
        shell = max(shell, float(_contract(tables, weights, masks, absolute=True).real))
    return total, shell, int(sum(n.cont.size for n in nodes))


def integrate_side(side: Side, kernel, inst, env0, spec, cfg: QuadConfig, shifts, fields_by_factor=None, max_nodes: int = 2049):
    """Grow the window, then refine, until the side value settles."""
    if not side.elim.free:
        v, _, _ = side_value(side, kernel, inst, env0, spec, cfg, shifts, 0, 1, fields_by_factor)
        return v, {"dimension": 0}
    circle = spec.kind.name == "circle-z"
    extent = float(cfg.discrete_cutoff) if circle else cfg.initial_radius
    fine = float(cfg.circle_nodes) if circle else 1 / 8
    tol = max(cfg.rel_tol, 1e-12)

    def size(ext, fin):
        return (2 * ext + 1) * fin if circle else 2 * ext / fin + 1

    def run(ext, fin):
        if size(ext, fin) > max_nodes:
            raise NoConvergence(f"vertex quadrature exceeded {max_nodes} nodes per variable")
        return side_value(side, kernel, inst, env0, spec, cfg, shifts, ext, fin, fields_by_factor)

    value, shell, _ = run(extent, fine)
    while shell > tol * abs(value):
        extent = extent * 2 if circle else extent * cfg.radius_growth
        value, shell, _ = run(extent, fine)
    levels = 0
    while True:
        fine = fine * 2 if circle else fine / 2
        new, shell, n = run(extent, fine)
        levels += 1
        err = abs(new - value)
        value = new
        if err <= tol * abs(value):
            break
    return value, {"dimension": len(side.elim.free), "extent": extent, "fine": fine, "nodes": n, "levels": levels, "err": err}


def _external_env(inst: TetraInstance) -> dict:
    env = dict(inst.edges)
    return env


def _shifts(side: Side, env, levels=None) -> dict:
    """Contour height of every free intermediate: the level of its space."""
    out = {}
    for v in side.elim.free:
        k = int(v[1:])
        ref = env[f"x{k}"]
        out[v] = float(np.imag(ref.cont))
    return out


def _check_order_independence(kernel, inst, env, spec, cfg, shifts_a, side_a: Side, side_b: Side, fields=None, npts: int = 16):
    """Compare both eliminations pointwise on the constraint surface.

    Points are drawn in the free variables of side_a, completed to all
    intermediates, and re-expressed through side_b's parametrisation.
    Returns the largest relative difference of the kernel products.
    """
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(npts):
        e1 = dict(env)
        for v in side_a.elim.free:
            e1[v] = GroupPoint(spec.kind, rng.uniform(-2, 2) + 1j * shifts_a[v], int(rng.integers(0, 3)) * 2)
        e1 = side_a.elim.complete(e1)
        e2 = dict(env)
        for v in side_b.elim.free:
            e2[v] = e1[v]
        e2 = side_b.elim.complete(e2)
        p1 = np.prod([_factor_value(kernel, e, e1, inst, spec, cfg, None if fields is None else fields[i]) for i, e in enumerate(side_a.entries)])
        p2 = np.prod([_factor_value(kernel, e, e2, inst, spec, cfg, None if fields is None else fields[i]) for i, e in enumerate(side_b.entries)])
        worst = max(worst, relative_residual(complex(p1), complex(p2)))
    return worst


ALT_ORDER = ("m3", "m5", "m6", "m1", "m2", "m4")


def verify_vertex_zte(
    inst: TetraInstance,
    spec: DilogSpec,
    cfg: QuadConfig | None = None,
    tol: float = 1e-3,
    *,
    kernel: str = "selfdual",
    check_order: bool = True,
) -> TetraReport:
    """Vertex tetrahedron equation for the self-dual kernel or the IRC R-matrix."""
    cfg = cfg or DEFAULT.replace(rel_tol=1e-8)
    if kernel not in ("selfdual", "irc"):
        raise DomainError(f"unknown vertex kernel {kernel!r}")
    env = _external_env(inst)
    lhs_side = build_side(kernel, FACTORS, "m")
    rhs_side = build_side(kernel, FACTORS[::-1], "n")
    for s in (lhs_side, rhs_side):
        check_residuals(s.elim, env)
    out, diags = [], []
    for s in (lhs_side, rhs_side):
        sh = _shifts(s, env)
        v, d = integrate_side(s, kernel, inst, env, spec, cfg, sh)
        out.append(v)
        diags.append(d)
    diag = {"lhs_quad": diags[0], "rhs_quad": diags[1], "residual_constraints": [repr(r) for r in lhs_side.elim.residual]}
    if check_order:
        alt = build_side(kernel, FACTORS, "m", order=ALT_ORDER)
        diag["alt_free"] = alt.elim.free
        diag["order_difference"] = _check_order_independence(kernel, inst, env, spec, cfg, _shifts(lhs_side, env), lhs_side, alt)
    return _report(f"vertex/{kernel}", out[0], out[1], tol, **diag)


# ---------------------------------------------------------------------------
# field-dressed vertex form
#
# A field enters the dressing only through its offset from eta/4, where the
# dressing is trivial.  The combined fields of the third and fourth factors
# are read as combinations of these offsets: "phi3' - phi3" is the field
# eta/4 + (phi3' - eta/4) - (phi3 - eta/4).  u1, u2 stand for phi''_1, phi''_2,
# which stay free.

FIELD_NAMES = ("p1", "p2", "p3", "pp1", "pp2", "pp3", "u1", "u2")

FACTOR_FIELDS = {
    (1, 2, 3): (Lin.var("p1"), Lin.var("p2"), Lin.var("p3")),
    (1, 4, 5): (Lin.var("pp1"), Lin.var("pp2"), Lin.var("pp3")),
    (2, 4, 6): (Lin.var("u1"), Lin.var("u2"), Lin.var("pp3") - Lin.var("p3")),
    (3, 5, 6): (Lin.var("u1") - Lin.var("pp1"), Lin.var("u2") - Lin.var("p1"), Lin.var("pp2") - Lin.var("p2")),
}


def _dressing_form(side: Side, ext: Elimination) -> dict:
    """Dressing exponent of a side as a bilinear form in field offsets and spins.

    Slot j of a kernel contributes -s_j d_j (sigma_j + sigma_j') with
    s = (+1, -1, +1) and d_j the field offset.  Returns
    {(offset name, spin name): coefficient}; spins are free externals and
    the side's free intermediates.
    """
    out: dict = {}
    signs = (1, -1, 1)
    for e in side.entries:
        flds = FACTOR_FIELDS[e.spaces]
        for j in range(3):
            spin = (e.rows[j] + e.cols[j]).substitute(side.elim.solution).substitute(ext.solution)
            for fn, fc in flds[j].terms.items():
                for sn, sc in spin.terms.items():
                    key = (fn, sn)
                    out[key] = out.get(key, 0) - signs[j] * fc * sc
    return out


def dressing_balance() -> dict:
    """Leftover of (lhs - rhs) dressing exponents; empty when they agree.

    Both sides must then be the undressed products times one common phase
    that depends on the externals only, so the field equation follows from
    the undressed one.
    """
    ext = solve_externals("field")
    lhs = _dressing_form(build_side("field", FACTORS, "m"), ext)
    rhs = _dressing_form(build_side("field", FACTORS[::-1], "n"), ext)
    out = {}
    for key in set(lhs) | set(rhs):
        c = lhs.get(key, 0) - rhs.get(key, 0)
        if c:
            out[key] = c
    return out


def factor_fields(inst: TetraInstance, spec: DilogSpec) -> list:
    """Field triples for the four factors, in the order of FACTORS."""
    if inst.factor_fields is not None:
        return list(inst.factor_fields)
    phi, phip, phipp = inst.fields
    q = spec.eta.scaled(1, 4)
    env = {n: v - q for n, v in zip(FIELD_NAMES, list(phi) + list(phip) + list(phipp))}
    return [FieldTriple(*(q + f.evaluate(env) for f in FACTOR_FIELDS[sp])) for sp in FACTORS]


def verify_field_zte(inst: TetraInstance, spec: DilogSpec, cfg: QuadConfig | None = None, tol: float = 1e-3) -> TetraReport:
    cfg = cfg or DEFAULT.replace(rel_tol=1e-8)
    env = _external_env(inst)
    flds = factor_fields(inst, spec)
    by_spaces = dict(zip(FACTORS, flds))
    out, diags = [], []
    for factors, prefix in ((FACTORS, "m"), (FACTORS[::-1], "n")):
        s = build_side("field", factors, prefix)
        check_residuals(s.elim, env)
        per = [by_spaces[e.spaces] for e in s.entries]
        v, d = integrate_side(s, "field", inst, env, spec, cfg, _shifts(s, env), per)
        out.append(v)
        diags.append(d)
    return _report("vertex/field", out[0], out[1], tol, lhs_quad=diags[0], rhs_quad=diags[1], fields=[[repr(p) for p in f] for f in flds])


# ---------------------------------------------------------------------------
# sampling


def _rand_point(spec, rng, span, imag=0.0, even=False):
    kind = spec.kind
    c = rng.uniform(-span, span) + 1j * imag
    if kind.name == "real":
        return GroupPoint(kind, c if imag else c.real, 0)
    step = 2 if even else 1
    if kind.name == "real-zn":
        d = step * int(rng.integers(0, kind.N))
    else:
        d = step * int(rng.integers(-2, 3))
        c = c + span  # theta around [0, 2 span]
    return GroupPoint(kind, c if imag else c.real, d)


def sample_irc_instance(spec: DilogSpec, seed: int, span: float = 1.0) -> TetraInstance:
    rng = np.random.default_rng(seed)
    corners = {n: _rand_point(spec, rng, span) for n in IRC_CORNERS}
    lambdas = [_rand_point(spec, rng, span) for _ in range(6)]
    return TetraInstance(spec.kind, lambdas=lambdas, corners=corners, seed=seed)


def sample_vertex_instance(spec: DilogSpec, seed: int, kernel: str = "selfdual", span: float = 1.0, levels=None) -> TetraInstance:
    """Random externals on the support of both sides of the vertex equation.

    For the self-dual kernel every spin of space k gets imaginary part
    levels[k] * h (h the crossing height).
    """
    rng = np.random.default_rng(seed)
    h = spec.crossing_height
    if kernel == "selfdual":
        lv = tuple(VERTEX_LEVELS if levels is None else levels)
    else:
        lv = (0.0,) * 6
    even = kernel != "selfdual"
    env = {}
    for k in SPACES:
        env[f"x{k}"] = _rand_point(spec, rng, span, lv[k - 1] * h, even)
        env[f"y{k}"] = _rand_point(spec, rng, span, lv[k - 1] * h, even)
    ext = solve_externals(kernel)
    env = ext.complete({k: v for k, v in env.items() if k not in ext.solution})
    lambdas = [_rand_point(spec, rng, span) for _ in range(6)] if kernel == "selfdual" else None
    return TetraInstance(spec.kind, lambdas=lambdas, edges=env, levels=lv, seed=seed)


def sample_field_instance(spec: DilogSpec, seed: int, span: float = 1.0, field_span: float = 0.3) -> TetraInstance:
    inst = sample_vertex_instance(spec, seed, "field", span)
    rng = np.random.default_rng(seed + 7919)
    q = spec.eta.scaled(1, 4)

    def fld():
        return FieldTriple(*(q + GroupPoint(spec.kind, rng.uniform(-field_span, field_span), 0) for _ in range(3)))

    extra = tuple(q + GroupPoint(spec.kind, rng.uniform(-field_span, field_span), 0) for _ in range(2))
    inst.fields = (fld(), fld(), extra)
    return inst
