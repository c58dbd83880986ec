"""Command-line driver: verification campaigns, point evaluation, free energies.

    qdilog verify <target> [flags]
    qdilog eval <what> <args...> [flags]
    qdilog free-energy (--thetas T T T | --sides A A A | --fields P P P) [flags]

Exit codes: 0 all samples pass, 1 a sample failed or a computation raised,
2 invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from . import identities as idn
from . import tetra, weights
from .config import QuadConfig
from .defaults import merged
from .dilog import AndersenKashaev, DilogSpec, Faddeev, Woronowicz
from .errors import ConfigError, QDilogError
from .geometry import (
    kappa_zbb,
    thetas_from_sides,
    triangle_from_thetas,
    z_field_inf,
    z_vert_inf,
)
from .groups import GroupPoint, fourier_kernel, gaussian

SCHEMA_VERSION = 1

TARGETS = (
    "inversion",
    "five-term",
    "self-duality",
    "constants",
    "irc-tetra",
    "vertex-zte",
    "field-zte",
    "weights-crosscheck",
)
EVALS = ("phi", "kernel", "gaussian", "vertex-weight", "irc-weight", "hyper2f2")
GROUPS = ("real", "real-zn", "circle-z", "all")

_IDENTITIES = {
    "inversion": (idn.INVERSION,),
    "five-term": (idn.FTERM3A, idn.FTERM3B, idn.FIVE1),
    "self-duality": (idn.SELF_DUALITY, idn.SELF_DUALITY_BAR),
    "constants": (idn.CONSTANTS,),
}
_TOL_KEYS = {
    "inversion": "inversion",
    "five-term": "five_term",
    "self-duality": "self_duality",
    "constants": "constants",
    "irc-tetra": "irc_tetra",
    "vertex-zte": "vertex_zte",
    "field-zte": "field_zte",
    "weights-crosscheck": "weights",
}


# ---------------------------------------------------------------------------
# serialisation


def cnum(z) -> dict:
    z = complex(z)
    return {"re": repr(z.real), "im": repr(z.imag)}


def jsonable(obj):
    """Plain JSON types only; complex -> {re, im}, non-finite floats -> strings."""
    if isinstance(obj, GroupPoint):
        cont = np.asarray(obj.cont)
        return {"cont": jsonable(complex(cont) if cont.ndim == 0 else cont), "disc": jsonable(obj.disc)}
    if isinstance(obj, (complex, np.complexfloating)):
        return cnum(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    return repr(obj)


# ---------------------------------------------------------------------------
# campaign set-up


def spec_from(group: str, b: complex, n: int, q_modulus: float, q_phase: float) -> DilogSpec:
    if group == "real":
        return Faddeev(b)
    if group == "real-zn":
        return AndersenKashaev(b, n)
    if group == "circle-z":
        return Woronowicz.from_polar(q_modulus, q_phase)
    raise ConfigError(f"unknown group {group!r}")


def _campaign(args, doc: dict) -> dict:
    if args.samples is not None and args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if not 0 < args.q_modulus < 1:
        raise ConfigError("--q-modulus must lie in (0, 1)")
    if args.n < 1:
        raise ConfigError("--n must be at least 1")
    groups = ("real", "real-zn", "circle-z") if args.group == "all" else (args.group,)
    tol = args.tol if args.tol is not None else doc["tolerances"][_TOL_KEYS[args.target]]
    if not tol > 0:
        raise ConfigError("--tol must be positive")
    return {
        "target": args.target,
        "groups": list(groups),
        "b": [args.b_re, args.b_im],
        "n": args.n,
        "q": [args.q_modulus, args.q_phase],
        "samples": args.samples or 1,
        "seed": args.seed,
        "tol": tol,
        "config": doc,
    }


def _spec(c: dict, group: str) -> DilogSpec:
    return spec_from(group, complex(*c["b"]), c["n"], *c["q"])


def _tasks(c: dict) -> list:
    out = []
    for group in c["groups"]:
        if c["target"] in _IDENTITIES:
            for ident in _IDENTITIES[c["target"]]:
                n = 1 if ident == idn.CONSTANTS else c["samples"]
                out.extend({"group": group, "check": ident, "index": i, "n": n} for i in range(n))
        else:
            out.extend({"group": group, "check": c["target"], "index": i, "n": c["samples"]} for i in range(c["samples"]))
    return out


def run_task(c: dict, task: dict) -> dict:
    """One sample; failures of the computation become failed records."""
    spec = _spec(c, task["group"])
    cfg = QuadConfig.from_dict(c["config"]["quad"])
    seed = c["seed"]
    check, i = task["check"], task["index"]
    rec = {"group": task["group"], "check": check, "index": i}
    try:
        if check in idn._FAMILIES:
            args = idn.sample_inputs(spec, check, task["n"], seed, c["config"])[i] if check != idn.CONSTANTS else ()
            rec["inputs"] = jsonable(args)
            r = idn.run_check(spec, check, args, cfg, c["tol"])
            rec.update(lhs=cnum(r.lhs), rhs=cnum(r.rhs), residual=r.residual, passed=r.passed, diagnostics=jsonable(r.diagnostics))
        elif check == "weights-crosscheck":
            e, t = weights.sample_crosscheck(spec, seed + i)
            rec["inputs"] = jsonable({"edges": list(vars(e).values()), "lambdas": list(t)})
            r = weights.vertex_weight_crosscheck(e, t, spec, cfg, c["tol"])
            rec.update(lhs=cnum(r.general), rhs=cnum(r.selfdual), residual=r.residual, passed=r.passed,
                       diagnostics={"hypothesis": r.hypothesis, "verdict": r.verdict})
        else:
            rep = _run_tetra(check, spec, seed + i, c["tol"])
            rec.update(lhs=cnum(rep.lhs), rhs=cnum(rep.rhs), residual=rep.residual, passed=rep.passed,
                       diagnostics=jsonable(rep.diagnostics))
    except QDilogError as ex:
        rec.update(passed=False, error=f"{type(ex).__name__}: {ex}")
    if "residual" in rec:
        rec["residual"] = jsonable(rec["residual"])
    return rec


def _run_tetra(check, spec, seed, tol):
    if check == "irc-tetra":
        return tetra.verify_irc_tetra(tetra.sample_irc_instance(spec, seed), spec, tol=tol)
    if check == "vertex-zte":
        return tetra.verify_vertex_zte(tetra.sample_vertex_instance(spec, seed), spec, tol=tol)
    return tetra.verify_field_zte(tetra.sample_field_instance(spec, seed), spec, tol=tol)


def _run_one(payload):
    return run_task(*payload)


def run_verify(c: dict, jobs: int = 1) -> dict:
    t0 = time.perf_counter()
    tasks = _tasks(c)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_one, [(c, t) for t in tasks]))
    else:
        records = [run_task(c, t) for t in tasks]
    res = [r["residual"] for r in records if isinstance(r.get("residual"), float)]
    summary = {
        "total": len(records),
        "passed": sum(bool(r["passed"]) for r in records),
        "max_residual": max(res) if res else None,
    }
    summary["all_passed"] = summary["passed"] == summary["total"]
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "campaign": jsonable(c),
        "records": records,
        "summary": summary,
        "timing": {"wall_seconds": time.perf_counter() - t0},
    }


# ---------------------------------------------------------------------------
# eval


def parse_point(text: str, spec: DilogSpec) -> GroupPoint:
    """"x" or "x,m" with x a Python complex literal (e.g. 0.3+0.1j) and m an integer."""
    parts = text.replace("(", "").replace(")", "").split(",")
    try:
        cont = complex(parts[0].strip().replace("i", "j").replace(" ", ""))
        disc = int(parts[1]) if len(parts) > 1 else 0
    except ValueError:
        raise ConfigError(f"cannot parse group element {text!r}") from None
    if len(parts) > 2:
        raise ConfigError(f"cannot parse group element {text!r}")
    if cont.imag == 0:
        cont = cont.real
    if spec.kind.name == "real" and disc:
        raise ConfigError("points on R have no discrete component")
    return GroupPoint(spec.kind, cont, disc)


_ARITY = {"phi": 1, "kernel": 2, "gaussian": 1, "vertex-weight": 9, "irc-weight": 11, "hyper2f2": 5}


def run_eval(what: str, values: list, spec: DilogSpec, cfg: QuadConfig) -> dict:
    if len(values) != _ARITY[what]:
        raise ConfigError(f"{what} takes {_ARITY[what]} group elements, got {len(values)}")
    p = [parse_point(v, spec) for v in values]
    if what == "phi":
        val = spec.phi(p[0], cfg)
    elif what == "kernel":
        val = fourier_kernel(p[0], p[1])
    elif what == "gaussian":
        val = gaussian(p[0])
    elif what == "vertex-weight":
        e = weights.EdgeConfig(*p[:6])
        val = weights.vertex_weight_selfdual(e, weights.SpectralTriple(*p[6:]), spec, cfg).value
    elif what == "irc-weight":
        k = weights.CornerConfig(*p[:8])
        val = weights.irc_weight(k, weights.SpectralTriple(*p[8:]), spec, cfg)
    else:
        val = weights.hyper2F2(*p, spec, cfg)
    val = complex(np.asarray(val))
    return {
        "what": what,
        "spec": jsonable(spec.describe()),
        "args": values,
        "value": cnum(val),
        "modulus": abs(val),
        "phase": math.atan2(val.imag, val.real),
    }


# ---------------------------------------------------------------------------
# free energy


def run_free_energy(args) -> dict:
    b = complex(args.b_re, args.b_im)
    if args.formula == "pf-field":
        if not args.fields:
            raise ConfigError("pf-field needs --fields")
        res = z_field_inf([complex(f.replace("i", "j")) for f in args.fields], b)
    else:
        if args.thetas:
            tri = triangle_from_thetas(*args.thetas)
        elif args.sides:
            tri = triangle_from_thetas(*thetas_from_sides(args.sides))
        else:
            raise ConfigError(f"{args.formula} needs --thetas or --sides")
        res = kappa_zbb(args.N, tri) if args.formula == "pf-zbb" else z_vert_inf(tri, b)
    return {
        "formula": args.formula,
        "betas": list(res.betas),
        "log_z": cnum(res.log_z),
        "z": cnum(res.z),
        "b": None if res.b is None else cnum(res.b),
        "N": res.N,
    }


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--group", choices=GROUPS, default="real")
    g.add_argument("--b-re", type=float, default=0.8)
    g.add_argument("--b-im", type=float, default=0.0)
    g.add_argument("--q-modulus", type=float, default=0.5)
    g.add_argument("--q-phase", type=float, default=math.pi)
    g.add_argument("--n", type=int, default=2, help="N of R x Z_N")
    g.add_argument("--samples", type=int, default=None)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--tol", type=float, default=None)
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--config", default=None, help="JSON file overriding the default campaign config")
    g.add_argument("--out", default=None, help="write the report here")

    p = argparse.ArgumentParser(prog="qdilog", description="Quantum dilogarithm identities and 3D lattice weights.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification campaign")
    v.add_argument("target", choices=TARGETS)
    e = sub.add_parser("eval", parents=[common], help="evaluate one quantity")
    e.add_argument("what", choices=EVALS)
    e.add_argument("values", nargs="*", help='group elements, "x" or "x,m"')
    f = sub.add_parser("free-energy", parents=[common], help="per-site free energies")
    f.add_argument("--formula", choices=("pf-2", "pf-field", "pf-zbb"), default="pf-2")
    f.add_argument("--thetas", type=float, nargs=3)
    f.add_argument("--sides", type=float, nargs=3)
    f.add_argument("--fields", nargs=3)
    f.add_argument("--N", type=int, default=2)
    return p


def _load_config(path) -> dict:
    if path is None:
        return merged(None)
    try:
        with open(path) as fh:
            return merged(json.load(fh))
    except (OSError, json.JSONDecodeError) as ex:
        raise ConfigError(f"cannot read config {path}: {ex}") from None


def _emit(doc: dict, out) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = _load_config(args.config)
        QuadConfig.from_dict(doc["quad"])
        if args.command == "verify":
            c = _campaign(args, doc)
            report = run_verify(c, args.jobs)
            if args.out:
                _emit(report, args.out)
            s = report["summary"]
            for r in report["records"]:
                status = "PASS" if r["passed"] else "FAIL"
                detail = r.get("error") or f"residual {r['residual']}"
                print(f"{status} {r['group']:9s} {r['check']:24s} #{r['index']:<3d} {detail}")
            print(f"{s['passed']}/{s['total']} passed, max residual {s['max_residual']}, "
                  f"{report['timing']['wall_seconds']:.1f} s")
            return 0 if s["all_passed"] else 1
        spec = spec_from("real" if args.group == "all" else args.group, complex(args.b_re, args.b_im), args.n, args.q_modulus, args.q_phase)
        if args.command == "eval":
            _emit(run_eval(args.what, args.values, spec, QuadConfig.from_dict(doc["quad"])), args.out)
        else:
            _emit(run_free_energy(args), args.out)
        return 0
    except ConfigError as ex:
        print(f"configuration error: {ex}", file=sys.stderr)
        return 2
    except QDilogError as ex:
        print(f"{type(ex).__name__}: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
