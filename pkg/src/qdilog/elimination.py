"""Symbolic elimination of delta-function constraints.

Spins are combined with integer coefficients only, so a constraint is an
integer linear form over named variables.  Elimination uses unit pivots
(coefficient +1 or -1), which keeps every substitution integral and makes
the Jacobian of the change of variables equal to one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ConstraintViolated
from .groups import GroupPoint


class Lin:
    """Integer linear form sum_k c_k * name_k."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[str, int] | None = None):
        self.terms = {k: int(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def var(cls, name: str) -> "Lin":
        return cls({name: 1})

    def __add__(self, other: "Lin") -> "Lin":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Lin(t)

    def __neg__(self) -> "Lin":
        return Lin({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Lin") -> "Lin":
        return self + (-other)

    def __mul__(self, c: int) -> "Lin":
        return Lin({k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def coeff(self, name: str) -> int:
        return self.terms.get(name, 0)

    def names(self) -> set:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, sol: Mapping[str, "Lin"]) -> "Lin":
        out = Lin()
        for k, v in self.terms.items():
            out = out + (sol[k] * v if k in sol else Lin({k: v}))
        return out

    def evaluate(self, env: Mapping[str, GroupPoint]) -> GroupPoint:
        acc = None
        for k, v in sorted(self.terms.items()):
            p = env[k]
            term = p if v == 1 else (-p if v == -1 else p.scaled(v))
            acc = term if acc is None else acc + term
        if acc is None:
            raise ValueError("cannot evaluate the empty form without a group")
        return acc

    def __eq__(self, other):
        return isinstance(other, Lin) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms.items()):
            sign = "-" if v < 0 else "+"
            mag = "" if abs(v) == 1 else f"{abs(v)}*"
            parts.append(f"{sign} {mag}{k}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s


def lin_sum(forms: Iterable[Lin]) -> Lin:
    out = Lin()
    for f in forms:
        out = out + f
    return out


@dataclass
class Elimination:
    """Result of solving constraints for some of the unknowns.

    ``solution`` maps each dependent unknown to a form in the free unknowns
    and the remaining (external) names.  ``residual`` lists the constraints
    left over on the externals; they must vanish for the kernel product to
    have support.
    """

    solution: dict
    free: list
    residual: list
    pivots: list = field(default_factory=list)

    def complete(self, env: Mapping[str, GroupPoint]) -> dict:
        """Extend an environment holding free unknowns and externals."""
        out = dict(env)
        for k, form in self.solution.items():
            out[k] = form.evaluate(env)
        return out


def eliminate(equations: Sequence[Lin], unknowns: Sequence[str], order: Sequence[str] | None = None) -> Elimination:
    """Solve ``equations == 0`` for unknowns, preferring pivots in ``order``.

    Equations are processed in the given sequence; each one is solved for the
    first unknown in ``order`` that appears in it with coefficient +-1.
    Raises ConstraintViolated if an equation needs a non-unit pivot.
    """
    pref = list(order) if order is not None else list(unknowns)
    unknown_set = set(unknowns)
    sol: dict = {}
    residual = []
    pivots = []
    for eq in equations:
        e = eq.substitute(sol)
        cands = [u for u in pref if u in unknown_set and u not in sol and abs(e.coeff(u)) == 1]
        if not cands:
            if any(e.coeff(u) for u in unknown_set if u not in sol):
                raise ConstraintViolated(f"no unit pivot in constraint {e!r}")
            if not e.is_zero():
                residual.append(e)
            continue
        u = cands[0]
        c = e.coeff(u)
        # c*u + rest = 0  =>  u = -rest / c  (c = +-1)
        rest = e - Lin({u: c})
        expr = rest * (-c)
        sol = {k: v.substitute({u: expr}) for k, v in sol.items()}
        sol[u] = expr
        pivots.append(u)
    free = [u for u in unknowns if u not in sol]
    return Elimination(sol, free, residual, pivots)


def check_residuals(elim: Elimination, env: Mapping[str, GroupPoint], tol: float = 1e-10):
    """Raise ConstraintViolated unless every residual constraint vanishes at ``env``."""
    import numpy as np

    for r in elim.residual:
        p = r.evaluate(env)
        scale = 1.0 + max(float(np.max(np.abs(env[k].cont))) for k in r.names())
        if np.any(np.abs(p.cont) > tol * scale) or np.any(np.asarray(p.disc) != 0):
            raise ConstraintViolated(f"external constraint {r!r} = 0 violated")
