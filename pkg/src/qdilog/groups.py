"""The three Pontryagin self-dual groups R, R x Z_N and T x Z.

A point carries a continuous coordinate (xi or theta) and an integer
coordinate.  Both may be numpy arrays so that quadrature nodes can be
evaluated in one call; the continuous coordinate may be complex when an
operation analytically continues in it (shifts by the crossing parameter,
shifted integration contours).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError, GroupMismatch

TWO_PI = 2.0 * np.pi

Number = Union[complex, float, int, np.ndarray]


@dataclass(frozen=True)
class GroupKind:
    """One of ``real``, ``real-zn`` (with modulus N) or ``circle-z``."""

    name: str
    N: int = 1

    def __post_init__(self):
        if self.name not in ("real", "real-zn", "circle-z"):
            raise DomainError(f"unknown group {self.name!r}")
        if self.name == "real-zn" and self.N < 1:
            raise DomainError("Z_N needs N >= 1")

    @property
    def has_discrete(self) -> bool:
        return self.name != "real"

    def __str__(self):
        return f"real-zn(N={self.N})" if self.name == "real-zn" else self.name


def RealLine() -> GroupKind:
    return GroupKind("real")


def RealByZN(N: int, *, allow_trivial: bool = False) -> GroupKind:
    """R x Z_N.  N = 1 is only meaningful as a reduction check."""
    if N < 2 and not (allow_trivial and N == 1):
        raise DomainError(f"R x Z_N requires N >= 2, got {N}")
    return GroupKind("real-zn", int(N))


def CircleByZ() -> GroupKind:
    return GroupKind("circle-z")


def _is_real(c) -> bool:
    return bool(np.all(np.imag(c) == 0))


def _reduce_theta(c):
    if np.ndim(c) == 0:
        return float(np.real(c)) % TWO_PI
    return np.mod(np.real(c), TWO_PI)


class GroupPoint:
    """Element (possibly an array of elements) of one of the groups."""

    __slots__ = ("kind", "cont", "disc")

    def __init__(self, kind: GroupKind, cont: Number = 0.0, disc=0):
        self.kind = kind
        if kind.name == "real":
            disc = 0
        elif kind.name == "real-zn":
            disc = np.mod(disc, kind.N) if np.ndim(disc) else int(disc) % kind.N
        elif np.ndim(disc) == 0:
            disc = int(disc)
        if kind.name == "circle-z" and _is_real(cont):
            cont = _reduce_theta(cont)
        self.cont = cont
        self.disc = disc

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "GroupPoint"):
        if not isinstance(other, GroupPoint):
            raise TypeError(f"cannot combine GroupPoint with {type(other).__name__}")
        if other.kind != self.kind:
            raise GroupMismatch(f"{self.kind} vs {other.kind}")

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        self._check(other)
        return GroupPoint(self.kind, self.cont + other.cont, self.disc + other.disc)

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        self._check(other)
        return GroupPoint(self.kind, self.cont - other.cont, self.disc - other.disc)

    def __neg__(self) -> "GroupPoint":
        return GroupPoint(self.kind, -self.cont, -self.disc)

    def __pos__(self):
        return self

    def scaled(self, num: int, den: int = 1) -> "GroupPoint":
        """Multiply by the rational ``num/den``.

        The continuous part is scaled directly; the integer part must be
        divisible by ``den`` (checked element-wise).
        """
        frac = Fraction(num, den)
        d = np.asarray(self.disc) * frac.numerator
        if frac.denominator != 1:
            if np.any(d % frac.denominator):
                raise DomainError(
                    f"discrete component not divisible by {frac.denominator} in {self.kind}"
                )
            d = d // frac.denominator
        if np.ndim(d) == 0:
            d = int(d)
        return GroupPoint(self.kind, self.cont * (num / den), d)

    def half(self) -> "GroupPoint":
        return self.scaled(1, 2)

    # -- inspection -------------------------------------------------------
    @property
    def is_real(self) -> bool:
        return _is_real(self.cont)

    @property
    def shape(self):
        return np.broadcast(np.asarray(self.cont), np.asarray(self.disc)).shape

    def __getitem__(self, idx) -> "GroupPoint":
        c = np.broadcast_to(np.asarray(self.cont), self.shape)[idx]
        d = np.broadcast_to(np.asarray(self.disc), self.shape)[idx]
        return GroupPoint(self.kind, c, d)

    def with_cont(self, cont) -> "GroupPoint":
        return GroupPoint(self.kind, cont, self.disc)

    def shift_cont(self, delta) -> "GroupPoint":
        return GroupPoint(self.kind, self.cont + delta, self.disc)

    def as_tuple(self):
        c = complex(self.cont) if np.ndim(self.cont) == 0 else self.cont
        if self.kind.name == "real":
            return (c,)
        return (c, self.disc)

    def __eq__(self, other):
        if not isinstance(other, GroupPoint) or other.kind != self.kind:
            return NotImplemented
        return bool(np.all(self.cont == other.cont) and np.all(self.disc == other.disc))

    def __hash__(self):
        return hash((self.kind, complex(self.cont), int(self.disc)))

    def __repr__(self):
        if self.kind.name == "real":
            return f"GroupPoint(real, {self.cont!r})"
        return f"GroupPoint({self.kind}, {self.cont!r}, {self.disc!r})"


def point(kind: GroupKind, cont: Number = 0.0, disc=0) -> GroupPoint:
    return GroupPoint(kind, cont, disc)


def zero(kind: GroupKind) -> GroupPoint:
    return GroupPoint(kind, 0.0, 0)


def same_group(*pts: GroupPoint) -> GroupKind:
    kind = pts[0].kind
    for p in pts[1:]:
        if p.kind != kind:
            raise GroupMismatch(f"{kind} vs {p.kind}")
    return kind


def fourier_kernel(x: GroupPoint, y: GroupPoint):
    """Kernel f(x, y) of the group Fourier transform."""
    kind = same_group(x, y)
    if kind.name == "real":
        return np.exp(2j * np.pi * x.cont * y.cont)
    if kind.name == "real-zn":
        nn = np.mod(np.asarray(x.disc) * np.asarray(y.disc), kind.N)
        return np.exp(2j * np.pi * x.cont * y.cont - 2j * np.pi * nn / kind.N)
    return np.exp(1j * (x.cont * y.disc + y.cont * x.disc))


def gaussian(x: GroupPoint):
    """Gaussian exponent G(x), with G(x + y) = f(x, y) G(x) G(y)."""
    kind = x.kind
    if kind.name == "real":
        return np.exp(1j * np.pi * x.cont**2)
    if kind.name == "real-zn":
        n = np.asarray(x.disc)
        phase = np.mod(n * (n + kind.N), 2 * kind.N)
        return np.exp(1j * np.pi * x.cont**2 - 1j * np.pi * phase / kind.N)
    return np.exp(1j * x.cont * x.disc)
