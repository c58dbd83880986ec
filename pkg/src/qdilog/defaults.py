"""Checked-in campaign defaults: quadrature policy, contour offsets, tolerances.

Offsets are fractions of the crossing height h = Im eta.  They were found
admissible during bring-up; the integrals involved converge only inside
strips of complexified arguments, so they are configuration rather than
constants in code.
"""
from __future__ import annotations

import copy
import json
from functools import lru_cache
from importlib import resources

from .config import QuadConfig
from .errors import ConfigError


@lru_cache(maxsize=1)
def _load() -> dict:
    text = resources.files("qdilog").joinpath("data/defaults.json").read_text()
    return json.loads(text)


def defaults() -> dict:
    """A fresh copy of the default campaign configuration."""
    return copy.deepcopy(_load())


def merged(override: dict | None) -> dict:
    """Defaults with a (possibly partial) override applied section by section."""
    base = defaults()
    for key, val in (override or {}).items():
        if key not in base:
            raise ConfigError(f"unknown config section {key!r}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"config section {key!r} must be an object")
            for k2, v2 in val.items():
                if isinstance(base[key].get(k2), dict) and isinstance(v2, dict):
                    base[key][k2].update(v2)
                else:
                    base[key][k2] = v2
        else:
            base[key] = val
    return base


def quad_config(doc: dict | None = None) -> QuadConfig:
    doc = doc or _load()
    return QuadConfig.from_dict(doc["quad"])


def offsets(family: str, doc: dict | None = None) -> dict:
    doc = doc or _load()
    try:
        return dict(doc["offsets"][family])
    except KeyError:
        raise ConfigError(f"no offsets configured for {family!r}") from None


def tolerance(name: str, doc: dict | None = None) -> float:
    doc = doc or _load()
    return float(doc["tolerances"][name])
