"""Run configuration: resource caps shared by every module.

The active configuration lives in a context variable so tests and the CLI
can scope overrides without threading a parameter through every call.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import json
import logging

log = logging.getLogger(__name__)

# file keys use camelCase; attributes stay snake_case
_FILE_KEYS = {
    "termDepthCap": "term_depth_cap",
    "magnitudeCap": "magnitude_cap",
    "truthBudget": "truth_budget",
    "towerCap": "tower_cap",
    "exploreDepth": "explore_depth",
    "oracleWidth": "oracle_width",
    "seed": "seed",
}


@dataclasses.dataclass(frozen=True)
class Config:
    term_depth_cap: int = 32
    # bit length allowed for any computed natural number
    magnitude_cap: int = 1 << 20
    # quantifier instantiations allowed per truth evaluation
    truth_budget: int = 10**6
    # (n, x) meaning the tower 2_n(x)
    tower_cap: tuple = (3, 16)
    explore_depth: int = 8
    oracle_width: int = 16
    seed: int = 0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "tower_cap":
                if len(value) != 2 or min(value) < 0 or value[1] < 1:
                    raise ValueError(f"bad towerCap {value!r}")
                object.__setattr__(self, "tower_cap", tuple(int(v) for v in value))
            elif f.name == "seed":
                if value < 0:
                    raise ValueError("seed must be non-negative")
            elif value <= 0:
                raise ValueError(f"{f.name} must be positive, got {value}")

    def to_dict(self):
        out = {}
        for key, attr in _FILE_KEYS.items():
            value = getattr(self, attr)
            out[key] = list(value) if isinstance(value, tuple) else value
        return out

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(_FILE_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {_FILE_KEYS[k]: v for k, v in data.items()}
        if "tower_cap" in kwargs:
            kwargs["tower_cap"] = tuple(kwargs["tower_cap"])
        return cls(**kwargs)

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps() + "\n")


_current = contextvars.ContextVar("cutred_config", default=Config())


def get_config() -> Config:
    return _current.get()


@contextlib.contextmanager
def use_config(config: Config | None = None, **overrides):
    """Temporarily install `config` (or the current one with `overrides`)."""
    base = config if config is not None else get_config()
    if overrides:
        base = dataclasses.replace(base, **overrides)
    token = _current.set(base)
    try:
        yield base
    finally:
        _current.reset(token)


def log_effective(config: Config | None = None):
    config = config or get_config()
    log.info("effective config: %s", json.dumps(config.to_dict(), sort_keys=True))
