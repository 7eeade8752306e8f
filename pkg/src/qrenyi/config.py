"""Numerical tolerances and caps shared by every module.

A JSON file named by the ``QRENYI_CONFIG`` environment variable may override
any field, e.g. ``{"cluster_tol": 1e-8, "dim_cap": 1024}``.
"""

from __future__ import annotations

import contextlib
import dataclasses
import json
import os
from dataclasses import dataclass

ENV_VAR = "QRENYI_CONFIG"


@dataclass(frozen=True)
class Config:
    # operator calculus
    tol_herm: float = 1e-10
    tol_psd: float = 1e-9
    tol_trace: float = 1e-9
    meet_tol: float = 1e-7
    support_cutoff: float = 1e-10
    cluster_tol: float = 1e-9
    # two supports count as orthogonal when every overlap is below this
    overlap_tol: float = 1e-10
    dim_cap: int = 4096
    alphabet_cap: int = 4096
    # optimizers
    opt_gtol: float = 1e-7
    opt_stall: float = 1e-9
    opt_maxiter: int = 500
    chi_gap_tol: float = 1e-6
    radius_gap_tol: float = 1e-4
    # exponents
    delta_min: float = 1e-3
    delta_max: float = 1.0 - 1e-3
    delta_grid: int = 64

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


def load_config(path: str) -> Config:
    """Read a JSON override file and return the resulting config."""
    from .errors import InputError
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: config must be a JSON object")
    names = {f.name for f in dataclasses.fields(Config)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise InputError(f"{path}: unknown config keys {unknown}")
    base = Config()
    cast = {k: type(getattr(base, k))(v) for k, v in data.items()}
    return base.replace(**cast)


_cached: tuple[str | None, Config] | None = None
_override: Config | None = None


def get_config() -> Config:
    """Active config: an explicit override, else the env file, else defaults."""
    global _cached
    if _override is not None:
        return _override
    path = os.environ.get(ENV_VAR) or None
    if _cached is None or _cached[0] != path:
        _cached = (path, load_config(path) if path else Config())
    return _cached[1]


@contextlib.contextmanager
def using(config: Config):
    """Temporarily install ``config`` as the active configuration."""
    global _override
    previous = _override
    _override = config
    try:
        yield config
    finally:
        _override = previous
