"""Run configuration: defaults, key=value files, CLI overrides.

Config files are flat ``key = value`` lines ('#' comments, blank lines
ignored).  Keys match the dataclass fields below; unknown keys are input
errors so typos cannot silently fall back to defaults.  Precedence is
defaults < file < explicit CLI flags.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from .errors import InputError
from .lattice import DEFAULT_WORK_BUDGET
from .poincare import SIGMA0_DEFAULT


@dataclass
class RunConfig:
    c_g: float = 1.0            # free-space normalization constant
    rho_norm: float = 1.0       # spectral offset: lambda_z = z^2 - rho_norm^2
    nu: int = 2                 # kernel exponent of the model space
    ell: int = 2                # smoothing order
    theta: float = 1.0          # smoothing step
    sigma0: float = SIGMA0_DEFAULT  # census growth exponent
    growth_eps: float = 0.25    # exponent margin in tail certificates
    growth_safety: float = 4.0  # prefactor safety in tail certificates
    work_budget: int = DEFAULT_WORK_BUDGET
    workers: int = 1
    quad_tol: float = 1e-9      # contour quadrature absolute tolerance

    def validate(self) -> "RunConfig":
        if self.nu < 1:
            raise InputError("nu must be >= 1")
        if self.ell < 1:
            raise InputError("ell must be >= 1")
        if self.theta <= 0:
            raise InputError("theta must be > 0")
        if self.rho_norm <= 0:
            raise InputError("rho_norm must be > 0")
        if self.workers < 1:
            raise InputError("workers must be >= 1")
        if self.work_budget < 1:
            raise InputError("work_budget must be >= 1")
        return self

    def as_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str) -> Any:
    ftype = _FIELD_TYPES[key]
    try:
        if ftype == "int":
            return int(raw)
        if ftype == "float":
            return float(raw)
    except ValueError:
        raise InputError(f"config key {key}: cannot parse {raw!r}") from None
    return raw


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Parse a key=value file into a {field: value} dict."""
    out: dict[str, Any] = {}
    for ln, line in enumerate(Path(path).read_text().splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise InputError(f"{path}:{ln}: expected 'key = value'")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in _FIELD_TYPES:
            raise InputError(f"{path}:{ln}: unknown config key {key!r}")
        out[key] = _coerce(key, raw)
    return out


def build_config(file_path: str | None, overrides: dict[str, Any]) -> RunConfig:
    """defaults < file < overrides (None-valued overrides are skipped)."""
    vals: dict[str, Any] = {}
    if file_path:
        vals.update(load_config_file(file_path))
    for k, v in overrides.items():
        if v is not None:
            if k not in _FIELD_TYPES:
                raise InputError(f"unknown config override {k!r}")
            vals[k] = v
    return RunConfig(**vals).validate()
