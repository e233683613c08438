"""Scan configuration: file ingestion, CLI overrides, validation.

Config files are flat `key = value` lines; '#' starts a comment, blank
lines are skipped, keys match the CLI flag names with underscores.  CLI
flags override file values.  Validation failures raise ConfigError naming
the offending field.  A canonical example ships in configs/example_gap.cfg.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .capacitance import capacitance_bem, capacitance_ellipsoid
from .errors import ConfigError
from .meshes import read_off

KNOWN_KEYS = {
    "problem",
    "k0",
    "m0",
    "a",
    "q",
    "shape",
    "semiaxes",
    "mesh",
    "gamma_plus",
    "gamma_minus",
    "rho_plus",
    "rho_minus",
    "delta_tilde_min",
    "delta_tilde_max",
    "samples",
    "verify",
    "n",
    "g_max",
    "count",
    "out_dir",
    "seed",
    "exclusion_band",
    "tol",
    "c",
}


@dataclass(frozen=True)
class ScanConfig:
    problem: str = "dirichlet"
    k0: tuple[float, float, float] = (0.0, 0.0, 0.5)
    m0: tuple[int, int, int] = (0, 0, 1)
    a: float = 0.1
    q: float = 1.0
    shape: str = "sphere"
    semiaxes: tuple[float, float, float] | None = None
    mesh: str | None = None
    gamma_plus: float = 1.0
    gamma_minus: float = 1.0
    rho_plus: float = 1.0
    rho_minus: float = 1.0
    delta_tilde_min: float = -0.05
    delta_tilde_max: float = 0.05
    samples: int = 101
    verify: bool = False
    n: int = 32
    g_max: int = 3
    count: int | None = None
    out_dir: str = "bandscan_out"
    seed: int = 0
    exclusion_band: float = 1e-6
    tol: float = 1e-9
    c: float = 1.0

    def validated(self) -> "ScanConfig":
        if self.problem not in ("dirichlet", "transmission"):
            raise ConfigError(f"problem: must be dirichlet or transmission, got {self.problem!r}")
        if len(self.k0) != 3:
            raise ConfigError("k0: needs 3 components")
        if len(self.m0) != 3 or self.m0 == (0, 0, 0):
            raise ConfigError("m0: needs 3 integer components, not all zero")
        if not self.a >= 0.0:
            raise ConfigError("a: must be >= 0")
        if not self.q > 0.0:
            raise ConfigError("q: must be > 0")
        if self.shape not in ("sphere", "ellipsoid", "mesh"):
            raise ConfigError(f"shape: unknown {self.shape!r}")
        if self.shape == "ellipsoid" and self.semiaxes is None:
            raise ConfigError("semiaxes: required for shape = ellipsoid")
        if self.shape == "mesh" and self.mesh is None:
            raise ConfigError("mesh: path required for shape = mesh")
        if self.problem == "transmission" and self.shape != "sphere":
            raise ConfigError("shape: transmission supports spheres only")
        for name in ("gamma_plus", "gamma_minus", "rho_plus", "rho_minus"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name}: must be > 0")
        if not self.delta_tilde_min <= self.delta_tilde_max:
            raise ConfigError("delta_tilde_min: must not exceed delta_tilde_max")
        if self.samples < 1:
            raise ConfigError("samples: must be >= 1")
        if self.n < 16:
            raise ConfigError("n: must be >= 16")
        if self.g_max < 2:
            raise ConfigError("g_max: must be >= 2")
        if self.count is not None and self.count < 1:
            raise ConfigError("count: must be >= 1")
        if not self.c > 0.0:
            raise ConfigError("c: must be > 0")
        if not self.exclusion_band >= 0.0:
            raise ConfigError("exclusion_band: must be >= 0")
        if not self.tol >= 0.0:
            raise ConfigError("tol: must be >= 0")
        return self

    def shape_factor(self) -> float:
        """The capacitance factor q implied by the inclusion shape."""
        if self.shape == "sphere":
            return self.q
        if self.shape == "ellipsoid":
            ax = self.semiaxes
            return capacitance_ellipsoid(ax[0], ax[1], ax[2]).q
        try:
            mesh = read_off(self.mesh)
        except OSError as exc:
            raise ConfigError(f"mesh: cannot read {self.mesh!r}: {exc}") from exc
        return capacitance_bem(mesh).q


def _parse_vec3_float(s: str) -> tuple[float, float, float]:
    parts = [p for p in s.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise ConfigError(f"expected 3 components, got {s!r}")
    return tuple(float(p) for p in parts)


def _parse_vec3_int(s: str) -> tuple[int, int, int]:
    parts = [p for p in s.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise ConfigError(f"expected 3 integer components, got {s!r}")
    out = []
    for p in parts:
        v = float(p)
        if v != int(v):
            raise ConfigError(f"component {p!r} is not an integer")
        out.append(int(v))
    return tuple(out)


def _parse_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {s!r}")


_COERCERS = {
    "problem": str,
    "k0": _parse_vec3_float,
    "m0": _parse_vec3_int,
    "a": float,
    "q": float,
    "shape": str,
    "semiaxes": _parse_vec3_float,
    "mesh": str,
    "gamma_plus": float,
    "gamma_minus": float,
    "rho_plus": float,
    "rho_minus": float,
    "delta_tilde_min": float,
    "delta_tilde_max": float,
    "samples": int,
    "verify": _parse_bool,
    "n": int,
    "g_max": int,
    "count": int,
    "out_dir": str,
    "seed": int,
    "exclusion_band": float,
    "tol": float,
    "c": float,
}


def parse_config_file(path) -> dict:
    """Read a key = value config file into a typed dict."""
    values = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in KNOWN_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _COERCERS[key](val)
            except (ValueError, ConfigError) as exc:
                raise ConfigError(f"{path}:{lineno}: {key}: {exc}") from exc
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> ScanConfig:
    """Merge file values and CLI overrides (overrides win), then validate."""
    cfg = ScanConfig()
    if file_values:
        cfg = replace(cfg, **file_values)
    if overrides:
        clean = {k: v for k, v in overrides.items() if v is not None}
        cfg = replace(cfg, **clean)
    return cfg.validated()
