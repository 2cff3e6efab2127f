"""Flat key=value run configuration with CLI override semantics."""

from dataclasses import dataclass, fields

from .errors import ConfigError


@dataclass
class RunConfig:
    """Settings shared by the solver subcommands.

    `sigma` is the standard deviation of the underlying Gaussian log field
    (its variance enters the covariance kernel); `corr_length` the kernel
    correlation length; `L` the number of random variables; `p_u` the
    solution chaos order and `p_a` the input chaos order (defaults to
    2 * p_u).  `tol` overrides the per-command solver tolerance.
    """

    mesh: str = ""
    nx: int = 24
    ny: int = 24
    L: int = 3
    p_u: int = 3
    p_a: int = 0  # 0 means "derive as 2 * p_u"
    sigma: float = 0.3
    corr_length: float = 1.0
    mean_log: float = 0.0
    f: float = 1.0
    tol: float = 0.0  # 0 means "per-command default"
    level: int = 3
    out: str = ""
    vtk: str = ""

    def input_order(self):
        return self.p_a if self.p_a > 0 else 2 * self.p_u

    def solver_tol(self, default):
        return self.tol if self.tol > 0 else default

    def validate(self):
        if self.L < 1:
            raise ConfigError(f"L must be >= 1, got {self.L}")
        if self.p_u < 0 or self.p_a < 0:
            raise ConfigError("chaos orders must be non-negative")
        if self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if self.tol < 0:
            raise ConfigError(f"tol must be >= 0, got {self.tol}")
        if self.corr_length <= 0:
            raise ConfigError(f"corr_length must be positive, got {self.corr_length}")
        if self.level < 1:
            raise ConfigError(f"quadrature level must be >= 1, got {self.level}")
        if not self.mesh and (self.nx < 1 or self.ny < 1):
            raise ConfigError(f"nx and ny must be >= 1, got ({self.nx}, {self.ny})")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def load_config(path):
    """Parse a flat key=value file ('#' comments allowed) into a dict."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}")
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def build_config(file_values=None, overrides=None):
    """Merge defaults, config-file values and CLI overrides (highest priority)."""
    cfg = RunConfig()
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            kind = _FIELD_TYPES[key]
            try:
                if kind == "int" or kind is int:
                    parsed = int(value)
                elif kind == "float" or kind is float:
                    parsed = float(value)
                else:
                    parsed = str(value)
            except (TypeError, ValueError):
                raise ConfigError(f"config key {key!r}: cannot parse {value!r} as {kind}")
            setattr(cfg, key, parsed)
    return cfg.validate()
