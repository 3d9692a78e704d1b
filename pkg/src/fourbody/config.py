"""Run configuration: parsing and validation of the JSON config file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any

from .errors import ConfigError
from .geometry import MassConfig
from .oscillator import GAUGE_NAMES, GaugeParams, SpecialModel

VARIANT_CHOICES = ("generic", "equal", "atomic", "molecular", "three-center")
SUITE_NAMES = ("geometry", "oscillator", "sl7", "spectra", "symmetry", "reduction", "bo", "jacobi")
MAX_N = 4
MAX_P_LEVELS = 10

# number of leading infinite masses each variant requires
_HEAVY = {"generic": 0, "equal": 0, "atomic": 1, "molecular": 2, "three-center": 3}


def parse_rational(value: Any, what: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{what}: expected a rational, got {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"{what}: cannot parse {value!r} as a rational") from None


def _parse_mass(value: Any, k: int) -> Fraction | str:
    if isinstance(value, str) and value.strip().lower() == "inf":
        return "inf"
    m = parse_rational(value, f"masses[{k}]")
    if m <= 0:
        raise ConfigError(f"masses[{k}] must be positive")
    return m


@dataclass(frozen=True)
class RunConfig:
    masses: tuple = ("1", "1", "1", "1")
    d: Fraction = Fraction(3)
    omega: Fraction = Fraction(1)
    gauge: tuple = (1, 1, 1, 1, 1, 1)
    variant: str = "generic"
    N: int = 2
    out: str | None = None
    format: str = "json"
    seed: int = 0
    suites: tuple = SUITE_NAMES
    classical: tuple = ()
    direction: str = "forward"
    nu: tuple | None = None
    representation: str = "rho"
    m_values: tuple = ("1/1000", "1/10000")
    rho: tuple | None = None

    # ------------------------------------------------------------ derived
    @property
    def mass_values(self) -> list[Fraction | str]:
        return [_parse_mass(v, k) for k, v in enumerate(self.masses)]

    @property
    def light_mass(self) -> Fraction:
        finite = [m for m in self.mass_values if m != "inf"]
        return finite[-1]

    @property
    def mass_config(self) -> MassConfig:
        return MassConfig.of(*self.mass_values)

    def finite_masses(self) -> MassConfig:
        """The configured masses when all finite; otherwise equal masses at the light mass."""
        mc = self.mass_config
        return mc if mc.is_finite else MassConfig.equal(self.light_mass)

    @property
    def gauge_params(self) -> GaugeParams:
        return GaugeParams.from_values(self.gauge, self.omega)

    @property
    def model(self) -> SpecialModel:
        if self.variant == "generic":
            return SpecialModel("generic", masses=self.mass_config)
        if self.variant == "equal":
            return SpecialModel("equal", self.light_mass)
        return SpecialModel.with_classical(self.variant, self.light_mass, list(self.classical))

    def validate(self) -> "RunConfig":
        if len(self.masses) != 4:
            raise ConfigError("masses needs four entries")
        vals = self.mass_values
        if self.variant not in VARIANT_CHOICES:
            raise ConfigError(f"unknown variant {self.variant!r}")
        heavy = _HEAVY[self.variant]
        inf_pos = [k for k, v in enumerate(vals) if v == "inf"]
        if inf_pos != list(range(heavy)):
            want = "no infinite masses" if heavy == 0 else \
                f"masses {', '.join(str(k + 1) for k in range(heavy))} infinite and the rest finite"
            raise ConfigError(f"variant {self.variant} needs {want}; got infinite positions "
                              f"{[k + 1 for k in inf_pos]}")
        finite = [v for v in vals if v != "inf"]
        if self.variant != "generic" and len(set(finite)) != 1:
            raise ConfigError(f"variant {self.variant} needs equal finite masses")
        if self.omega <= 0:
            raise ConfigError("omega must be positive")
        if len(self.gauge) != 6:
            raise ConfigError("gauge needs six entries a, b, c, e, f, g")
        if not 0 <= self.N <= MAX_N and self.representation == "rho":
            raise ConfigError(f"N must lie in 0..{MAX_N}")
        if self.representation == "P" and not 0 <= self.N <= MAX_P_LEVELS:
            raise ConfigError(f"N must lie in 0..{MAX_P_LEVELS} for the P-representation")
        if self.representation not in ("rho", "P"):
            raise ConfigError("representation is 'rho' or 'P'")
        if self.format not in ("json", "csv"):
            raise ConfigError("format is json or csv")
        if self.direction not in ("forward", "inverse"):
            raise ConfigError("direction is forward or inverse")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        unknown = set(self.suites) - set(SUITE_NAMES)
        if unknown:
            raise ConfigError(f"unknown suites {sorted(unknown)}")
        if self.nu is not None and len(self.nu) != 6:
            raise ConfigError("nu needs six entries")
        if self.rho is not None and len(self.rho) != 6:
            raise ConfigError("rho needs six entries")
        expected_classical = len(self.model.classical_vars)
        if self.classical and len(self.classical) != expected_classical:
            raise ConfigError(f"variant {self.variant} takes {expected_classical} classical values")
        return self

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Fraction):
                v = f"{v.numerator}/{v.denominator}"
            elif isinstance(v, tuple):
                v = [str(x) if isinstance(x, Fraction) else x for x in v]
            out[f.name] = v
        return out


_TYPES = {
    "d": "rational", "omega": "rational", "N": "int", "seed": "int",
    "masses": "list", "gauge": "gauge", "suites": "list", "classical": "rlist", "nu": "rlist",
    "m_values": "list", "rho": "rlist",
}


def _coerce(key: str, value: Any):
    kind = _TYPES.get(key, "str")
    if kind == "rational":
        return parse_rational(value, key)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer")
        return value
    if kind == "gauge":
        if isinstance(value, dict):
            extra = set(value) - set(GAUGE_NAMES)
            if extra:
                raise ConfigError(f"unknown gauge keys {sorted(extra)}")
            return tuple(parse_rational(value.get(n, 1), f"gauge.{n}") for n in GAUGE_NAMES)
        if isinstance(value, list):
            return tuple(parse_rational(v, "gauge") for v in value)
        raise ConfigError("gauge must be an object or a list")
    if kind == "rlist":
        if value is None:
            return None
        if not isinstance(value, list):
            raise ConfigError(f"{key} must be a list")
        return tuple(parse_rational(v, key) for v in value)
    if kind == "list":
        if not isinstance(value, list):
            raise ConfigError(f"{key} must be a list")
        return tuple(value)
    if value is not None and not isinstance(value, str):
        raise ConfigError(f"{key} must be a string")
    return value


def config_from_dict(data: dict, base: RunConfig | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    cfg = base or RunConfig()
    return replace(cfg, **{k: _coerce(k, v) for k, v in data.items()})


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    data: dict = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
    cfg = config_from_dict(data)
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
