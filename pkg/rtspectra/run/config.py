"""Run configuration: one JSON or YAML file drives every command."""
from __future__ import annotations

import dataclasses
import difflib
import json
import math
import pathlib
import typing
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

import yaml

from rtspectra.errors import ConfigurationError
from rtspectra.physics.equilibrium import FluidConfig

T = TypeVar("T")

SCAN_KINDS = ("ray", "half_plane")
INITIAL_CONDITIONS = ("eigenmode", "random")
OUTPUT_FORMATS = ("csv", "json")
FLUID_KEYS = (
    "g",
    "theta",
    "mu_plus",
    "mu_minus",
    "zeta_plus",
    "zeta_minus",
    "h_minus",
    "h_plus",
    "pressure_plus",
    "pressure_minus",
    "rho_minus_at_interface",
)


@dataclass(frozen=True)
class NumericsSection:
    elements_per_layer: int = 64
    tol: float = 1e-10
    profile_nodes_per_layer: Optional[int] = None
    samples_per_wavelength: int = 16

    def validate(self) -> None:
        _require(self.elements_per_layer >= 4, "numerics.elements_per_layer", ">= 4", self.elements_per_layer)
        _require(self.tol > 0, "numerics.tol", "> 0", self.tol)
        if self.profile_nodes_per_layer is not None:
            _require(self.profile_nodes_per_layer >= 8, "numerics.profile_nodes_per_layer", ">= 8", self.profile_nodes_per_layer)
        _require(self.samples_per_wavelength >= 16, "numerics.samples_per_wavelength", ">= 16", self.samples_per_wavelength)

    @property
    def profile_nodes(self) -> int:
        if self.profile_nodes_per_layer is not None:
            return self.profile_nodes_per_layer
        return max(self.elements_per_layer + 1, 8)


@dataclass(frozen=True)
class ScanSection:
    kind: str = "ray"
    xi_min: float = 1e-2
    xi_max: Optional[float] = None
    n_samples: int = 64
    n_angles: int = 8
    direction: Tuple[float, float] = (1.0, 0.0)
    densify: bool = False
    periods: Optional[Tuple[float, float]] = None

    def validate(self) -> None:
        _require(self.kind in SCAN_KINDS, "scan.kind", f"one of {SCAN_KINDS}", self.kind)
        _require(self.xi_min > 0, "scan.xi_min", "> 0", self.xi_min)
        if self.xi_max is not None:
            _require(self.xi_max > self.xi_min and math.isfinite(self.xi_max), "scan.xi_max", "finite and > xi_min", self.xi_max)
        _require(self.n_samples >= 2, "scan.n_samples", ">= 2", self.n_samples)
        _require(self.n_angles >= 1, "scan.n_angles", ">= 1", self.n_angles)
        _require(math.hypot(*self.direction) > 0, "scan.direction", "nonzero", self.direction)
        if self.periods is not None:
            _require(min(self.periods) > 0, "scan.periods", "> 0", self.periods)


@dataclass(frozen=True)
class ModeSection:
    xi: Optional[Tuple[float, float]] = None
    box: float = 4.0
    resolution: int = 16

    def validate(self) -> None:
        _require(self.box > 0, "mode.box", "> 0", self.box)
        _require(self.resolution >= 2, "mode.resolution", ">= 2", self.resolution)


@dataclass(frozen=True)
class CutoffSection:
    ns: Tuple[float, ...] = (8.0, 16.0, 32.0)

    def validate(self) -> None:
        _require(len(self.ns) >= 1 and min(self.ns) >= 2, "cutoff.ns", "non-empty with every n >= 2", self.ns)


@dataclass(frozen=True)
class EvolveSection:
    dt: Optional[float] = None
    horizon: Optional[float] = None
    amplification: float = 1e4
    initial: str = "eigenmode"

    def validate(self) -> None:
        if self.dt is not None:
            _require(self.dt > 0 and math.isfinite(self.dt), "evolve.dt", "> 0", self.dt)
        if self.horizon is not None:
            _require(self.horizon > 0, "evolve.horizon", "> 0", self.horizon)
            if self.dt is not None:
                _require(self.horizon >= 10 * self.dt, "evolve.horizon", ">= 10 * dt", self.horizon)
        _require(self.amplification > 1, "evolve.amplification", "> 1", self.amplification)
        _require(self.initial in INITIAL_CONDITIONS, "evolve.initial", f"one of {INITIAL_CONDITIONS}", self.initial)


@dataclass(frozen=True)
class EscapeSection:
    epsilon: float = 1.0
    delta: float = 1e-3

    def validate(self) -> None:
        _require(0 < self.delta < self.epsilon, "escape.delta", "in (0, epsilon)", self.delta)


@dataclass(frozen=True)
class VerifySection:
    seed: int = 42
    oracle_elements: int = 512
    n_trial_frequencies: int = 20
    trials_per_frequency: int = 10
    n_random_vectors: int = 50
    properties: Optional[Tuple[str, ...]] = None
    cache_dir: Optional[str] = None

    def validate(self) -> None:
        _require(self.oracle_elements >= 8 and self.oracle_elements % 2 == 0, "verify.oracle_elements", "even and >= 8", self.oracle_elements)
        _require(self.n_trial_frequencies >= 1, "verify.n_trial_frequencies", ">= 1", self.n_trial_frequencies)
        _require(self.trials_per_frequency >= 1, "verify.trials_per_frequency", ">= 1", self.trials_per_frequency)
        _require(self.n_random_vectors >= 1, "verify.n_random_vectors", ">= 1", self.n_random_vectors)


@dataclass(frozen=True)
class OutputSection:
    directory: str = "results"
    formats: Tuple[str, ...] = OUTPUT_FORMATS

    def validate(self) -> None:
        unknown = [f for f in self.formats if f not in OUTPUT_FORMATS]
        _require(not unknown, "outputs.formats", f"subset of {OUTPUT_FORMATS}", self.formats)


@dataclass(frozen=True)
class RunConfig:
    physics: FluidConfig
    numerics: NumericsSection = field(default_factory=NumericsSection)
    scan: ScanSection = field(default_factory=ScanSection)
    mode: ModeSection = field(default_factory=ModeSection)
    cutoff: CutoffSection = field(default_factory=CutoffSection)
    evolve: EvolveSection = field(default_factory=EvolveSection)
    escape: EscapeSection = field(default_factory=EscapeSection)
    verify: VerifySection = field(default_factory=VerifySection)
    outputs: OutputSection = field(default_factory=OutputSection)
    threads: int = 1

    def to_dict(self) -> Dict[str, Any]:
        """Canonical echo of the effective configuration."""
        out: Dict[str, Any] = {"physics": self.physics.to_dict()}
        for f in dataclasses.fields(self):
            if f.name == "physics":
                continue
            value = getattr(self, f.name)
            out[f.name] = (
                dataclasses.asdict(value)
                if dataclasses.is_dataclass(value)
                else value
            )
        return out

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> RunConfig:
        if not isinstance(d, dict):
            raise ConfigurationError("top level must be a mapping", "config")
        _check_keys(d, [f.name for f in dataclasses.fields(cls)], "")
        if "physics" not in d:
            raise ConfigurationError("section is required", "physics")
        kwargs: Dict[str, Any] = {"physics": _load_physics(d["physics"])}
        for f in dataclasses.fields(cls):
            if f.name in ("physics", "threads") or f.name not in d:
                continue
            section_cls = type(f.default_factory())
            kwargs[f.name] = _load_section(section_cls, d[f.name], f.name)
        if "threads" in d:
            threads = d["threads"]
            threads = _convert(threads, int, "threads")
            _require(threads >= 1, "threads", ">= 1", threads)
            kwargs["threads"] = threads
        config = cls(**kwargs)
        for f in dataclasses.fields(cls):
            section = getattr(config, f.name)
            if hasattr(section, "validate"):
                section.validate()
        return config


def _require(ok: bool, path: str, requirement: str, value: Any) -> None:
    if not ok:
        raise ConfigurationError(f"must be {requirement}, got {value!r}", path)


def _check_keys(d: Dict[str, Any], allowed: List[str], prefix: str) -> None:
    for key in d:
        if key in allowed:
            continue
        path = f"{prefix}.{key}" if prefix else key
        close = difflib.get_close_matches(key, allowed, n=1, cutoff=0.5)
        hint = (
            f"did you mean {close[0]!r}?"
            if close
            else f"expected one of {sorted(allowed)}"
        )
        raise ConfigurationError(f"unknown key {key!r}; {hint}", path)


def _load_physics(d: Any) -> FluidConfig:
    if not isinstance(d, dict):
        raise ConfigurationError("must be a mapping", "physics")
    _check_keys(d, list(FLUID_KEYS), "physics")
    missing = [key for key in FLUID_KEYS if key not in d]
    if missing:
        raise ConfigurationError(f"missing keys {missing}", "physics")
    try:
        return FluidConfig.from_dict(d)
    except ConfigurationError as e:
        raise ConfigurationError(e.reason, f"physics.{e.field}") from e
    except (TypeError, ValueError) as e:
        raise ConfigurationError(str(e), "physics") from e


def _convert(value: Any, hint: Any, path: str) -> Any:
    """Checks ``value`` against a field type hint; integral floats become
    ints, ints become floats, lists become tuples."""
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    if origin is Union:
        if value is None and type(None) in args:
            return None
        (inner,) = [a for a in args if a is not type(None)]
        return _convert(value, inner, path)
    if origin is tuple:
        _require(isinstance(value, (list, tuple)), path, "a list", value)
        if len(args) == 2 and args[1] is Ellipsis:
            item_hints = [args[0]] * len(value)
        else:
            _require(len(value) == len(args), path, f"a list of {len(args)} values", value)
            item_hints = list(args)
        return tuple(
            _convert(item, item_hint, path)
            for item, item_hint in zip(value, item_hints)
        )
    if hint is bool:
        _require(isinstance(value, bool), path, "true or false", value)
        return value
    if hint is int:
        _require(
            isinstance(value, (int, float))
            and not isinstance(value, bool)
            and float(value).is_integer(),
            path,
            "an integer",
            value,
        )
        return int(value)
    if hint is float:
        _require(
            isinstance(value, (int, float)) and not isinstance(value, bool),
            path,
            "a number",
            value,
        )
        return float(value)
    if hint is str:
        _require(isinstance(value, str), path, "a string", value)
    return value


def _load_section(section_cls: Type[T], d: Any, name: str) -> T:
    if not isinstance(d, dict):
        raise ConfigurationError("must be a mapping", name)
    fields = {f.name: f for f in dataclasses.fields(section_cls)}
    _check_keys(d, list(fields), name)
    hints = typing.get_type_hints(section_cls)
    kwargs = {
        key: _convert(value, hints[key], f"{name}.{key}")
        for key, value in d.items()
    }
    try:
        return section_cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(str(e), name) from e


def parse_config_text(text: str, suffix: str = ".json") -> Dict[str, Any]:
    try:
        if suffix == ".json":
            return json.loads(text)
        return yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"cannot parse: {e}", "config") from e


def load_config(path: str) -> RunConfig:
    """Reads, validates and fills the defaults of a run configuration."""
    config_path = pathlib.Path(path)
    if not config_path.is_file():
        raise ConfigurationError(f"no such file {path}", "config")
    raw = parse_config_text(
        config_path.read_text(), config_path.suffix.lower()
    )
    return RunConfig.from_dict(raw)
