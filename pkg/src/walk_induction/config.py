"""Run configuration: one JSON file naming a group, a step measure and a coset action."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

from .cosets import CosetAction, action_from_config
from .errors import ConfigError, WalkInductionError
from .groups import GroupModel, model_from_config
from .measures import FinMeasure, measure_from_config, measure_to_config


@dataclass(frozen=True)
class Params:
    N: int = 8
    n_max: int = 6
    n_max_induced: int | None = None
    samples: int = 100_000
    seed: int = 20240521
    support_cap: int = 10**7
    workers: int | None = None
    tails_n_max: int = 50
    grid_n_max: int = 20
    boundary_radius: int = 3
    smb_n: int = 2
    max_bias: float = 0.05

    @classmethod
    def from_dict(cls, d: dict) -> Params:
        if not isinstance(d, dict):
            raise ConfigError("params must be a mapping")
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown params: {sorted(extra)}")
        out = cls(**d)
        for f in fields(cls):
            v = getattr(out, f.name)
            if v is None:
                continue
            expected = float if f.name == "max_bias" else int
            if isinstance(v, bool) or not isinstance(v, (int, float) if expected is float else int):
                raise ConfigError(f"param {f.name} must be {expected.__name__}, got {v!r}")
        if out.seed < 0 or out.seed >= 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        for name in ("N", "n_max", "tails_n_max", "grid_n_max", "smb_n", "support_cap"):
            if getattr(out, name) < 1:
                raise ConfigError(f"param {name} must be >= 1")
        return out

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)
                if getattr(self, f.name) is not None}


@dataclass(frozen=True)
class RunConfig:
    name: str
    group: dict
    measure: object
    action: dict
    params: Params = field(default_factory=Params)
    output: dict = field(default_factory=lambda: {"format": "json"})

    _KEYS = ("name", "group", "measure", "action", "params", "output")

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        extra = set(d) - set(cls._KEYS)
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        for key in ("group", "measure", "action"):
            if key not in d:
                raise ConfigError(f"config is missing {key!r}")
        output = d.get("output", {"format": "json"})
        if not isinstance(output, dict) or set(output) - {"path", "format"}:
            raise ConfigError("output takes only 'path' and 'format'")
        if output.get("format", "json") not in ("json", "csv"):
            raise ConfigError(f"unknown output format {output.get('format')!r}")
        cfg = cls(str(d.get("name", "run")), d["group"], d["measure"], d["action"],
                  Params.from_dict(d.get("params", {})), dict(output))
        cfg.build()
        return cfg

    def to_dict(self) -> dict:
        model = self.model()
        measure = self.measure if self.measure == "srw" else measure_to_config(self.mu())
        return {"name": self.name, "group": model.to_config(), "measure": measure,
                "action": self.coset_action().to_config(), "params": self.params.to_dict(),
                "output": dict(self.output)}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def with_params(self, **changes) -> RunConfig:
        return replace(self, params=replace(self.params, **changes))

    def model(self) -> GroupModel:
        return model_from_config(self.group)

    def mu(self) -> FinMeasure:
        return measure_from_config(self.model(), self.measure)

    def coset_action(self) -> CosetAction:
        return action_from_config(self.model(), self.action)

    def build(self) -> tuple[GroupModel, FinMeasure, CosetAction]:
        try:
            model = self.model()
            return model, measure_from_config(model, self.measure), action_from_config(model, self.action)
        except WalkInductionError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config {self.name!r}: {exc}") from exc


def loads(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(data)


def load(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return loads(text)


def bundled_names() -> list[str]:
    root = resources.files("walk_induction") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled(name: str) -> RunConfig:
    root = resources.files("walk_induction") / "configs"
    path = root / (name if name.endswith(".json") else name + ".json")
    if not path.is_file():
        raise ConfigError(f"no bundled config {name!r}; available: {bundled_names()}")
    return loads(path.read_text())
