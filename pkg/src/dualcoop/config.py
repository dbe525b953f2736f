"""Experiment specification: YAML files plus key=value overrides.

A spec file is a mapping with a base simulation ``config`` block and
optional per-command blocks (``sweep`` axes, ``markov``, ``sources``,
``optimal_k``). CLI flags override file values; ``--set a.b=v`` paths
reach into nested blocks. Values are parsed as YAML scalars/lists.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .model import (
    ConfigError,
    DeliberationRule,
    Scenario,
    ScenarioKind,
    SimConfig,
    canonical_scenario,
)

BASE_DEFAULTS: dict = {
    "M": 500,
    "T": 5000,
    "K": 0.5,
    "A": 0.5,
    "p": 0.5,
    "b": 4.0,
    "c": 1.0,
    "alpha": 0.5,
    "scenario": "pd_mixed",
    "deliberation_rule": "prescribed",
    "seed": 1234,
    "initial_memory": 0.0,
    "tie_epsilon": 1e-9,
    "burn_in": 0,
}

SWEEP_AXES = ("A", "K", "p", "alpha", "b", "M", "scenario", "deliberation_rule")

TOP_KEYS = {"command", "config", "sweep", "markov", "sources", "optimal_k",
            "n_seeds", "out", "svg"}


@dataclass
class ExperimentSpec:
    command: str | None = None
    base: dict = field(default_factory=lambda: dict(BASE_DEFAULTS))
    sweep: dict = field(default_factory=dict)
    markov: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)
    optimal_k: dict = field(default_factory=dict)
    n_seeds: int = 1
    out: str | None = None
    svg: bool = False

    def validate(self) -> None:
        unknown = set(self.base) - set(BASE_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
        if self.n_seeds < 1:
            raise ConfigError(f"n_seeds must be >= 1, got {self.n_seeds}")
        for axis, values in self.sweep.items():
            if axis not in SWEEP_AXES:
                raise ConfigError(f"unsupported sweep axis '{axis}' (allowed: {SWEEP_AXES})")
            if not isinstance(values, (list, tuple)) or len(values) == 0:
                raise ConfigError(f"sweep axis '{axis}' needs a non-empty list of values")
        # fail fast on domain errors anywhere on the grid
        for point in iter_grid(self.sweep):
            build_sim_config({**self.base, **point})


def build_sim_config(base: dict) -> SimConfig:
    """Turn a flat base-config mapping into a SimConfig."""
    sc = base.get("scenario", "pd_mixed")
    if isinstance(sc, dict):
        scenario = Scenario.from_dict(sc)
    else:
        try:
            kind = ScenarioKind(sc)
        except ValueError:
            raise ConfigError(
                f"scenario must be one of {[k.value for k in ScenarioKind]} "
                f"or a mapping, got {sc!r}"
            ) from None
        scenario = __import__("dualcoop.model", fromlist=["canonical_scenario"]).canonical_scenario(
            kind, float(base.get("b", 4.0)), float(base.get("c", 1.0)), float(base.get("p", 0.5))
        )
    try:
        rule = DeliberationRule(base.get("deliberation_rule", "prescribed"))
    except ValueError:
        raise ConfigError(
            f"deliberation_rule must be 'prescribed' or 'learned', "
            f"got {base.get('deliberation_rule')!r}"
        ) from None
    return SimConfig(
        M=int(base["M"]),
        T=int(base["T"]),
        K=float(base["K"]),
        A=float(base["A"]),
        alpha=float(base["alpha"]),
        scenario=scenario,
        deliberation_rule=rule,
        seed=int(base["seed"]),
        initial_memory=float(base.get("initial_memory", 0.0)),
        tie_epsilon=float(base.get("tie_epsilon", 1e-9)),
        burn_in=int(base.get("burn_in", 0)),
    )


def iter_grid(axes: dict) -> list[dict]:
    """Cartesian product of sweep axes in the fixed axis order."""
    names = [a for a in SWEEP_AXES if a in axes]
    points: list[dict] = [{}]
    for name in names:
        points = [{**pt, name: v} for pt in points for v in axes[name]]
    return points


def spec_from_mapping(raw: dict) -> ExperimentSpec:
    raw = copy.deepcopy(raw) if raw else {}
    unknown = set(raw) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    base = dict(BASE_DEFAULTS)
    base.update(raw.get("config") or {})
    spec = ExperimentSpec(
        command=raw.get("command"),
        base=base,
        sweep=raw.get("sweep") or {},
        markov=raw.get("markov") or {},
        sources=raw.get("sources") or {},
        optimal_k=raw.get("optimal_k") or {},
        n_seeds=int(raw.get("n_seeds", 1)),
        out=raw.get("out"),
        svg=bool(raw.get("svg", False)),
    )
    spec.validate()
    return spec


def load_spec(path: str | Path, overrides: list[str] | None = None) -> ExperimentSpec:
    """Read a YAML spec file and apply ``key=value`` overrides."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"spec file {path} must contain a mapping")
    return spec_from_mapping(apply_overrides(raw, overrides or []))


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply dotted ``key=value`` assignments onto the raw spec mapping."""
    raw = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not of the form key=value")
        key, _, value_str = item.partition("=")
        value = yaml.safe_load(value_str)
        node = raw
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override path '{key}' crosses a non-mapping value")
        node[parts[-1]] = value
    return raw
