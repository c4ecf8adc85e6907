"""Scenario files (JSON, schema version 1) and the embedded presets.

A scenario looks like::

    {
      "schema_version": 1,
      "name": "minkowski-dirac",
      "metric": {"preset": "minkowski"},      # or {"entries": [16 reals]}
                                              # or {"random_admissible": {"gaussian": false}}
      "factor": [16 reals],                   # optional M with g^(..) = M eta M^T
      "representation": "dirac",              # "chiral", or {"file": "gammas.json"}
      "constructor": "index",                 # or "tensor"
      "seed": 7,
      "tolerances": {"anticommutation": 1e-12},
      "checks": ["anticommutation", ...],
      "dynamics": {...}
    }

The ``dynamics`` block configures the ``spectrum`` and ``evolve`` commands;
see :class:`DynamicsSpec`.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..clifford import GammaSet, build_gamma_for_metric, chiral_representation, dirac_representation
from ..errors import ConfigParse, DiracError
from ..metric import MINKOWSKI, Metric, random_admissible_metric, validate_metric

SCHEMA_VERSION = 1

DEFAULT_TOLERANCES = {
    "anticommutation": 1e-12,
    "hermitizing": 1e-10,
    "ratio": 1e-10,
    "alpha_metric": 1e-12,
    "lemma": 1e-12,
    "invariance": 1e-9,
    "gamma5": 1e-12,
    "charge_conjugation": 1e-10,
    "hestenes": 1e-10,
    "hermiticity": 1e-12,
    "oracle": 1e-10,
    "norm_drift": 1e-9,
    "conservation": 1e-12,
    "order": 1.8,
}

TOP_LEVEL_KEYS = {
    "schema_version",
    "name",
    "metric",
    "factor",
    "representation",
    "constructor",
    "seed",
    "tolerances",
    "checks",
    "dynamics",
    "description",
}


@dataclass(frozen=True)
class InitialState:
    """``kind`` is ``"plane_wave"`` (lattice momentum index ``mode``) or ``"packet"``."""

    kind: str = "packet"
    mode: int = 1
    branch: int = 1
    spin: int = 0
    spinor: tuple = (1.0, 0.0, 0.3, 0.2j)
    width: float = 2.5
    momentum: float = 0.5


@dataclass(frozen=True)
class DynamicsSpec:
    mass: float = 1.0
    charge: float = 0.0
    points: tuple[int, ...] = (16,)
    spacing: float = 0.3
    amplitudes: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    dt: float = 0.01
    steps: int = 100
    initial: InitialState = field(default_factory=InitialState)
    ladder: tuple[int, ...] = ()
    compare_without_potential: bool = False
    twin_condition: float = 100.0

    @property
    def length(self) -> float:
        return self.points[0] * self.spacing


@dataclass(frozen=True)
class Scenario:
    name: str
    metric: Metric
    representation: str = "dirac"
    constructor: str = "index"
    seed: int | None = None
    factor: np.ndarray | None = None
    gamma_file: str | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    checks: tuple[str, ...] = ()
    dynamics: DynamicsSpec | None = None

    def gamma_set(self) -> GammaSet:
        if self.gamma_file is not None:
            from ..serialize import gamma_set_from_json

            return gamma_set_from_json(json.loads(Path(self.gamma_file).read_text()))
        base = chiral_representation() if self.representation == "chiral" else dirac_representation()
        return build_gamma_for_metric(self.metric, base=base, scheme=self.constructor, factor=self.factor)

    def tol(self, key: str) -> float:
        return float(self.tolerances[key])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "metric": self.metric.to_list(),
            "representation": self.representation if self.gamma_file is None else {"file": self.gamma_file},
            "constructor": self.constructor,
            "seed": self.seed,
            "checks": list(self.checks),
        }


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigParse(msg)


def _parse_metric(spec, seed):
    _require(isinstance(spec, dict) and len(spec) == 1, "metric must be an object with one key")
    ((key, value),) = spec.items()
    if key == "preset":
        _require(value == "minkowski", f"unknown metric preset {value!r}")
        return MINKOWSKI
    if key == "entries":
        _require(isinstance(value, list) and len(value) == 16, "metric entries must be 16 reals")
        return validate_metric(value)
    if key == "random_admissible":
        _require(seed is not None, "random metric needs a seed")
        return random_admissible_metric(seed, gaussian=bool(value.get("gaussian", False)))
    raise ConfigParse(f"unknown metric kind {key!r}")


def _parse_dynamics(d) -> DynamicsSpec:
    _require(isinstance(d, dict), "dynamics must be an object")
    init = d.get("initial", {})
    spinor = init.get("spinor")
    if spinor is not None:
        spinor = tuple(complex(re, im) for re, im in spinor)
    init_kwargs = {k: init[k] for k in ("kind", "mode", "branch", "spin", "width", "momentum") if k in init}
    if spinor is not None:
        init_kwargs["spinor"] = spinor
    initial = InitialState(**init_kwargs)
    _require(initial.kind in ("plane_wave", "packet"), f"unknown initial state {initial.kind!r}")
    kwargs = {}
    for key in ("mass", "charge", "spacing", "dt", "twin_condition"):
        if key in d:
            kwargs[key] = float(d[key])
    if "steps" in d:
        kwargs["steps"] = int(d["steps"])
    if "points" in d:
        kwargs["points"] = tuple(int(n) for n in d["points"])
    if "amplitudes" in d:
        _require(len(d["amplitudes"]) == 4, "potential amplitudes must have 4 entries")
        kwargs["amplitudes"] = tuple(float(a) for a in d["amplitudes"])
    if "ladder" in d:
        kwargs["ladder"] = tuple(int(n) for n in d["ladder"])
    if "compare_without_potential" in d:
        kwargs["compare_without_potential"] = bool(d["compare_without_potential"])
    return DynamicsSpec(initial=initial, **kwargs)


def parse_scenario(data: dict, seed_override: int | None = None) -> Scenario:
    """Validate a decoded scenario document.

    Raises
    ------
    ConfigParse
        On unknown keys, schema mismatch or invalid values.
    """
    # imported lazily to avoid a cycle
    from .suites import RANDOMIZED, REGISTRY

    _require(isinstance(data, dict), "scenario must be a JSON object")
    _require(data.get("schema_version") == SCHEMA_VERSION, f"schema_version must be {SCHEMA_VERSION}")
    unknown = set(data) - TOP_LEVEL_KEYS
    _require(not unknown, f"unknown scenario keys: {sorted(unknown)}")
    seed = data.get("seed") if seed_override is None else seed_override
    _require(seed is None or (isinstance(seed, int) and seed >= 0), "seed must be a non-negative integer")
    checks = tuple(data.get("checks", sorted(REGISTRY)))
    bad = [c for c in checks if c not in REGISTRY]
    _require(not bad, f"unknown checks: {bad}")
    _require(seed is not None or not (set(checks) & RANDOMIZED), "randomized checks need a seed")
    constructor = data.get("constructor", "index")
    _require(constructor in ("index", "tensor"), "constructor must be 'index' or 'tensor'")
    rep = data.get("representation", "dirac")
    gamma_file = None
    if isinstance(rep, dict):
        _require(set(rep) == {"file"}, "custom representation must be {'file': path}")
        gamma_file = str(rep["file"])
        rep = "custom"
    _require(rep in ("dirac", "chiral", "custom"), f"unknown representation {rep!r}")
    tolerances = dict(DEFAULT_TOLERANCES)
    extra = data.get("tolerances", {})
    _require(
        set(extra) <= set(DEFAULT_TOLERANCES), f"unknown tolerances: {sorted(set(extra) - set(DEFAULT_TOLERANCES))}"
    )
    tolerances.update({k: float(v) for k, v in extra.items()})
    try:
        metric = _parse_metric(data.get("metric", {"preset": "minkowski"}), seed)
        factor = data.get("factor")
        if factor is not None:
            _require(len(factor) == 16, "factor must be 16 reals")
            factor = np.asarray(factor, dtype=float).reshape(4, 4)
        dynamics = _parse_dynamics(data["dynamics"]) if "dynamics" in data else None
    except (DiracError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigParse):
            raise
        raise ConfigParse(str(exc)) from exc
    return Scenario(
        name=str(data.get("name", "unnamed")),
        metric=metric,
        representation=rep,
        constructor=constructor,
        seed=seed,
        factor=factor,
        gamma_file=gamma_file,
        tolerances=tolerances,
        checks=checks,
        dynamics=dynamics,
    )


def preset_names() -> list[str]:
    root = resources.files("tensordirac.cli") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> dict:
    path = resources.files("tensordirac.cli") / "presets" / f"{name}.json"
    if not path.is_file():
        raise ConfigParse(f"unknown preset {name!r}; available: {preset_names()}")
    return json.loads(path.read_text())


def load_config(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigParse(f"cannot read scenario {path}: {exc}") from exc


def apply_tol_scale(sc: Scenario, scale: float) -> Scenario:
    """Multiply every tolerance except the convergence order by ``scale``."""
    if not scale > 0:
        raise ConfigParse("--tol-scale must be positive")
    tols = {k: (v if k == "order" else v * scale) for k, v in sc.tolerances.items()}
    return dataclasses.replace(sc, tolerances=tols)
