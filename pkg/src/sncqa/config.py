"""Strict JSON experiment configuration.

Every section is schema-checked: unknown keys are rejected, values are
type- and range-validated, and all defaults equal the reference protocol
(learning rate 0.1, 1000 iterations, epsilon 0.05, one Trotter slice).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .vqe import GRAD_MODES, METHODS


class ConfigError(ValueError):
    """Raised for schema violations; the CLI maps it to exit code 1."""


def _section(data: dict[str, Any], name: str, allowed: set[str]) -> dict[str, Any]:
    block = data.get(name, {})
    if not isinstance(block, dict):
        raise ConfigError(f"section {name!r} must be an object")
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    return block


def _require(block: dict[str, Any], section: str, key: str) -> Any:
    if key not in block:
        raise ConfigError(f"missing required key {section}.{key}")
    return block[key]


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _integer(value: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where} must be >= {minimum}, got {value}")
    return value


def _int_tuple(value: Any, where: str) -> tuple[int, ...]:
    if isinstance(value, int) and not isinstance(value, bool):
        return (value,)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where} must be a non-empty integer list")
    return tuple(_integer(v, where) for v in value)


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved experiment settings (one lattice, one ansatz, one optimizer)."""

    rows: int = 2
    cols: int = 2
    j1: float = 1.0
    j2_over_j1: float = 0.0
    ansatz: str = "sncqa"
    layers: int = 1
    yjm_sample_count: int | None = None
    trotter_slices: int = 1
    learning_rate: float = 0.1
    max_iters: int = 1000
    epsilon: float = 0.05
    init_scale: float = 0.1
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    grad_mode: str = "adjoint"
    method: str = "adam"
    stop_at_convergence: bool = True
    shots: tuple[int, ...] | None = None
    out_dir: str | None = None
    formats: tuple[str, ...] = ("json", "csv")

    @property
    def j2(self) -> float:
        return self.j1 * self.j2_over_j1

    @property
    def n_sites(self) -> int:
        return self.rows * self.cols

    def as_dict(self) -> dict[str, Any]:
        """Config echo embedded in every output artifact (output paths omitted)."""
        return {
            "lattice": {"rows": self.rows, "cols": self.cols},
            "hamiltonian": {"j1": self.j1, "j2_over_j1": self.j2_over_j1},
            "ansatz": {
                "type": self.ansatz,
                "layers": self.layers,
                "yjm_sample_count": self.yjm_sample_count,
                "trotter_slices": self.trotter_slices,
            },
            "optimizer": {
                "learning_rate": self.learning_rate,
                "max_iters": self.max_iters,
                "epsilon": self.epsilon,
                "init_scale": self.init_scale,
                "seeds": list(self.seeds),
                "grad_mode": self.grad_mode,
                "method": self.method,
                "stop_at_convergence": self.stop_at_convergence,
            },
            "noise": {"shots": list(self.shots) if self.shots else None},
        }


_TOP_LEVEL = {"lattice", "hamiltonian", "ansatz", "optimizer", "noise", "output"}


def parse_config(data: dict[str, Any]) -> ExperimentConfig:
    """Validate a raw JSON object against the strict schema."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(data) - _TOP_LEVEL
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")

    lattice = _section(data, "lattice", {"rows", "cols"})
    ham = _section(data, "hamiltonian", {"j1", "j2_over_j1"})
    ansatz = _section(data, "ansatz",
                      {"type", "layers", "yjm_sample_count", "trotter_slices"})
    opt = _section(data, "optimizer",
                   {"learning_rate", "max_iters", "epsilon", "init_scale",
                    "seeds", "grad_mode", "method", "stop_at_convergence"})
    noise = _section(data, "noise", {"shots"})
    output = _section(data, "output", {"directory", "formats"})

    kwargs: dict[str, Any] = {}
    if "rows" in lattice:
        kwargs["rows"] = _integer(lattice["rows"], "lattice.rows", 1)
    if "cols" in lattice:
        kwargs["cols"] = _integer(lattice["cols"], "lattice.cols", 1)
    if "j1" in ham:
        kwargs["j1"] = _number(ham["j1"], "hamiltonian.j1")
    if "j2_over_j1" in ham:
        kwargs["j2_over_j1"] = _number(ham["j2_over_j1"], "hamiltonian.j2_over_j1")

    if "type" in ansatz:
        if ansatz["type"] not in ("sncqa", "phea"):
            raise ConfigError(f"ansatz.type must be sncqa or phea, got {ansatz['type']!r}")
        kwargs["ansatz"] = ansatz["type"]
    if "layers" in ansatz:
        kwargs["layers"] = _integer(ansatz["layers"], "ansatz.layers", 1)
    if "yjm_sample_count" in ansatz and ansatz["yjm_sample_count"] is not None:
        kwargs["yjm_sample_count"] = _integer(ansatz["yjm_sample_count"],
                                              "ansatz.yjm_sample_count", 1)
    if "trotter_slices" in ansatz:
        kwargs["trotter_slices"] = _integer(ansatz["trotter_slices"],
                                            "ansatz.trotter_slices", 1)

    if "learning_rate" in opt:
        kwargs["learning_rate"] = _number(opt["learning_rate"], "optimizer.learning_rate")
        if kwargs["learning_rate"] <= 0:
            raise ConfigError("optimizer.learning_rate must be positive")
    if "max_iters" in opt:
        kwargs["max_iters"] = _integer(opt["max_iters"], "optimizer.max_iters", 0)
    if "epsilon" in opt:
        kwargs["epsilon"] = _number(opt["epsilon"], "optimizer.epsilon")
        if kwargs["epsilon"] <= 0:
            raise ConfigError("optimizer.epsilon must be positive")
    if "init_scale" in opt:
        kwargs["init_scale"] = _number(opt["init_scale"], "optimizer.init_scale")
        if kwargs["init_scale"] < 0:
            raise ConfigError("optimizer.init_scale must be non-negative")
    if "seeds" in opt:
        kwargs["seeds"] = _int_tuple(opt["seeds"], "optimizer.seeds")
    if "grad_mode" in opt:
        if opt["grad_mode"] not in GRAD_MODES:
            raise ConfigError(f"optimizer.grad_mode must be one of {GRAD_MODES}")
        kwargs["grad_mode"] = opt["grad_mode"]
    if "method" in opt:
        if opt["method"] not in METHODS:
            raise ConfigError(f"optimizer.method must be one of {METHODS}")
        kwargs["method"] = opt["method"]
    if "stop_at_convergence" in opt:
        if not isinstance(opt["stop_at_convergence"], bool):
            raise ConfigError("optimizer.stop_at_convergence must be a boolean")
        kwargs["stop_at_convergence"] = opt["stop_at_convergence"]

    if "shots" in noise and noise["shots"] is not None:
        shots = _int_tuple(noise["shots"], "noise.shots")
        if any(s < 1 for s in shots):
            raise ConfigError("noise.shots must all be >= 1")
        kwargs["shots"] = shots

    if "directory" in output and output["directory"] is not None:
        if not isinstance(output["directory"], str):
            raise ConfigError("output.directory must be a string")
        kwargs["out_dir"] = output["directory"]
    if "formats" in output:
        formats = output["formats"]
        if not isinstance(formats, list) or not formats:
            raise ConfigError("output.formats must be a non-empty list")
        bad = [f for f in formats if f not in ("json", "csv")]
        if bad:
            raise ConfigError(f"unsupported output formats: {bad}")
        kwargs["formats"] = tuple(formats)

    config = ExperimentConfig(**kwargs)
    if config.ansatz == "sncqa" and config.yjm_sample_count is not None:
        if config.yjm_sample_count > config.n_sites - 1:
            raise ConfigError("ansatz.yjm_sample_count must be <= n_sites - 1")
    return config


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="ascii"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_config(data)
