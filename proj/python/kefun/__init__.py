"""Exponential functionals of Levy processes: classification and simulation."""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from . import _core
from ._core import (
    SCHEMA_VERSION,
    HorizonExceeded,
    KefunError,
    ParameterError,
    PreconditionViolation,
    SpecError,
)

__all__ = [
    "SCHEMA_VERSION",
    "HorizonExceeded",
    "KefunError",
    "ParameterError",
    "PreconditionViolation",
    "SpecError",
    "char_exponent",
    "classify",
    "run_cli",
    "simulate",
    "transform_triplet",
]


def _dump(doc: Mapping[str, Any] | str) -> str:
    return doc if isinstance(doc, str) else json.dumps(doc)


def classify(document: Mapping[str, Any] | str) -> list[dict[str, Any]]:
    """Classify every scenario of a document (one scenario or {"scenarios": [...]})."""
    return json.loads(_core.classify_json(_dump(document)))


def simulate(scenario: Mapping[str, Any] | str, n: int, seed: int = 42, workers: int = 1) -> list[float]:
    """n samples of the scenario's functional; identical for any worker count."""
    return _core.simulate_json(_dump(scenario), n, seed, workers)


def transform_triplet(integrand: Mapping[str, Any] | str, horizon: float, eta: Mapping[str, Any] | str) -> dict[str, Any]:
    """Triplet of the integral of a deterministic integrand against eta up to horizon (math.inf allowed)."""
    return json.loads(_core.transform_json(_dump(integrand), float(horizon), _dump(eta)))


def char_exponent(process: Mapping[str, Any] | str, z: float) -> complex:
    """Characteristic exponent psi(z) with E exp(i z X_1) = exp(psi(z))."""
    return _core.char_exponent_json(_dump(process), float(z))


def run_cli(args: Sequence[str]) -> tuple[int, str, str]:
    """Runs the command-line tool in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli(list(args))


