"""Scenario file parsing and report serialization.

Scenarios are UTF-8 JSON documents: rationals travel as strings like
``"3/2"``, complex numbers as two-element ``[re, im]`` arrays (bare numbers
are accepted for real entries), matrices as row-major nested arrays, and
infinite multiplicities or dimensions as the string ``"inf"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .complexes import FiniteComplex, random_complex
from .dbar import DbarFactorModel, builtin_models
from .errors import ToolkitError
from .spectra import (
    AP,
    INFINITE,
    Mult,
    OperatorSpectrum,
    Point,
    SpectralSet,
    is_infinite,
    normalize,
)

SCENARIO_KINDS = ("finite-complex", "finite-pair", "spectral-model", "dbar-factors")
SUPPORTED_VERSIONS = ("1",)


class ParseError(ToolkitError):
    """A scenario file is malformed; the message carries the JSON path."""


def _fail(path: str, message: str) -> ParseError:
    return ParseError(f"{path}: {message}")


@dataclass(frozen=True)
class Scenario:
    version: str
    kind: str
    payload: dict
    rng_seed: int | None


def load_scenario(path: str | Path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise _fail("$", "scenario must be a JSON object")
    version = doc.get("version")
    if version not in SUPPORTED_VERSIONS:
        raise _fail("$.version", f"unrecognized version {version!r}")
    kind = doc.get("kind")
    if kind not in SCENARIO_KINDS:
        raise _fail("$.kind", f"kind must be one of {SCENARIO_KINDS}, got {kind!r}")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise _fail("$.payload", "payload must be a JSON object")
    seed = doc.get("rng_seed")
    if seed is not None and not isinstance(seed, int):
        raise _fail("$.rng_seed", "rng_seed must be an integer")
    return Scenario(version, kind, payload, seed)


# ---------------------------------------------------------------------------
# Values


def parse_complex_number(value: Any, path: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(part, (int, float)) for part in value)
    ):
        return complex(value[0], value[1])
    raise _fail(path, f"expected a number or [re, im] pair, got {value!r}")


def parse_matrix(value: Any, path: str) -> np.ndarray:
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise _fail(path, "expected a nested array of rows")
    if not value:
        return np.zeros((0, 0), dtype=np.complex128)
    width = len(value[0])
    rows = []
    for r, row in enumerate(value):
        if len(row) != width:
            raise _fail(f"{path}[{r}]", f"ragged row of length {len(row)}, expected {width}")
        rows.append([parse_complex_number(entry, f"{path}[{r}][{c}]") for c, entry in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def matrix_to_json(matrix: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise _fail(path, f"bad rational {value!r}") from exc
    raise _fail(path, f"expected an integer or 'p/q' string, got {value!r}")


def rational_to_json(value: Fraction) -> str:
    return str(value)


def parse_mult(value: Any, path: str) -> Mult:
    if value == "inf":
        return INFINITE
    if isinstance(value, int) and value >= 1:
        return value
    raise _fail(path, f"expected a positive integer or 'inf', got {value!r}")


def mult_to_json(value: Mult) -> Any:
    return "inf" if is_infinite(value) else int(value)


def parse_extended_count(value: Any, path: str) -> Mult | None:
    """Nonnegative count, 'inf', or null/'unknown'."""
    if value is None or value == "unknown":
        return None
    if value == "inf":
        return INFINITE
    if isinstance(value, int) and value >= 0:
        return value
    raise _fail(path, f"expected a count, 'inf', 'unknown', or null, got {value!r}")


def extended_count_to_json(value: Mult | None) -> Any:
    if value is None:
        return None
    return "inf" if is_infinite(value) else int(value)


def parse_spectral_set(value: Any, path: str) -> SpectralSet:
    if not isinstance(value, dict) or "atoms" not in value:
        raise _fail(path, "expected an object with an 'atoms' array")
    atoms = value["atoms"]
    if not isinstance(atoms, list):
        raise _fail(f"{path}.atoms", "expected an array")
    parsed = []
    for idx, atom in enumerate(atoms):
        apath = f"{path}.atoms[{idx}]"
        if not isinstance(atom, dict):
            raise _fail(apath, "expected an object")
        kind = atom.get("kind")
        mult = parse_mult(atom.get("mult", 1), f"{apath}.mult")
        try:
            if kind == "point":
                parsed.append(Point(parse_rational(atom.get("value"), f"{apath}.value"), mult))
            elif kind == "ap":
                parsed.append(
                    AP(
                        parse_rational(atom.get("base"), f"{apath}.base"),
                        parse_rational(atom.get("step"), f"{apath}.step"),
                        mult,
                    )
                )
            else:
                raise _fail(f"{apath}.kind", f"expected 'point' or 'ap', got {kind!r}")
        except ValueError as exc:
            raise _fail(apath, str(exc)) from exc
    return normalize(parsed)


def spectral_set_to_json(value: SpectralSet) -> dict:
    atoms = []
    for atom in value.atoms:
        if isinstance(atom, Point):
            atoms.append(
                {"kind": "point", "value": rational_to_json(atom.value), "mult": mult_to_json(atom.mult)}
            )
        else:
            atoms.append(
                {
                    "kind": "ap",
                    "base": rational_to_json(atom.base),
                    "step": rational_to_json(atom.step),
                    "mult": mult_to_json(atom.mult),
                }
            )
    return {"atoms": atoms}


def parse_operator_spectrum(value: Any, path: str) -> OperatorSpectrum:
    if not isinstance(value, dict) or "spectrum" not in value:
        raise _fail(path, "expected an object with a 'spectrum' field")
    spectrum = parse_spectral_set(value["spectrum"], f"{path}.spectrum")
    essential = value.get("essential")
    if essential is None:
        return OperatorSpectrum(spectrum)
    return OperatorSpectrum(spectrum, parse_spectral_set(essential, f"{path}.essential"))


def operator_spectrum_to_json(value: OperatorSpectrum) -> dict:
    doc: dict[str, Any] = {"spectrum": spectral_set_to_json(value.spectrum)}
    if value.essential_asserted:
        doc["essential"] = spectral_set_to_json(value.essential)
    else:
        doc["essential"] = None
    return doc


# ---------------------------------------------------------------------------
# Complexes


def parse_finite_complex(value: Any, path: str) -> FiniteComplex:
    if not isinstance(value, dict):
        raise _fail(path, "expected an object")
    if "random" in value:
        spec = value["random"]
        if not isinstance(spec, dict) or "dims" not in spec or "seed" not in spec:
            raise _fail(f"{path}.random", "expected 'dims' and 'seed'")
        dims = spec["dims"]
        if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 0 for d in dims):
            raise _fail(f"{path}.random.dims", "expected an array of nonnegative integers")
        if not isinstance(spec["seed"], int):
            raise _fail(f"{path}.random.seed", "expected an integer seed")
        lo = spec.get("lo", 0)
        if not isinstance(lo, int):
            raise _fail(f"{path}.random.lo", "expected an integer")
        return random_complex(dims, spec["seed"], lo=lo)
    dims = value.get("dims")
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 0 for d in dims):
        raise _fail(f"{path}.dims", "expected an array of nonnegative integers")
    lo = value.get("lo", 0)
    if not isinstance(lo, int):
        raise _fail(f"{path}.lo", "expected an integer")
    differentials = {}
    for key, matrix in (value.get("differentials") or {}).items():
        try:
            degree = int(key)
        except ValueError as exc:
            raise _fail(f"{path}.differentials.{key}", "keys must be integer degrees") from exc
        differentials[degree] = parse_matrix(matrix, f"{path}.differentials.{key}")
    try:
        return FiniteComplex(lo, tuple(dims), differentials)
    except ToolkitError as exc:
        raise _fail(path, str(exc)) from exc


def finite_complex_to_json(value: FiniteComplex) -> dict:
    return {
        "lo": value.lo,
        "dims": list(value.dims),
        "differentials": {
            str(degree): matrix_to_json(matrix)
            for degree, matrix in sorted(value.differentials.items())
        },
    }


# ---------------------------------------------------------------------------
# Factor models


def parse_factor_model(value: Any, path: str) -> DbarFactorModel:
    if not isinstance(value, dict):
        raise _fail(path, "expected an object")
    if "builtin" in value:
        name = value["builtin"]
        catalogue = builtin_models()
        if name not in catalogue:
            raise _fail(f"{path}.builtin", f"unknown builtin model {name!r}; have {sorted(catalogue)}")
        return catalogue[name]
    name = value.get("name")
    if not isinstance(name, str):
        raise _fail(f"{path}.name", "expected a string")
    dimension = value.get("complex_dimension")
    if not isinstance(dimension, int) or dimension < 1:
        raise _fail(f"{path}.complex_dimension", "expected a positive integer")
    closed_range = value.get("closed_range", False)
    if not isinstance(closed_range, bool):
        raise _fail(f"{path}.closed_range", "expected true or false")
    box: dict[tuple[int, int], OperatorSpectrum | None] = {}
    for key, entry in (value.get("box_spectrum") or {}).items():
        bidegree = _parse_bidegree_key(key, f"{path}.box_spectrum")
        box[bidegree] = (
            None if entry is None else parse_operator_spectrum(entry, f"{path}.box_spectrum['{key}']")
        )
    cohom: dict[tuple[int, int], Mult | None] = {}
    for key, entry in (value.get("cohomology_dim") or {}).items():
        bidegree = _parse_bidegree_key(key, f"{path}.cohomology_dim")
        cohom[bidegree] = parse_extended_count(entry, f"{path}.cohomology_dim['{key}']")
    bergman = parse_extended_count(value.get("bergman_dim"), f"{path}.bergman_dim")
    try:
        return DbarFactorModel(
            name=name,
            complex_dimension=dimension,
            box_spectrum=box,
            closed_range=closed_range,
            bergman_dim=bergman,
            cohomology_dim=cohom,
        )
    except (ToolkitError, ValueError) as exc:
        raise _fail(path, str(exc)) from exc


def _parse_bidegree_key(key: str, path: str) -> tuple[int, int]:
    parts = key.split(",")
    if len(parts) != 2:
        raise _fail(path, f"bidegree keys look like 'p,q'; got {key!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise _fail(path, f"bidegree keys look like 'p,q'; got {key!r}") from exc


def factor_model_to_json(value: DbarFactorModel) -> dict:
    return {
        "name": value.name,
        "complex_dimension": value.complex_dimension,
        "closed_range": value.closed_range,
        "bergman_dim": extended_count_to_json(value.bergman_dim),
        "box_spectrum": {
            f"{p},{q}": None if entry is None else operator_spectrum_to_json(entry)
            for (p, q), entry in sorted(value.box_spectrum.items())
        },
        "cohomology_dim": {
            f"{p},{q}": extended_count_to_json(entry)
            for (p, q), entry in sorted(value.cohomology_dim.items())
        },
    }


# ---------------------------------------------------------------------------
# Reports


def json_ready(value: Any) -> Any:
    """Recursively convert report values into JSON-serializable data."""
    if isinstance(value, dict):
        return {str(k): json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    if isinstance(value, Fraction):
        return rational_to_json(value)
    if isinstance(value, SpectralSet):
        return spectral_set_to_json(value)
    if isinstance(value, OperatorSpectrum):
        return operator_spectrum_to_json(value)
    if isinstance(value, np.ndarray):
        return matrix_to_json(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def dump_report(report: dict) -> str:
    """Canonical JSON text for a report; byte-stable for identical inputs."""
    return json.dumps(json_ready(report), sort_keys=True, indent=2) + "\n"
