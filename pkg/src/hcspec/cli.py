"""Command-line front end: scenario files in, deterministic reports out."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import complexes, fuzzing, tensorprod
from .dbar import neumann_compactness, product_box_spectrum, riemann_surface_product_report
from .errors import ToolkitError
from .jointspec import (
    NotPSDError,
    check_pair,
    joint_spectrum,
    pairing_gap,
    sum_operator_check,
    tensor_pair_spectrum,
)
from .numerics import (
    DEFAULT_TOL,
    KRONECKER_DIM_CAP,
    NotHermitianError,
    Tolerance,
    max_abs,
)
from .scenario import (
    ParseError,
    Scenario,
    dump_report,
    json_ready,
    load_scenario,
    parse_factor_model,
    parse_finite_complex,
    parse_matrix,
    parse_rational,
    parse_spectral_set,
)
from .spectra import (
    essential_part,
    minkowski_oracle_check,
    minkowski_sum,
    union,
)

COMMANDS = (
    "validate",
    "spectrum",
    "hodge",
    "identities",
    "tensor",
    "symbolic",
    "dbar",
    "dbar-n",
    "joint",
    "fuzz",
)

_MATCH_GAP = 1e-7


def _require(payload: dict, field: str, command: str):
    if field not in payload:
        raise ParseError(f"$.payload.{field}: required by the {command} command")
    return payload[field]


def _the_complex(scenario: Scenario) -> complexes.FiniteComplex:
    if scenario.kind != "finite-complex":
        raise ParseError(f"$.kind: expected finite-complex, got {scenario.kind}")
    return parse_finite_complex(scenario.payload, "$.payload")


def _the_pair(scenario: Scenario) -> tuple[complexes.FiniteComplex, complexes.FiniteComplex]:
    if scenario.kind != "finite-pair":
        raise ParseError(f"$.kind: expected finite-pair, got {scenario.kind}")
    left = parse_finite_complex(_require(scenario.payload, "left", "tensor"), "$.payload.left")
    right = parse_finite_complex(_require(scenario.payload, "right", "tensor"), "$.payload.right")
    return left, right


def _cmd_validate(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    complex_ = _the_complex(scenario)
    report = complexes.validate(complex_, tol)
    results = {
        "dims": list(complex_.dims),
        "lo": complex_.lo,
        "residuals": {str(d): r for d, r in sorted(report.residuals.items())},
        "passed": report.passed,
    }
    return results, report.passed


def _cmd_spectrum(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    complex_ = _the_complex(scenario)
    ok = complexes.validate(complex_, tol).passed
    degrees = {
        str(d): complexes.spectrum_multiset(complex_, d, tol) for d in complex_.degrees
    }
    return {"degrees": degrees, "validated": ok}, ok


def _cmd_hodge(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    complex_ = _the_complex(scenario)
    ok = complexes.validate(complex_, tol).passed
    per_degree = {}
    for degree in complex_.degrees:
        split = complexes.hodge(complex_, degree, tol)
        n = complex_.dim(degree)
        identity = np.eye(n)
        total = split.p_harmonic + split.p_range_d + split.p_range_dstar
        residuals = {
            "sum_minus_identity": max_abs(total - identity) if n else 0.0,
            "pairwise_products": max(
                max_abs(split.p_harmonic @ split.p_range_d),
                max_abs(split.p_harmonic @ split.p_range_dstar),
                max_abs(split.p_range_d @ split.p_range_dstar),
            )
            if n
            else 0.0,
        }
        per_degree[str(degree)] = {
            "harmonic_dim": split.harmonic_dim,
            "residuals": residuals,
        }
    passed = ok and all(
        r <= tol.identity_check
        for entry in per_degree.values()
        for r in entry["residuals"].values()
    )
    return {"degrees": per_degree, "validated": ok}, passed


def _cmd_identities(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    complex_ = _the_complex(scenario)
    ok = complexes.validate(complex_, tol).passed
    per_degree = {}
    all_passed = ok
    for degree in complex_.degrees:
        report = complexes.check_identities(complex_, degree, tol)
        per_degree[str(degree)] = {
            "residuals": dict(report.residuals),
            "passed": report.passed,
        }
        all_passed = all_passed and report.passed
    return {"degrees": per_degree, "validated": ok}, all_passed


def _cmd_tensor(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    left, right = _the_pair(scenario)
    product, index = tensorprod.tensor_complex(left, right, args.max_dim)
    validation = complexes.validate(product, tol)
    kuenneth = tensorprod.kuenneth_check(left, right, tol)
    matches = {}
    worst_gap = 0.0
    matches_ok = True
    for degree in product.degrees:
        match = tensorprod.verify_product_spectrum(left, right, degree, tol, _MATCH_GAP)
        matches[str(degree)] = {"max_gap": match.max_gap, "passed": match.passed}
        worst_gap = max(worst_gap, match.max_gap)
        matches_ok = matches_ok and match.passed
    passed = validation.passed and kuenneth.passed and matches_ok
    results = {
        "product_dims": list(product.dims),
        "product_lo": product.lo,
        "blocks": {
            str(d): [[slot.j, slot.k, slot.offset, slot.size] for slot in idx.blocks]
            for d, idx in sorted(index.items())
        },
        "validation": {"passed": validation.passed},
        "kuenneth": {
            str(d): {"computed": c, "expected": e}
            for d, (c, e) in sorted(kuenneth.pairs.items())
        },
        "kuenneth_passed": kuenneth.passed,
        "spectrum_match": matches,
        "max_pairing_gap": worst_gap,
    }
    return results, passed


def _cmd_symbolic(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    if scenario.kind != "spectral-model":
        raise ParseError(f"$.kind: expected spectral-model, got {scenario.kind}")
    payload = scenario.payload
    operation = _require(payload, "operation", "symbolic")
    first = parse_spectral_set(_require(payload, "a", "symbolic"), "$.payload.a")
    results: dict = {"operation": operation}
    passed = True
    if operation == "essential":
        results["result"] = essential_part(first)
    elif operation in ("union", "minkowski"):
        second = parse_spectral_set(_require(payload, "b", "symbolic"), "$.payload.b")
        if operation == "union":
            results["result"] = union(first, second)
        else:
            results["result"] = minkowski_sum(first, second)
            if args.oracle_cutoff is not None:
                cutoff = parse_rational(args.oracle_cutoff, "--oracle-cutoff")
                checked = minkowski_oracle_check(first, second, cutoff)
                results["oracle"] = {"cutoff": cutoff, "passed": checked}
                passed = checked
    else:
        raise ParseError(
            f"$.payload.operation: expected union, minkowski, or essential, got {operation!r}"
        )
    return results, passed


def _parse_factors(scenario: Scenario, command: str, expected: int | None = None):
    if scenario.kind != "dbar-factors":
        raise ParseError(f"$.kind: expected dbar-factors, got {scenario.kind}")
    raw = _require(scenario.payload, "factors", command)
    if not isinstance(raw, list) or (expected is not None and len(raw) != expected):
        need = f"exactly {expected}" if expected is not None else "a list of"
        raise ParseError(f"$.payload.factors: {command} needs {need} factor models")
    return [
        parse_factor_model(entry, f"$.payload.factors[{idx}]")
        for idx, entry in enumerate(raw)
    ]


def _cmd_dbar(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    factors = _parse_factors(scenario, "dbar", expected=2)
    x, y = factors
    p = _require(scenario.payload, "p", "dbar")
    q = _require(scenario.payload, "q", "dbar")
    report = neumann_compactness(x, y, p, q)
    results: dict = {
        "p": p,
        "q": q,
        "verdict": report.verdict.value,
        "fired_rule": report.fired_rule,
        "witnesses": [list(w) for w in report.witnesses],
        "essential_spectrum": report.essential_spectrum,
    }
    try:
        product = product_box_spectrum(x, y, p, q)
        results["spectrum"] = product.spectrum
        results["essential"] = product.essential
    except ToolkitError:
        results["spectrum"] = None
        results["essential"] = None
    return results, True


def _cmd_dbar_n(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    factors = _parse_factors(scenario, "dbar-n")
    q = _require(scenario.payload, "q", "dbar-n")
    report = riemann_surface_product_report(factors, q)
    results = {
        "q": q,
        "factors": [factor.name for factor in factors],
        "verdict": report.verdict.value,
        "fired_rule": report.fired_rule,
        "witnesses": [list(w) for w in report.witnesses],
        "essential_spectrum": report.essential_spectrum,
        "trace": list(report.trace),
    }
    return results, True


def _cmd_joint(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    if scenario.kind != "finite-pair":
        raise ParseError(f"$.kind: expected finite-pair, got {scenario.kind}")
    t = parse_matrix(_require(scenario.payload, "t", "joint"), "$.payload.t")
    s = parse_matrix(_require(scenario.payload, "s", "joint"), "$.payload.s")
    pair = check_pair(t, s, tol)
    points = joint_spectrum(pair, tol)
    results: dict = {
        "commutator_norm": pair.commutator_norm,
        "joint_points": [[lam, mu] for lam, mu in points.pairs],
    }
    tensor_points = tensor_pair_spectrum(t, s, tol, args.max_dim)
    eig_t = sorted(np.linalg.eigvals(t), key=lambda z: (z.real, z.imag))
    eig_s = sorted(np.linalg.eigvals(s), key=lambda z: (z.real, z.imag))
    cartesian = [(complex(a), complex(b)) for a in eig_t for b in eig_s]
    gap = pairing_gap(tensor_points.pairs, cartesian)
    results["tensor_pair"] = {"cartesian_gap": gap, "passed": gap <= _MATCH_GAP}
    passed = gap <= _MATCH_GAP
    try:
        sum_report = sum_operator_check(t, s, tol, _MATCH_GAP, args.max_dim)
        results["sum_operator"] = {
            "max_gap": sum_report.max_gap,
            "symbolic_max_gap": sum_report.symbolic_max_gap,
            "passed": sum_report.passed,
        }
        passed = passed and sum_report.passed
    except (NotHermitianError, NotPSDError) as exc:
        results["sum_operator"] = {"skipped": type(exc).__name__}
    return results, passed


def _cmd_fuzz(scenario: Scenario, tol: Tolerance, args) -> tuple[dict, bool]:
    if scenario.kind not in fuzzing.SUITES:
        raise ParseError(f"$.kind: no fuzz suite for kind {scenario.kind!r}")
    seed = args.seed if args.seed is not None else (scenario.rng_seed or 0)
    cutoff = (
        parse_rational(args.oracle_cutoff, "--oracle-cutoff")
        if args.oracle_cutoff is not None
        else None
    )
    suite_results = fuzzing.run_kind_suites(scenario.kind, seed, args.cases, cutoff)
    results = {
        "seed": seed,
        "cases": args.cases,
        "suites": [
            {"suite": r.suite, "failures": list(r.failures), "passed": r.passed}
            for r in suite_results
        ],
    }
    return results, all(r.passed for r in suite_results)


_HANDLERS = {
    "validate": _cmd_validate,
    "spectrum": _cmd_spectrum,
    "hodge": _cmd_hodge,
    "identities": _cmd_identities,
    "tensor": _cmd_tensor,
    "symbolic": _cmd_symbolic,
    "dbar": _cmd_dbar,
    "dbar-n": _cmd_dbar_n,
    "joint": _cmd_joint,
    "fuzz": _cmd_fuzz,
}


def _digest(scenario_path: Path, args) -> str:
    flags = {
        "tol": args.tol,
        "seed": args.seed,
        "oracle_cutoff": args.oracle_cutoff,
        "max_dim": args.max_dim,
        "cases": getattr(args, "cases", None),
    }
    digest = hashlib.sha256()
    digest.update(scenario_path.read_bytes())
    digest.update(b"\x00")
    digest.update(json.dumps(flags, sort_keys=True).encode("utf-8"))
    return digest.hexdigest()


def _flatten_csv(value, prefix: str, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten_csv(value[key], f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(value, list):
        for idx, item in enumerate(value):
            _flatten_csv(item, f"{prefix}[{idx}]", rows)
    else:
        rows.append((prefix, "" if value is None else str(value)))


def run(command: str, scenario_path: str | Path, out_path: str | Path | None, args) -> tuple[int, dict]:
    """Execute one command against a scenario file; returns (exit code, report)."""
    scenario_path = Path(scenario_path)
    scenario = load_scenario(scenario_path)
    tol = DEFAULT_TOL if args.tol is None else Tolerance(identity_check=args.tol)
    results, passed = _HANDLERS[command](scenario, tol, args)
    report = {
        "command": command,
        "inputs_digest": _digest(scenario_path, args),
        "results": results,
        "pass": passed,
    }
    if args.csv:
        rows: list[tuple[str, str]] = []
        _flatten_csv(json_ready(report["results"]), "", rows)
        text = "key,value\n" + "".join(f"{key},{value}\n" for key, value in rows)
    else:
        text = dump_report(report)
    if out_path is not None:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return (0 if passed else 1), report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcspec",
        description=(
            "Spectral toolkit for finite Hilbert complexes, their tensor "
            "products, symbolic spectra, and compactness verdicts"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("scenario", help="path to a scenario JSON file")
        cmd.add_argument("--out", default=None, help="write the report here instead of stdout")
        cmd.add_argument("--csv", action="store_true", help="flatten results to CSV")
        cmd.add_argument("--tol", type=float, default=None, help="override the identity-check tolerance")
        cmd.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        cmd.add_argument("--oracle-cutoff", default=None, help="rational cutoff enabling the enumeration oracle")
        cmd.add_argument("--max-dim", type=int, default=KRONECKER_DIM_CAP, help="cap on product dimensions")
        if name == "fuzz":
            cmd.add_argument("--cases", type=int, default=100, help="number of fuzz cases")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        code, _ = run(args.command, args.scenario, args.out, args)
        return code
    except ToolkitError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
