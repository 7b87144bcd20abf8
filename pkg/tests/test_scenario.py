import json
from fractions import Fraction

import numpy as np
import pytest

from hcspec.dbar import builtin_models
from hcspec.scenario import (
    ParseError,
    dump_report,
    factor_model_to_json,
    finite_complex_to_json,
    load_scenario,
    matrix_to_json,
    operator_spectrum_to_json,
    parse_factor_model,
    parse_finite_complex,
    parse_matrix,
    parse_operator_spectrum,
    parse_rational,
    parse_spectral_set,
    scenario_from_dict,
    spectral_set_to_json,
)
from hcspec.spectra import AP, INFINITE, OperatorSpectrum, Point, SpectralSet


def test_scenario_envelope_validation():
    with pytest.raises(ParseError):
        scenario_from_dict([])
    with pytest.raises(ParseError):
        scenario_from_dict({"version": "99", "kind": "finite-complex", "payload": {}})
    with pytest.raises(ParseError):
        scenario_from_dict({"version": "1", "kind": "nope", "payload": {}})
    with pytest.raises(ParseError):
        scenario_from_dict({"version": "1", "kind": "finite-complex", "payload": 3})
    ok = scenario_from_dict(
        {"version": "1", "kind": "finite-complex", "payload": {}, "rng_seed": 7}
    )
    assert ok.rng_seed == 7


def test_matrix_roundtrip():
    m = np.array([[1 + 2j, 0], [0.5, -1j]])
    again = parse_matrix(matrix_to_json(m), "$")
    assert np.allclose(m, again)
    assert np.allclose(parse_matrix([[1, 2], [3, 4]], "$"), [[1, 2], [3, 4]])
    with pytest.raises(ParseError):
        parse_matrix([[1], [2, 3]], "$")
    with pytest.raises(ParseError):
        parse_matrix([[{"re": 1}]], "$")


def test_rational_parsing():
    assert parse_rational("3/2", "$") == Fraction(3, 2)
    assert parse_rational(5, "$") == 5
    with pytest.raises(ParseError):
        parse_rational("1/0", "$")
    with pytest.raises(ParseError):
        parse_rational(1.5, "$")


def test_spectral_set_roundtrip():
    s = SpectralSet.of(Point(Fraction(1, 2), 2), AP(0, 3, INFINITE))
    again = parse_spectral_set(spectral_set_to_json(s), "$")
    assert again == s
    with pytest.raises(ParseError):
        parse_spectral_set({"atoms": [{"kind": "blob"}]}, "$")
    with pytest.raises(ParseError):
        parse_spectral_set({"atoms": [{"kind": "point", "value": "-1", "mult": 1}]}, "$")


def test_operator_spectrum_roundtrip():
    derived = OperatorSpectrum(SpectralSet.of(Point(0, INFINITE), AP(1, 1)))
    again = parse_operator_spectrum(operator_spectrum_to_json(derived), "$")
    assert again.essential == derived.essential and not again.essential_asserted
    asserted = OperatorSpectrum(
        SpectralSet.of(Point(0, 1), AP(1, 1)), SpectralSet.of(Point(0, 1))
    )
    again = parse_operator_spectrum(operator_spectrum_to_json(asserted), "$")
    assert again.essential_asserted and again.essential == asserted.essential


def test_finite_complex_roundtrip():
    from hcspec.complexes import random_complex

    c = random_complex([2, 3, 1], seed=12)
    again = parse_finite_complex(finite_complex_to_json(c), "$")
    assert again.dims == c.dims and again.lo == c.lo
    for degree in c.differentials:
        assert np.allclose(again.differentials[degree], c.differentials[degree])


def test_finite_complex_random_form():
    c = parse_finite_complex({"random": {"dims": [2, 2], "seed": 3}}, "$")
    assert c.dims == (2, 2)
    with pytest.raises(ParseError):
        parse_finite_complex({"random": {"dims": [2]}}, "$")
    with pytest.raises(ParseError):
        parse_finite_complex({"dims": [1], "differentials": {"x": [[1]]}}, "$")


def test_factor_model_roundtrip_and_builtins():
    for name, model in builtin_models().items():
        again = parse_factor_model(factor_model_to_json(model), "$")
        assert again.name == model.name
        assert again.box_spectrum == model.box_spectrum
        assert again.cohomology_dim == model.cohomology_dim
        by_reference = parse_factor_model({"builtin": name}, "$")
        assert by_reference == model
    with pytest.raises(ParseError):
        parse_factor_model({"builtin": "no-such-model"}, "$")
    with pytest.raises(ParseError):
        parse_factor_model({"name": "x", "complex_dimension": 0}, "$")


def test_load_scenario_reports_json_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  broken\n}")
    with pytest.raises(ParseError) as err:
        load_scenario(bad)
    assert "line" in str(err.value)


def test_dump_report_is_canonical():
    report = {"b": Fraction(1, 3), "a": [1.0, INFINITE], "c": {"z": 1, "y": None}}
    text = dump_report(report)
    assert text == dump_report(json.loads(json.dumps({"b": "1/3", "a": [1.0, "inf"], "c": {"z": 1, "y": None}})))
    assert text.endswith("\n")
    assert json.loads(text)["b"] == "1/3"
