from __future__ import annotations

import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.shared.bundles import bundle_path, list_bundles
from src.shared.codec import (
    dumps,
    load_alpha0,
    load_eigen,
    load_operator,
    load_weight,
    parse_json_to_model,
    tridiag_to_model,
    write_json,
)
from src.shared.errors import BundleError
from src.shared.schemas import AlphaModel, Report, ReportDetail, inputs_hash
from src.shared.settings import SettingsError, load_settings
from tests.conftest import E, mat


# =========================
# Settings
# =========================

def test_settings_defaults():
    settings = load_settings()
    assert settings.log == "quiet"
    assert settings.n_verify == 5
    assert settings.bundle_dir.name == "bundles"


def test_settings_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("MVOP_LOG", " DEBUG ")
    monkeypatch.setenv("MVOP_N_VERIFY", "8")
    monkeypatch.setenv("MVOP_BUNDLE_DIR", str(tmp_path))
    settings = load_settings()
    assert settings.log == "debug"
    assert settings.n_verify == 8
    assert settings.bundle_dir == tmp_path


@pytest.mark.parametrize("name, value", [("MVOP_LOG", "loud"), ("MVOP_N_VERIFY", "-1"), ("MVOP_N_VERIFY", "many")])
def test_settings_reject_bad_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(SettingsError, match=name):
        load_settings()


# =========================
# Reports
# =========================

def test_report_pass_iff_no_details():
    detail = ReportDetail(location="n=1", expected="0", actual="1")
    assert Report.build("bispectral", []).passed
    assert not Report.build("bispectral", [detail]).passed
    with pytest.raises(ValidationError):
        Report(check="bispectral", passed=True, details=[detail])


def test_report_json_uses_pass_key():
    payload = Report.build("intertwine", [], levels=4, counts={"exact_window": 3}).to_json_dict()
    assert payload["pass"] is True
    assert payload["meta"]["levels"] == 4
    assert "passed" not in payload


def test_inputs_hash_ignores_key_order():
    assert inputs_hash({"a": 1, "b": [1, 2]}) == inputs_hash({"b": [1, 2], "a": 1})
    assert inputs_hash({"a": 1}) != inputs_hash({"a": 2})


# =========================
# Codec
# =========================

@pytest.mark.parametrize("raw", ["", "   ", "{", '{"alpha0": 3}', "[]"])
def test_parse_json_to_model_rejects(raw):
    with pytest.raises(BundleError):
        parse_json_to_model(raw, AlphaModel)


def test_dumps_is_deterministic():
    assert dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


def test_operator_recipe_bundle(bundle_dir):
    l = load_operator(bundle_dir / "example1.op.json")
    assert l.levels == 20
    assert l.b(0) == mat([5, 2], [3, 1])


def test_explicit_operator_file(tmp_path, l52):
    path = tmp_path / "l.op.json"
    write_json(path, tridiag_to_model(l52.truncate(4)).model_dump(mode="json", exclude_none=True))
    assert load_operator(path) == l52.truncate(4)


def test_operator_file_needs_one_form(tmp_path):
    path = tmp_path / "bad.op.json"
    path.write_text(json.dumps({"block_size": 1, "diag": [[["1"]]], "sub": [], "recipe": {"family": "gegenbauer02", "lambda": "5/2", "levels": 2}}))
    with pytest.raises(BundleError):
        load_operator(path)


def test_decimal_entries_are_rejected(tmp_path):
    path = tmp_path / "a.alpha0.json"
    path.write_text(json.dumps({"alpha0": [["0.5", "1"], ["1", "1"]]}))
    with pytest.raises(BundleError):
        load_alpha0(path)


def test_weight_bundle_with_sign_override(bundle_dir):
    default = load_weight(bundle_dir / "wtilde_5_2.weight.json")
    flipped = load_weight(bundle_dir / "wtilde_5_2.weight.json", delta_sign=1)
    assert default.deltas[0].mass == E.scale(Fraction(-2, 3))
    assert flipped.deltas[0].mass == E.scale(Fraction(2, 3))


def test_transformed_weight_file_cannot_carry_deltas(tmp_path):
    path = tmp_path / "w.weight.json"
    path.write_text(
        json.dumps(
            {
                "kind": "darboux_gegenbauer02",
                "lambda": "5/2",
                "alpha0": [["1", "0"], ["0", "1"]],
                "deltas": [{"point": "0", "mass": [["1", "0"], ["0", "1"]]}],
            }
        )
    )
    with pytest.raises(BundleError):
        load_weight(path)


def test_eigen_bundle(bundle_dir):
    eigen = load_eigen(bundle_dir / "example1.eigen.json")
    assert eigen.at(0) == mat([Fraction(-88, 5), -8], [Fraction(-32, 5), 0])


# =========================
# Bundles
# =========================

def test_bundle_lookup(bundle_dir):
    assert bundle_path("example1", "diffop", bundle_dir).name == "example1.diffop.json"
    with pytest.raises(BundleError):
        bundle_path("example9", "op", bundle_dir)


def test_list_bundles(bundle_dir):
    index = list_bundles(bundle_dir)
    assert set(index["example1"]) == {"op", "alpha0", "diffop", "eigen"}
    assert "weight" in index["wtilde_5_2"]
