import csv
import io
import json

import pytest
from hypothesis import given, strategies as st

from fracverify.core import EvalConfig
from fracverify.harness import OperatorSpec, classify_operator
from fracverify.report import RunManifest, format_fixed, format_sci, report_from_json, report_to_csv, report_to_json


@pytest.fixture(scope="module")
def cf_report():
    return classify_operator(OperatorSpec("cf", 0.5), EvalConfig())


@pytest.mark.parametrize(
    "x, text",
    [
        (1.2642411176571153, "1.264241117657115e0"),
        (0.0, "0.000000000000000e0"),
        (-2.5e-12, "-2.500000000000000e-12"),
        (12345.0, "1.234500000000000e4"),
    ],
)
def test_format_sci(x, text):
    assert format_sci(x) == text


@pytest.mark.parametrize(
    "x, text",
    [(2.0, "2.000000000000000"), (1.2642411176571153, "1.264241117657115"), (0.0, "0.000000000000000"),
     (1e-5, "1.000000000000000e-5"), (5e4, "5.000000000000000e4")],
)
def test_format_fixed(x, text):
    assert format_fixed(x) == text


@given(st.floats(-1e300, 1e300))
def test_format_sci_parses_back(x):
    text = format_sci(x)
    assert "," not in text
    assert float(text) == pytest.approx(x, rel=1e-14, abs=0)


def test_json_round_trip(cf_report):
    manifest = RunManifest("verify", {"op": "cf", "alpha": 0.5}, (), cf_report.operator, cf_report.config)
    report, parsed = report_from_json(report_to_json(cf_report, manifest))
    assert report == cf_report
    assert parsed == manifest


def test_json_without_manifest(cf_report):
    report, manifest = report_from_json(report_to_json(cf_report))
    assert report == cf_report and manifest is None


def test_json_keys_sorted(cf_report):
    text = report_to_json(cf_report)
    body = json.loads(text)
    assert list(body) == sorted(body)
    assert body["verdict"] == "ReducesToIntegerOrder"
    assert body["qualifier"] == "state-augmented"


def test_csv_layout(cf_report):
    rows = list(csv.reader(io.StringIO(report_to_csv(cf_report))))
    assert rows[0] == ["record", "name", "role", "value", "threshold", "passed", "detail"]
    assert {r[0] for r in rows[1:]} <= {"test", "verdict", "pointwise_local", "note"}
    assert ["verdict", "ReducesToIntegerOrder", "", "", "", "", "state-augmented"] in rows
    assert sum(r[0] == "test" for r in rows) == len(cf_report.tests)


def test_manifest_timestamp_from_environment(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    assert RunManifest("eval", {}).timestamp == "1970-01-01T00:00:00+00:00"
