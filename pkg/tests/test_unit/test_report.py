import json

import numpy as np
import pytest

from riemann.errors import InputError
from riemann.verify.report import ResidualReport, build_report

POINTS = np.array([[0.0, 1.0, 2.0], [1.0, -1.0, 0.5]])


@pytest.fixture()
def report() -> ResidualReport:
    residuals = np.array([[1e-7, 2.0], [3e-7, -1j]])
    return build_report(["small", "large"], residuals, POINTS, 1e-6, 2)


def test_records(report):
    small, large = report.equations

    assert small.passed
    assert not large.passed
    assert not report.passed
    assert large.max_abs == 2.0
    assert large.mean_abs == pytest.approx(1.5)
    assert large.argmax == (0.0, 1.0, 2.0)
    assert small.argmax == (1.0, -1.0, 0.5)
    assert report.max_abs == 2.0
    assert report.masked == 2


def test_tolerance_overrides():
    report = build_report(
        ["a", "b"],
        np.array([[1e-5, 1e-5]]),
        POINTS[:1],
        1e-6,
        tolerances={"b": 1e-4},
    )

    assert not report.record("a").passed
    assert report.record("b").passed
    assert report.record("b").tolerance == 1e-4


def test_pass_flips_with_the_residual():
    scale = [1e-7, 1e-6, 1e-5]
    passed = [
        build_report(["e"], np.array([[s]]), POINTS[:1], 1e-6).passed
        for s in scale
    ]
    assert passed == [True, True, False]


def test_merge(report):
    other = build_report(["extra"], np.zeros((1, 1)), POINTS[:1], 1e-6, 5)

    merged = report.merge(other)

    assert [e.name for e in merged.equations] == ["small", "large", "extra"]
    assert merged.masked == 5
    assert merged.tolerance == report.tolerance


def test_missing_record(report):
    with pytest.raises(KeyError):
        report.record("missing")


def test_json(report, tmp_path):
    path = tmp_path / "reports" / "report.json"

    report.write(path)

    document = json.loads(path.read_text())
    assert document == json.loads(report.to_json())
    assert document["pass"] is False
    assert document["masked"] == 2
    assert document["equations"][1]["argmax"] == [0.0, 1.0, 2.0]


def test_empty_report_passes():
    assert ResidualReport().passed


@pytest.mark.parametrize("tol", [0.0, -1e-6])
def test_tolerance_must_be_positive(tol):
    with pytest.raises(InputError, match="positive"):
        build_report(["e"], np.zeros((1, 1)), POINTS[:1], tol)


def test_all_points_masked():
    with pytest.raises(InputError, match="masked"):
        build_report(["e"], np.zeros((0, 1)), np.zeros((0, 3)), 1e-6)


def test_pass_is_monotone_in_tolerance():
    rng = np.random.default_rng(2)
    residuals = rng.normal(scale=1e-6, size=(2, 3))
    tols = np.logspace(-9, -4, 26)

    passed = [
        build_report(["a", "b", "c"], residuals, POINTS, tol).passed
        for tol in tols
    ]

    assert passed[0] is False and passed[-1] is True
    first = passed.index(True)
    assert all(passed[first:])


def test_failed_stencils_are_not_masked():
    report = build_report(
        ["e"], np.zeros((1, 1)), POINTS[:1], 1e-6, masked=2, failed=3
    )
    other = build_report(["f"], np.zeros((1, 1)), POINTS[:1], 1e-6, failed=1)

    assert (report.masked, report.failed) == (2, 3)
    assert report.merge(other).failed == 3
    assert report.to_dict()["failed"] == 3
    assert ResidualReport().failed == 0
