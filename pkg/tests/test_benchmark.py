import math

import pandas as pd
import pytest
from numpy.testing import assert_allclose

from miso_pareto.services.benchmark import BenchmarkReport, best_time, fit_growth_exponent, run_benchmark


def test_growth_exponent_of_power_laws():
    sizes = [125, 250, 500, 1000]
    assert_allclose(fit_growth_exponent(sizes, [m ** 2 * 1e-6 for m in sizes]), 2.0)
    assert_allclose(fit_growth_exponent(sizes, [m * 1e-4 for m in sizes]), 1.0)
    assert math.isnan(fit_growth_exponent([100], [1.0]))


def test_best_time_repeats():
    calls = []
    assert best_time(lambda: calls.append(1), 4) >= 0.0
    assert len(calls) == 4
    best_time(lambda: calls.append(1), 0)
    assert len(calls) == 5


def test_report_structure(fig2):
    report = run_benchmark(fig2, sizes=[40, 20], methods=["dn", "nn-closed"],
                           repeats=1, oracle_3d_max=20)
    timings = report.timings
    assert list(timings.columns) == ["method", "M", "kind", "seconds"]
    assert sorted(timings.loc[timings["method"] == "oracle:dn", "M"]) == [20]
    assert sorted(timings.loc[timings["method"] == "oracle:nn", "M"]) == [20, 40]
    assert len(timings) == 7
    assert (timings["seconds"] > 0).all()

    assert set(report.speedups) == {"dn", "nn-closed"}
    assert set(report.checks) == {"dn_speedup", "dn_linear", "nn-closed_speedup",
                                  "nn-closed_linear", "oracle:nn_superlinear"}
    assert math.isnan(report.exponents["oracle:dn"])
    # no timing at the default reference size: speedups are reported but not accepted
    assert report.reference_sizes == {"dn": 20, "nn-closed": 40}
    assert not report.checks["dn_speedup"] and not report.checks["nn-closed_speedup"]
    assert report.passed == all(report.checks.values())


def test_reference_size_is_always_timed(fig2):
    report = run_benchmark(fig2, sizes=[20, 40], methods=["dn"], repeats=1,
                           oracle_3d_max=20, reference_size=40)
    timings = report.timings
    assert sorted(timings.loc[timings["method"] == "oracle:dn", "M"]) == [20, 40]
    assert report.reference_sizes == {"dn": 40}
    assert "oracle:dn_superlinear" in report.checks


def test_empty_report_passes():
    assert BenchmarkReport(pd.DataFrame(), {}, {}).passed


@pytest.mark.slow
def test_fast_methods_outpace_the_oracles(fig2):
    report = run_benchmark(fig2, sizes=[125, 250, 500, 1000], methods=["dn", "nn-closed"],
                           repeats=3)
    assert report.reference_sizes["dn"] == 500
    assert report.exponents["dn"] < 1.3
    assert report.exponents["nn-closed"] < 1.3
    assert report.speedups["dn"] >= 100.0
