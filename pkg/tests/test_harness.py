import math

import numpy as np
import pytest

from uavlos.baselines import GridProduct, Sigmoid, evaluate
from uavlos.citygeom import ENVIRONMENTS, BuiltUpParams
from uavlos.errors import IllegalSpec, InvalidCounts
from uavlos.harness import (
    SweepAxis,
    SweepSpec,
    compare_engines,
    result_to_csv,
    run_sweep,
    write_csv,
)
from uavlos.stats import PLosEstimate, wilson_interval

URBAN = ENVIRONMENTS["urban"]


def test_wilson_frozen_examples():
    assert wilson_interval(0, 10) == (0.0, pytest.approx(0.2775401687666165, rel=1e-12))
    assert wilson_interval(10, 10) == (pytest.approx(0.7224598312333834, rel=1e-12), 1.0)
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(0.40382982859014716, rel=1e-12)
    assert hi == pytest.approx(0.5961701714098528, rel=1e-12)


def test_wilson_validation():
    with pytest.raises(InvalidCounts):
        wilson_interval(5, 0)
    with pytest.raises(InvalidCounts):
        wilson_interval(-1, 10)
    with pytest.raises(InvalidCounts):
        wilson_interval(11, 10)


def test_estimate_containers():
    est = PLosEstimate.from_counts(50, 100)
    assert est.p_hat == 0.5
    assert est.ci_lo < 0.5 < est.ci_hi
    exact = PLosEstimate.exact(0.75)
    assert (exact.n, exact.k) == (1, 1)
    assert exact.ci_lo == exact.p_hat == exact.ci_hi == 0.75
    with pytest.raises(InvalidCounts):
        PLosEstimate(n=10, k=11, p_hat=1.1, ci_lo=0.0, ci_hi=1.0)
    with pytest.raises(InvalidCounts):
        PLosEstimate.exact(1.5)


def theta_axis(*values):
    return SweepAxis("theta", tuple(float(v) for v in values))


def test_sweep_spec_validation():
    ok = dict(engine="geom", params=URBAN, axes=(theta_axis(30, 60),), seed=0)
    SweepSpec(**ok)

    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "engine": "warp-drive"})
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "engine": "baseline:"})
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "axes": ()})
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "axes": (theta_axis(30), theta_axis(60))})
    with pytest.raises(IllegalSpec):
        three = (theta_axis(30), SweepAxis("phi", (0.0,)), SweepAxis("gamma", (5.0,)))
        SweepSpec(**{**ok, "axes": three})
    with pytest.raises(IllegalSpec):
        SweepAxis("theta", ())
    with pytest.raises(IllegalSpec):
        SweepAxis("zeta", (1.0,))
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "axes": (theta_axis(0.0, 30),)})  # theta=0 out of domain
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "theta": 45.0})  # theta both swept and fixed
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "axes": (SweepAxis("phi", (0.0, 45.0)),)})  # no theta/radius
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "axes": (theta_axis(30),), "radius": 100.0})
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "n_runs": 0})
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "h_uav": 1.0})  # below h_rx
    with pytest.raises(IllegalSpec):
        SweepSpec(**{**ok, "user_zone": "rooftop"})
    with pytest.raises(IllegalSpec):
        SweepSpec(engine="baseline:grid", params=URBAN,
                  axes=(theta_axis(30), SweepAxis("phi", (0.0,))), seed=0)


def test_geom_sweep_is_reproducible():
    spec = SweepSpec(
        engine="geom", params=URBAN, axes=(theta_axis(20, 50, 80),), n_runs=300, seed=5
    )
    a = run_sweep(spec)
    b = run_sweep(spec)
    assert [r.estimate for r in a.rows] == [r.estimate for r in b.rows]
    moved = run_sweep(SweepSpec(
        engine="geom", params=URBAN, axes=(theta_axis(20, 50, 80),), n_runs=300, seed=6
    ))
    assert [r.estimate.k for r in moved.rows] != [r.estimate.k for r in a.rows]


def test_geom_sweep_rises_with_theta():
    spec = SweepSpec(
        engine="geom", params=URBAN, axes=(theta_axis(10, 30, 50, 70, 90),),
        n_runs=600, seed=1,
    )
    rows = run_sweep(spec).rows
    for lower, higher in zip(rows, rows[1:]):
        # non-decreasing up to CI overlap
        assert higher.estimate.ci_hi >= lower.estimate.ci_lo
    assert rows[-1].estimate.p_hat == 1.0  # overhead limit


def test_mixed_zone_lies_between_pure_zones():
    # dense towers make the street/crossroad split pronounced
    estimates = {}
    for zone in ("street", "crossroad", "mixed"):
        spec = SweepSpec(
            engine="geom", params=ENVIRONMENTS["high-rise"], axes=(theta_axis(75),),
            n_runs=2000, seed=3, user_zone=zone,
        )
        estimates[zone] = run_sweep(spec).rows[0].estimate.p_hat
    assert estimates["street"] < estimates["crossroad"]
    assert estimates["street"] - 0.03 <= estimates["mixed"] <= estimates["crossroad"] + 0.03
    # the free area is mostly street, so the mix leans that way
    assert estimates["mixed"] < 0.5 * (estimates["street"] + estimates["crossroad"])


def test_sim3d_sweep_smoke():
    spec = SweepSpec(
        engine="sim3d", params=URBAN, extent=(1000.0, 1000.0),
        axes=(theta_axis(40),), n_runs=20, n_users=36, seed=2,
    )
    rows = run_sweep(spec).rows
    assert len(rows) == 1
    est = rows[0].estimate
    assert est.n > 0 and 0.0 <= est.p_hat <= 1.0
    again = run_sweep(spec).rows[0].estimate
    assert est == again


def test_sim3d_overhead_point_is_exact():
    spec = SweepSpec(
        engine="sim3d", params=ENVIRONMENTS["dense-urban"], extent=(1000.0, 1000.0),
        axes=(theta_axis(90),), n_runs=30, seed=4,
    )
    est = run_sweep(spec).rows[0].estimate
    assert est.p_hat == 1.0
    assert est.n <= 30  # users over building footprints drop out


def test_baseline_sweep_matches_direct_evaluation():
    spec = SweepSpec(
        engine="baseline:grid", params=URBAN, axes=(theta_axis(10, 45, 90),), seed=0
    )
    rows = run_sweep(spec).rows
    model = GridProduct(URBAN)
    for row in rows:
        theta = row.values[0]
        assert row.estimate.p_hat == evaluate(model, theta, 100.0, 1.5)
        assert row.estimate.n == 1


def test_named_baseline_and_gamma_axis():
    models = {"s": Sigmoid(a=9.61, b=0.16), "g": GridProduct(URBAN)}
    spec = SweepSpec(
        engine="baseline:g", params=ENVIRONMENTS["suburban"], models=models,
        axes=(SweepAxis("gamma", (5.0, 15.0, 45.0)),), theta=30.0, seed=0,
    )
    rows = run_sweep(spec).rows
    ps = [r.estimate.p_hat for r in rows]
    assert ps == sorted(ps, reverse=True)  # taller heights block more
    # the named model keeps its own alpha/beta, not the sweep environment's
    assert rows[1].estimate.p_hat == evaluate(GridProduct(URBAN), 30.0, 100.0, 1.5)

    with pytest.raises(IllegalSpec):
        run_sweep(SweepSpec(
            engine="baseline:s", params=URBAN, models=models,
            axes=(SweepAxis("gamma", (5.0, 15.0)),), theta=30.0, seed=0,
        ))
    with pytest.raises(IllegalSpec):
        run_sweep(SweepSpec(
            engine="baseline:missing", params=URBAN, models=models,
            axes=(theta_axis(30),), seed=0,
        ))


def test_radius_axis_converts_to_elevation():
    spec = SweepSpec(
        engine="baseline:grid", params=URBAN, seed=0,
        axes=(SweepAxis("radius", (50.0, 200.0)), SweepAxis("h_uav", (100.0, 500.0))),
    )
    rows = run_sweep(spec).rows
    assert [r.values for r in rows] == [
        (50.0, 100.0), (50.0, 500.0), (200.0, 100.0), (200.0, 500.0)
    ]
    model = GridProduct(URBAN)
    for row in rows:
        radius, h_uav = row.values
        theta = math.degrees(math.atan2(h_uav - 1.5, radius))
        assert row.estimate.p_hat == evaluate(model, theta, h_uav, 1.5)
    # a higher platform at the same ground radius sees more of the sky
    assert rows[1].estimate.p_hat >= rows[0].estimate.p_hat


def test_phi_boundary_columns_are_exact():
    street = SweepSpec(
        engine="geom", params=ENVIRONMENTS["dense-urban"], user_zone="street",
        axes=(theta_axis(20, 60), SweepAxis("phi", (0.0, 45.0, 90.0))),
        n_runs=150, seed=9,
    )
    rows = run_sweep(street).rows
    by_point = {r.values: r.estimate.p_hat for r in rows}
    assert by_point[(20.0, 90.0)] == 1.0  # along the street
    assert by_point[(60.0, 90.0)] == 1.0
    assert by_point[(20.0, 0.0)] < 1.0  # straight across the buildings

    crossroad = SweepSpec(
        engine="geom", params=ENVIRONMENTS["dense-urban"], user_zone="crossroad",
        axes=(theta_axis(20), SweepAxis("phi", (0.0, 90.0))), n_runs=150, seed=9,
    )
    for row in run_sweep(crossroad).rows:
        assert row.estimate.p_hat == 1.0


def test_csv_schema_and_determinism(tmp_path):
    spec = SweepSpec(
        engine="geom", params=URBAN, axes=(theta_axis(30, 60),), n_runs=100, seed=8
    )
    result = run_sweep(spec)
    text = result_to_csv(result)
    lines = text.splitlines()
    assert lines[0].startswith("# spec: engine=geom alpha=0.3 beta=500 gamma=15")
    assert "seed=8" in lines[0]
    assert lines[1] == "theta,n,k,p_hat,ci_lo,ci_hi,ms_per_point"
    assert len(lines) == 4
    first = lines[2].split(",")
    assert first[0] == "30"
    assert first[1] == "100"
    assert first[6] == "0.000000"  # timing suppressed for reproducible bytes
    assert len(first[3].split(".")[1]) == 6

    assert result_to_csv(run_sweep(spec)) == text
    timed = result_to_csv(result, include_timing=True)
    assert timed != text

    out = tmp_path / "sweep.csv"
    write_csv(result, out)
    assert out.read_text() == text
    assert list(tmp_path.iterdir()) == [out]  # no temp file left behind


def test_two_axis_rows_come_in_row_major_order():
    spec = SweepSpec(
        engine="baseline:grid", params=URBAN, seed=0,
        axes=(theta_axis(10, 20), SweepAxis("h_uav", (100.0, 200.0, 300.0))),
    )
    result = run_sweep(spec)
    assert result.axis_names == ("theta", "h_uav")
    assert [r.values for r in result.rows] == [
        (10.0, 100.0), (10.0, 200.0), (10.0, 300.0),
        (20.0, 100.0), (20.0, 200.0), (20.0, 300.0),
    ]
    header = result_to_csv(result).splitlines()[1]
    assert header.startswith("theta,h_uav,")


def test_compare_engines_overhead_row():
    rows = compare_engines(
        URBAN, (90.0,), n3d=10, ngeom=50, seed=0, extent=(1000.0, 1000.0)
    )
    row = rows[0]
    assert row.sim3d.p_hat == 1.0
    assert row.geom.p_hat == 1.0
    assert row.abs_delta == 0.0


def test_compare_engines_is_reproducible():
    a = compare_engines(URBAN, (30.0, 60.0), n3d=15, ngeom=60, seed=12,
                        extent=(1000.0, 1000.0))
    b = compare_engines(URBAN, (30.0, 60.0), n3d=15, ngeom=60, seed=12,
                        extent=(1000.0, 1000.0))
    assert [(r.sim3d, r.geom) for r in a] == [(r.sim3d, r.geom) for r in b]
