import math

import pytest
from hypothesis import given, strategies as st

from painleve_asymptotics import edge
from painleve_asymptotics import harness as hn
from painleve_asymptotics.scaled import ScaledComplex

points = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                  min_size=1, max_size=12)


@given(points)
def test_identical_lists_pair_at_zero(zs):
    rep = hn.match_poles(zs, zs)
    assert rep.max_distance == 0
    assert not rep.unpaired_actual and not rep.unpaired_predicted


@given(points, points)
def test_pairing_is_exclusive(a, b):
    rep = hn.match_poles(a, b)
    assert len({i for i, _, _ in rep.pairs}) == len(rep.pairs)
    assert len({j for _, j, _ in rep.pairs}) == len(rep.pairs)
    assert len(rep.pairs) == min(len(a), len(b))


def test_residues_must_agree():
    rep = hn.match_poles([(0j, 1), (1j, -1)], [(0.01j, -1), (1.01j, 1)])
    assert sorted(d for _, _, d in rep.pairs) == pytest.approx([0.99, 1.01])
    rep = hn.match_poles([(0j, 1)], [(0.01j, -1)])
    assert not rep.pairs and rep.unpaired_actual == [0]


def test_radius_limits_pairs():
    rep = hn.match_poles([0j, 5 + 0j], [0.1 + 0j, 9 + 0j], radius=1.0)
    assert [(i, j) for i, j, _ in rep.pairs] == [(0, 0)]
    assert rep.unpaired_actual == [1] and rep.unpaired_predicted == [1]


def test_empty_list_rejected():
    with pytest.raises(hn.HarnessError):
        hn.match_poles([], [1j])


def test_errors_in_both_metrics():
    ae, le = hn._errors(ScaledComplex.from_complex(2.0), ScaledComplex.from_complex(-2.0))
    assert ae == pytest.approx(4.0)
    assert le == pytest.approx(math.pi)


def test_config_hash_is_order_free():
    assert hn.config_hash({"a": 1, "b": 2.5}) == hn.config_hash({"b": 2.5, "a": 1})
    assert hn.config_hash({"a": 1}) != hn.config_hash({"a": 2})


def test_round_trip_formatting():
    v = 0.1 + 1e-300j
    re, im = hn.fmt(v).split(",")
    assert complex(float(re), float(im)) == v


@pytest.fixture(scope="module")
def small_edge_report():
    return hn.compare_edge([10, 12], x_min=1.3, x_max=2.0, count=12)


def test_reports_are_reproducible(small_edge_report):
    again = hn.compare_edge([10, 12], x_min=1.3, x_max=2.0, count=12)
    assert again.csv_text() == small_edge_report.csv_text()
    assert again.summary_text() == small_edge_report.summary_text()


def test_reported_points_avoid_holes(small_edge_report):
    for r in small_edge_report.records:
        eps = edge.epsilon_of(r.m)
        assert edge.in_admissible_set(r.x, r.m, 0.5, "inf")
        for n in range(edge.K_of(r.x, eps) + 13):
            assert not edge._near_singularity(r.x, n, r.m, 0.5 * eps)


def test_summary_keys(small_edge_report):
    s = small_edge_report.summary
    assert {"U.m10.max_abs", "P.m12.max_abs", "U.ratio.m12_over_m10"} <= set(s)
    assert s["U.m10.max_abs"] == small_edge_report.max_error("U", 10)


def test_hole_excluded_near_edge():
    grid = hn.admissible_grid(1.443, 1.447, 20, [24], ("U",))
    for x in grid:
        assert edge.in_admissible_set(x, 24, 0.5, "inf")


def test_all_excluded_is_an_error():
    [x] = edge.predict_pole_lattice(0.0, 0, [0], 24)
    with pytest.raises(hn.HarnessError):
        hn.admissible_grid(x.real, x.real, 1, [24], ("U",))


def test_corner_grid_maps_zero_to_corner():
    from painleve_asymptotics.geometry import X_C
    from painleve_asymptotics.ladder import to_x
    rep = hn.compare_corner([10], t_min=0.0, t_max=0.0, count=1, families=("P",))
    [r] = rep.records
    assert r.x == pytest.approx(X_C, abs=1e-15)
    exact = hn.exact_corner_value("P", X_C, 10).to_complex()
    y = (9.5) ** (2 / 3) * X_C
    assert to_x(y, 10) == pytest.approx(X_C, rel=1e-15)
    assert r.exact.to_complex() == pytest.approx(exact)


def test_corner_report_skips_near_poles():
    rep = hn.compare_corner([10], t_min=1.0, t_max=3.0, count=21, clearance=0.3)
    fld_poles = [p for p in hn.exact_corner_poles(10)]
    for r in rep.records:
        assert min(abs(r.t - p) for p in fld_poles) >= 0.3
    assert rep.summary["skipped_near_poles"] > 0
