import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhmetric.errors import InvalidPathError, PreconditionError
from qhmetric.geometry import Disk, HalfPlane, Punctured, PuncturedPlane, SlitDisk, sample_interior
from qhmetric.metrics import (MetricResult, PathPolyline, SolverConfig, j_distance, lower_bound,
                              qh_closed_form, qh_distance, qh_length)

LOG3 = math.log(3.0)

coord = st.floats(-0.65, 0.65, allow_nan=False)
disk_point = st.tuples(coord, coord)


def test_j_distance_examples():
    d1 = Punctured(SlitDisk(), [(-0.5, 0.0)])
    assert j_distance(d1, (0.5, 1e-3), (0.5, -1e-3)) == pytest.approx(LOG3, abs=1e-12)
    assert j_distance(Disk(), (0.2, 0.1), (0.2, 0.1)) == 0.0
    assert j_distance(PuncturedPlane(), (1.0, 0.0), (-1.0, 0.0)) == pytest.approx(LOG3, abs=1e-15)


def test_j_distance_outside_raises():
    with pytest.raises(PreconditionError):
        j_distance(Disk(), (0.0, 0.0), (1.5, 0.0))


@settings(max_examples=60, deadline=None)
@given(disk_point, disk_point, disk_point)
def test_j_is_symmetric_and_satisfies_triangle_inequality(a, b, c):
    d = Disk()
    assert j_distance(d, a, b) == j_distance(d, b, a)
    assert j_distance(d, a, c) <= j_distance(d, a, b) + j_distance(d, b, c) + 1e-12


def test_qh_length_examples():
    assert qh_length(HalfPlane(), [(0.0, 1.0), (0.0, math.e)]) == pytest.approx(1.0, abs=1e-12)
    r = 0.9
    assert qh_length(Disk(), [(0.0, 0.0), (r, 0.0)]) == pytest.approx(math.log(1 / (1 - r)), rel=1e-10)
    assert qh_length(Disk(), [(0.3, 0.3)]) == 0.0


def test_qh_length_rejects_invalid_paths():
    with pytest.raises(InvalidPathError):
        qh_length(SlitDisk(), [(0.5, 0.1), (0.5, -0.1)])
    with pytest.raises(InvalidPathError):
        qh_length(Disk(), [(0.0, 0.0), (2.0, 0.0)])


def test_path_polyline_drops_repeats():
    p = PathPolyline([(0, 0), (0, 0), (1, 0), (1, 0)])
    assert len(p) == 2
    assert p.euclidean_length() == 1.0
    assert p.reversed().start.tolist() == [1.0, 0.0]


def test_closed_form_examples():
    assert qh_closed_form(HalfPlane(), (0.0, 1.0), (0.0, math.e)) == pytest.approx(1.0, abs=1e-15)
    assert qh_closed_form(PuncturedPlane(), (1.0, 0.0), (-1.0, 0.0)) == pytest.approx(math.pi)
    assert qh_closed_form(Disk(), (0.0, 0.0), (0.5, 0.0)) is None


def test_closed_form_matches_hyperbolic_arccosh_form():
    d = HalfPlane()
    x, y = np.array([0.3, 0.7]), np.array([-1.1, 0.2])
    arccosh = math.acosh(1 + np.sum((x - y) ** 2) / (2 * x[1] * y[1]))
    assert qh_closed_form(d, x, y) == pytest.approx(arccosh, rel=1e-13)


def test_qh_distance_examples():
    cfg = SolverConfig(use_closed_form=False)
    r = qh_distance(HalfPlane(), (0.0, 1.0), (0.0, math.e), cfg)
    assert abs(r.upper - 1.0) <= 0.01
    r = qh_distance(PuncturedPlane(), (1.0, 0.0), (-1.0, 0.0), cfg)
    assert abs(r.upper - math.pi) / math.pi <= 0.01
    r = qh_distance(Disk(), (0.1, 0.2), (0.1, 0.2))
    assert r.lower == r.upper == 0.0


def test_closed_form_bracket_is_exact_and_tight():
    r = qh_distance(PuncturedPlane(), (1.0, 0.0), (-1.0, 0.0))
    assert r.exact
    assert r.lower == pytest.approx(math.pi, abs=1e-15)
    assert r.lower <= r.upper <= r.lower * (1 + 1e-4)
    assert r.upper == pytest.approx(qh_length(PuncturedPlane(), r.path), rel=1e-12)


@pytest.mark.parametrize("d", [Disk(), SlitDisk(), Punctured(Disk(), [(0.3, 0.2)])])
def test_result_invariants(d):
    P = sample_interior(d, 4, 12, 0.02)
    for x, y in zip(P[::2], P[1::2]):
        r = qh_distance(d, x, y)
        assert isinstance(r, MetricResult)
        assert 0 <= r.lower <= r.upper
        assert r.lower >= j_distance(d, x, y) - 1e-12
        assert r.upper == pytest.approx(qh_length(d, r.path), rel=1e-12)
        assert np.array_equal(r.path.start, x) and np.array_equal(r.path.end, y)


def test_lower_bound_log_ratio_term():
    d = HalfPlane()
    assert lower_bound(d, (0.0, 1.0), (0.0, 10.0)) == pytest.approx(math.log(10.0))


def test_brackets_overlap_under_swap():
    d = SlitDisk()
    x, y = (0.4, 0.3), (0.3, -0.4)
    a, b = qh_distance(d, x, y), qh_distance(d, y, x)
    assert max(a.lower, b.lower) <= min(a.upper, b.upper)


def test_domain_monotonicity():
    d = Disk()
    d1 = Punctured(d, [(0.05, 0.0)])
    x, y = (-0.5, 0.01), (0.5, -0.02)
    assert j_distance(d1, x, y) >= j_distance(d, x, y)
    assert qh_distance(d1, x, y).upper >= qh_distance(d, x, y).lower


def test_refinement_does_not_increase_upper():
    d = SlitDisk()
    x, y = (0.5, 0.05), (0.5, -0.05)
    uppers = [qh_distance(d, x, y, SolverConfig(max_refinements=m, relative_tolerance=1e-6)).upper
              for m in range(4)]
    assert all(b <= a + 1e-12 for a, b in zip(uppers, uppers[1:]))


def test_similarity_invariance_of_solver():
    x, y = np.array([0.2, 0.5]), np.array([-0.4, -0.3])
    a = qh_distance(SlitDisk(), x, y)
    # the same configuration scaled by 3, rotated a quarter turn and shifted
    rot = lambda p: 3 * np.array([-p[1], p[0]]) + [1.0, 2.0]
    b = qh_distance(SlitDisk((1.0, 2.0), 3.0, (0.0, 1.0)), rot(x), rot(y))
    assert b.upper == pytest.approx(a.upper, rel=1e-9)


def test_solver_config_validation():
    with pytest.raises(PreconditionError):
        SolverConfig(relative_tolerance=0.0)
    with pytest.raises(PreconditionError):
        SolverConfig(knn_edges=0)
    assert SolverConfig().replace(max_refinements=2).max_refinements == 2


def test_result_serializes():
    r = qh_distance(HalfPlane(), (0.0, 1.0), (1.0, 1.0))
    doc = r.to_dict()
    assert set(doc) == {"lower", "upper", "refinement_level", "exact", "path"}
    assert doc["path"][0] == [0.0, 1.0]
