import json
import math

import numpy as np
import pytest

from qhmetric.errors import DocumentError, PreconditionError, SamplingError
from qhmetric.geometry import (Disk, HalfPlane, Polygon, Punctured, PuncturedPlane, SlitDisk,
                               boundary_distance, contains, domain_from_dict, domain_to_dict,
                               inner_distance, sample_interior, segment_visible)


def test_contains_examples():
    assert contains(Disk(), (0.5, 0.5))
    assert not contains(SlitDisk(), (0.5, 0.0))
    assert contains(PuncturedPlane(), (3.0, 4.0))


def test_contains_rejects_boundary_and_punctures():
    assert not contains(Disk(), (1.0, 0.0))
    assert not contains(PuncturedPlane(), (0.0, 0.0))
    assert not contains(SlitDisk(), (0.0, 0.0))
    assert not contains(HalfPlane(), (5.0, 0.0))
    assert not contains(Punctured(Disk(), [(0.2, 0.1)]), (0.2, 0.1))
    # a point within the absolute tolerance of the slit is outside
    assert not contains(SlitDisk(), (0.5, 1e-13))
    assert contains(SlitDisk(), (0.5, 1e-9))


def test_boundary_distance_examples():
    assert boundary_distance(Disk(), (0.0, 0.0)) == 1.0
    assert boundary_distance(SlitDisk(), (0.5, 0.01)) == pytest.approx(0.01, abs=1e-15)
    assert boundary_distance(PuncturedPlane(), (3.0, 4.0)) == 5.0


def test_boundary_distance_outside_raises():
    with pytest.raises(PreconditionError):
        boundary_distance(Disk(), (2.0, 0.0))


def test_boundary_distance_slit_disk_beyond_tip_and_behind_center():
    d = SlitDisk()
    # behind the center the nearest slit point is the center itself
    assert boundary_distance(d, (-0.3, 0.0)) == pytest.approx(0.3)
    assert boundary_distance(d, (-0.9, 0.0)) == pytest.approx(0.1)


def test_segment_visible_examples():
    assert not segment_visible(SlitDisk(), (0.5, 0.1), (0.5, -0.1))
    assert segment_visible(Disk(), (-0.9, 0.0), (0.0, 0.9))
    assert not segment_visible(PuncturedPlane(), (-1.0, 0.0), (1.0, 0.0))
    assert segment_visible(SlitDisk(), (-0.5, 0.1), (-0.5, -0.1))


def test_half_plane_general_normal():
    d = HalfPlane((1.0, 1.0), math.sqrt(2.0))
    assert contains(d, (2.0, 2.0))
    assert not contains(d, (0.0, 0.0))
    assert boundary_distance(d, (2.0, 2.0)) == pytest.approx(math.sqrt(2.0))


def test_polygon_distance_and_visibility():
    sq = Polygon([(0, 0), (2, 0), (2, 2), (0, 2)], slits=[((1.0, 0.5), (1.0, 1.5))], punctures=[(0.5, 0.5)])
    assert boundary_distance(sq, (1.5, 1.0)) == pytest.approx(0.5)
    assert boundary_distance(sq, (0.5, 0.6)) == pytest.approx(0.1)
    assert not segment_visible(sq, (0.5, 1.0), (1.5, 1.0))
    assert not contains(sq, (1.0, 1.0))
    assert not contains(sq, (3.0, 1.0))


def test_polygon_nonconvex_visibility():
    L = Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
    # the first chord grazes the reflex corner (1, 1)
    assert not segment_visible(L, (1.5, 0.5), (0.5, 1.5))
    assert not segment_visible(L, (1.8, 0.8), (0.8, 1.8))
    assert not segment_visible(L, (1.8, 0.5), (0.5, 1.8))
    assert segment_visible(L, (0.5, 0.5), (0.5, 1.8))


def test_polygon_rejects_bad_input():
    with pytest.raises(PreconditionError):
        Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
    with pytest.raises(PreconditionError):
        Polygon([(0, 0), (1, 0), (1, 1)], punctures=[(5, 5)])


def test_punctured_distance_is_min_of_parts():
    base = Disk()
    q = (0.3, 0.2)
    d = Punctured(base, [q])
    P = sample_interior(d, 5, 200, 0.01)
    expect = np.minimum(base.distance(P), np.hypot(*(P - q).T))
    assert np.allclose(d.distance(P), expect, rtol=0, atol=0)


def test_punctured_requires_interior_points():
    with pytest.raises(PreconditionError):
        Punctured(Disk(), [(2.0, 0.0)])


def test_sample_interior_examples():
    P = sample_interior(Disk(), 7, 3, 0.01)
    assert P.shape == (3, 2)
    assert len({tuple(p) for p in P}) == 3
    assert Disk().contains_many(P).all()
    assert sample_interior(Disk(), 7, 0, 0.01).shape == (0, 2)


def test_sample_interior_is_deterministic_and_respects_margin():
    d = SlitDisk()
    a = sample_interior(d, 11, 500, 0.05)
    b = sample_interior(d, 11, 500, 0.05)
    assert np.array_equal(a, b)
    assert d.contains_many(a).all()
    assert (d.distance(a) >= 0.05 * d.scale).all()


def test_sample_interior_unbounded_needs_box():
    with pytest.raises(PreconditionError):
        sample_interior(HalfPlane(), 0, 5, 0.01)
    P = sample_interior(HalfPlane(), 0, 5, 0.01, box=(-1, 0, 1, 1))
    assert (P[:, 1] > 0).all()


def test_sample_interior_cap():
    with pytest.raises(SamplingError):
        sample_interior(Disk(), 0, 10, 0.999, max_draws=200)


def test_distance_never_exceeds_distance_to_known_boundary_points():
    d = SlitDisk()
    P = sample_interior(d, 3, 300, 0.01)
    known = np.array([[1.0, 0.0], [0.0, 0.0], [0.5, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    dist = d.distance(P)
    for k in known:
        assert (dist <= np.hypot(*(P - k).T) + 1e-15).all()


def test_visible_segments_have_interior_quadrature_points():
    d = Punctured(SlitDisk(), [(-0.4, 0.3)])
    P = sample_interior(d, 9, 200, 0.01)
    A, B = P[:100], P[100:]
    vis = d.visible_many(A, B)
    t = np.linspace(0, 1, 17)[1:-1]
    for a, b in zip(A[vis], B[vis]):
        assert d.contains_many(a + t[:, None] * (b - a)).all()


def test_inner_distance_around_slit():
    d = SlitDisk()
    lam = inner_distance(d, (0.5, 0.1), (0.5, -0.1))
    assert lam == pytest.approx(2 * math.hypot(0.5, 0.1))
    assert inner_distance(Disk(), (0, 0), (0.3, 0.4)) == pytest.approx(0.5)


@pytest.mark.parametrize("d", [
    Disk((1.0, -2.0), 3.0),
    HalfPlane((0.0, 1.0), 0.5, (-1.0, 0.5, 1.0, 2.0)),
    PuncturedPlane([(0.0, 0.0), (1.0, 1.0)], (-3.0, -3.0, 3.0, 3.0)),
    SlitDisk((0.5, 0.5), 2.0, (0.0, 1.0)),
    Polygon([(0, 0), (2, 0), (2, 2), (0, 2)], [((1.0, 0.5), (1.0, 1.5))], [(0.5, 0.5)]),
    Punctured(SlitDisk(), [(-0.5, 0.0)]),
])
def test_document_round_trip(d):
    doc = json.loads(json.dumps(domain_to_dict(d)))
    assert domain_from_dict(doc) == d


def test_document_errors_name_the_field():
    with pytest.raises(DocumentError) as exc:
        domain_from_dict({"radius": 1.0})
    assert exc.value.field == "variant"
    with pytest.raises(DocumentError) as exc:
        domain_from_dict({"variant": "disk", "radius": -1.0})
    assert exc.value.field == "radius"
    with pytest.raises(DocumentError) as exc:
        domain_from_dict({"variant": "polygon"})
    assert exc.value.field == "vertices"
    with pytest.raises(DocumentError) as exc:
        domain_from_dict({"variant": "annulus"})
    assert exc.value.field == "variant"
