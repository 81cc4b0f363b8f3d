import json
import math

import numpy as np
import pytest

from qhmetric.errors import BranchError, DocumentError, PreconditionError, UnsupportedImageError
from qhmetric.geometry import Disk, HalfPlane, Punctured, PuncturedPlane, SlitDisk, contains, sample_interior
from qhmetric.maps import (IDENTITY, Composition, ConformalSlitChain, RadialStretch, Restriction, Similarity,
                           apply, apply_inverse, cauchy_riemann_residual, image_domain,
                           local_bilipschitz_estimate, map_from_dict, map_to_dict, slit_chain_backward,
                           slit_chain_forward)

SIM = Similarity(2.0, 0.0, (1.0, 0.0))
CHAIN = ConformalSlitChain()


def test_similarity_examples():
    assert np.allclose(apply(SIM, (1.0, 1.0)), (3.0, 2.0), atol=1e-15)
    assert np.allclose(apply_inverse(SIM, (3.0, 2.0)), (1.0, 1.0), atol=1e-15)


def test_radial_stretch_examples():
    f = RadialStretch(2.0)
    assert np.allclose(apply(f, (2.0, 0.0)), (4.0, 0.0), atol=1e-15)
    assert np.allclose(apply_inverse(f, (4.0, 0.0)), (2.0, 0.0), atol=1e-15)
    q = apply(f, (0.0, 3.0))
    assert np.allclose(q, (0.0, 9.0), atol=1e-12)
    assert np.allclose(apply(f, (0.0, 0.0)), (0.0, 0.0))


def test_slit_chain_forward_value():
    assert slit_chain_forward(-0.25) == pytest.approx(-1 / 7, abs=1e-15)
    # the shipped map inverts it
    assert np.allclose(apply(CHAIN, (-1 / 7, 0.0)), (-0.25, 0.0), atol=1e-14)
    assert np.allclose(apply_inverse(CHAIN, (-0.25, 0.0)), (-1 / 7, 0.0), atol=1e-14)


def test_slit_chain_stages_by_hand():
    # each stage evaluated separately at an arbitrary point
    z = 0.3 - 0.4j
    w1 = np.sqrt(abs(z)) * np.exp(0.5j * (np.angle(z) + 2 * np.pi))
    assert w1.imag > 0 and abs(w1) < 1
    w2 = -(w1 + 1 / w1) / 2
    assert w2.imag > 0
    w3 = (w2 - 1j) / (w2 + 1j)
    assert slit_chain_forward(z) == pytest.approx(w3, abs=1e-14)


def test_slit_chain_round_trip():
    P = sample_interior(Disk(), 1, 1000, 0.001)
    Q = apply(CHAIN, P)
    assert np.max(np.abs(apply_inverse(CHAIN, Q) - P)) <= 1e-10
    S = sample_interior(SlitDisk(), 2, 1000, 0.001)
    assert np.max(np.abs(apply(CHAIN, apply_inverse(CHAIN, S)) - S)) <= 1e-10


@pytest.mark.parametrize("f, d", [
    (CHAIN, Disk()),
    (ConformalSlitChain((0.0, 1.0)), Disk()),
    (SIM, Disk((0.5, 0.5), 0.7)),
    (Similarity(0.5, 1.2, (-1.0, 2.0)), SlitDisk()),
    (RadialStretch(2.0), Disk()),
    (RadialStretch(3.0, (1.0, 1.0), 2.0), SlitDisk((1.0, 1.0), 2.0, (0.6, 0.8))),
])
def test_images_lie_in_image_domain(f, d):
    P = sample_interior(d, 3, 10_000, 1e-4)
    Q = apply(f, P)
    assert image_domain(f, d).contains_many(Q).all()


def test_image_domain_examples():
    assert image_domain(CHAIN, Disk()) == SlitDisk()
    assert image_domain(SIM, Disk((0.5, -1.0), 0.3)) == Disk((2.0, -2.0), 0.6)
    assert image_domain(RadialStretch(2.0), PuncturedPlane()) == PuncturedPlane()


def test_image_domain_carries_punctures():
    q = (-0.5, 0.0)
    img = image_domain(CHAIN, Punctured(Disk(), [tuple(apply_inverse(CHAIN, q))]))
    assert isinstance(img, Punctured)
    assert np.allclose(img.removed[0], q, atol=1e-12)


def test_image_domain_half_plane_similarity():
    f = Similarity(2.0, math.pi / 2, (1.0, 0.0))
    img = image_domain(f, HalfPlane())
    # upper half-plane rotated a quarter turn and shifted: x < 1
    assert img.contains((0.0, 5.0)) and not img.contains((2.0, 5.0))
    assert img.distance(np.array([[0.0, 5.0]]))[0] == pytest.approx(1.0)


def test_unsupported_image():
    with pytest.raises(UnsupportedImageError):
        image_domain(CHAIN, Disk((0.1, 0.0), 0.5))
    with pytest.raises(UnsupportedImageError):
        image_domain(RadialStretch(2.0), Disk((1.0, 0.0), 0.5))


def test_apply_outside_source_raises():
    with pytest.raises(PreconditionError):
        apply(CHAIN, (1.5, 0.0))
    with pytest.raises(PreconditionError):
        apply_inverse(CHAIN, (0.5, 0.0))


def test_branch_error_on_degenerate_input():
    # w3 = -i sends w2 to 1, a double Joukowski root at -1 with no upper branch
    with pytest.raises(BranchError):
        slit_chain_backward(np.array([-1j]))


def test_cauchy_riemann_residual():
    P = sample_interior(Disk(), 4, 50, 0.05)
    assert max(cauchy_riemann_residual(CHAIN, p) for p in P) <= 1e-6
    assert cauchy_riemann_residual(RadialStretch(2.0), (0.5, 0.5)) > 1e-2


def test_slit_sides_have_separated_preimages():
    seps = []
    for t in (1e-2, 1e-4, 1e-6, 1e-8):
        up = apply_inverse(CHAIN, (0.5, t))
        down = apply_inverse(CHAIN, (0.5, -t))
        seps.append(math.hypot(*(up - down)))
    assert min(seps) > 1.9
    assert abs(seps[-1] - seps[-2]) < 1e-3


def test_local_bilipschitz():
    assert local_bilipschitz_estimate(Similarity(2.0, 0.3, (1.0, 1.0)), (0.4, -0.2), 1e-4) == pytest.approx(2.0)
    assert local_bilipschitz_estimate(IDENTITY, (0.0, 0.0), 1e-3) == pytest.approx(1.0)
    assert local_bilipschitz_estimate(RadialStretch(2.0), (1.0, 0.0), 1e-5) == pytest.approx(2.0, rel=1e-4)
    with pytest.raises(PreconditionError):
        local_bilipschitz_estimate(CHAIN, (0.9, 0.0), 0.05)


def test_composition_and_restriction():
    f = Composition((CHAIN, Similarity(2.0)))
    p = np.array([0.3, 0.1])
    assert np.allclose(apply(f, p), 2 * apply(CHAIN, p))
    assert np.allclose(apply_inverse(f, apply(f, p)), p, atol=1e-12)
    assert image_domain(f, Disk()) == SlitDisk((0.0, 0.0), 2.0)
    sub = Punctured(Disk(), [(0.0, 0.0)])
    r = Restriction(CHAIN, sub)
    with pytest.raises(PreconditionError):
        apply(r, (0.0, 0.0))
    assert isinstance(r.target(), Punctured)


@pytest.mark.parametrize("f", [
    SIM, RadialStretch(1.5, (0.2, 0.0), 3.0), CHAIN, ConformalSlitChain((0.0, -1.0)),
    Composition((SIM, RadialStretch(2.0))), Restriction(CHAIN, Punctured(Disk(), [(0.1, 0.2)])),
])
def test_map_document_round_trip(f):
    assert map_from_dict(json.loads(json.dumps(map_to_dict(f)))) == f


def test_map_document_errors():
    with pytest.raises(DocumentError) as exc:
        map_from_dict({"variant": "radial_stretch", "K": 0.5})
    assert exc.value.field == "K"
    with pytest.raises(DocumentError) as exc:
        map_from_dict({"variant": "mobius"})
    assert exc.value.field == "variant"
    with pytest.raises(DocumentError):
        map_from_dict({"variant": "composition", "maps": "nope"})
