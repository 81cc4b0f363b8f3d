"""Explicit invertible maps between planar domains.

Points travel as ``(n, 2)`` float arrays; internally everything is done in
complex arithmetic.  ``apply``/``apply_inverse`` accept a single point or a
stack of points and return the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BranchError, DocumentError, PreconditionError, UnsupportedImageError
from .geometry import (Disk, Domain, HalfPlane, Polygon, Punctured, PuncturedPlane, SlitDisk,
                       domain_from_dict, _as_pair, _as_pairs, _field)
from .validation import check_point, check_points, fmt_point, check_scalar, check_unit_vector


def _to_complex(P):
    return P[..., 0] + 1j * P[..., 1]


def _to_xy(z):
    return np.stack([np.real(z), np.imag(z)], axis=-1).astype(float)


def _box_image(box, fn):
    if box is None:
        return None
    x0, y0, x1, y1 = box
    C = fn(np.array([[x0, y0], [x1, y0], [x0, y1], [x1, y1]], dtype=float))
    lo, hi = C.min(axis=0), C.max(axis=0)
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


class MapSpec:
    """Base class of the map catalog.  Subclasses implement the complex forward/inverse maps."""

    variant = "map"

    def source(self) -> Optional[Domain]:
        """Domain the map is defined on; ``None`` for the whole plane."""
        return None

    def target(self) -> Optional[Domain]:
        return None

    def _forward(self, z):
        raise NotImplementedError

    def _backward(self, w):
        raise NotImplementedError

    def _image(self, d):
        raise UnsupportedImageError(f"{self.variant} cannot represent the image of a {d.variant} domain")

    def to_dict(self):
        raise NotImplementedError


def _prepare(P, dom, name):
    single = np.ndim(P) == 1
    P = check_point(P, name)[None, :] if single else check_points(P, name)
    if dom is not None and len(P) and not dom.contains_many(P).all():
        bad = P[~dom.contains_many(P)][0]
        raise PreconditionError(f"{name} {fmt_point(bad)} is outside the {dom.variant} domain of the map")
    return P, single


def apply(m: MapSpec, p):
    P, single = _prepare(p, m.source(), "point")
    out = _to_xy(m._forward(_to_complex(P)))
    return out[0] if single else out


def apply_inverse(m: MapSpec, q):
    Q, single = _prepare(q, m.target(), "point")
    out = _to_xy(m._backward(_to_complex(Q)))
    return out[0] if single else out


def _image_points(m, pts):
    return _as_pairs(_to_xy(m._forward(_to_complex(np.asarray(pts, dtype=float).reshape(-1, 2)))))


def image_domain(m: MapSpec, d: Domain) -> Domain:
    """Catalog description of ``m(d)``; punctures are carried along pointwise."""
    if isinstance(d, Punctured):
        base = image_domain(m, d.base)
        return Punctured(base, _image_points(m, d.removed))
    return m._image(d)


@dataclass(frozen=True)
class Similarity(MapSpec):
    """``p -> scale * R(rotation) p + translation``."""

    scale: float = 1.0
    rotation: float = 0.0
    translation: tuple = (0.0, 0.0)

    variant = "similarity"

    def __post_init__(self):
        check_scalar(self.scale, "scale", min_val=0, include_min=False)
        check_scalar(self.rotation, "rotation")
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "rotation", float(self.rotation))
        object.__setattr__(self, "translation", _as_pair(self.translation))

    @property
    def _s(self):
        return self.scale * complex(math.cos(self.rotation), math.sin(self.rotation))

    def _forward(self, z):
        return self._s * z + complex(*self.translation)

    def _backward(self, w):
        return (w - complex(*self.translation)) / self._s

    def _pt(self, p):
        return _as_pair(_to_xy(self._forward(complex(*p))))

    def _image(self, d):
        s, fn = self._s, lambda P: _to_xy(self._forward(_to_complex(P)))
        rot = s / abs(s)
        if isinstance(d, Disk):
            return Disk(self._pt(d.center), self.scale * d.radius)
        if isinstance(d, SlitDisk):
            u = complex(*d.direction) * rot
            return SlitDisk(self._pt(d.center), self.scale * d.radius, (u.real, u.imag))
        if isinstance(d, HalfPlane):
            n = complex(*d.normal) * rot
            # a point on the boundary line maps onto the new boundary line
            p0 = complex(*d.normal) * d.offset
            q0 = self._forward(p0)
            offset = n.real * q0.real + n.imag * q0.imag
            return HalfPlane((n.real, n.imag), offset, _box_image(d.box, fn))
        if isinstance(d, PuncturedPlane):
            return PuncturedPlane(_image_points(self, d.punctures), _box_image(d.box, fn))
        if isinstance(d, Polygon):
            return Polygon(_image_points(self, d.vertices),
                           tuple(_image_points(self, s_) for s_ in d.slits),
                           _image_points(self, d.punctures) if d.punctures else ())
        return super()._image(d)

    def to_dict(self):
        return {"variant": self.variant, "scale": self.scale, "rotation": self.rotation,
                "translation": list(self.translation)}


@dataclass(frozen=True)
class RadialStretch(MapSpec):
    """``p -> center + scale * |u|^(K-1) u`` with ``u = (p - center) / scale``.

    Angles about the center are preserved and moduli are raised to the power K.
    """

    K: float = 2.0
    center: tuple = (0.0, 0.0)
    scale: float = 1.0

    variant = "radial_stretch"

    def __post_init__(self):
        check_scalar(self.K, "K", min_val=1.0)
        check_scalar(self.scale, "scale", min_val=0, include_min=False)
        object.__setattr__(self, "K", float(self.K))
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "center", _as_pair(self.center))

    def _power(self, z, K):
        c = complex(*self.center)
        u = (z - c) / self.scale
        r = np.abs(u)
        safe = np.where(r > 0, r, 1.0)
        return c + self.scale * np.where(r > 0, u * safe ** (K - 1.0), 0.0)

    def _forward(self, z):
        return self._power(z, self.K)

    def _backward(self, w):
        return self._power(w, 1.0 / self.K)

    def _image(self, d):
        c = self.center
        if isinstance(d, PuncturedPlane) and d.punctures == (c,):
            # the image of a box is not a box; use the square around the image of its farthest corner circle
            box = None
            if d.box is not None:
                far = max(math.hypot(x - c[0], y - c[1]) for x in d.box[::2] for y in d.box[1::2])
                R = self.scale * (far / self.scale) ** self.K
                box = (c[0] - R, c[1] - R, c[0] + R, c[1] + R)
            return PuncturedPlane((c,), box)
        if isinstance(d, Disk) and d.center == c:
            return Disk(c, self.scale * (d.radius / self.scale) ** self.K)
        if isinstance(d, SlitDisk) and d.center == c:
            return SlitDisk(c, self.scale * (d.radius / self.scale) ** self.K, d.direction)
        return super()._image(d)

    def to_dict(self):
        return {"variant": self.variant, "K": self.K, "center": list(self.center), "scale": self.scale}


def slit_chain_forward(z):
    """``g``: unit disk minus [0, 1) onto the unit disk.

    Square root with the cut along [0, 1) (upper half-disk), the Joukowski
    variant ``-(w + 1/w)/2`` (onto the upper half-plane) and the Cayley map.
    """
    z = np.asarray(z, dtype=complex)
    arg = np.angle(z)
    arg = np.where(arg < 0, arg + 2 * np.pi, arg)
    w1 = np.sqrt(np.abs(z)) * np.exp(0.5j * arg)
    w2 = -0.5 * (w1 + 1.0 / w1)
    return (w2 - 1j) / (w2 + 1j)


def slit_chain_backward(w3):
    """``g^{-1}``: unit disk onto the unit disk minus [0, 1)."""
    w3 = np.asarray(w3, dtype=complex)
    w2 = 1j * (1.0 + w3) / (1.0 - w3)
    root = np.sqrt(w2 * w2 - 1.0)
    a, b = -w2 + root, -w2 - root
    ma, mb = np.abs(a), np.abs(b)
    # the two roots multiply to 1, so exactly one is inside the unit circle unless both sit on it
    if np.any(np.isclose(ma, mb, rtol=0.0, atol=1e-14)):
        tie = np.isclose(ma, mb, rtol=0.0, atol=1e-14)
        if np.any(np.minimum(a.imag, b.imag)[tie] > 0) or np.any(np.maximum(a.imag, b.imag)[tie] <= 0):
            raise BranchError("Joukowski inverse has no root with |w| < 1 and Im w > 0")
    pick_a = np.where(np.isclose(ma, mb, rtol=0.0, atol=1e-14), a.imag > 0, ma < mb)
    w1 = np.where(pick_a, a, b)
    return w1 * w1


@dataclass(frozen=True)
class ConformalSlitChain(MapSpec):
    """Conformal map of the unit disk onto the unit disk slit along ``direction``."""

    direction: tuple = (1.0, 0.0)

    variant = "conformal_slit_chain"

    def __post_init__(self):
        u = check_unit_vector(self.direction)
        object.__setattr__(self, "direction", (float(u[0]), float(u[1])))

    @property
    def _u(self):
        return complex(*self.direction)

    def source(self):
        return Disk()

    def target(self):
        return SlitDisk((0.0, 0.0), 1.0, self.direction)

    def _forward(self, z):
        return self._u * slit_chain_backward(z)

    def _backward(self, w):
        return slit_chain_forward(np.conj(self._u) * w)

    def _image(self, d):
        if isinstance(d, Disk) and d == Disk():
            return self.target()
        return super()._image(d)

    def to_dict(self):
        return {"variant": self.variant, "direction": list(self.direction)}


@dataclass(frozen=True)
class Composition(MapSpec):
    """Apply ``maps[0]`` first, then ``maps[1]``, and so on."""

    maps: tuple = ()

    variant = "composition"

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps or not all(isinstance(m, MapSpec) for m in maps):
            raise PreconditionError("composition needs a non-empty sequence of maps")
        object.__setattr__(self, "maps", maps)

    def source(self):
        return self.maps[0].source()

    def target(self):
        return self.maps[-1].target()

    def _forward(self, z):
        for m in self.maps:
            z = m._forward(z)
        return z

    def _backward(self, w):
        for m in reversed(self.maps):
            w = m._backward(w)
        return w

    def _image(self, d):
        for m in self.maps:
            d = image_domain(m, d)
        return d

    def to_dict(self):
        return {"variant": self.variant, "maps": [m.to_dict() for m in self.maps]}


@dataclass(frozen=True)
class Restriction(MapSpec):
    """``base`` restricted to the sub-domain ``domain``."""

    base: MapSpec = None
    domain: Domain = None

    variant = "restriction"

    def __post_init__(self):
        if not isinstance(self.base, MapSpec) or not isinstance(self.domain, Domain):
            raise PreconditionError("restriction needs a base map and a domain")

    def source(self):
        return self.domain

    def target(self):
        return image_domain(self.base, self.domain)

    def _forward(self, z):
        return self.base._forward(z)

    def _backward(self, w):
        return self.base._backward(w)

    def _image(self, d):
        return image_domain(self.base, d)

    def to_dict(self):
        return {"variant": self.variant, "base": self.base.to_dict(), "domain": self.domain.to_dict()}


IDENTITY = Similarity()

COMPASS = np.exp(1j * np.pi / 4 * np.arange(8))


def local_bilipschitz_estimate(m: MapSpec, p, h) -> float:
    """Largest stretch or compression of ``m`` over eight compass steps of length ``h``."""
    p = check_point(p, "p")
    check_scalar(h, "h", min_val=0, include_min=False)
    src = m.source()
    if src is not None:
        if not src.contains(p):
            raise PreconditionError(f"p {fmt_point(p)} is outside the source domain")
        if h >= float(src.distance(p[None])[0]) / 4:
            raise PreconditionError("step h must be below a quarter of the boundary distance")
    z = complex(*p)
    fz = m._forward(np.array([z]))[0]
    steps = m._forward(z + h * COMPASS)
    ratio = np.abs(steps - fz) / h
    return float(np.max(np.maximum(ratio, 1.0 / ratio)))


def cauchy_riemann_residual(m: MapSpec, p, h=1e-6) -> float:
    """Relative mismatch between ``f_y`` and ``i f_x`` by central differences."""
    z = complex(*check_point(p, "p"))
    f = lambda q: m._forward(np.array([q]))[0]
    fx = (f(z + h) - f(z - h)) / (2 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    return float(abs(fy - 1j * fx) / max(abs(fx), 1e-300))


def map_from_dict(doc) -> MapSpec:
    """Parse a map document; the inverse of ``MapSpec.to_dict``."""
    if not isinstance(doc, dict):
        raise DocumentError("map document must be a JSON object", field="variant")
    variant = _field(doc, "variant", where="map")
    try:
        if variant == "similarity":
            return Similarity(_field(doc, "scale", 1.0, "map"), _field(doc, "rotation", 0.0, "map"),
                              _field(doc, "translation", (0.0, 0.0), "map"))
        if variant == "radial_stretch":
            return RadialStretch(_field(doc, "K", where="map"), _field(doc, "center", (0.0, 0.0), "map"),
                                 _field(doc, "scale", 1.0, "map"))
        if variant == "conformal_slit_chain":
            return ConformalSlitChain(_field(doc, "direction", (1.0, 0.0), "map"))
        if variant == "composition":
            maps = _field(doc, "maps", where="map")
            if not isinstance(maps, list):
                raise DocumentError("'maps' must be a list", field="maps")
            return Composition(tuple(map_from_dict(m) for m in maps))
        if variant == "restriction":
            return Restriction(map_from_dict(_field(doc, "base", where="map")),
                               domain_from_dict(_field(doc, "domain", where="map")))
    except DocumentError:
        raise
    except (PreconditionError, TypeError, ValueError, IndexError) as exc:
        raise DocumentError(f"invalid {variant} parameters: {exc}",
                            field=getattr(exc, "param", None) or variant) from exc
    raise DocumentError(f"unknown map variant {variant!r}", field="variant")


def map_to_dict(m: MapSpec) -> dict:
    return m.to_dict()
