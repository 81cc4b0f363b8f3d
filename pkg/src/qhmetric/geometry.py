"""Planar domain catalog.

Every domain answers four questions in closed form: is a point inside, how far
is it from the boundary, can two interior points see each other, and what is
the smallest boundary distance along a segment.  All of them are vectorized
over ``(n, 2)`` arrays because the quasihyperbolic density ``1/d`` is evaluated
millions of times by the solver.

Points on a slit, on a puncture, or on the outer boundary (within ``TOL``) are
outside.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DocumentError, PreconditionError, SamplingError
from .validation import (check_point, fmt_point, check_points, check_random_state,
                         check_scalar, check_unit_vector)

TOL = 1e-12

Box = tuple  # (xmin, ymin, xmax, ymax)


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def point_segment_distance(P, a, b):
    """Distances from points ``P`` (n, 2) to the closed segment [a, b].

    Returns ``(dist, diff)`` with ``diff = P - nearest point``.
    """
    a = np.asarray(a, dtype=float)
    ab = np.asarray(b, dtype=float) - a
    denom = ab @ ab
    if denom == 0.0:
        diff = P - a
    else:
        t = np.clip(((P - a) @ ab) / denom, 0.0, 1.0)
        diff = P - (a + t[:, None] * ab)
    return np.hypot(diff[:, 0], diff[:, 1]), diff


def segments_point_distance(A, B, q):
    """Distance from the point ``q`` to each segment [A_i, B_i]."""
    q = np.asarray(q, dtype=float)
    AB = B - A
    denom = np.einsum("ij,ij->i", AB, AB)
    safe = np.where(denom > 0, denom, 1.0)
    t = np.clip(np.einsum("ij,ij->i", q - A, AB) / safe, 0.0, 1.0)
    t = np.where(denom > 0, t, 0.0)
    diff = q - (A + t[:, None] * AB)
    return np.hypot(diff[:, 0], diff[:, 1])


def segments_segment_distance(A, B, p, q):
    """Distance between each segment [A_i, B_i] and the fixed segment [p, q]."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    AB = B - A
    pq = q - p
    o1 = _cross(AB, p - A)
    o2 = _cross(AB, q - A)
    o3 = _cross(pq, A - p)
    o4 = _cross(pq, B - p)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
    d = np.minimum(point_segment_distance(A, p, q)[0], point_segment_distance(B, p, q)[0])
    d = np.minimum(d, segments_point_distance(A, B, p))
    d = np.minimum(d, segments_point_distance(A, B, q))
    return np.where(crossing, 0.0, d)


def _properly_cross(A, B, p, q, eps=1e-14):
    # Strict interior crossing only; touching and collinear overlap do not count.
    AB = B - A
    pq = np.asarray(q, float) - np.asarray(p, float)
    o1 = _cross(AB, p - A)
    o2 = _cross(AB, q - A)
    o3 = _cross(pq, A - p)
    o4 = _cross(pq, B - p)
    return (o1 * o2 < -eps) & (o3 * o4 < -eps)


def _as_pair(p):
    p = check_point(p)
    return (float(p[0]), float(p[1]))


def _as_pairs(P):
    return tuple(_as_pair(p) for p in P)


class Frame:
    """Orientation-preserving similarity ``z -> s * z + t`` on complex coordinates."""

    def __init__(self, s=1.0 + 0j, t=0.0 + 0j):
        self.s = complex(s)
        self.t = complex(t)

    def apply(self, P):
        P = np.asarray(P, dtype=float)
        z = self.s * (P[..., 0] + 1j * P[..., 1]) + self.t
        return np.stack([z.real, z.imag], axis=-1)

    def invert(self, P):
        P = np.asarray(P, dtype=float)
        z = ((P[..., 0] + 1j * P[..., 1]) - self.t) / self.s
        return np.stack([z.real, z.imag], axis=-1)

    def then(self, other):
        """Frame applying ``self`` first, then ``other``."""
        return Frame(other.s * self.s, other.s * self.t + other.t)


class Domain:
    """Base class of the catalog; concrete variants are frozen dataclasses."""

    variant = "domain"
    bounded = True

    # --- vectorized primitives, overridden per variant ---
    def distance(self, P):
        """Unsigned distance from each row of ``P`` to the boundary set."""
        raise NotImplementedError

    def distance_grad(self, P):
        """``(distance, gradient)``; the gradient is that of the active component."""
        raise NotImplementedError

    def contains_many(self, P):
        raise NotImplementedError

    def visible_many(self, A, B):
        """Whether each open segment (A_i, B_i) avoids the boundary; endpoints assumed inside."""
        raise NotImplementedError

    def segment_min_distance(self, A, B):
        """Lower bound (exact minimum) of the boundary distance along each segment."""
        raise NotImplementedError

    def bbox(self) -> Optional[Box]:
        raise NotImplementedError

    @property
    def scale(self):
        box = self.bbox()
        if box is None:
            raise PreconditionError(f"{self.variant} domain has no computation box")
        return 0.5 * min(box[2] - box[0], box[3] - box[1])

    @property
    def punctures(self):
        return ()

    def obstacles(self):
        """Boundary segments that block Euclidean paths (slits and polygon edges)."""
        return ()

    def canonical(self):
        """``(domain, frame)`` such that ``frame.apply`` maps self onto ``domain`` by a similarity."""
        return self, Frame()

    def to_dict(self):
        raise NotImplementedError

    # --- scalar conveniences ---
    def contains(self, p):
        return bool(self.contains_many(check_point(p)[None, :])[0])


def _circle_distance_grad(P, c, r):
    v = P - np.asarray(c)
    rho = np.hypot(v[:, 0], v[:, 1])
    safe = np.where(rho > 0, rho, 1.0)
    grad = -v / safe[:, None]
    grad[rho == 0] = 0.0
    signed = r - rho
    sign = np.where(signed >= 0, 1.0, -1.0)
    return np.abs(signed), grad * sign[:, None]


@dataclass(frozen=True)
class Disk(Domain):
    center: tuple = (0.0, 0.0)
    radius: float = 1.0

    variant = "disk"

    def __post_init__(self):
        object.__setattr__(self, "center", _as_pair(self.center))
        object.__setattr__(self, "radius", float(check_scalar(self.radius, "radius", min_val=0, include_min=False)))

    def distance(self, P):
        v = P - np.asarray(self.center)
        return np.abs(self.radius - np.hypot(v[:, 0], v[:, 1]))

    def distance_grad(self, P):
        return _circle_distance_grad(P, self.center, self.radius)

    def contains_many(self, P):
        v = P - np.asarray(self.center)
        return np.hypot(v[:, 0], v[:, 1]) < self.radius - TOL

    def visible_many(self, A, B):
        return np.ones(len(A), dtype=bool)

    def segment_min_distance(self, A, B):
        # r - |p - c| is concave along a chord, so the minimum sits at an endpoint.
        return np.minimum(self.distance(A), self.distance(B))

    def bbox(self):
        (cx, cy), r = self.center, self.radius
        return (cx - r, cy - r, cx + r, cy + r)

    @property
    def scale(self):
        return self.radius

    def canonical(self):
        c = complex(*self.center)
        return Disk(), Frame(1.0 / self.radius, -c / self.radius)

    def to_dict(self):
        return {"variant": self.variant, "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class HalfPlane(Domain):
    """The open half-plane ``{p : normal . p > offset}``."""

    normal: tuple = (0.0, 1.0)
    offset: float = 0.0
    box: Optional[tuple] = None

    variant = "half_plane"
    bounded = False

    def __post_init__(self):
        n = check_unit_vector(self.normal, "normal")
        object.__setattr__(self, "normal", (float(n[0]), float(n[1])))
        object.__setattr__(self, "offset", float(self.offset))
        if self.box is not None:
            object.__setattr__(self, "box", _check_box(self.box))

    def _height(self, P):
        return P @ np.asarray(self.normal) - self.offset

    def distance(self, P):
        return np.abs(self._height(P))

    def distance_grad(self, P):
        h = self._height(P)
        sign = np.where(h >= 0, 1.0, -1.0)
        return np.abs(h), sign[:, None] * np.asarray(self.normal)[None, :]

    def contains_many(self, P):
        return self._height(P) > TOL

    def visible_many(self, A, B):
        return np.ones(len(A), dtype=bool)

    def segment_min_distance(self, A, B):
        return np.minimum(self.distance(A), self.distance(B))

    def bbox(self):
        return self.box

    def canonical(self):
        n = complex(*self.normal)
        rot = 1j * n.conjugate()
        return HalfPlane(), Frame(rot, -rot * self.offset * n)

    def to_dict(self):
        out = {"variant": self.variant, "normal": list(self.normal), "offset": self.offset}
        if self.box is not None:
            out["box"] = list(self.box)
        return out


def _check_box(box):
    box = tuple(float(v) for v in box)
    if len(box) != 4 or not (box[0] < box[2] and box[1] < box[3]):
        raise PreconditionError(f"box must be (xmin, ymin, xmax, ymax) with positive extent, got {box}", "box")
    return box


def _points_distance_grad(P, pts):
    Q = np.asarray(pts, dtype=float)
    if len(Q) == 1:
        v = P - Q[0]
        r = np.hypot(v[:, 0], v[:, 1])
    else:
        V = P[:, None, :] - Q[None, :, :]
        R = np.hypot(V[..., 0], V[..., 1])
        idx = np.argmin(R, axis=1)
        rows = np.arange(len(P))
        r, v = R[rows, idx], V[rows, idx]
    safe = np.where(r > 0, r, 1.0)
    return r, v / safe[:, None]


def _points_segment_min(A, B, pts):
    out = np.full(len(A), np.inf)
    for q in pts:
        out = np.minimum(out, segments_point_distance(A, B, q))
    return out


@dataclass(frozen=True)
class PuncturedPlane(Domain):
    punctures: tuple = ((0.0, 0.0),)
    box: Optional[tuple] = None

    variant = "punctured_plane"
    bounded = False

    def __post_init__(self):
        pts = _as_pairs(self.punctures)
        if not pts:
            raise PreconditionError("punctured plane needs at least one puncture", "punctures")
        object.__setattr__(self, "punctures", pts)
        if self.box is not None:
            object.__setattr__(self, "box", _check_box(self.box))

    def distance(self, P):
        return _points_distance_grad(P, self.punctures)[0]

    def distance_grad(self, P):
        return _points_distance_grad(P, self.punctures)

    def contains_many(self, P):
        return self.distance(P) > TOL

    def visible_many(self, A, B):
        return _points_segment_min(A, B, self.punctures) > TOL

    def segment_min_distance(self, A, B):
        return _points_segment_min(A, B, self.punctures)

    def bbox(self):
        return self.box

    def canonical(self):
        if len(self.punctures) != 1:
            return self, Frame()
        q = complex(*self.punctures[0])
        return PuncturedPlane(), Frame(1.0, -q)

    def to_dict(self):
        out = {"variant": self.variant, "punctures": [list(q) for q in self.punctures]}
        if self.box is not None:
            out["box"] = list(self.box)
        return out


@dataclass(frozen=True)
class SlitDisk(Domain):
    """Disk minus the radial segment from its center to the circle along ``direction``."""

    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    direction: tuple = (1.0, 0.0)

    variant = "slit_disk"

    def __post_init__(self):
        object.__setattr__(self, "center", _as_pair(self.center))
        object.__setattr__(self, "radius", float(check_scalar(self.radius, "radius", min_val=0, include_min=False)))
        u = check_unit_vector(self.direction)
        object.__setattr__(self, "direction", (float(u[0]), float(u[1])))

    @property
    def slit(self):
        c = np.asarray(self.center)
        return c, c + self.radius * np.asarray(self.direction)

    def obstacles(self):
        return (self.slit,)

    def distance(self, P):
        return self.distance_grad(P)[0]

    def distance_grad(self, P):
        d, g = _circle_distance_grad(P, self.center, self.radius)
        ds, diff = point_segment_distance(P, *self.slit)
        upd = ds < d
        safe = np.where(ds > 0, ds, 1.0)
        g[upd] = diff[upd] / safe[upd, None]
        return np.where(upd, ds, d), g

    def contains_many(self, P):
        v = P - np.asarray(self.center)
        inside = np.hypot(v[:, 0], v[:, 1]) < self.radius - TOL
        return inside & (point_segment_distance(P, *self.slit)[0] > TOL)

    def visible_many(self, A, B):
        return segments_segment_distance(A, B, *self.slit) > TOL

    def segment_min_distance(self, A, B):
        circ = np.minimum(Disk.distance(self, A), Disk.distance(self, B))
        return np.minimum(circ, segments_segment_distance(A, B, *self.slit))

    def bbox(self):
        return Disk.bbox(self)

    @property
    def scale(self):
        return self.radius

    def canonical(self):
        c = complex(*self.center)
        u = complex(*self.direction)
        s = u.conjugate() / self.radius
        return SlitDisk(), Frame(s, -s * c)

    def to_dict(self):
        return {"variant": self.variant, "center": list(self.center), "radius": self.radius,
                "direction": list(self.direction)}


def _point_in_polygon(P, verts):
    x, y = P[:, 0], P[:, 1]
    inside = np.zeros(len(P), dtype=bool)
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        cond = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xcross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= cond & (x < xcross)
    return inside


@dataclass(frozen=True)
class Polygon(Domain):
    """Interior of a simple polygon, minus optional interior slit segments and punctures."""

    vertices: tuple = ()
    slits: tuple = ()
    punctures: tuple = ()

    variant = "polygon"

    def __post_init__(self):
        verts = _as_pairs(self.vertices)
        if len(verts) < 3:
            raise PreconditionError("polygon needs at least three vertices", "vertices")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "slits", tuple((_as_pair(s[0]), _as_pair(s[1])) for s in self.slits))
        object.__setattr__(self, "punctures", _as_pairs(self.punctures))
        edges = self.edges
        n = len(edges)
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if segments_segment_distance(edges[i][0][None], edges[i][1][None], *edges[j])[0] <= TOL:
                    raise PreconditionError("polygon vertex loop is not simple", "vertices")

        def strictly_inside(P):
            P = np.asarray(P, dtype=float)
            dist = np.min([point_segment_distance(P, a, b)[0] for a, b in edges], axis=0)
            return _point_in_polygon(P, verts) & (dist > TOL)

        for a, b in self.slits:
            A, B = np.array([a]), np.array([b])
            clear = min(segments_segment_distance(A, B, e0, e1)[0] for e0, e1 in edges) > TOL
            if not (strictly_inside([a, b]).all() and clear):
                raise PreconditionError(f"slit {a}-{b} is not strictly inside the polygon", "slits")
        if self.punctures and not strictly_inside(self.punctures).all():
            raise PreconditionError("every puncture must lie strictly inside the polygon", "punctures")

    @property
    def edges(self):
        v = [np.asarray(p) for p in self.vertices]
        return tuple((v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    def obstacles(self):
        return self.edges + tuple((np.asarray(a), np.asarray(b)) for a, b in self.slits)

    def distance(self, P):
        return self.distance_grad(P)[0]

    def distance_grad(self, P):
        best = np.full(len(P), np.inf)
        grad = np.zeros_like(P)
        for a, b in self.obstacles():
            d, diff = point_segment_distance(P, a, b)
            upd = d < best
            best = np.where(upd, d, best)
            safe = np.where(d > 0, d, 1.0)
            grad[upd] = diff[upd] / safe[upd, None]
        if self.punctures:
            d, g = _points_distance_grad(P, self.punctures)
            upd = d < best
            best = np.where(upd, d, best)
            grad[upd] = g[upd]
        # gradients point away from the boundary only for interior points
        inside = _point_in_polygon(P, self.vertices)
        grad[~inside] *= -1.0
        return best, grad

    def contains_many(self, P):
        return _point_in_polygon(P, self.vertices) & (self.distance(P) > TOL)

    def visible_many(self, A, B):
        return self.segment_min_distance(A, B) > TOL

    def segment_min_distance(self, A, B):
        out = np.full(len(A), np.inf)
        for a, b in self.obstacles():
            out = np.minimum(out, segments_segment_distance(A, B, a, b))
        if self.punctures:
            out = np.minimum(out, _points_segment_min(A, B, self.punctures))
        return out

    def bbox(self):
        v = np.asarray(self.vertices)
        return (float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max()))

    def to_dict(self):
        return {"variant": self.variant, "vertices": [list(v) for v in self.vertices],
                "slits": [[list(a), list(b)] for a, b in self.slits],
                "punctures": [list(q) for q in self.punctures]}


@dataclass(frozen=True)
class Punctured(Domain):
    """``base`` with a finite set of interior points removed."""

    base: Domain = None
    removed: tuple = ()

    variant = "punctured"

    def __post_init__(self):
        if not isinstance(self.base, Domain):
            raise PreconditionError("punctured domain needs a base domain", "base")
        pts = _as_pairs(self.removed)
        if pts and not self.base.contains_many(np.asarray(pts)).all():
            raise PreconditionError("every removed point must lie inside the base domain", "removed")
        object.__setattr__(self, "removed", pts)

    @property
    def bounded(self):
        return self.base.bounded

    @property
    def punctures(self):
        return tuple(self.base.punctures) + self.removed

    def obstacles(self):
        return self.base.obstacles()

    def distance(self, P):
        d = self.base.distance(P)
        if self.removed:
            d = np.minimum(d, _points_distance_grad(P, self.removed)[0])
        return d

    def distance_grad(self, P):
        d, g = self.base.distance_grad(P)
        if self.removed:
            dp, gp = _points_distance_grad(P, self.removed)
            upd = dp < d
            d = np.where(upd, dp, d)
            g[upd] = gp[upd]
        return d, g

    def contains_many(self, P):
        ok = self.base.contains_many(P)
        if self.removed:
            ok &= _points_distance_grad(P, self.removed)[0] > TOL
        return ok

    def visible_many(self, A, B):
        ok = self.base.visible_many(A, B)
        if self.removed:
            ok &= _points_segment_min(A, B, self.removed) > TOL
        return ok

    def segment_min_distance(self, A, B):
        d = self.base.segment_min_distance(A, B)
        if self.removed:
            d = np.minimum(d, _points_segment_min(A, B, self.removed))
        return d

    def bbox(self):
        return self.base.bbox()

    @property
    def scale(self):
        return self.base.scale

    def canonical(self):
        base, frame = self.base.canonical()
        return Punctured(base, _as_pairs(frame.apply(np.asarray(self.removed)))), frame

    def to_dict(self):
        return {"variant": self.variant, "base": self.base.to_dict(),
                "removed": [list(q) for q in self.removed]}


# ---------------------------------------------------------------------------
# operations


def contains(d: Domain, p) -> bool:
    return d.contains(p)


def _require_inside(d, p, name="point"):
    p = check_point(p, name)
    if not d.contains_many(p[None, :])[0]:
        raise PreconditionError(f"{name} {fmt_point(p)} is not in the {d.variant} domain")
    return p


def boundary_distance(d: Domain, p) -> float:
    p = _require_inside(d, p)
    return float(d.distance(p[None, :])[0])


def segment_visible(d: Domain, a, b) -> bool:
    a = _require_inside(d, a, "a")
    b = _require_inside(d, b, "b")
    if np.array_equal(a, b):
        return True
    return bool(d.visible_many(a[None, :], b[None, :])[0])


def sample_interior(d: Domain, seed, n, margin, box=None, max_draws=None):
    """Draw ``n`` points with ``boundary_distance >= margin * d.scale``.

    Unbounded domains need ``box`` (or a box attached to the domain).
    """
    check_scalar(n, "n", min_val=0, target_type=int)
    check_scalar(margin, "margin", min_val=0, max_val=1, include_min=False, include_max=False)
    if n == 0:
        return np.empty((0, 2))
    box = _check_box(box) if box is not None else d.bbox()
    if box is None:
        raise PreconditionError(f"sampling the unbounded {d.variant} domain requires a box")
    scale = d.scale if d.bbox() is not None else 0.5 * min(box[2] - box[0], box[3] - box[1])
    floor = margin * scale
    rng = check_random_state(seed)
    cap = max_draws if max_draws is not None else 1000 * n + 10_000
    out, drawn = [], 0
    while len(out) < n:
        if drawn >= cap:
            raise SamplingError(f"drew {drawn} candidates but accepted only {len(out)} of {n}")
        m = min(max(2 * (n - len(out)), 64), cap - drawn)
        P = rng.uniform(box[:2], box[2:], size=(m, 2))
        drawn += m
        ok = d.contains_many(P)
        ok[ok] = d.distance(P[ok]) >= floor
        out.extend(P[ok])
    return np.asarray(out[:n])


def inner_distance(d: Domain, x, y) -> float:
    """Length of the shortest path from x to y in the closure of ``d``.

    Slits and polygon edges block paths; punctures do not change the infimum.
    The visibility test is deliberately permissive (touching is allowed), so
    the value never exceeds the true inner distance.
    """
    x = check_point(x, "x")
    y = check_point(y, "y")
    obstacles = d.obstacles()
    direct = float(np.hypot(*(x - y)))
    if not obstacles or _closure_visible(d, x, y, obstacles):
        return direct
    nodes = [x, y]
    for a, b in obstacles:
        for v in (a, b):
            if not any(np.array_equal(v, w) for w in nodes):
                nodes.append(np.asarray(v, dtype=float))
    n = len(nodes)
    dist = [np.inf] * n
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        if u == 1:
            return du
        for v in range(1, n):
            if v == u:
                continue
            w = float(np.hypot(*(nodes[u] - nodes[v])))
            if du + w < dist[v] and _closure_visible(d, nodes[u], nodes[v], obstacles):
                dist[v] = du + w
                heapq.heappush(heap, (dist[v], v))
    return direct


def _closure_visible(d, u, v, obstacles):
    A, B = u[None, :], v[None, :]
    for a, b in obstacles:
        if _properly_cross(A, B, a, b)[0]:
            return False
    base = d
    while isinstance(base, Punctured):
        base = base.base
    if isinstance(base, Polygon):
        mid = 0.5 * (u + v)[None, :]
        return bool(_point_in_polygon(mid, base.vertices)[0] or base.distance(mid)[0] <= 1e-9)
    return True


# ---------------------------------------------------------------------------
# documents

_VARIANTS = {}


def _register(cls):
    _VARIANTS[cls.variant] = cls
    return cls


for _cls in (Disk, HalfPlane, PuncturedPlane, SlitDisk, Polygon, Punctured):
    _register(_cls)


def _field(doc, key, default=..., where="domain"):
    if key in doc:
        return doc[key]
    if default is ...:
        raise DocumentError(f"{where} document is missing field '{key}'", field=key)
    return default


def domain_from_dict(doc) -> Domain:
    """Parse a domain document; the inverse of ``Domain.to_dict``."""
    if not isinstance(doc, dict):
        raise DocumentError("domain document must be a JSON object", field="variant")
    variant = _field(doc, "variant")
    try:
        if variant == "disk":
            return Disk(_field(doc, "center", (0.0, 0.0)), _field(doc, "radius", 1.0))
        if variant == "half_plane":
            return HalfPlane(_field(doc, "normal", (0.0, 1.0)), _field(doc, "offset", 0.0),
                             _field(doc, "box", None))
        if variant == "punctured_plane":
            return PuncturedPlane(_field(doc, "punctures", ((0.0, 0.0),)), _field(doc, "box", None))
        if variant == "slit_disk":
            return SlitDisk(_field(doc, "center", (0.0, 0.0)), _field(doc, "radius", 1.0),
                            _field(doc, "direction", (1.0, 0.0)))
        if variant == "polygon":
            return Polygon(_field(doc, "vertices"), _field(doc, "slits", ()), _field(doc, "punctures", ()))
        if variant == "punctured":
            return Punctured(domain_from_dict(_field(doc, "base")), _field(doc, "removed", ()))
    except DocumentError:
        raise
    except (PreconditionError, TypeError, ValueError, IndexError) as exc:
        raise DocumentError(f"invalid {variant} parameters: {exc}",
                            field=getattr(exc, "param", None) or variant) from exc
    raise DocumentError(f"unknown domain variant {variant!r}", field="variant")


def domain_to_dict(d: Domain) -> dict:
    return d.to_dict()
