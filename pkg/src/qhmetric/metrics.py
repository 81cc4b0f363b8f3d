"""Distance ratio metric, quasihyperbolic length and bracketed quasihyperbolic distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _solver
from .errors import InvalidPathError, NoPathError, PreconditionError
from .geometry import (Domain, HalfPlane, Punctured, PuncturedPlane, inner_distance,
                       _require_inside)
from .validation import check_points, check_scalar, fmt_point

POLISH_SLACK = 0.08


class PathPolyline:
    """Ordered vertices of a polyline; exact consecutive duplicates are dropped."""

    def __init__(self, vertices):
        V = check_points(vertices, "vertices")
        if len(V) == 0:
            raise PreconditionError("a path needs at least one vertex")
        keep = np.ones(len(V), dtype=bool)
        keep[1:] = np.any(V[1:] != V[:-1], axis=1)
        self.vertices = V[keep]
        self.vertices.setflags(write=False)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"PathPolyline({len(self)} vertices)"

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def euclidean_length(self):
        return float(np.hypot(*np.diff(self.vertices, axis=0).T).sum())

    def reversed(self):
        return PathPolyline(self.vertices[::-1])

    def to_list(self):
        return self.vertices.tolist()


@dataclass(frozen=True)
class SolverConfig:
    initial_resolution: int = 32
    max_refinements: int = 4
    relative_tolerance: float = 0.01
    quadrature_points_per_edge: int = 8
    knn_edges: int = 12
    use_closed_form: bool = True
    polish: bool = True

    def __post_init__(self):
        for name in ("initial_resolution", "quadrature_points_per_edge", "knn_edges"):
            check_scalar(getattr(self, name), name, min_val=1, target_type=int)
        check_scalar(self.max_refinements, "max_refinements", min_val=0, target_type=int)
        check_scalar(self.relative_tolerance, "relative_tolerance", min_val=0, include_min=False)

    def replace(self, **changes):
        params = {**self.__dict__, **changes}
        return SolverConfig(**params)


@dataclass(frozen=True)
class MetricResult:
    """Bracket ``lower <= k_D(x, y) <= upper`` with a witness path of length ``upper``."""

    lower: float
    upper: float
    path: PathPolyline = field(repr=False)
    refinement_level: int = 0
    exact: bool = False

    @property
    def gap(self):
        return self.upper - self.lower

    @property
    def midpoint(self):
        return 0.5 * (self.lower + self.upper)

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper, "refinement_level": self.refinement_level,
                "exact": self.exact, "path": self.path.to_list()}


def j_distance(d: Domain, x, y) -> float:
    x = _require_inside(d, x, "x")
    y = _require_inside(d, y, "y")
    dist = float(np.hypot(*(x - y)))
    dx, dy = d.distance(np.stack([x, y]))
    return math.log1p(dist / min(dx, dy))


def _check_path(d, path):
    if not isinstance(path, PathPolyline):
        path = PathPolyline(path)
    V = path.vertices
    if not d.contains_many(V).all():
        raise InvalidPathError("path has a vertex outside the domain")
    if len(V) > 1 and not d.visible_many(V[:-1], V[1:]).all():
        bad = int(np.argmin(d.visible_many(V[:-1], V[1:])))
        raise InvalidPathError(f"edge {bad} of the path leaves the domain")
    return path


def edge_qh_lengths(d: Domain, path) -> np.ndarray:
    """Quasihyperbolic length of every edge of a valid path."""
    path = _check_path(d, path)
    return _solver.path_length_adaptive(d, path.vertices)


def qh_length(d: Domain, path, quadrature_points=8) -> float:
    """Integral of ``|dz| / d_D(z)`` along the polyline.

    Edges are split adaptively by the smallest boundary distance along them
    and each piece gets a Gauss-Legendre rule with ``quadrature_points`` nodes.
    """
    path = _check_path(d, path)
    if len(path) < 2:
        return 0.0
    return float(_solver.path_length_adaptive(d, path.vertices, m=quadrature_points).sum())


def _single_puncture(d):
    if isinstance(d, PuncturedPlane) and len(d.punctures) == 1:
        return np.asarray(d.punctures[0])
    return None


def qh_closed_form(d: Domain, x, y):
    """Exact ``k_D`` where a classical formula exists, else ``None``.

    Half-plane: the hyperbolic distance ``arccosh(1 + |x-y|^2 / (2 h_x h_y))``.
    Plane minus one point q: ``sqrt(theta^2 + log^2(|x-q| / |y-q|))`` with theta
    the angle at q in [0, pi].
    """
    x = _require_inside(d, x, "x")
    y = _require_inside(d, y, "y")
    if isinstance(d, HalfPlane):
        hx, hy = d.distance(np.stack([x, y]))
        dist = float(np.hypot(*(x - y)))
        return 2.0 * math.asinh(dist / (2.0 * math.sqrt(hx * hy)))
    q = _single_puncture(d)
    if q is not None:
        u, v = x - q, y - q
        theta = abs(math.atan2(u[0] * v[1] - u[1] * v[0], u @ v))
        logr = math.log(math.hypot(*u) / math.hypot(*v))
        return math.hypot(theta, logr)
    return None


def closed_form_geodesic(d: Domain, x, y, n=None):
    """Dense polyline along the true geodesic where ``qh_closed_form`` applies."""
    x = _require_inside(d, x, "x")
    y = _require_inside(d, y, "y")
    k = qh_closed_form(d, x, y)
    if k is None:
        return None
    n = n or int(min(4000, max(16, math.ceil(64 * k))))
    if isinstance(d, HalfPlane):
        dc, frame = d.canonical()
        a, b = frame.apply(x), frame.apply(y)
        if abs(a[0] - b[0]) <= 1e-14 * max(1.0, abs(a[0])):
            s = np.linspace(0.0, 1.0, n + 1)
            h = a[1] * (b[1] / a[1]) ** s
            P = np.stack([np.full_like(h, a[0]), h], axis=1)
        else:
            c = (b[0] ** 2 + b[1] ** 2 - a[0] ** 2 - a[1] ** 2) / (2.0 * (b[0] - a[0]))
            R = math.hypot(a[0] - c, a[1])
            pa = math.atan2(a[1], a[0] - c)
            pb = math.atan2(b[1], b[0] - c)
            # uniform in hyperbolic arclength: s = log tan(phi / 2)
            sa, sb = math.log(math.tan(pa / 2)), math.log(math.tan(pb / 2))
            phi = 2.0 * np.arctan(np.exp(np.linspace(sa, sb, n + 1)))
            P = np.stack([c + R * np.cos(phi), R * np.sin(phi)], axis=1)
        P[0], P[-1] = a, b
        return PathPolyline(frame.invert(P))
    q = _single_puncture(d)
    u, v = x - q, y - q
    la, lb = math.log(math.hypot(*u)), math.log(math.hypot(*v))
    ta = math.atan2(u[1], u[0])
    dt = math.atan2(u[0] * v[1] - u[1] * v[0], u @ v)
    if dt == -math.pi:
        dt = math.pi
    s = np.linspace(0.0, 1.0, n + 1)
    r = np.exp(la + s * (lb - la))
    ang = ta + s * dt
    P = q + np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
    P[0], P[-1] = x, y
    return PathPolyline(P)


def lower_bound(d: Domain, x, y) -> float:
    """Analytic lower bound for ``k_D(x, y)``.

    The larger of ``log(1 + lambda / min d)`` with lambda the Euclidean inner
    distance (this dominates ``j_D``), and ``|log(d(x) / d(y))|`` which holds
    because ``log d`` is 1-Lipschitz in the quasihyperbolic metric.
    """
    x = _require_inside(d, x, "x")
    y = _require_inside(d, y, "y")
    dx, dy = d.distance(np.stack([x, y]))
    lam = inner_distance(d, x, y)
    return max(math.log1p(lam / min(dx, dy)), abs(math.log(dx / dy)))


def _canonical_box(d, frame, box):
    box = box if box is not None else d.bbox()
    if box is None:
        return None
    corners = np.array([[box[0], box[1]], [box[2], box[1]], [box[0], box[3]], [box[2], box[3]]])
    C = frame.apply(corners)
    lo, hi = C.min(axis=0), C.max(axis=0)
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def qh_distance(d: Domain, x, y, cfg: SolverConfig = None, box=None) -> MetricResult:
    """Bracket the quasihyperbolic distance between x and y.

    With ``cfg.use_closed_form`` and a registered formula the exact value is
    the lower edge and a dense polyline along the true geodesic gives the
    upper edge.  Otherwise the upper edge comes from shortest paths over
    density-adapted graphs, refined level by level until successive values
    agree to ``relative_tolerance``; each graph path is then polished by
    quasi-Newton descent on its vertices.
    """
    cfg = cfg or SolverConfig()
    x = _require_inside(d, x, "x")
    y = _require_inside(d, y, "y")
    if np.array_equal(x, y):
        return MetricResult(0.0, 0.0, PathPolyline([x]), 0, exact=True)
    lower = lower_bound(d, x, y)
    if cfg.use_closed_form:
        exact = qh_closed_form(d, x, y)
        if exact is not None:
            path = closed_form_geodesic(d, x, y)
            upper = max(qh_length(d, path), exact)
            return MetricResult(exact, upper, path, 0, exact=True)
    return _graph_distance(d, x, y, cfg, lower, box)


def _graph_distance(d, x, y, cfg, lower, box):
    dc, frame = d.canonical()
    xc, yc = frame.apply(x), frame.apply(y)
    cbox = _canonical_box(d, frame, box)
    qbox = _solver.query_box(dc, xc, yc, cbox)
    cacheable = cbox is not None and (box is None or d.bbox() is None)
    tol = cfg.relative_tolerance

    best_path, best = None, math.inf
    level_done = 0

    def consider(P):
        nonlocal best_path, best
        U = float(_solver.path_length_adaptive(dc, P).sum())
        # a raw graph path this far above the best is not worth polishing
        if cfg.polish and U < best * (1.0 + POLISH_SLACK):
            P = _solver.polish(dc, P, m=cfg.quadrature_points_per_edge)
            U = float(_solver.path_length_adaptive(dc, P).sum())
        if U < best:
            best_path, best = P, U

    if dc.visible_many(xc[None], yc[None])[0]:
        consider(np.stack([xc, yc]))
        if best - lower <= tol * best:
            return _finish(d, frame, best_path, lower, 0)

    # the polished direct segment serves as the estimate before level 0
    prev = best if best_path is not None else None
    for level in range(cfg.max_refinements + 1):
        graph = _solver.base_graph(dc, qbox, level, cfg, cache=cacheable)
        P = _solver.shortest_path(dc, graph, xc, yc, cfg)
        if P is not None:
            consider(P)
        level_done = level
        if best_path is None:
            continue
        if best - lower <= tol * best:
            break
        if prev is not None and prev - best <= tol * best:
            break
        prev = best
    if best_path is None:
        raise NoPathError(f"no path found between {fmt_point(x)} and {fmt_point(y)} "
                          f"after {cfg.max_refinements} refinements")
    return _finish(d, frame, best_path, lower, level_done)


def _finish(d, frame, Pc, lower, level):
    V = frame.invert(Pc)
    path = PathPolyline(V)
    try:
        upper = qh_length(d, path)
    except InvalidPathError:
        # mapping back moved a vertex by rounding; keep the canonical-frame path in the original frame
        raise NoPathError("witness path became invalid when mapped back from the canonical frame")
    if upper < lower:
        # the lower bound is analytic, so only rounding may put it above a real path
        if lower - upper > 1e-9 * upper:
            raise NoPathError(f"witness length {upper} is below the lower bound {lower}")
        lower = upper
    return MetricResult(lower, upper, path, level)
