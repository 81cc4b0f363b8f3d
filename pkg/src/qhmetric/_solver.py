"""Graph search and path polishing behind ``metrics.qh_distance``.

Everything here works in the canonical frame of a domain (see
``Domain.canonical``), so base graphs can be cached and shared between queries
on similar domains.
"""

from functools import lru_cache

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

# sub-edge length relative to the smallest boundary distance along it
ADAPTIVE_ETA = 0.5
POLISH_ETA = 0.35
CONE_SLOPE = 0.5


@lru_cache(maxsize=32)
def gauss_legendre01(m):
    t, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (t + 1.0), 0.5 * w


def edge_lengths_fixed(dom, A, B, m):
    """Quasihyperbolic length of each straight edge with an m-point rule (no subdivision)."""
    t, w = gauss_legendre01(m)
    AB = B - A
    L = np.hypot(AB[:, 0], AB[:, 1])
    Q = A[:, None, :] + t[None, :, None] * AB[:, None, :]
    dq = dom.distance(Q.reshape(-1, 2)).reshape(len(A), m)
    return L * (w[None, :] / dq).sum(axis=1)


def path_length_adaptive(dom, V, m=8, eta=ADAPTIVE_ETA):
    """Per-edge quasihyperbolic lengths of the polyline V.

    Each edge is split into pieces no longer than ``eta`` times the smallest
    boundary distance along the edge, which keeps the m-point rule accurate to
    roughly machine precision.
    """
    A, B = V[:-1], V[1:]
    if len(A) == 0:
        return np.zeros(0)
    L = np.hypot(*(B - A).T)
    dmin = dom.segment_min_distance(A, B)
    nsub = np.ceil(L / (eta * dmin)).astype(np.int64)
    nsub = np.clip(nsub, 1, 200_000)
    edge_idx = np.repeat(np.arange(len(A)), nsub)
    offsets = np.arange(nsub.sum()) - np.repeat(np.cumsum(nsub) - nsub, nsub)
    s0 = offsets / nsub[edge_idx]
    s1 = (offsets + 1) / nsub[edge_idx]
    AB = B - A
    SA = A[edge_idx] + s0[:, None] * AB[edge_idx]
    SB = A[edge_idx] + s1[:, None] * AB[edge_idx]
    piece = edge_lengths_fixed(dom, SA, SB, m)
    return np.bincount(edge_idx, weights=piece, minlength=len(A))


def densify(dom, V, eta=POLISH_ETA, max_pieces=400):
    """Insert vertices so each edge is at most ``eta`` times the boundary distance along it."""
    A, B = V[:-1], V[1:]
    L = np.hypot(*(B - A).T)
    dmin = dom.segment_min_distance(A, B)
    nsub = np.clip(np.ceil(L / (eta * dmin)).astype(np.int64), 1, max_pieces)
    out = [V[:1]]
    for a, b, n in zip(A, B, nsub):
        s = (np.arange(1, n + 1) / n)[:, None]
        out.append(a + s * (b - a))
    return np.concatenate(out)


def _path_value_grad(dom, V, m):
    t, w = gauss_legendre01(m)
    A, B = V[:-1], V[1:]
    AB = B - A
    L = np.hypot(AB[:, 0], AB[:, 1])
    Q = A[:, None, :] + t[None, :, None] * AB[:, None, :]
    dq, gq = dom.distance_grad(Q.reshape(-1, 2))
    dq = dq.reshape(len(A), m)
    gq = gq.reshape(len(A), m, 2)
    S = (w[None, :] / dq).sum(axis=1)
    value = float((L * S).sum())
    u = AB / L[:, None]
    # d/dp of 1/d(p) = -grad d / d^2
    inner = -(w[None, :, None] * gq / dq[..., None] ** 2)
    gA = -u * S[:, None] + L[:, None] * (inner * (1.0 - t)[None, :, None]).sum(axis=1)
    gB = u * S[:, None] + L[:, None] * (inner * t[None, :, None]).sum(axis=1)
    grad = np.zeros_like(V)
    grad[:-1] += gA
    grad[1:] += gB
    return value, grad


def _valid(dom, V):
    if not dom.contains_many(V[1:-1]).all():
        return False
    return bool(dom.visible_many(V[:-1], V[1:]).all())


def polish(dom, V, m=8, rounds=1, maxiter=100, ftol=1e-5):
    """Shorten a valid path by quasi-Newton descent on its interior vertices.

    Steps that leave the domain or cross a slit are rejected by reporting a
    large value, so the result is always a valid path no longer than the input.
    """
    best_V = V
    best = float(path_length_adaptive(dom, V).sum())
    for _ in range(rounds):
        W = densify(dom, best_V)
        if len(W) <= 2:
            return best_V
        ends = W[[0, -1]]
        s = dom.distance(W[1:-1])[:, None]
        base = W[1:-1].copy()
        f0 = _path_value_grad(dom, W, m)[0]

        def unpack(z):
            inner = base + s * z.reshape(-1, 2)
            return np.concatenate([ends[:1], inner, ends[1:]])

        def fun(z):
            P = unpack(z)
            if not _valid(dom, P):
                return 10.0 * f0 + 1.0, np.zeros_like(z)
            val, g = _path_value_grad(dom, P, m)
            return val, (g[1:-1] * s).ravel()

        res = minimize(fun, np.zeros(base.size), jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": ftol, "gtol": 1e-7})
        cand = unpack(res.x)
        if not _valid(dom, cand):
            break
        val = float(path_length_adaptive(dom, cand).sum())
        if val >= best * (1 - 1e-9):
            best_V, best = (cand, val) if val < best else (best_V, best)
            break
        best_V, best = cand, val
    return best_V


# ---------------------------------------------------------------------------
# density-adapted nodes


def level_params(cfg, level):
    """Cell factor and global distance floor (relative to the box) for a refinement level."""
    shrink = 2.0 ** (-0.5 * level)
    eps = 8.0 / cfg.initial_resolution * shrink
    floor_frac = 2.0 / cfg.initial_resolution * shrink
    return eps, floor_frac


def whitney_nodes(dom, box, eps, floor_fn, root_cells=4, max_depth=40):
    """Centers of quadtree cells whose size is about ``eps`` times the boundary distance.

    Cells are not refined below ``eps * floor_fn(center)``; the floor keeps the
    node count finite near the boundary.
    """
    x0, y0, x1, y1 = box
    W, H = x1 - x0, y1 - y0
    h = max(W, H) / root_cells
    nx, ny = max(1, int(np.ceil(W / h))), max(1, int(np.ceil(H / h)))
    gx = x0 + h * (np.arange(nx) + 0.5)
    gy = y0 + h * (np.arange(ny) + 0.5)
    C = np.stack(np.meshgrid(gx, gy), axis=-1).reshape(-1, 2)
    leaves = []
    for _ in range(max_depth):
        if len(C) == 0:
            break
        dist = dom.distance(C)
        inside = dom.contains_many(C)
        fl = floor_fn(C)
        half_diag = 0.70711 * h
        need_in = h > eps * np.maximum(dist, fl)
        need_out = (dist <= half_diag) & (h > eps * fl)
        need = np.where(inside, need_in, need_out)
        leaves.append(C[inside & ~need])
        C = C[need]
        q = 0.25 * h
        C = np.concatenate([C + [-q, -q], C + [q, -q], C + [-q, q], C + [q, q]])
        h *= 0.5
    return np.concatenate(leaves) if leaves else np.empty((0, 2))


def _unique_pairs(i, j, n):
    """Undirected, deduplicated (lo, hi) index pairs without self loops."""
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    keep = lo != hi
    code = np.unique(lo[keep].astype(np.int64) * n + hi[keep])
    return np.stack([code // n, code % n], axis=1)


def _knn_edges(nodes, k):
    tree = cKDTree(nodes)
    k = min(k + 1, len(nodes))
    _, idx = tree.query(nodes, k=k)
    i = np.repeat(np.arange(len(nodes)), k - 1)
    j = idx[:, 1:].ravel()
    return tree, _unique_pairs(i, j, len(nodes))


def _weighted(dom, nodes, pairs, m):
    if len(pairs) == 0:
        return pairs, np.zeros(0)
    A, B = nodes[pairs[:, 0]], nodes[pairs[:, 1]]
    ok = dom.visible_many(A, B)
    pairs = pairs[ok]
    return pairs, edge_lengths_fixed(dom, A[ok], B[ok], m)


class BaseGraph:
    def __init__(self, dom, box, level, cfg):
        eps, floor_frac = level_params(cfg, level)
        span = min(box[2] - box[0], box[3] - box[1])
        self.eps = eps
        self.floor = floor_frac * span
        self.box = box
        nodes = whitney_nodes(dom, box, eps, lambda C: np.full(len(C), self.floor))
        self.nodes = nodes
        if len(nodes) >= 2:
            self.tree, pairs = _knn_edges(nodes, cfg.knn_edges)
            self.pairs, self.weights = _weighted(dom, nodes, pairs, cfg.quadrature_points_per_edge)
        else:
            self.tree = None
            self.pairs, self.weights = np.empty((0, 2), dtype=np.int64), np.zeros(0)


def _cfg_key(cfg):
    return (cfg.initial_resolution, cfg.knn_edges, cfg.quadrature_points_per_edge)


@lru_cache(maxsize=64)
def _cached_base_graph(dom, box, level, key):
    class _Cfg:
        initial_resolution, knn_edges, quadrature_points_per_edge = key
    return BaseGraph(dom, box, level, _Cfg)


def base_graph(dom, box, level, cfg, cache=True):
    if cache:
        return _cached_base_graph(dom, tuple(box), level, _cfg_key(cfg))
    return BaseGraph(dom, box, level, cfg)


def local_nodes(dom, base, p, eps):
    """Extra nodes in a cone around ``p`` reaching down to its own boundary distance.

    The base graph stops refining at ``base.floor``; the cone floor grows
    linearly with the distance from ``p`` and meets the base floor at radius
    ``base.floor / CONE_SLOPE``.
    """
    dp = float(dom.distance(p[None])[0])
    if dp >= base.floor:
        return np.empty((0, 2))
    half = base.floor / CONE_SLOPE
    box = (p[0] - half, p[1] - half, p[0] + half, p[1] + half)
    floor_q = 0.5 * dp

    def floor_fn(C):
        r = np.hypot(*(C - p).T)
        return np.minimum(base.floor, np.maximum(floor_q, CONE_SLOPE * r))

    C = whitney_nodes(dom, box, eps, floor_fn)
    return C[dom.distance(C) < base.floor]


def shortest_path(dom, base, x, y, cfg):
    """Dijkstra over the base graph augmented with the endpoints and their cones."""
    extra = [x[None], y[None], local_nodes(dom, base, x, base.eps), local_nodes(dom, base, y, base.eps)]
    Q = np.concatenate(extra)
    nb = len(base.nodes)
    nodes = np.concatenate([base.nodes, Q]) if nb else Q
    k = cfg.knn_edges
    qidx = nb + np.arange(len(Q))
    cand = []
    if nb:
        _, idx = base.tree.query(Q, k=min(k, nb))
        idx = np.asarray(idx).reshape(len(Q), -1)
        cand.append(np.stack([np.repeat(qidx, idx.shape[1]), idx.ravel()], axis=1))
    if len(Q) > 1:
        qt = cKDTree(Q)
        _, idx = qt.query(Q, k=min(k + 1, len(Q)))
        idx = np.asarray(idx).reshape(len(Q), -1)[:, 1:]
        cand.append(np.stack([np.repeat(qidx, idx.shape[1]), nb + idx.ravel()], axis=1))
    # x and y always try each other directly
    cand.append(np.array([[nb, nb + 1]]))
    pairs = np.concatenate(cand)
    pairs = _unique_pairs(pairs[:, 0], pairs[:, 1], len(nodes))
    pairs, w = _weighted(dom, nodes, pairs, cfg.quadrature_points_per_edge)
    all_pairs = np.concatenate([base.pairs, pairs]) if len(base.pairs) else pairs
    all_w = np.concatenate([base.weights, w]) if len(base.pairs) else w
    n = len(nodes)
    G = coo_matrix((all_w, (all_pairs[:, 0], all_pairs[:, 1])), shape=(n, n)).tocsr()
    dist, pred = dijkstra(G, directed=False, indices=nb, return_predecessors=True)
    target = nb + 1
    if not np.isfinite(dist[target]):
        return None
    chain = [target]
    while chain[-1] != nb:
        chain.append(pred[chain[-1]])
    return nodes[chain[::-1]]


def query_box(dom, x, y, box=None):
    """Computation box: the domain's own, a caller-supplied one, or one fitted to the query."""
    if box is None:
        box = dom.bbox()
    pts = np.stack([x, y])
    if box is None:
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        pad = max(float(np.hypot(*(x - y))), float(dom.distance(pts).max()))
        return (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)
    lo = np.minimum(pts.min(axis=0), box[:2])
    hi = np.maximum(pts.max(axis=0), box[2:])
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))
