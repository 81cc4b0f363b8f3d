"""Near-geodesic extraction and verification, and sphere chaining along a path."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, ChainOverflowError, PreconditionError
from .metrics import PathPolyline, SolverConfig, _check_path, edge_qh_lengths, qh_distance
from .validation import check_random_state, check_scalar

MAX_CHAIN_POINTS = 100_000


def extract_neargeodesic(d, x, y, c, cfg: SolverConfig = None, extra_refinements=2) -> PathPolyline:
    """Witness path of ``qh_distance`` certified against a finer solve.

    The path is accepted when its length is at most ``c`` times the upper
    bound obtained with one more refinement level and a halved tolerance (or
    the exact value when a closed form exists).  Up to ``extra_refinements``
    such rounds are tried before giving up with the best ratio seen.
    """
    check_scalar(c, "c", min_val=1.0, include_min=False)
    cfg = cfg or SolverConfig()
    cur = qh_distance(d, x, y, cfg)
    if cur.upper == 0.0:
        return cur.path
    if cur.exact:
        ratio = cur.upper / cur.lower
        if ratio <= c:
            return cur.path
        raise CertificationError(f"closed-form witness has ratio {ratio:.6g} > c = {c}", ratio, cur.path)
    best_ratio, best_path = math.inf, cur.path
    for extra in range(1, extra_refinements + 1):
        finer = cfg.replace(max_refinements=cfg.max_refinements + extra,
                            relative_tolerance=cfg.relative_tolerance / 2 ** extra)
        nxt = qh_distance(d, x, y, finer)
        ratio = cur.upper / min(nxt.upper, cur.upper)
        if ratio < best_ratio:
            best_ratio, best_path = ratio, cur.path
        if ratio <= c:
            return cur.path
        cur = nxt
    raise CertificationError(f"could not certify a {c}-neargeodesic; best ratio {best_ratio:.6g}",
                             best_ratio, best_path)


@dataclass(frozen=True)
class NeargeodesicVerdict:
    passed: bool
    worst_ratio: float
    worst_pair: tuple
    pairs_checked: int

    def to_dict(self):
        return {"passed": self.passed, "worst_ratio": self.worst_ratio,
                "worst_pair": list(self.worst_pair), "pairs_checked": self.pairs_checked}


def verify_neargeodesic(d, path, c, samples=50, seed=0, cfg: SolverConfig = None) -> NeargeodesicVerdict:
    """Check ``len_k(path[u, v]) <= c * k(u, v)`` on sampled vertex pairs.

    ``k`` is replaced by the solver's upper bound, so a pass is evidence and
    not a proof.  The endpoint pair is always included.
    """
    path = _check_path(d, path)
    check_scalar(samples, "samples", min_val=0, target_type=int)
    cfg = cfg or SolverConfig()
    V = path.vertices
    n = len(V)
    if n < 2:
        return NeargeodesicVerdict(True, 1.0, (0, 0), 0)
    cum = np.concatenate([[0.0], np.cumsum(edge_qh_lengths(d, path))])
    rng = check_random_state(seed)
    pairs = {(0, n - 1)}
    if n > 2:
        for _ in range(samples):
            i, j = sorted(rng.choice(n, size=2, replace=False))
            pairs.add((int(i), int(j)))
    worst, worst_pair = 0.0, (0, n - 1)
    for i, j in sorted(pairs):
        sub = cum[j] - cum[i]
        upper = qh_distance(d, V[i], V[j], cfg).upper
        ratio = sub / upper if upper > 0 else 1.0
        if ratio > worst:
            worst, worst_pair = ratio, (i, j)
    return NeargeodesicVerdict(bool(worst <= c), float(worst), worst_pair, len(pairs))


@dataclass(frozen=True)
class ChainResult:
    """Points ``z_1 = x, ..., z_p`` with ``|z_{i+1} - z_i| = a d(z_i)``."""

    points: np.ndarray = field(repr=False)
    step_ratio: float
    terminal_covered: bool

    @property
    def p(self):
        return len(self.points)

    @property
    def steps(self):
        """Sphere crossings taken, i.e. points before the covering one."""
        return len(self.points) - 1

    def to_dict(self):
        return {"points": self.points.tolist(), "step_ratio": self.step_ratio,
                "terminal_covered": self.terminal_covered}


def _first_crossing(V, edge, s, z, r):
    """First (edge, parameter) at or after ``(edge, s)`` where the path meets the circle |p - z| = r."""
    for e in range(edge, len(V) - 1):
        A, B = V[e], V[e + 1]
        AB = B - A
        AZ = A - z
        qa = AB @ AB
        qb = 2.0 * (AB @ AZ)
        qc = AZ @ AZ - r * r
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            continue
        sq = math.sqrt(disc)
        # numerically stable pair of roots
        q = -0.5 * (qb + math.copysign(sq, qb))
        roots = sorted(t for t in ((q / qa) if qa else math.inf, (qc / q) if q else math.inf)
                       if math.isfinite(t))
        lo = s if e == edge else 0.0
        for t in roots:
            if lo <= t <= 1.0:
                return e, t
    return None


def chain_points(d, path, a) -> ChainResult:
    """Walk the path placing each next point on the sphere of radius ``a d(z_i)`` about ``z_i``.

    Stops once the end of the path lies in the closed ball around the latest point.
    """
    check_scalar(a, "a", min_val=0.0, max_val=1.0, include_min=False, include_max=False)
    path = _check_path(d, path)
    V = path.vertices
    y = V[-1]
    z = V[0]
    pts = [z]
    edge, s = 0, 0.0
    while True:
        r = a * float(d.distance(z[None])[0])
        if math.hypot(*(y - z)) <= r:
            return ChainResult(np.array(pts), float(a), True)
        if len(pts) >= MAX_CHAIN_POINTS:
            raise ChainOverflowError(f"chain exceeded {MAX_CHAIN_POINTS} points; the path is degenerate")
        hit = _first_crossing(V, edge, s, z, r)
        if hit is None:
            raise PreconditionError("path end lies outside the ball but no crossing was found")
        edge, s = hit
        nz = V[edge] + s * (V[edge + 1] - V[edge])
        # project onto the sphere to remove rounding in the root
        nz = z + (nz - z) * (r / math.hypot(*(nz - z)))
        z = nz
        pts.append(z)
