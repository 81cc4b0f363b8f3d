"""Empirical distortion of j and k under catalog maps, and the inequality suites built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .envelope import AffineDominator, GrowthTable, MonotoneEnvelope, pointwise_max
from .errors import NoPathError, PreconditionError
from .geodesics import chain_points
from .geometry import Disk, Domain, sample_interior
from .maps import MapSpec, apply, image_domain
from .metrics import SolverConfig, _check_path, j_distance, qh_distance
from .report import emit_report
from .validation import check_random_state, check_scalar

DEFAULT_MARGIN = 0.02


# ---------------------------------------------------------------------------
# pair sampling


def _sampling_box(d, box):
    if box is not None:
        return box
    box = d.bbox()
    if box is None:
        raise PreconditionError(f"the unbounded {d.variant} domain needs a sampling box")
    return box


def _targeted_pairs(d, box, rng, n):
    """Pairs around each puncture: equal moduli at opposite angles, and pairs on one ray."""
    out = []
    x0, y0, x1, y1 = box
    for q in d.punctures:
        q = np.asarray(q)
        room = min(q[0] - x0, x1 - q[0], q[1] - y0, y1 - q[1])
        if room <= 0:
            continue
        for _ in range(n):
            r = room * rng.uniform(0.05, 0.9)
            ang = rng.uniform(0, 2 * np.pi)
            u = np.array([math.cos(ang), math.sin(ang)])
            out.append((q + r * u, q - r * u))
            r2 = r * rng.uniform(0.05, 0.5)
            out.append((q + r * u, q + r2 * u))
    pts = [(x, y) for x, y in out if d.contains_many(np.stack([x, y])).all()]
    return pts


def sample_pairs(d: Domain, n, seed, box=None, margin=DEFAULT_MARGIN, targeted=False):
    """``n`` pairs spread evenly over the range of j.

    Four times as many random pairs are drawn and ranked by j, then every
    fourth one is kept, so near and far pairs are represented alike.  With
    ``targeted`` extra pairs about each puncture are appended.
    """
    check_scalar(n, "n", min_val=0, target_type=int)
    box = _sampling_box(d, box)
    rng = check_random_state(seed)
    pairs = []
    if n:
        pool = 4 * n
        P = sample_interior(d, rng, 2 * pool, margin, box=box)
        X, Y = P[:pool], P[pool:]
        j = np.array([j_distance(d, x, y) for x, y in zip(X, Y)])
        pick = np.argsort(j, kind="stable")[np.linspace(0, pool - 1, n).round().astype(int)]
        pairs = [(X[i], Y[i]) for i in pick]
    if targeted:
        pairs += _targeted_pairs(d, box, rng, max(n // 10, 8))
    return pairs


# ---------------------------------------------------------------------------
# semisolidity profiles


PAIR_COLUMNS = ("index", "x0", "x1", "y0", "y1", "j", "j_image", "k_lower", "k_upper",
                "k_image_lower", "k_image_upper")


@dataclass
class PairRecord:
    index: int
    x: np.ndarray
    y: np.ndarray
    j_source: float
    j_target: float
    k_source: tuple
    k_target: tuple

    def row(self):
        return {"index": self.index, "x0": self.x[0], "x1": self.x[1], "y0": self.y[0], "y1": self.y[1],
                "j": self.j_source, "j_image": self.j_target,
                "k_lower": self.k_source[0], "k_upper": self.k_source[1],
                "k_image_lower": self.k_target[0], "k_image_upper": self.k_target[1]}


@dataclass
class DistortionReport:
    records: list
    envelope: MonotoneEnvelope
    inverse_envelope: MonotoneEnvelope
    sup_ratio: float
    skipped: int = 0
    violations: list = field(default_factory=list)

    @property
    def source(self):
        return np.array([0.5 * (r.k_source[0] + r.k_source[1]) for r in self.records])

    @property
    def target(self):
        return np.array([0.5 * (r.k_target[0] + r.k_target[1]) for r in self.records])

    def summary(self):
        return {"pairs": len(self.records), "skipped": self.skipped, "sup_ratio": self.sup_ratio,
                "envelope_shift": self.envelope.shift_, "violations": len(self.violations)}

    def to_csv(self, path):
        emit_report([r.row() for r in self.records], "csv", path, columns=PAIR_COLUMNS)


def _evaluate_pairs(f, d, pairs, cfg):
    dd = image_domain(f, d)
    recs, skipped = [], 0
    for i, (x, y) in enumerate(pairs):
        fx, fy = apply(f, np.stack([x, y]))
        try:
            k = qh_distance(d, x, y, cfg)
            kk = qh_distance(dd, fx, fy, cfg)
        except NoPathError:
            skipped += 1
            continue
        recs.append(PairRecord(i, x, y, j_distance(d, x, y), j_distance(dd, fx, fy),
                               (k.lower, k.upper), (kk.lower, kk.upper)))
    return recs, skipped


def semisolidity_profile(f: MapSpec, d: Domain, n=100, seed=0, cfg=None, box=None, bound=None,
                         targeted=False, pairs=None) -> DistortionReport:
    """Sampled ``(k_D, k_D')`` pairs with fitted monotone envelopes in both directions.

    ``bound`` is an optional growth table; pairs whose target value certainly
    exceeds it (lower bracket edge above ``bound(source upper)``) are listed
    as violations.
    """
    cfg = cfg or SolverConfig()
    if pairs is None:
        pairs = sample_pairs(d, n, seed, box, targeted=targeted)
    recs, skipped = _evaluate_pairs(f, d, pairs, cfg)
    if not recs:
        raise NoPathError("no pair could be evaluated")
    rep = DistortionReport(recs, None, None, 0.0, skipped)
    s, t = rep.source, rep.target
    rep.envelope = MonotoneEnvelope(growth=False).fit(s, t)
    rep.inverse_envelope = MonotoneEnvelope(growth=False).fit(t, s)
    pos = s > 0
    rep.sup_ratio = float(np.max(t[pos] / s[pos])) if pos.any() else 1.0
    if bound is not None:
        rep.violations = [r for r in recs if r.k_target[0] > bound(r.k_source[1]) * (1 + 1e-12)]
    return rep


@dataclass(frozen=True)
class QHConstant:
    """``value`` compares upper bounds; ``[consistent_min, consistent_max]`` spans all bracket-consistent values."""

    value: float
    consistent_min: float
    consistent_max: float
    worst_pair: tuple
    pairs: int

    def to_dict(self):
        return {"value": self.value, "consistent_min": self.consistent_min,
                "consistent_max": self.consistent_max, "pairs": self.pairs,
                "worst_pair": [list(map(float, p)) for p in self.worst_pair]}


def qh_constant_estimate(f: MapSpec, d: Domain, n=100, seed=0, cfg=None, box=None,
                         targeted=True, pairs=None) -> QHConstant:
    """Estimate the smallest M with ``k/M <= k' <= M k`` on sampled pairs."""
    cfg = cfg or SolverConfig()
    if pairs is None:
        pairs = sample_pairs(d, n, seed, box, targeted=targeted)
    recs, _ = _evaluate_pairs(f, d, pairs, cfg)
    best, lo, hi, worst = 1.0, 1.0, 1.0, None
    for r in recs:
        (a0, a1), (b0, b1) = r.k_source, r.k_target
        if a1 <= 0 or b1 <= 0:
            continue
        v = max(b1 / a1, a1 / b1)
        if v >= best:
            best, worst = v, (r.x, r.y)
        lo = max(lo, b0 / a1, a0 / b1)
        hi = max(hi, b1 / a0 if a0 > 0 else math.inf, a1 / b0 if b0 > 0 else math.inf)
    if worst is None and recs:
        worst = (recs[0].x, recs[0].y)
    return QHConstant(float(best), float(lo), float(hi), worst, len(recs))


# ---------------------------------------------------------------------------
# j inequality


@dataclass
class JCheckReport:
    checked: int
    violations: list
    worst_upper: float
    worst_lower: float

    @property
    def passed(self):
        return not self.violations


def _as_table(phi):
    if isinstance(phi, GrowthTable):
        return phi
    xs, ys = phi
    return GrowthTable(xs, ys)


def j_inequality_check(f: MapSpec, d: Domain, phi, n=200, seed=0, box=None, margin=0.0,
                       pairs=None) -> JCheckReport:
    """Pairs violating ``phi^{-1}(j) <= j' <= phi(j)``, with ``phi`` widened by ``margin``.

    ``phi`` is a :class:`GrowthTable` or an ``(xs, ys)`` pair of knot lists.
    """
    phi = _as_table(phi)
    dd = image_domain(f, d)
    if pairs is None:
        pairs = sample_pairs(d, n, seed, box)
    viol, wu, wl = [], 0.0, 0.0
    for i, (x, y) in enumerate(pairs):
        fx, fy = apply(f, np.stack([x, y]))
        j, jj = j_distance(d, x, y), j_distance(dd, fx, fy)
        up = phi(j) * (1 + margin)
        low = phi.inverse(j) / (1 + margin)
        if up > 0:
            wu = max(wu, jj / up)
        if jj > 0:
            wl = max(wl, low / jj)
        if jj > up + 1e-12 or jj < low - 1e-12:
            viol.append({"index": i, "x": x.tolist(), "y": y.tolist(), "j": j, "j_image": jj,
                         "phi_j": float(up), "phi_inv_j": float(low)})
    return JCheckReport(len(pairs), viol, wu, wl)


def affine_j_dominator(f: MapSpec, d: Domain, n=200, seed=0, box=None, j_max=None, pairs=None):
    """Fit ``j' <= c j + d`` on sampled pairs with bounded j; returns the fitted estimator."""
    dd = image_domain(f, d)
    if pairs is None:
        pairs = sample_pairs(d, n, seed, box)
    J = []
    for x, y in pairs:
        fx, fy = apply(f, np.stack([x, y]))
        J.append((j_distance(d, x, y), j_distance(dd, fx, fy)))
    J = np.array(J)
    if j_max is not None:
        J = J[J[:, 0] <= j_max]
    return AffineDominator().fit(J[:, 0], J[:, 1])


# ---------------------------------------------------------------------------
# uniformity and cigar conditions


@dataclass(frozen=True)
class UniformityResult:
    constant: float
    x: np.ndarray
    y: np.ndarray
    k_upper: float
    j: float
    pairs: int

    def to_dict(self):
        return {"constant": self.constant, "x": self.x.tolist(), "y": self.y.tolist(),
                "k_upper": self.k_upper, "j": self.j, "pairs": self.pairs}


def uniformity_constant(d: Domain, n=200, seed=0, cfg=None, box=None, targeted=True,
                        pairs=None) -> UniformityResult:
    """Largest observed ``k.upper / j`` over sampled pairs, with the pair attaining it."""
    cfg = cfg or SolverConfig()
    if pairs is None:
        pairs = sample_pairs(d, n, seed, box, targeted=targeted)
    best = None
    for x, y in pairs:
        j = j_distance(d, x, y)
        if j <= 0:
            continue
        try:
            k = qh_distance(d, x, y, cfg)
        except NoPathError:
            continue
        c = k.upper / j
        if best is None or c > best[0]:
            best = (c, x, y, k.upper, j)
    if best is None:
        raise NoPathError("no pair with positive j could be evaluated")
    return UniformityResult(float(best[0]), np.asarray(best[1]), np.asarray(best[2]), best[3], best[4], len(pairs))


@dataclass(frozen=True)
class CigarVerdict:
    length_constant: float
    cigar_constant: float
    c: float

    @property
    def passed(self):
        return self.length_constant <= self.c and self.cigar_constant <= self.c


def cigar_check(d: Domain, path, c, density=2000) -> CigarVerdict:
    """Worst constants of the length condition and the cigar condition along a dense sampling of ``path``."""
    path = _check_path(d, path)
    V = path.vertices
    if len(V) < 2:
        return CigarVerdict(1.0, 0.0, c)
    seg = np.hypot(*np.diff(V, axis=0).T)
    L = float(seg.sum())
    per = np.maximum(1, np.ceil(density * seg / L).astype(int))
    P, S = [V[:1]], [np.zeros(1)]
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    for a, b, m, s0, ln in zip(V[:-1], V[1:], per, cum[:-1], seg):
        u = np.arange(1, m + 1) / m
        P.append(a + u[:, None] * (b - a))
        S.append(s0 + u * ln)
    P, S = np.concatenate(P), np.concatenate(S)
    chord = float(np.hypot(*(V[-1] - V[0])))
    length_c = L / chord if chord > 0 else math.inf
    arm = np.minimum(S, L - S)
    cigar_c = float(np.max(arm / d.distance(P)))
    return CigarVerdict(float(length_c), cigar_c, float(c))


# ---------------------------------------------------------------------------
# ball estimate


@dataclass
class BallEstimateVerdict:
    s: float
    pairs: int
    worst_ratio: float
    soft_violations: int
    hard_violations: int
    slack: float

    @property
    def passed(self):
        return self.soft_violations == 0 and self.hard_violations == 0

    def to_dict(self):
        return {"s": self.s, "pairs": self.pairs, "worst_ratio": self.worst_ratio,
                "soft_violations": self.soft_violations, "hard_violations": self.hard_violations}


def lemma34_check(d: Domain, n=100, seed=0, s=0.5, cfg=None, slack=0.02, box=None,
                  margin=DEFAULT_MARGIN) -> BallEstimateVerdict:
    """Check ``k_B(x, y) <= log(1 + |x - y| / d(x)) / (1 - s)`` in ``B = B(x, d(x))``.

    ``y`` is drawn uniformly from the disk of radius ``s d(x)`` about ``x``.
    A soft violation is an upper bracket edge above the bound plus ``slack``
    (relative); a hard one has even the lower edge above the bound.
    """
    check_scalar(s, "s", min_val=0, max_val=1, include_min=False, include_max=False)
    cfg = cfg or SolverConfig()
    rng = check_random_state(seed)
    X = sample_interior(d, rng, n, margin, box=_sampling_box(d, box))
    worst, soft, hard = 0.0, 0, 0
    for x in X:
        dx = float(d.distance(x[None])[0])
        rho = s * dx * math.sqrt(rng.uniform())
        ang = rng.uniform(0, 2 * math.pi)
        y = x + rho * np.array([math.cos(ang), math.sin(ang)])
        if rho == 0:
            continue
        k = qh_distance(Disk(tuple(x), dx), x, y, cfg)
        bound = math.log1p(rho / dx) / (1 - s)
        worst = max(worst, k.upper / bound)
        soft += k.upper > bound * (1 + slack)
        hard += k.lower > bound * (1 + 1e-12)
    return BallEstimateVerdict(float(s), len(X), float(worst), int(soft), int(hard), slack)


# ---------------------------------------------------------------------------
# constructive constants


def theorem2_phi2(phi1, c, dconst) -> GrowthTable:
    """``phi2(t) = max(phi1(2t), (c + dconst / log(3/2)) t)`` as an exact table."""
    phi1 = _as_table(phi1)
    check_scalar(c, "c", min_val=0)
    check_scalar(dconst, "dconst", min_val=0)
    slope = c + dconst / math.log(1.5)
    doubled = GrowthTable(phi1.xs / 2, phi1.ys)
    line = GrowthTable(doubled.xs, slope * doubled.xs, growth=False)
    return pointwise_max(doubled, line)


def theorem3_constants(M):
    """Step ratio ``a = 1 - exp(-1/(3M))`` and the resulting constant ``4M``."""
    check_scalar(M, "M", min_val=1.0)
    return -math.expm1(-1.0 / (3.0 * M)), 4.0 * M


@dataclass
class ChainStepReport:
    M: float
    a: float
    steps: int
    worst_ratio: float
    violations: int

    @property
    def passed(self):
        return self.violations == 0


def chain_step_check(f: MapSpec, d: Domain, x, y, M, cfg=None) -> ChainStepReport:
    """Build the sphere chain with ``a(M)`` along a witness path and compare ``k'`` with ``2M k`` per step."""
    cfg = cfg or SolverConfig()
    a, _ = theorem3_constants(M)
    dd = image_domain(f, d)
    path = qh_distance(d, x, y, cfg).path
    chain = chain_points(d, path, a)
    Z = chain.points
    worst, bad = 0.0, 0
    for z0, z1 in zip(Z[:-1], Z[1:]):
        k = qh_distance(d, z0, z1, cfg)
        fz0, fz1 = apply(f, np.stack([z0, z1]))
        kk = qh_distance(dd, fz0, fz1, cfg)
        if k.upper > 0:
            worst = max(worst, kk.upper / (2 * M * k.upper))
        bad += kk.lower > 2 * M * k.upper * (1 + 1e-12)
    return ChainStepReport(float(M), a, chain.steps, float(worst), int(bad))


__all__ = ["sample_pairs", "semisolidity_profile", "qh_constant_estimate", "j_inequality_check",
           "affine_j_dominator", "uniformity_constant", "cigar_check", "lemma34_check",
           "theorem2_phi2", "theorem3_constants", "chain_step_check", "DistortionReport",
           "QHConstant", "JCheckReport", "UniformityResult", "CigarVerdict", "BallEstimateVerdict"]
