"""The slit-disk counterexample and the broken-line arithmetic bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .geometry import Disk, Punctured, SlitDisk
from .maps import ConformalSlitChain, apply_inverse
from .metrics import SolverConfig, j_distance, lower_bound, qh_distance
from .validation import check_scalar

EXAMPLE1_COLUMNS = ("t", "j_image", "k_lower_analytic", "k_bracket_lo", "k_bracket_hi", "j_source", "ratio")
IMAGE_PUNCTURE = (-0.5, 0.0)
LOG3 = math.log(3.0)


@dataclass
class Example1Table:
    rows: list
    punctured: bool

    def column(self, name):
        return np.array([r[name] for r in self.rows], dtype=float)

    def checks(self, tol=1e-9):
        """Named pass/fail results over the rows (ordered by decreasing t)."""
        t = self.column("t")
        order = np.argsort(-t)
        j_img = self.column("j_image")[order]
        j_src = self.column("j_source")[order]
        ratio = self.column("ratio")[order]
        lo, hi = self.column("k_bracket_lo")[order], self.column("k_bracket_hi")[order]
        ana = self.column("k_lower_analytic")[order]
        solved = np.isfinite(lo)
        return {
            "j_image_is_log3": bool(np.all(np.abs(j_img - LOG3) <= tol)),
            "j_source_increasing": bool(np.all(np.diff(j_src) > 0)),
            "ratio_increasing": bool(np.all(np.diff(ratio) > 0)),
            "bracket_consistent": bool(np.all((lo[solved] >= ana[solved] - tol) & (hi[solved] >= ana[solved]))),
        }

    @property
    def passed(self):
        return all(self.checks().values())


def example1_points(t):
    """``(x', y', x0, y0)``: the points straddling the slit and their preimages in the disk."""
    check_scalar(t, "t", min_val=0, max_val=0.25, include_min=False, include_max=False)
    chain = ConformalSlitChain()
    xp, yp = np.array([0.5, t]), np.array([0.5, -t])
    x0, y0 = apply_inverse(chain, np.stack([xp, yp]))
    return xp, yp, x0, y0


def example1_domains(punctured=True):
    """``(D1, D1')``; with ``punctured`` both sides lose the puncture and its preimage."""
    chain = ConformalSlitChain()
    if not punctured:
        return Disk(), SlitDisk()
    w0 = apply_inverse(chain, np.array(IMAGE_PUNCTURE))
    return Punctured(Disk(), [w0]), Punctured(SlitDisk(), [IMAGE_PUNCTURE])


def example1_run(t_values, cfg: SolverConfig = None, punctured=True, solve=True) -> Example1Table:
    """One row per ``t``: j on both sides, the analytic bound for k in the slit disk and its solver bracket.

    With ``solve=False`` the bracket columns are NaN (j-only runs reach much smaller t).
    """
    cfg = cfg or SolverConfig()
    D1, D1p = example1_domains(punctured)
    Dp = SlitDisk()
    rows = []
    for t in sorted({float(t) for t in t_values}):
        xp, yp, x0, y0 = example1_points(t)
        j_img = j_distance(D1p, xp, yp)
        j_src = j_distance(D1, x0, y0)
        lo = hi = math.nan
        if solve:
            k = qh_distance(Dp, xp, yp, cfg)
            lo, hi = k.lower, k.upper
        rows.append({"t": t, "j_image": j_img, "k_lower_analytic": math.log1p(1.0 / t),
                     "k_bracket_lo": lo, "k_bracket_hi": hi, "j_source": j_src, "ratio": j_src / j_img})
    return Example1Table(rows, punctured)


def example1_slope_certificate(slopes, t_values, punctured=True):
    """For each candidate slope, the largest ``t`` in the ladder where ``j_source / j_image`` exceeds it.

    A missing entry (None) means the ladder does not reach far enough.
    """
    table = example1_run(t_values, solve=False, punctured=punctured)
    t, ratio = table.column("t"), table.column("ratio")
    out = {}
    for s in slopes:
        hit = t[ratio > s]
        out[float(s)] = float(hit.max()) if len(hit) else None
    return out


def example1_lower_bound_check(t, tol=1e-9):
    """The solver's analytic lower bound in the slit disk dominates ``log(1 + 1/t)``."""
    xp, yp, _, _ = example1_points(t)
    return lower_bound(SlitDisk(), xp, yp) >= math.log1p(1.0 / t) - tol


# ---------------------------------------------------------------------------
# broken line


def example2_bounds(M, r, m):
    """``(log(1 + 4M/r), log(1 + sqrt(2)(m - 1)/r))``: the image bound and the source j."""
    check_scalar(M, "M", min_val=1.0)
    check_scalar(r, "r", min_val=0.0, max_val=0.1, include_min=False)
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        raise PreconditionError(f"m must be an integer >= 1, got {m!r}")
    return math.log1p(4.0 * M / r), math.log1p(math.sqrt(2.0) * (m - 1) / r)


def example2_threshold(M, r):
    """Smallest m with source j above the image bound, found by direct evaluation."""
    image, _ = example2_bounds(M, r, 1)
    # source_j > image  <=>  sqrt(2)(m - 1) > 4M; start just below the crossing and step up
    m = max(1, int(math.floor(4.0 * M / math.sqrt(2.0))))
    while example2_bounds(M, r, m)[1] <= image:
        m += 1
    while m > 1 and example2_bounds(M, r, m - 1)[1] > image:
        m -= 1
    return m


def example2_table(M, r, mmax):
    check_scalar(mmax, "mmax", min_val=1, target_type=int)
    m0 = example2_threshold(M, r)
    rows = []
    for m in range(1, mmax + 1):
        image, source = example2_bounds(M, r, m)
        rows.append({"m": m, "image_bound": image, "source_j": source, "exceeds": source > image})
    return rows, m0


def example2_check(M, r, mmax, probes=None):
    """Threshold consistency, strict growth in m, and unboundedness on geometric probes up to ``probes``."""
    rows, m0 = example2_table(M, r, mmax)
    ok_threshold = all(row["exceeds"] == (row["m"] >= m0) for row in rows)
    probes = probes or 10 ** 6
    ms = np.unique(np.geomspace(1, probes, 60).round().astype(int))
    src = np.array([example2_bounds(M, r, int(m))[1] for m in ms])
    image = example2_bounds(M, r, 1)[0]
    increasing = bool(np.all(np.diff(src) > 0))
    # unboundedness as far as probes go: still above the bound and still gaining over the last decades
    grows = bool(src[-1] > image and src[-1] - src[len(src) // 2] > 1.0)
    return {"threshold": m0, "threshold_consistent": ok_threshold, "increasing": increasing,
            "unbounded": grows}
