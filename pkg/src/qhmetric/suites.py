"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a :class:`SuiteResult` holding pass/fail, report rows and a
summary record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counterexamples import (EXAMPLE1_COLUMNS, example1_run, example1_slope_certificate,
                              example2_check, example2_table)
from .distortion import lemma34_check, sample_pairs, theorem2_phi2, theorem3_constants
from .envelope import GrowthTable
from .geodesics import chain_points
from .geometry import Disk, HalfPlane, Punctured, PuncturedPlane, SlitDisk
from .metrics import SolverConfig, j_distance, qh_closed_form, qh_distance
from .report import task_seed

EXAMPLE1_LADDER = (1e-1, 1e-2, 1e-3, 1e-4)
SLOPE_LADDER = tuple(10.0 ** -k for k in range(1, 12))
CANDIDATE_SLOPES = (2.0, 5.0, 10.0, 20.0)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    rows: list
    columns: tuple
    summary: dict = field(default_factory=dict)


def catalog_domains():
    """The five domains of the j-versus-k suite with their sampling boxes."""
    return [
        ("disk", Disk(), None),
        ("half_plane", HalfPlane(), (-2.0, 0.0, 2.0, 2.0)),
        ("punctured_plane", PuncturedPlane(), (-2.0, -2.0, 2.0, 2.0)),
        ("slit_disk", SlitDisk(), None),
        ("punctured_disk", Punctured(Disk(), [(0.3, 0.2)]), None),
    ]


def eq11_suite(samples=1000, seed=0, cfg=None) -> SuiteResult:
    """``j <= k.upper + 1e-9`` on every domain, and ``j <= k_exact`` (to 1e-12) where a formula exists."""
    cfg = cfg or SolverConfig()
    rows = []
    for name, d, box in catalog_domains():
        pairs = sample_pairs(d, samples, task_seed(seed, f"eq11/{name}"), box)
        worst, worst_exact, bad = -math.inf, -math.inf, 0
        for x, y in pairs:
            j = j_distance(d, x, y)
            k = qh_distance(d, x, y, cfg)
            worst = max(worst, j - k.upper)
            ok = j <= k.upper + 1e-9
            exact = qh_closed_form(d, x, y)
            if exact is not None:
                worst_exact = max(worst_exact, j - exact)
                ok &= j <= exact + 1e-12
            bad += not ok
        rows.append({"domain": name, "pairs": len(pairs), "violations": bad,
                     "max_j_minus_k_upper": worst,
                     "max_j_minus_k_exact": worst_exact if math.isfinite(worst_exact) else math.nan})
    return SuiteResult("eq11", all(r["violations"] == 0 for r in rows), rows,
                       ("domain", "pairs", "violations", "max_j_minus_k_upper", "max_j_minus_k_exact"))


def lemma34_suite(samples=500, seed=0, cfg=None, s_values=(0.25, 0.5, 0.9)) -> SuiteResult:
    rows = []
    for name, d in (("disk", Disk()), ("slit_disk", SlitDisk())):
        for s in s_values:
            v = lemma34_check(d, samples, task_seed(seed, f"lemma34/{name}/{s}"), s, cfg)
            rows.append({"domain": name, "s": s, "pairs": v.pairs, "worst_ratio": v.worst_ratio,
                         "soft_violations": v.soft_violations, "hard_violations": v.hard_violations})
    passed = all(r["soft_violations"] == 0 and r["hard_violations"] == 0 for r in rows)
    return SuiteResult("lemma34", passed, rows, ("domain", "s", "pairs", "worst_ratio",
                                                 "soft_violations", "hard_violations"))


def theorem2_suite() -> SuiteResult:
    """The tabulated cases of the phi2 construction on a grid of t."""
    cases = [
        ("identity_c1_d0", GrowthTable.linear(1.0), 1.0, 0.0, lambda t: 2 * t),
        ("identity_c1_dlog", GrowthTable.linear(1.0), 1.0, math.log(1.5), lambda t: 2 * t),
        ("triple_c0_d0", GrowthTable.linear(3.0), 0.0, 0.0, lambda t: 6 * t),
    ]
    grid = np.linspace(0.0, 40.0, 81)
    rows = []
    for name, phi1, c, dconst, expect in cases:
        phi2 = theorem2_phi2(phi1, c, dconst)
        err = float(np.max(np.abs(phi2(grid) - expect(grid))))
        rows.append({"case": name, "c": c, "d": dconst, "max_abs_error": err, "pass": err <= 1e-12})
    return SuiteResult("theorem2", all(r["pass"] for r in rows), rows,
                       ("case", "c", "d", "max_abs_error", "pass"))


def chain_oracle(y0, y1, a):
    """Heights of the chain along a vertical half-plane segment, by the recurrence ``y <- y (1 + a)``."""
    ys = [y0]
    while y1 - ys[-1] > a * ys[-1]:
        ys.append(ys[-1] * (1 + a))
    return ys


def theorem3_suite() -> SuiteResult:
    rows = []
    for M, a_expect in ((1.0, 1 - math.exp(-1 / 3)), (2.0, 1 - math.exp(-1 / 6)), (10.0, 1 - math.exp(-1 / 30))):
        a, M1 = theorem3_constants(M)
        ok = abs(a - a_expect) <= 1e-15 and M1 == 4 * M
        rows.append({"check": f"constants_M{M:g}", "value": a, "expected": a_expect, "pass": ok})
    a_seq = [theorem3_constants(M)[0] for M in (1, 2, 4, 8, 16, 1e3, 1e6)]
    rows.append({"check": "a_decreasing_in_M", "value": a_seq[-1], "expected": 0.0,
                 "pass": bool(np.all(np.diff(a_seq) < 0))})
    a, _ = theorem3_constants(1.0)
    chain = chain_points(HalfPlane(), [(0.0, 1.0), (0.0, math.e)], a)
    oracle = chain_oracle(1.0, math.e, a)
    Z = chain.points
    d = HalfPlane().distance(Z[:-1])
    sphere = float(np.max(np.abs(np.hypot(*np.diff(Z, axis=0).T) - a * d))) if len(Z) > 1 else 0.0
    rows.append({"check": "chain_steps", "value": chain.steps, "expected": len(oracle) - 1,
                 "pass": chain.steps == len(oracle) - 1 == 4})
    rows.append({"check": "chain_heights", "value": float(np.max(np.abs(Z[:, 1] - oracle))),
                 "expected": 0.0, "pass": bool(np.allclose(Z[:, 1], oracle, rtol=0, atol=1e-9))})
    rows.append({"check": "chain_sphere_condition", "value": sphere, "expected": 0.0, "pass": sphere <= 1e-9})
    rows.append({"check": "chain_terminal_covered", "value": int(chain.terminal_covered), "expected": 1,
                 "pass": chain.terminal_covered})
    return SuiteResult("theorem3", all(r["pass"] for r in rows), rows, ("check", "value", "expected", "pass"))


def example1_suite(cfg=None, ladder=EXAMPLE1_LADDER) -> SuiteResult:
    rows, passed, summary = [], True, {}
    for punctured in (True, False):
        table = example1_run(ladder, cfg, punctured=punctured)
        checks = table.checks()
        at = {r["t"]: r for r in table.rows}
        if 1e-3 in at:
            checks["j_source_at_1e-3_above_2log3"] = at[1e-3]["j_source"] >= 2 * math.log(3)
        passed &= all(checks.values())
        label = "punctured" if punctured else "unpunctured"
        summary[label] = checks
        for r in table.rows:
            rows.append({**r, "variant": label})
    cert = example1_slope_certificate(CANDIDATE_SLOPES, SLOPE_LADDER)
    summary["slope_first_exceeded_at_t"] = {f"{k:g}": v for k, v in cert.items()}
    passed &= all(v is not None for v in cert.values())
    return SuiteResult("example1", bool(passed), rows, EXAMPLE1_COLUMNS + ("variant",), summary)


def example2_suite(M=2.0, r=0.1, mmax=20) -> SuiteResult:
    rows, m0 = example2_table(M, r, mmax)
    checks = example2_check(M, r, mmax)
    passed = checks["threshold_consistent"] and checks["increasing"] and checks["unbounded"]
    return SuiteResult("example2", bool(passed), rows, ("m", "image_bound", "source_j", "exceeds"),
                       {"first_m": m0, **checks})
