"""
Acceptance criteria 1-8, each at its stated tolerance, one reported line per criterion.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import stats

from pinching_outage.cli import main
from pinching_outage.geometry import DistanceKind, RoomGeometry, SquaredDistanceDistribution
from pinching_outage.link import AccessScheme, ChannelParams
from pinching_outage.montecarlo import McConfig, sample_squared_distance, simulate_outage
from pinching_outage.outage import (
    OutageQuery,
    System,
    asymptotic_coefficient,
    db_to_linear,
    gap_u1,
    gap_u2_asymptotic,
    linear_to_db,
    outage_probability,
    zero_outage_threshold_u1,
)
from pinching_outage.validation import fd_max_relative_error, pdf_mass, segment_conformance

OMA = AccessScheme.oma()
NOMA = AccessScheme.noma()
SCHEMES = {"OMA": OMA, "NOMA": NOMA}
MC_SEED = 2025


def op(system, scheme, user, snr_db, order=100):
    return outage_probability(OutageQuery(system, scheme, user, float(db_to_linear(snr_db)),
                                          quadrature_order=order))


def test_criterion_1_zero_outage_thresholds(report):
    start = time.perf_counter()
    rounded = {("CASS", "OMA"): 81, ("PASS", "OMA"): 78, ("CASS", "NOMA"): 86, ("PASS", "NOMA"): 83}
    ok, parts = True, []
    for (s, m), target in rounded.items():
        rho_star = zero_outage_threshold_u1(System(s), SCHEMES[m])
        db = linear_to_db(rho_star)
        above = [outage_probability(OutageQuery(System(s), SCHEMES[m], 1, rho_star * f))
                 for f in (1.0, 10**0.01, 10**0.5, 10**3)]
        below = op(System(s), SCHEMES[m], 1, db - 0.5)
        ok &= abs(db - target) <= 0.5 and all(p == 0.0 for p in above) and below > 0
        parts.append(f"{s}/{m} {db:.2f} dB")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    report(1, ok, ", ".join(parts) + f"; zero above, positive 0.5 dB below; {elapsed:.3f} s")


def test_criterion_2_analytic_matches_monte_carlo(report):
    mc = McConfig(trials=1_000_000, seed=MC_SEED, workers=4)
    worst_sigma, worst_abs, bad = 0.0, 0.0, []
    for s in System:
        for m, scheme in SCHEMES.items():
            for user in (1, 2):
                for db in range(60, 111, 5):
                    q = OutageQuery(s, scheme, user, float(db_to_linear(db)))
                    p = outage_probability(q)
                    est = simulate_outage(q, mc)
                    gap = abs(p - est.p_hat)
                    sigma_ok = gap <= 3 * est.stderr
                    worst_abs = max(worst_abs, gap)
                    if est.stderr > 0:
                        worst_sigma = max(worst_sigma, gap / est.stderr)
                    if not (sigma_ok and gap <= 0.005):
                        bad.append(f"{s.value}/{m}/U{user}@{db}")
    report(2, not bad, f"88 points, worst {worst_sigma:.2f} sigma, worst |gap| {worst_abs:.2e}"
                  + (f"; failing {bad}" if bad else ""))


def test_criterion_3_diversity_order_and_asymptote(report):
    ok, parts = True, []
    for s in System:
        for m, scheme in SCHEMES.items():
            lo, hi = op(s, scheme, 2, 110), op(s, scheme, 2, 120)
            slope = (math.log10(hi) - math.log10(lo)) / 1.0  # one decade of SNR
            c = asymptotic_coefficient(s, scheme)
            ratio = op(s, scheme, 2, 115) / (c / float(db_to_linear(115)))
            ok &= abs(slope + 1) <= 0.05 and 0.95 <= ratio <= 1.05
            parts.append(f"{s.value}/{m} slope {slope:.4f} ratio {ratio:.4f}")
    report(3, ok, "; ".join(parts))


def test_criterion_4_distribution_validity(report):
    rng = np.random.default_rng(MC_SEED)
    ok, worst = True, {"mass": 0.0, "ks": 0.0, "fd": 0.0}
    failures = []
    for geom in (RoomGeometry(20, 5), RoomGeometry(30, 5), RoomGeometry(7, 3)):
        for kind in DistanceKind:
            law = SquaredDistanceDistribution(kind, geom)
            lo, hi = law.support()
            mass = abs(pdf_mass(law) - 1)
            monotone = bool(np.all(np.diff(law.cdf(np.linspace(lo, hi, 10_000))) >= 0))
            ks = stats.kstest(sample_squared_distance(kind, geom, rng, 1_000_000), law.cdf).statistic
            fd = fd_max_relative_error(law, 1e-6 * geom.side_length_m**2)
            worst = {"mass": max(worst["mass"], mass), "ks": max(worst["ks"], ks), "fd": max(worst["fd"], fd)}
            this = mass <= 1e-6 and monotone and ks < 0.002 and fd <= 1e-6
            if not this:
                failures.append(f"{kind.value} D={geom.side_length_m:g}")
            ok &= this
    report(4, ok, f"12 laws; worst |mass-1| {worst['mass']:.1e}, KS {worst['ks']:.5f}, "
                         f"cdf/pdf rel {worst['fd']:.1e}" + (f"; failing {failures}" if failures else ""))


def test_criterion_5_quadrature_stability_and_conformance(report):
    worst = 0.0
    for s in System:
        for scheme in SCHEMES.values():
            for user in (1, 2):
                for db in range(60, 121):
                    worst = max(worst, abs(op(s, scheme, user, db, 100) - op(s, scheme, user, db, 1000)))
    conform = max(abs(e - g) for scheme in SCHEMES.values() for db in range(60, 121, 5)
                  for e, g in segment_conformance(System.CASS, scheme, float(db_to_linear(db)),
                                                  RoomGeometry(), ChannelParams())[:1])
    ok = worst < 1e-8 and conform <= 1e-12
    report(5, ok, f"max |OP(n=100) - OP(n=1000)| = {worst:.2e} (need < 1e-8); "
                         f"first CASS segment term vs generic integral {conform:.1e} (need <= 1e-12)")


def test_criterion_6_gap_properties(report):
    grid = np.round(np.arange(60.0, 100.0001, 0.1), 1)
    ok, parts = True, []
    for m, scheme in SCHEMES.items():
        gaps = np.array([gap_u1(scheme, float(db_to_linear(s))) for s in grid])
        peak = grid[np.argmax(gaps)]
        lo = linear_to_db(zero_outage_threshold_u1(System.PASS, scheme))
        hi = linear_to_db(zero_outage_threshold_u1(System.CASS, scheme))
        nonneg = bool(np.all(gaps >= 0))
        inside = lo < peak < hi
        ok &= nonneg and inside
        parts.append(f"{m}: min {gaps.min():.2e}, peak {gaps.max():.4f} at {peak:.1f} dB "
                     f"(window {lo:.2f}-{hi:.2f} dB{'' if inside else ', outside'})")
    rho = db_to_linear(np.arange(60.0, 120.1, 1.0))
    for m, scheme in SCHEMES.items():
        d2 = gap_u2_asymptotic(scheme, rho)
        halving = gap_u2_asymptotic(scheme, rho * 10**0.301) / d2
        good = bool(np.all(d2 > 0) and np.allclose(halving, 0.5, rtol=1e-3))
        ok &= good
        parts.append(f"{m} U2 gap positive and halving per 3.01 dB: {good}")
    report(6, ok, "; ".join(parts))


def test_criterion_7_noma_fairness_in_pass(report):
    grid = np.arange(60.0, 110.01, 0.5)
    u1 = all(op(System.PASS, NOMA, 1, s) >= op(System.PASS, OMA, 1, s) for s in grid)
    u2 = all(op(System.PASS, NOMA, 2, s) <= op(System.PASS, OMA, 2, s) for s in grid)
    report(7, u1 and u2, f"{grid.size} points: NOMA U1 >= OMA U1 {u1}, NOMA U2 <= OMA U2 {u2}")


def test_criterion_8_sweep_determinism(report, tmp_path):
    args = ["sweep", "--snr-step-db", "5", "--trials", "20000", "--seed", str(MC_SEED)]
    blobs = []
    for i, workers in enumerate(("1", "1", "4")):
        out = tmp_path / f"in{i}.csv"
        assert main([*args, "--workers", workers, "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    out = tmp_path / "proc.csv"
    proc = subprocess.run([sys.executable, "-m", "pinching_outage", *args, "--workers", "3",
                           "--out", str(out)], capture_output=True)
    assert proc.returncode == 0, proc.stderr
    blobs.append(out.read_bytes())
    same = all(b == blobs[0] for b in blobs)
    report(8, same, f"4 runs (workers 1, 1, 4, separate process with 3): byte-identical {same}, "
                           f"{len(blobs[0])} bytes")
