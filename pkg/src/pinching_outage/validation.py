"""
Self-checks behind ``pinching-outage validate``.

Four suites, each a list of :class:`Check` records:

* ``distributions`` - pdf normalisation, cdf monotonicity, cdf/pdf finite
  differences and Kolmogorov-Smirnov against geometric sampling;
* ``quadrature`` - change of U2's outage between n = 100 and n = 1000;
* ``conformance`` - hand-substituted per-segment integrands (the ``j, q, k,
  c, v`` terms) against the generic segment integral;
* ``oracle`` - closed form against the Monte-Carlo simulator.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np
from scipy import integrate as sp_integrate
from scipy import stats

from .geometry import DistanceKind, RoomGeometry, SquaredDistanceDistribution
from .link import AccessScheme, ChannelParams, threshold_varpi
from .montecarlo import McConfig, sample_squared_distance, simulate_outage
from .outage import OutageQuery, System, db_to_linear, distribution_for, outage_probability
from .quadrature import chebyshev_gauss_rule, integrate

__all__ = [
    "Check",
    "GEOMETRIES",
    "SUITES",
    "conformance_checks",
    "distribution_checks",
    "ks_threshold",
    "oracle_checks",
    "explicit_segment_terms",
    "quadrature_checks",
    "run_validation",
]

GEOMETRIES = (RoomGeometry(20, 5), RoomGeometry(30, 5), RoomGeometry(7, 3))
SNR_GRID_DB = tuple(range(60, 111, 5))
SCHEMES = (AccessScheme.oma(), AccessScheme.noma())

LEVEL_TRIALS = {"quick": 100_000, "full": 1_000_000}

DistFactory = Callable[[DistanceKind, RoomGeometry], SquaredDistanceDistribution]


@dataclass(frozen=True)
class Check:
    name: str
    statistic: float
    threshold: float
    passed: bool

    def as_dict(self):
        return asdict(self)


def _le(name, statistic, threshold):
    return Check(name, float(statistic), float(threshold), bool(statistic <= threshold))


def _geom_tag(g: RoomGeometry) -> str:
    return f"D={g.side_length_m:g}, d={g.antenna_height_m:g}"


def ks_threshold(samples: int) -> float:
    """0.002 at 10^6 samples, widened as 2/sqrt(n) for smaller runs."""
    return max(0.002, 2.0 / math.sqrt(samples))


def pdf_mass(dist: SquaredDistanceDistribution) -> float:
    """Integral of the pdf by adaptive quadrature, one smooth piece at a time."""
    return sum(sp_integrate.quad(seg.pdf, seg.lo, seg.hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
               for seg in dist.segments())


def _fd_points(dist: SquaredDistanceDistribution) -> np.ndarray:
    pts = []
    for seg in dist.segments():
        pts.extend(seg.lo + f * (seg.hi - seg.lo) for f in (0.1, 0.3, 0.5, 0.7, 0.9))
    return np.array(pts)


def fd_max_relative_error(dist: SquaredDistanceDistribution, delta: float) -> float:
    """Largest relative gap between a centred cdf difference and ``delta * pdf``."""
    z = _fd_points(dist)
    # difference whichever side of the law is far from 1, so rounding of 1 - tiny stays out
    lower = dist.cdf(z) <= 0.5
    fd = np.where(lower,
                  dist.cdf(z + delta / 2) - dist.cdf(z - delta / 2),
                  dist.sf(z - delta / 2) - dist.sf(z + delta / 2))
    exact = delta * dist.pdf(z)
    return float(np.max(np.abs(fd - exact) / exact))


def distribution_checks(samples: int, seed: int = 0,
                        factory: DistFactory = SquaredDistanceDistribution,
                        geometries: Iterable[RoomGeometry] = GEOMETRIES) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for geom in geometries:
        tag = _geom_tag(geom)
        for kind in DistanceKind:
            dist = factory(kind, geom)
            lo, hi = dist.support()
            name = kind.value
            checks.append(_le(f"{name} pdf mass ({tag})", abs(pdf_mass(dist) - 1), 1e-6))

            pad = 0.1 * (hi - lo)
            grid = np.linspace(lo - pad, hi + pad, 10_000)
            drop = float(np.max(np.maximum(-np.diff(dist.cdf(grid)), 0.0)))
            checks.append(_le(f"{name} cdf monotone ({tag})", drop, 0.0))
            ends = abs(dist.cdf(lo)) + abs(dist.cdf(hi) - 1)
            checks.append(_le(f"{name} cdf end points ({tag})", ends, 1e-12))

            delta = 1e-6 * geom.side_length_m**2
            checks.append(_le(f"{name} cdf-pdf consistency ({tag})",
                              fd_max_relative_error(dist, delta), 1e-6))

            z = sample_squared_distance(kind, geom, rng, samples)
            ks = stats.kstest(z, dist.cdf).statistic
            checks.append(_le(f"{name} cdf ks ({tag})", ks, ks_threshold(samples)))
    return checks


def quadrature_checks(geometry: RoomGeometry = RoomGeometry(),
                      channel: ChannelParams = ChannelParams(),
                      snr_db: Iterable[float] = range(60, 121)) -> list[Check]:
    checks = []
    snr_db = list(snr_db)
    for scheme in SCHEMES:
        for system in System:
            worst = 0.0
            for db in snr_db:
                q = OutageQuery(system, scheme, 2, float(db_to_linear(db)), geometry, channel, 100)
                fine = OutageQuery(system, scheme, 2, q.rho_linear, geometry, channel, 1000)
                worst = max(worst, abs(outage_probability(q) - outage_probability(fine)))
            checks.append(_le(f"{system.value}/{scheme.mode.value} U2 n=100 vs n=1000", worst, 1e-8))
    return checks


# ---------------------------------------------------------------------------
# hand-substituted segment integrands, t in (-1, 1), sqrt(1 - t^2) included
# ---------------------------------------------------------------------------

def explicit_segment_terms(system: System, varpi: float, geometry: RoomGeometry,
                        alpha: float) -> list[Callable[[np.ndarray], np.ndarray]]:
    """
    Per-segment Chebyshev-Gauss integrands of U2's survival integral.

    Summing ``pi/n * term(t_i)`` gives the integral of
    ``exp(-varpi z^(alpha/2)) f(z)`` over the matching segment, scaled by
    ``D^2`` for CASS. The CASS terms are shifted by ``d^2`` inside the
    exponential, as the PASS terms are.
    """
    D, d = geometry.side_length_m, geometry.antenna_height_m
    D2, d2 = D * D, d * d
    a = alpha / 2
    sq, asin, atan = np.sqrt, np.arcsin, np.arctan

    def e(z):
        return np.exp(-varpi * z**a)

    if System(system) is System.CASS:
        def j(t):
            return D2 / 8 * e(D2 / 8 * t + 3 * D2 / 8 + d2) * (np.pi / 2 - asin(sq(2 / (t + 3)))) * sq(1 - t * t)

        def q(t):
            return (7 * D2 / 8 * e(7 * D2 / 8 * t + 11 * D2 / 8 + d2)
                    * (np.pi / 2 - asin(sq((7 * t + 9) / (7 * t + 11)))) * sq(1 - t * t))

        def k(t):
            return (D2 / 8 * e(D2 / 8 * t + 19 * D2 / 8 + d2)
                    * (asin(np.minimum(3 * sq(2 / (t + 19)), 1.0)) - np.pi / 2 + asin(sq(2 / (t + 19))))
                    * sq(1 - t * t))
        return [j, q, k]

    def j(t):
        return sq(1 - t * t) / 8 * e(D2 * t / 8 + d2 + D2 / 8) * sq(t + 1) / (2 * sq(2))

    def q(t):
        return 3 / 16 * sq(1 - t * t) * e(3 * D2 * t / 8 + d2 + 5 * D2 / 8)

    def k(t):
        return (sq(1 - t * t) / 8 * e(D2 * t / 8 + d2 + 9 * D2 / 8)
                * (0.5 - sq(t + 1) / sq(2) + 2 * atan(sq(t + 1) / (2 * sq(2)))))

    def c(t):
        return (11 * sq(1 - t * t) * e(11 * D2 * t / 8 + d2 + 21 * D2 / 8) / 8
                * ((2 * np.pi - 1) / 2 - 2 * atan(sq((11 * t + 19) / 2))))

    def v(t):
        return (sq(1 - t * t) * e(D2 * t / 8 + d2 + 33 * D2 / 8) / 8
                * (-0.5 + sq(t + 1) / (2 * sq(2))
                   + 2 * (atan(sq(2 / (t + 31))) - atan(sq(t + 1) / (4 * sq(2))))))
    return [j, q, k, c, v]


def segment_conformance(system: System, scheme: AccessScheme, rho: float,
                        geometry: RoomGeometry, channel: ChannelParams, order: int = 100):
    """``[(term_sum, generic_integral), ...]`` for every segment of U2's law."""
    rule = chebyshev_gauss_rule(order)
    varpi = threshold_varpi(scheme, rho)
    alpha = channel.pathloss_exponent
    scale = geometry.side_length_m**2 if System(system) is System.CASS else 1.0
    dist = distribution_for(system, 2, geometry)
    out = []
    for term, seg in zip(explicit_segment_terms(system, varpi, geometry, alpha), dist.segments()):
        explicit = float(np.sum(rule.weights * term(rule.nodes))) / scale
        generic = integrate(rule, lambda z, s=seg: np.exp(-varpi * z ** (alpha / 2)) * s.pdf(z),
                            seg.lo, seg.hi)
        out.append((explicit, generic))
    return out


def conformance_checks(geometry: RoomGeometry = RoomGeometry(),
                       channel: ChannelParams = ChannelParams(),
                       snr_db: Iterable[float] = (70, 80, 90, 100)) -> list[Check]:
    names = {System.CASS: "jqk", System.PASS: "jqkcv"}
    checks = []
    for scheme in SCHEMES:
        for system in System:
            for db in snr_db:
                pairs = segment_conformance(system, scheme, float(db_to_linear(db)), geometry, channel)
                for letter, (explicit, generic) in zip(names[system], pairs):
                    checks.append(_le(
                        f"{system.value}/{scheme.mode.value} segment {letter} at {db:g} dB",
                        abs(explicit - generic), 1e-12))
    return checks


def oracle_checks(trials: int, seed: int = 0, workers: int = 1,
                  geometry: RoomGeometry = RoomGeometry(),
                  channel: ChannelParams = ChannelParams(),
                  snr_db: Iterable[float] = SNR_GRID_DB) -> list[Check]:
    """Closed form vs simulation, in units of the simulation's standard error."""
    mc = McConfig(trials, seed, workers=workers)
    checks = []
    for scheme in SCHEMES:
        for system in System:
            for user in (1, 2):
                for db in snr_db:
                    q = OutageQuery(system, scheme, user, float(db_to_linear(db)), geometry, channel)
                    analytic = outage_probability(q)
                    est = simulate_outage(q, mc)
                    gap = abs(analytic - est.p_hat)
                    tag = f"{system.value}/{scheme.mode.value} U{user} at {db:g} dB"
                    checks.append(_le(f"{tag} |analytic - mc|", gap, min(3 * est.stderr, 0.005)
                                      if est.stderr > 0 else 0.0))
    return checks


SUITES = ("distributions", "quadrature", "conformance", "oracle")


def run_validation(level: str = "quick", seed: int = 0, suites: Iterable[str] = SUITES,
                   factory: DistFactory = SquaredDistanceDistribution,
                   workers: int = 1) -> list[Check]:
    """
    Run the selected suites at ``level`` (``quick``: 1e5 samples/trials, ``full``: 1e6).

    ``factory`` builds the distributions under test; swapping it for a
    deliberately broken one is how the negative-control test works.
    """
    if level not in LEVEL_TRIALS:
        raise ValueError(f"level must be one of {sorted(LEVEL_TRIALS)}, got {level!r}")
    suites = tuple(suites)
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    n = LEVEL_TRIALS[level]
    checks: list[Check] = []
    if "distributions" in suites:
        checks += distribution_checks(n, seed, factory)
    if "quadrature" in suites:
        checks += quadrature_checks()
    if "conformance" in suites:
        checks += conformance_checks()
    if "oracle" in suites:
        checks += oracle_checks(n, seed, workers)
    return checks
