"""
Outage probabilities of the two users under CASS and PASS, with OMA or NOMA.

U1's outage is a pure distance event, ``P(Z > boundary)``. U2's averages the
Rayleigh outage ``1 - exp(-varpi z^(alpha/2))`` over its squared-distance law,
integrated piece by piece with the Chebyshev-Gauss rule. At high SNR U2's
outage behaves like ``c / rho`` (diversity order one); U1's drops to exactly
zero once the antenna reaches every point of room 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import DistanceKind, RoomGeometry, SquaredDistanceDistribution
from .link import AccessScheme, ChannelParams, los_outage_boundary, threshold_varpi
from .quadrature import DEFAULT_ORDER, chebyshev_gauss_rule, integrate

__all__ = [
    "AsymptoticModel",
    "OutageQuery",
    "System",
    "asymptotic_coefficient",
    "asymptotic_model",
    "db_to_linear",
    "distribution_for",
    "diversity_order",
    "diversity_order_estimate",
    "gap_u1",
    "gap_u2_asymptotic",
    "linear_to_db",
    "outage_asymptotic_u2",
    "outage_probability",
    "zero_outage_threshold_u1",
]

_CLAMP_SLACK = 1e-12


class System(enum.Enum):
    CASS = "CASS"
    PASS = "PASS"


def db_to_linear(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10)


def linear_to_db(rho):
    return 10 * np.log10(rho)


_KIND = {
    (System.CASS, 1): DistanceKind.Z1,
    (System.CASS, 2): DistanceKind.Z2,
    (System.PASS, 1): DistanceKind.Z3,
    (System.PASS, 2): DistanceKind.Z4,
}


def distribution_for(system: System, user: int, geometry: RoomGeometry) -> SquaredDistanceDistribution:
    try:
        kind = _KIND[System(system), user]
    except KeyError:
        raise ValueError(f"user must be 1 or 2, got {user!r}") from None
    return SquaredDistanceDistribution(kind, geometry)


@dataclass(frozen=True)
class OutageQuery:
    system: System
    scheme: AccessScheme
    user: int
    rho_linear: float
    geometry: RoomGeometry = field(default_factory=RoomGeometry)
    channel: ChannelParams = field(default_factory=ChannelParams)
    quadrature_order: int = DEFAULT_ORDER

    def __post_init__(self):
        object.__setattr__(self, "system", System(self.system))
        if self.user not in (1, 2):
            raise ValueError(f"user must be 1 or 2, got {self.user!r}")

    @property
    def distribution(self) -> SquaredDistanceDistribution:
        return distribution_for(self.system, self.user, self.geometry)

    def at(self, rho_linear: float) -> "OutageQuery":
        return OutageQuery(self.system, self.scheme, self.user, rho_linear,
                           self.geometry, self.channel, self.quadrature_order)


def _segmentwise(dist: SquaredDistanceDistribution, weight, order: int) -> float:
    rule = chebyshev_gauss_rule(order)
    return sum(integrate(rule, lambda z, s=seg: weight(z) * s.pdf(z), seg.lo, seg.hi)
               for seg in dist.segments())


def _clamp_probability(p: float) -> float:
    if p < 0.0:
        return 0.0 if p > -_CLAMP_SLACK else p
    if p > 1.0:
        return 1.0 if p < 1 + _CLAMP_SLACK else p
    return p


def outage_probability(q: OutageQuery) -> float:
    """Closed-form outage probability of ``q.user``."""
    if not q.rho_linear > 0:
        raise ValueError(f"rho must be positive, got {q.rho_linear!r}")
    dist = q.distribution
    if q.user == 1:
        # exact zero past the threshold, independent of how the boundary rounds
        if q.rho_linear >= zero_outage_threshold_u1(q.system, q.scheme, q.geometry, q.channel):
            return 0.0
        boundary = los_outage_boundary(q.scheme, q.rho_linear, q.channel)
        return float(dist.sf(boundary))
    varpi = threshold_varpi(q.scheme, q.rho_linear)
    half_alpha = q.channel.pathloss_exponent / 2
    # E[1 - exp(-varpi Z^(alpha/2))] under the rule's own normalization of the
    # pdf: exact 1 as rho -> 0, full relative accuracy as rho -> inf
    fail = _segmentwise(dist, lambda z: -np.expm1(-varpi * z**half_alpha), q.quadrature_order)
    mass = _segmentwise(dist, lambda z: 1.0, q.quadrature_order)
    return _clamp_probability(fail / mass)


def _omega(scheme: AccessScheme) -> float:
    """``rho * varpi``: the SNR-free part of the fading threshold."""
    return threshold_varpi(scheme, 1.0)


def asymptotic_coefficient(system: System, scheme: AccessScheme,
                           geometry: RoomGeometry = RoomGeometry(),
                           channel: ChannelParams = ChannelParams(),
                           quadrature_order: int = DEFAULT_ORDER) -> float:
    """``omega * E[Z^(alpha/2)]`` for U2's law, so that ``OP_2 ~ coefficient / rho``."""
    dist = distribution_for(system, 2, geometry)
    half_alpha = channel.pathloss_exponent / 2
    moment = _segmentwise(dist, lambda z: z**half_alpha, quadrature_order)
    return _omega(scheme) * moment


def zero_outage_threshold_u1(system: System, scheme: AccessScheme,
                             geometry: RoomGeometry = RoomGeometry(),
                             channel: ChannelParams = ChannelParams()) -> float:
    """Linear SNR at and above which U1 is never in outage."""
    z_max = distribution_for(system, 1, geometry).support()[1]
    R = scheme.target_rate_bpshz
    if scheme.is_noma:
        return z_max * (2**R - 1) / (scheme.alpha1 * channel.eta)
    return z_max * (2 ** (scheme.slots * R) - 1) / channel.eta


@dataclass(frozen=True)
class AsymptoticModel:
    """
    High-SNR description of one (system, scheme) pair.

    ``coefficient_c_tilde`` gives U2's outage as ``c / rho``; U1's outage is
    identically zero from ``zero_threshold_rho`` on.
    """

    coefficient_c_tilde: float
    zero_threshold_rho: float | None = None


def asymptotic_model(system: System, scheme: AccessScheme,
                     geometry: RoomGeometry = RoomGeometry(),
                     channel: ChannelParams = ChannelParams(),
                     quadrature_order: int = DEFAULT_ORDER) -> AsymptoticModel:
    return AsymptoticModel(
        asymptotic_coefficient(system, scheme, geometry, channel, quadrature_order),
        zero_outage_threshold_u1(system, scheme, geometry, channel),
    )


def outage_asymptotic_u2(model: AsymptoticModel, rho):
    """``c / rho``. Not a probability at low SNR: values above one are returned as is."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("rho must be positive")
    out = model.coefficient_c_tilde / rho
    return float(out) if out.ndim == 0 else out


def diversity_order(op_low: float, op_high: float, rho_low: float, rho_high: float) -> float:
    """Negative log-log slope of an outage curve between two SNRs."""
    if not rho_high > rho_low:
        raise ValueError("need rho_high > rho_low")
    if op_low <= 0 or op_high <= 0:
        raise ValueError("outage probability is zero at an end point; slope undefined")
    decades = (linear_to_db(rho_high) - linear_to_db(rho_low)) / 10
    return -(math.log10(op_high) - math.log10(op_low)) / decades


def diversity_order_estimate(system: System, scheme: AccessScheme, user: int,
                             rho_low: float, rho_high: float,
                             geometry: RoomGeometry = RoomGeometry(),
                             channel: ChannelParams = ChannelParams(),
                             quadrature_order: int = DEFAULT_ORDER) -> float:
    q = OutageQuery(system, scheme, user, rho_low, geometry, channel, quadrature_order)
    return diversity_order(outage_probability(q), outage_probability(q.at(rho_high)),
                           rho_low, rho_high)


def gap_u1(scheme: AccessScheme, rho: float,
           geometry: RoomGeometry = RoomGeometry(),
           channel: ChannelParams = ChannelParams()) -> float:
    """U1 outage of CASS minus that of PASS at the same SNR (the PASS gain)."""
    cass = OutageQuery(System.CASS, scheme, 1, rho, geometry, channel)
    pas = OutageQuery(System.PASS, scheme, 1, rho, geometry, channel)
    return outage_probability(cass) - outage_probability(pas)


def gap_u2_asymptotic(scheme: AccessScheme, rho,
                      geometry: RoomGeometry = RoomGeometry(),
                      channel: ChannelParams = ChannelParams(),
                      quadrature_order: int = DEFAULT_ORDER):
    """High-SNR U2 outage of PASS minus that of CASS: ``(c_PASS - c_CASS) / rho``."""
    c_pass = asymptotic_coefficient(System.PASS, scheme, geometry, channel, quadrature_order)
    c_cass = asymptotic_coefficient(System.CASS, scheme, geometry, channel, quadrature_order)
    return outage_asymptotic_u2(AsymptoticModel(c_pass - c_cass), rho)
