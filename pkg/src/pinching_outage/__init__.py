"""
Outage analysis of a two-user indoor downlink served by a fixed antenna
(CASS) or a pinching antenna on a ceiling waveguide (PASS), with OMA or NOMA.

U1 shares the antenna's room (line of sight), U2 sits behind a wall in the
next room (Rayleigh fading). The package gives the exact laws of the
antenna-user squared distances, closed-form and high-SNR outage
probabilities, and a Monte-Carlo simulator that checks them.
"""

from .geometry import (
    DistanceKind,
    GeometryConsistencyError,
    RoomGeometry,
    SquaredDistanceDistribution,
    UserPosition,
    sample_position,
    squared_distance,
)
from .link import AccessMode, AccessScheme, ChannelParams, InfeasibleSchemeError, eta
from .montecarlo import McConfig, McEstimate, sample_squared_distance, simulate_outage
from .outage import (
    AsymptoticModel,
    OutageQuery,
    System,
    asymptotic_coefficient,
    asymptotic_model,
    db_to_linear,
    diversity_order_estimate,
    gap_u1,
    gap_u2_asymptotic,
    linear_to_db,
    outage_asymptotic_u2,
    outage_probability,
    zero_outage_threshold_u1,
)
from .quadrature import QuadratureRule, chebyshev_gauss_rule, integrate

__version__ = "0.1.0"

__all__ = [
    "AccessMode",
    "AccessScheme",
    "AsymptoticModel",
    "ChannelParams",
    "DistanceKind",
    "GeometryConsistencyError",
    "InfeasibleSchemeError",
    "McConfig",
    "McEstimate",
    "OutageQuery",
    "QuadratureRule",
    "RoomGeometry",
    "SquaredDistanceDistribution",
    "System",
    "UserPosition",
    "asymptotic_coefficient",
    "asymptotic_model",
    "chebyshev_gauss_rule",
    "db_to_linear",
    "diversity_order_estimate",
    "eta",
    "gap_u1",
    "gap_u2_asymptotic",
    "integrate",
    "linear_to_db",
    "outage_asymptotic_u2",
    "outage_probability",
    "sample_position",
    "sample_squared_distance",
    "simulate_outage",
    "squared_distance",
    "zero_outage_threshold_u1",
]
