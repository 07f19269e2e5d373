"""
Channel constants and instantaneous achievable rates.

U1 is served over a line-of-sight link with free-space gain ``eta / z``;
U2 sits behind a wall and sees Rayleigh fading ``|h2|^2`` with path loss
``z ** (alpha / 2)``. The NLoS link carries no ``eta`` factor. ``rho`` is the
linear transmit SNR throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AccessMode",
    "AccessScheme",
    "ChannelParams",
    "InfeasibleSchemeError",
    "eta",
    "los_outage_boundary",
    "rate_los_oma",
    "rate_nlos_oma",
    "rate_noma_far",
    "rate_noma_near",
    "rate_noma_sic",
    "threshold_varpi",
]

SPEED_OF_LIGHT = 3e8


class InfeasibleSchemeError(ValueError):
    """NOMA power split under which the far user can never reach the target rate."""


class AccessMode(enum.Enum):
    OMA = "OMA"
    NOMA = "NOMA"


@dataclass(frozen=True)
class ChannelParams:
    carrier_frequency_hz: float = 10e9
    speed_of_light_m_s: float = SPEED_OF_LIGHT
    pathloss_exponent: float = 6.0

    def __post_init__(self):
        if not self.carrier_frequency_hz > 0:
            raise ValueError("carrier frequency must be positive")
        if not self.speed_of_light_m_s > 0:
            raise ValueError("speed of light must be positive")
        if not self.pathloss_exponent >= 2:
            raise ValueError("NLoS path-loss exponent must be >= 2")

    @property
    def eta(self) -> float:
        return eta(self)


def eta(params: ChannelParams) -> float:
    """Free-space gain constant ``c^2 / (16 pi^2 f_c^2)`` in m^2."""
    return params.speed_of_light_m_s**2 / (16 * math.pi**2 * params.carrier_frequency_hz**2)


@dataclass(frozen=True)
class AccessScheme:
    """
    OMA (TDMA over ``slots`` slots) or two-user power-domain NOMA.

    Use :meth:`oma` / :meth:`noma` rather than the raw constructor. A NOMA
    split must satisfy ``alpha1 + alpha2 = 1``, ``alpha1 < alpha2`` and
    ``alpha2 > alpha1 * (2**rate - 1)``; the last condition is also what
    makes U1's decoding of U2's stream succeed whenever its own does.
    """

    mode: AccessMode
    target_rate_bpshz: float = 1.0
    slots: int = 2
    alpha1: float | None = None
    alpha2: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", AccessMode(self.mode))
        if not self.target_rate_bpshz > 0:
            raise ValueError("target rate must be positive")
        if self.mode is AccessMode.OMA:
            if self.slots != 2:
                raise ValueError("OMA is modelled with exactly 2 TDMA slots")
            return
        a1, a2 = self.alpha1, self.alpha2
        if a1 is None or a2 is None:
            raise ValueError("NOMA needs both power coefficients")
        if not (0 < a1 < 1 and 0 < a2 < 1):
            raise ValueError("power coefficients must lie in (0, 1)")
        if abs(a1 + a2 - 1) > 1e-12:
            raise ValueError(f"alpha1 + alpha2 must be 1, got {a1 + a2!r}")
        if not a1 < a2:
            raise ValueError("NOMA needs alpha1 < alpha2 (more power to the far user)")
        if self.noma_margin <= 0:
            raise InfeasibleSchemeError(
                f"alpha2 - alpha1*(2^R - 1) = {self.noma_margin:.6g} <= 0: "
                "U2 is in outage at every SNR"
            )

    @classmethod
    def oma(cls, target_rate_bpshz: float = 1.0) -> "AccessScheme":
        return cls(AccessMode.OMA, target_rate_bpshz)

    @classmethod
    def noma(cls, alpha1: float = 0.1, target_rate_bpshz: float = 1.0) -> "AccessScheme":
        return cls(AccessMode.NOMA, target_rate_bpshz, alpha1=alpha1, alpha2=1 - alpha1)

    @property
    def is_noma(self) -> bool:
        return self.mode is AccessMode.NOMA

    @property
    def noma_margin(self) -> float:
        """``alpha2 - alpha1 (2^R - 1)``; only meaningful for NOMA."""
        return self.alpha2 - self.alpha1 * (2**self.target_rate_bpshz - 1)


def _require_noma(scheme: AccessScheme):
    if not scheme.is_noma:
        raise ValueError("this rate is only defined for a NOMA scheme")


def rate_los_oma(z1, rho, params: ChannelParams, slots: int = 2):
    """TDMA rate of the LoS user at squared distance ``z1``."""
    return np.log2(1 + params.eta * np.asarray(rho, dtype=float) / z1) / slots


def rate_nlos_oma(z2, rho, h2sq, params: ChannelParams, slots: int = 2):
    """TDMA rate of the NLoS user with fading power ``h2sq``."""
    snr = np.asarray(rho, dtype=float) * h2sq * np.asarray(z2, dtype=float) ** (-params.pathloss_exponent / 2)
    return np.log2(1 + snr) / slots


def rate_noma_near(z, rho, params: ChannelParams, scheme: AccessScheme):
    """Rate of U1's own stream after SIC has removed U2's stream."""
    _require_noma(scheme)
    return np.log2(1 + scheme.alpha1 * np.asarray(rho, dtype=float) * params.eta / z)


def rate_noma_sic(z, rho, params: ChannelParams, scheme: AccessScheme):
    """Rate at which U1 decodes U2's stream, treating its own as interference."""
    _require_noma(scheme)
    g = np.asarray(rho, dtype=float) * params.eta / z
    return np.log2(1 + scheme.alpha2 * g / (scheme.alpha1 * g + 1))


def rate_noma_far(z, rho, h2sq, params: ChannelParams, scheme: AccessScheme):
    """Rate of U2, decoding directly with U1's stream as interference."""
    _require_noma(scheme)
    g = np.asarray(rho, dtype=float) * h2sq * np.asarray(z, dtype=float) ** (-params.pathloss_exponent / 2)
    return np.log2(1 + scheme.alpha2 * g / (scheme.alpha1 * g + 1))


def threshold_varpi(scheme: AccessScheme, rho: float) -> float:
    """
    Fading threshold coefficient: U2 is in outage iff ``|h2|^2 < varpi * z^(alpha/2)``.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    R = scheme.target_rate_bpshz
    if not scheme.is_noma:
        return (2 ** (scheme.slots * R) - 1) / rho
    if scheme.noma_margin <= 0:
        raise InfeasibleSchemeError("infeasible NOMA power split")
    return (2**R - 1) / (rho * scheme.noma_margin)


def los_outage_boundary(scheme: AccessScheme, rho: float, params: ChannelParams) -> float:
    """Squared distance beyond which the LoS user is in outage."""
    R = scheme.target_rate_bpshz
    if scheme.is_noma:
        return scheme.alpha1 * params.eta * rho / (2**R - 1)
    return params.eta * rho / (2 ** (scheme.slots * R) - 1)
