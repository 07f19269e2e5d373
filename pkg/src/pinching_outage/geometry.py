"""
Two-room layout and the squared-distance laws of the antenna-user links.

Room 1 is the square ``[-D/2, D/2] x [-D/2, D/2]`` on the floor (``z = 0``),
room 2 the square ``[D/2, 3D/2] x [-D/2, D/2]`` next to it. Antennas hang at
height ``d``. Four random squared distances appear in the outage analysis:

====  ==========================  =========================================
kind  link                        antenna position
====  ==========================  =========================================
Z1    fixed antenna -> U1         ``[0, 0, d]``
Z2    fixed antenna -> U2         ``[0, 0, d]``
Z3    pinching antenna -> U1      ``[x1, 0, d]`` (tracks U1 along x)
Z4    pinching antenna -> U2      ``[x1, 0, d]`` (still parked at U1's x)
====  ==========================  =========================================

Every law is ``d**2 + zeta`` where ``zeta`` is a horizontal squared distance,
so the piecewise evaluators below are written in ``zeta`` and shifted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "DistanceKind",
    "GeometryConsistencyError",
    "RoomGeometry",
    "Segment",
    "SquaredDistanceDistribution",
    "UserPosition",
    "position_from_uniforms",
    "sample_position",
    "squared_distance",
]

# slack allowed on arcsin / sqrt arguments before we call it a bug
_DOMAIN_SLACK = 1e-12


class GeometryConsistencyError(ArithmeticError):
    """A closed-form evaluator left its mathematical domain by more than rounding."""


class DistanceKind(enum.Enum):
    Z1 = "Z1"
    Z2 = "Z2"
    Z3 = "Z3"
    Z4 = "Z4"


@dataclass(frozen=True)
class RoomGeometry:
    """Side length ``D`` of both rooms and height ``d`` of the antenna, in meters."""

    side_length_m: float = 20.0
    antenna_height_m: float = 5.0

    def __post_init__(self):
        for name in ("side_length_m", "antenna_height_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def room_bounds(self, room: int) -> tuple[tuple[float, float], tuple[float, float]]:
        """``((x_lo, x_hi), (y_lo, y_hi))`` of room 1 or room 2."""
        D = self.side_length_m
        if room == 1:
            return (-D / 2, D / 2), (-D / 2, D / 2)
        if room == 2:
            return (D / 2, 3 * D / 2), (-D / 2, D / 2)
        raise ValueError(f"room must be 1 or 2, got {room!r}")


@dataclass(frozen=True)
class UserPosition:
    x_m: float | np.ndarray
    y_m: float | np.ndarray
    z_m: float | np.ndarray = 0.0

    def as_array(self) -> np.ndarray:
        x, y, z = np.broadcast_arrays(self.x_m, self.y_m, self.z_m)
        return np.stack([x, y, z], axis=-1).astype(float)


def squared_distance(a, b):
    """Euclidean squared distance between 3-D points (broadcasts over leading axes)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.sum((a - b) ** 2, axis=-1)
    return float(out) if out.ndim == 0 else out


def position_from_uniforms(room: int, geometry: RoomGeometry, ux, uy) -> UserPosition:
    """Map uniforms on ``[0, 1)`` to a point uniformly placed in ``room``."""
    (x_lo, x_hi), (y_lo, y_hi) = geometry.room_bounds(room)
    x = x_lo + (x_hi - x_lo) * np.asarray(ux, dtype=float)
    y = y_lo + (y_hi - y_lo) * np.asarray(uy, dtype=float)
    if x.ndim == 0:
        return UserPosition(float(x), float(y), 0.0)
    return UserPosition(x, y, np.zeros_like(x))


def sample_position(room: int, geometry: RoomGeometry, rng: np.random.Generator,
                    size: int | None = None) -> UserPosition:
    """Draw one (``size=None``) or ``size`` user positions uniformly in ``room``."""
    geometry.room_bounds(room)  # validates the index before touching rng
    ux = rng.random(size)
    uy = rng.random(size)
    return position_from_uniforms(room, geometry, ux, uy)


# ---------------------------------------------------------------------------
# guarded elementary functions
# ---------------------------------------------------------------------------

def _asin(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + _DOMAIN_SLACK):
        raise GeometryConsistencyError(f"arcsin argument out of [-1, 1]: {np.max(np.abs(x))!r}")
    return np.arcsin(np.clip(x, -1.0, 1.0))


def _sqrt(x, scale):
    x = np.asarray(x, dtype=float)
    if np.any(x < -_DOMAIN_SLACK * scale):
        raise GeometryConsistencyError(f"sqrt of negative argument: {np.min(x)!r}")
    return np.sqrt(np.maximum(x, 0.0))


# ---------------------------------------------------------------------------
# piecewise evaluators, all in zeta = z - d**2
# ---------------------------------------------------------------------------

def _hbar(zeta, D):
    eps = zeta - D * D / 4
    return 2 * D * _sqrt(eps, D * D) + 4 * zeta * _asin(D / (2 * np.sqrt(zeta)))


def _z1_pdf_inner(zeta, D):
    return np.full_like(zeta, math.pi / D**2)


def _z1_cdf_inner(zeta, D):
    return math.pi * zeta / D**2


def _z1_pdf_outer(zeta, D):
    # printed as 4*asin(D/(2 sqrt(zeta)) - pi)/D^2; the minus pi belongs outside
    return (4 * _asin(D / (2 * np.sqrt(zeta))) - math.pi) / D**2


def _z1_cdf_outer(zeta, D):
    return (_hbar(zeta, D) - math.pi * zeta) / D**2


def _z2_pdf_near(zeta, D):
    return (math.pi / 2 - _asin(D / (2 * np.sqrt(zeta)))) / D**2


def _z2_cdf_near(zeta, D):
    return (math.pi * zeta / 2 - _hbar(zeta, D) / 4) / D**2


def _z2_pdf_mid(zeta, D):
    return (math.pi / 2 - _asin(_sqrt(1 - D * D / (4 * zeta), 1.0))) / D**2


def _z2_cdf_mid(zeta, D):
    eps = zeta - D * D / 4
    j = ((D * _sqrt(eps, D * D) - D * D + math.pi * zeta) / 2
         - zeta * _asin(_sqrt(1 - D * D / (4 * zeta), 1.0)))
    return j / D**2


def _z2_pdf_far(zeta, D):
    # arc of radius sqrt(zeta) between the walls y = +-D/2 and the far wall x = 3D/2
    r = np.sqrt(zeta)
    return (_asin(D / (2 * r)) + _asin(3 * D / (2 * r)) - math.pi / 2) / D**2


def _z2_cdf_far(zeta, D):
    r = np.sqrt(zeta)
    eps = zeta - D * D / 4
    i = (D * _sqrt(eps, D * D) - D * D + 3 * D * _sqrt(eps - 2 * D * D, D * D)
         + 2 * zeta * (_asin(D / (2 * r)) + _asin(3 * D / (2 * r)) - math.pi / 2))
    return i / (2 * D**2)


def _z3_pdf(zeta, D):
    with np.errstate(divide="ignore"):
        return 1.0 / (D * np.sqrt(zeta))


def _z3_cdf(zeta, D):
    return 2 * np.sqrt(zeta) / D


def _z4_pdf_a(zeta, D):
    return np.sqrt(zeta) / D**3


def _z4_cdf_a(zeta, D):
    return 2 * zeta**1.5 / (3 * D**3)


def _z4_pdf_b(zeta, D):
    return np.full_like(zeta, 1 / (2 * D**2))


def _z4_cdf_b(zeta, D):
    return zeta / (2 * D**2) - 1 / 24


def _z4_pdf_c(zeta, D):
    s = _sqrt(zeta - D * D, D * D)
    return 1 / (2 * D**2) - 2 * s / D**3 + 2 / D**2 * np.arctan(s / D)


def _z4_cdf_c(zeta, D):
    s = _sqrt(zeta - D * D, D * D)
    return (2 * zeta / D**2 * (np.arctan(s / D) - D * s / zeta)
            + zeta / (2 * D**2) - 4 * s**3 / (3 * D**3) - 1 / 24)


def _z4_pdf_d(zeta, D):
    r = np.sqrt(4 * zeta - D * D)
    return (2 * math.pi - 1) / (2 * D**2) - 2 / D**2 * np.arctan(r / D)


def _z4_cdf_d(zeta, D):
    r = np.sqrt(4 * zeta - D * D)
    return (zeta * math.pi / D**2 - 2 * zeta / D**2 * (np.arctan(r / D) - D * r / (4 * zeta))
            - zeta / (2 * D**2) - 23 / 24)


def _z4_pdf_e(zeta, D):
    r = np.sqrt(4 * zeta - D * D)
    t = _sqrt(zeta - 4 * D * D, D * D)
    return (2 / D**2 * (np.arctan(D / r) - np.arctan(t / (2 * D)))
            - 1 / (2 * D**2) + t / D**3)


def _z4_tail_closed(zeta, D):
    """Closed-form ``1 - F`` on the last piece; cancels badly near the support end."""
    r = np.sqrt(4 * zeta - D * D)
    t = _sqrt(zeta - 4 * D * D, D * D)
    return (47 / 24 - r / (2 * D) - 4 * t / D + zeta / (2 * D**2) - 2 * t**3 / (3 * D**3)
            - 2 * zeta / D**2 * (np.arctan(D / r) - np.arctan(t / (2 * D))))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _z4_tail_stable(zeta, D):
    # 1 - F = D^-3 * int_{v0}^{D/2} (2D - sqrt(zeta - v^2))^2 dv, v0 = sqrt(zeta - 4D^2),
    # with the bracket rewritten as (v^2 - v0^2) / (2D + sqrt(zeta - v^2));
    # the integrand is analytic on the interval, so 24 Legendre nodes are exact to rounding
    zeta = np.asarray(zeta, dtype=float)[..., None]
    v0 = _sqrt(zeta - 4 * D * D, D * D)
    half = (D / 2 - v0) / 2
    v = (D / 2 + v0) / 2 + half * _GL_NODES
    bracket = (v * v - v0 * v0) / (2 * D + np.sqrt(zeta - v * v))
    return (half[..., 0] * (bracket**2 @ _GL_WEIGHTS)) / D**3


def _z4_cdf_e(zeta, D):
    return 1 - _z4_tail_stable(zeta, D)


_Evaluator = Callable[[np.ndarray, float], np.ndarray]

# (zeta_lo / D^2, zeta_hi / D^2, pdf, cdf) per kind, half-open [lo, hi)
_LAWS: dict[DistanceKind, tuple[tuple[float, float, _Evaluator, _Evaluator], ...]] = {
    DistanceKind.Z1: (
        (0.0, 0.25, _z1_pdf_inner, _z1_cdf_inner),
        (0.25, 0.5, _z1_pdf_outer, _z1_cdf_outer),
    ),
    DistanceKind.Z2: (
        (0.25, 0.5, _z2_pdf_near, _z2_cdf_near),
        (0.5, 2.25, _z2_pdf_mid, _z2_cdf_mid),
        (2.25, 2.5, _z2_pdf_far, _z2_cdf_far),
    ),
    DistanceKind.Z3: (
        (0.0, 0.25, _z3_pdf, _z3_cdf),
    ),
    DistanceKind.Z4: (
        (0.0, 0.25, _z4_pdf_a, _z4_cdf_a),
        (0.25, 1.0, _z4_pdf_b, _z4_cdf_b),
        (1.0, 1.25, _z4_pdf_c, _z4_cdf_c),
        (1.25, 4.0, _z4_pdf_d, _z4_cdf_d),
        (4.0, 4.25, _z4_pdf_e, _z4_cdf_e),
    ),
}


# pieces whose upper tail has its own cancellation-free evaluator
_TAILS: dict[_Evaluator, _Evaluator] = {_z4_cdf_e: _z4_tail_stable}


class Segment(NamedTuple):
    """One smooth piece ``[lo, hi)`` of a law, in squared meters."""

    lo: float
    hi: float
    pdf: Callable[[np.ndarray], np.ndarray]


def _as_float_array(z):
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)):
        raise ValueError("squared distance must not be NaN")
    return z


@dataclass(frozen=True)
class SquaredDistanceDistribution:
    """
    Piecewise closed-form law of one of the squared distances Z1..Z4.

    Evaluation is lazy: nothing is tabulated, every call goes straight to
    the segment formulas for the current geometry.

    Parameters
    ----------
    kind : DistanceKind
        Which antenna-user link.
    geometry : RoomGeometry
        Room side length and antenna height.
    """

    kind: DistanceKind
    geometry: RoomGeometry

    def __post_init__(self):
        object.__setattr__(self, "kind", DistanceKind(self.kind))

    def _pieces(self):
        return _LAWS[self.kind]

    def support(self) -> tuple[float, float]:
        D2 = self.geometry.side_length_m ** 2
        d2 = self.geometry.antenna_height_m ** 2
        pieces = self._pieces()
        return d2 + pieces[0][0] * D2, d2 + pieces[-1][1] * D2

    def breakpoints(self) -> tuple[float, ...]:
        D2 = self.geometry.side_length_m ** 2
        d2 = self.geometry.antenna_height_m ** 2
        pieces = self._pieces()
        return tuple(d2 + lo * D2 for lo, _, _, _ in pieces) + (d2 + pieces[-1][1] * D2,)

    def segments(self) -> tuple[Segment, ...]:
        """The smooth pieces of the pdf, with callables taking ``z`` (not zeta)."""
        D = self.geometry.side_length_m
        d2 = self.geometry.antenna_height_m ** 2
        out = []
        for lo, hi, pdf, _ in self._pieces():
            def seg_pdf(z, _pdf=pdf):
                return _pdf(np.asarray(z, dtype=float) - d2, D)
            out.append(Segment(d2 + lo * D * D, d2 + hi * D * D, seg_pdf))
        return tuple(out)

    def _evaluate(self, z, which):
        z = _as_float_array(z)
        D = self.geometry.side_length_m
        zeta = np.atleast_1d(z - self.geometry.antenna_height_m ** 2)
        out = np.zeros_like(zeta)
        if which == "sf":
            out[zeta < self._pieces()[0][0] * D * D] = 1.0
        for lo, hi, pdf, cdf in self._pieces():
            mask = (zeta >= lo * D * D) & (zeta < hi * D * D)
            if not np.any(mask):
                continue
            if which == "pdf":
                out[mask] = pdf(zeta[mask], D)
            elif which == "cdf":
                out[mask] = cdf(zeta[mask], D)
            elif cdf in _TAILS:
                out[mask] = _TAILS[cdf](zeta[mask], D)
            else:
                out[mask] = 1.0 - cdf(zeta[mask], D)
        if which == "cdf":
            out[zeta >= self._pieces()[-1][1] * D * D] = 1.0
        if which != "pdf":
            out = np.clip(out, 0.0, 1.0)
        return float(out[0]) if z.ndim == 0 else out.reshape(z.shape)

    def pdf(self, z):
        """Density at ``z`` (squared meters), right-continuous at breakpoints."""
        return self._evaluate(z, "pdf")

    def cdf(self, z):
        """``P(Z <= z)``; 0 below the support and 1 above it."""
        return self._evaluate(z, "cdf")

    def sf(self, z):
        """``P(Z > z)``, accurate to full relative precision near the top of the support."""
        return self._evaluate(z, "sf")
