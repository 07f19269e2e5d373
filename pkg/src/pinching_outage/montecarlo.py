"""
Monte-Carlo outage simulator, used as an independent check of the closed forms.

Each trial places U1 in room 1 and U2 in room 2, positions the antenna
(room centre for CASS, ``[x1, 0, d]`` for PASS), draws a unit-mean
exponential fading power for the NLoS link and evaluates the target user's
instantaneous rate with the functions of :mod:`pinching_outage.link`.

Random numbers come from three Philox streams keyed by ``(seed, stream)``:
U1's coordinates, U2's coordinates and the fading. Trial ``i`` always reads
counter block ``i + 1`` of each stream, so an estimate depends only on
``(seed, trials, query)`` and not on batch size or thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import DistanceKind, RoomGeometry, position_from_uniforms, sample_position, squared_distance
from .link import (
    rate_los_oma,
    rate_nlos_oma,
    rate_noma_far,
    rate_noma_near,
    threshold_varpi,
)
from .outage import OutageQuery, System

__all__ = ["McConfig", "McEstimate", "sample_squared_distance", "simulate_outage"]

_STREAM_U1, _STREAM_U2, _STREAM_FADING = 0, 1, 2
_WORDS_PER_BLOCK = 4  # Philox4x64 emits four 64-bit words per counter value


@dataclass(frozen=True)
class McConfig:
    trials: int = 1_000_000
    seed: int = 0
    batch_size: int = 1 << 18
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    stderr: float
    trials: int

    @classmethod
    def from_count(cls, outages: int, trials: int) -> "McEstimate":
        p = outages / trials
        return cls(p, math.sqrt(p * (1 - p) / trials), trials)


def _uniforms(seed: int, stream: int, start: int, count: int, per_trial: int) -> np.ndarray:
    """``(count, per_trial)`` uniforms on [0, 1) for trials ``start .. start+count-1``."""
    key = np.array([seed, stream], dtype=np.uint64)
    raw = np.random.Philox(key=key, counter=start).random_raw(count * _WORDS_PER_BLOCK)
    raw = raw.reshape(count, _WORDS_PER_BLOCK)[:, :per_trial]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _count_outages(q: OutageQuery, seed: int, start: int, count: int) -> int:
    geom = q.geometry
    d = geom.antenna_height_m
    rho = q.rho_linear
    rate = q.scheme.target_rate_bpshz

    u1 = _uniforms(seed, _STREAM_U1, start, count, 2)
    p1 = position_from_uniforms(1, geom, u1[:, 0], u1[:, 1])
    ant_x = np.zeros(count) if q.system is System.CASS else p1.x_m
    antenna = np.stack([ant_x, np.zeros(count), np.full(count, d)], axis=-1)

    if q.user == 1:
        z = squared_distance(antenna, p1.as_array())
        if q.scheme.is_noma:
            r = rate_noma_near(z, rho, q.channel, q.scheme)
        else:
            r = rate_los_oma(z, rho, q.channel, q.scheme.slots)
        return int(np.count_nonzero(r < rate))

    u2 = _uniforms(seed, _STREAM_U2, start, count, 2)
    p2 = position_from_uniforms(2, geom, u2[:, 0], u2[:, 1])
    z = squared_distance(antenna, p2.as_array())
    u_fade = _uniforms(seed, _STREAM_FADING, start, count, 1)[:, 0]
    h2sq = -np.log1p(-u_fade)  # 1 - u in (0, 1], never log(0)
    if q.scheme.is_noma:
        r = rate_noma_far(z, rho, h2sq, q.channel, q.scheme)
    else:
        r = rate_nlos_oma(z, rho, h2sq, q.channel, q.scheme.slots)
    return int(np.count_nonzero(r < rate))


def simulate_outage(q: OutageQuery, mc: McConfig = McConfig()) -> McEstimate:
    """Estimate the outage probability of ``q`` from ``mc.trials`` independent trials."""
    if not q.rho_linear > 0:
        raise ValueError("rho must be positive")
    if q.user == 2:
        threshold_varpi(q.scheme, q.rho_linear)  # raises on an infeasible split
    starts = range(0, mc.trials, mc.batch_size)
    jobs = [(s, min(mc.batch_size, mc.trials - s)) for s in starts]
    if mc.workers == 1:
        counts = [_count_outages(q, mc.seed, s, n) for s, n in jobs]
    else:
        with ThreadPoolExecutor(mc.workers) as pool:
            counts = list(pool.map(lambda job: _count_outages(q, mc.seed, *job), jobs))
    return McEstimate.from_count(sum(counts), mc.trials)


def sample_squared_distance(kind: DistanceKind, geometry: RoomGeometry,
                            rng: np.random.Generator, size: int | None = None):
    """Draw squared distances of the given kind straight from the room geometry."""
    kind = DistanceKind(kind)
    d = geometry.antenna_height_m
    n = 1 if size is None else size
    user_room = 1 if kind in (DistanceKind.Z1, DistanceKind.Z3) else 2
    user = sample_position(user_room, geometry, rng, n)
    if kind in (DistanceKind.Z1, DistanceKind.Z2):
        ant_x = np.zeros(n)
    elif kind is DistanceKind.Z3:
        ant_x = user.x_m
    else:
        ant_x = sample_position(1, geometry, rng, n).x_m
    antenna = np.stack([ant_x, np.zeros(n), np.full(n, d)], axis=-1)
    z = squared_distance(antenna, user.as_array())
    return float(z[0]) if size is None else z
