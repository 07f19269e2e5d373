"""Chebyshev-Gauss rules and finite-interval integration."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["DEFAULT_ORDER", "IntegrationError", "QuadratureRule", "chebyshev_gauss_rule", "integrate"]

DEFAULT_ORDER = 100


class IntegrationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """n-point Chebyshev-Gauss rule: nodes ``cos((2i-1)pi/2n)``, weights ``pi/n``."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def chebyshev_gauss_rule(n: int) -> QuadratureRule:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"quadrature order must be a positive integer, got {n!r}")
    n = int(n)
    i = np.arange(1, n + 1)
    nodes = np.cos((2 * i - 1) * math.pi / (2 * n))
    weights = np.full(n, math.pi / n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(n, nodes, weights)


def integrate(rule: QuadratureRule, f, a: float, b: float) -> float:
    """
    Approximate the integral of ``f`` over ``[a, b]``.

    The interval is mapped onto ``[-1, 1]`` and the factor ``sqrt(1 - t**2)``
    is folded into the integrand so that the Chebyshev weight cancels::

        (b - a)/2 * sum_i w_i * f((b - a)/2 * t_i + (a + b)/2) * sqrt(1 - t_i**2)

    ``f`` is called once with the array of mapped nodes and must be
    vectorized.
    """
    if not a <= b:
        raise ValueError(f"need a <= b, got a={a!r}, b={b!r}")
    half = (b - a) / 2
    x = half * rule.nodes + (a + b) / 2
    fx = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise IntegrationError(f"integrand is not finite on [{a}, {b}]")
    return float(half * np.sum(rule.weights * fx * np.sqrt(1 - rule.nodes**2)))
