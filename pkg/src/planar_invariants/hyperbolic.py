"""Hyperbolic geometry of the unit disc.

All distances come in two scales: the pseudo-hyperbolic (tanh) scale, which
lives in [0, 1), and the Poincare scale obtained from it through ``mu``.
Scalar functions validate their arguments; the ``*_array`` variants do not
and are meant for vectorised sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def as_point(value) -> complex:
    """Coerce ``value`` to a finite complex number."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"point {value!r} is not finite")
    return z


def disc_point(value) -> complex:
    """Return ``value`` as a complex number, checking ``|value| < 1``."""
    z = as_point(value)
    if abs(z) >= 1.0:
        raise DomainError(f"point {z} is not inside the unit disc")
    return z


@dataclass(frozen=True)
class RadiusPair:
    """A ball radius on both the Poincare scale and the tanh scale."""

    hyperbolic: float
    tanh_scale: float

    @classmethod
    def from_hyperbolic(cls, radius: float) -> RadiusPair:
        if not radius >= 0.0 or not math.isfinite(radius):
            raise DomainError(f"hyperbolic radius must be finite and >= 0, got {radius}")
        return cls(float(radius), math.tanh(radius))

    @classmethod
    def from_tanh(cls, value: float) -> RadiusPair:
        return cls(mu(value), float(value))


def disc_automorphism(z, xi) -> complex:
    """The disc automorphism ``(xi - z) / (1 - conj(z) xi)`` sending ``z`` to 0."""
    z = disc_point(z)
    xi = disc_point(xi)
    return (xi - z) / (1.0 - z.conjugate() * xi)


# largest double below 1; the exact value is < 1 but may round to 1 near the circle
BELOW_ONE = float(np.nextafter(1.0, 0.0))


def pseudo_hyperbolic_array(z, w):
    """Vectorised ``|(w - z) / (1 - conj(z) w)|`` without domain checks.

    Uses ``|1 - conj(z) w|^2 = |z - w|^2 + (1 - |z|^2)(1 - |w|^2)`` so that no
    cancellation occurs and the result stays below 1.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    d2 = np.abs(w - z) ** 2
    mz, mw = np.abs(z), np.abs(w)
    gap = (1.0 - mz) * (1.0 + mz) * (1.0 - mw) * (1.0 + mw)
    with np.errstate(invalid="ignore"):
        rho = np.sqrt(d2 / (d2 + gap))
    rho = np.where(d2 == 0.0, 0.0, rho)
    return np.minimum(rho, BELOW_ONE)


def pseudo_hyperbolic(z, w) -> float:
    z = disc_point(z)
    w = disc_point(w)
    return float(pseudo_hyperbolic_array(z, w))


def mu_array(x):
    x = np.asarray(x, dtype=float)
    # log1p form keeps full accuracy as x -> 1
    return 0.5 * (np.log1p(x) - np.log1p(-x))


def mu(x: float) -> float:
    """Poincare distance from 0 to a point of modulus ``x``: ``artanh(x)``."""
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"mu is defined on [0, 1), got {x}")
    return 0.5 * (math.log1p(x) - math.log1p(-x))


def poincare_distance(z, w) -> float:
    return mu(pseudo_hyperbolic(z, w))


def poincare_density(z) -> float:
    """Infinitesimal Poincare length element ``1 / (1 - |z|^2)`` at ``z``."""
    z = disc_point(z)
    return 1.0 / (1.0 - abs(z) ** 2)
