"""Caratheodory distance on the annulus, two ways, plus the slit map.

``caratheodory_annulus`` works on ``A_r = {r < |xi| < 1}`` through the prime
function; ``simha_caratheodory`` works on ``{1/R < |xi| < R}`` through Simha's
product. ``normalize_annulus`` gives the scaling that carries one onto the
other, so each formula can serve as an oracle for the other.

Both closed forms assume a positive real first argument. General arguments
are rotated by ``exp(-i arg xi1)`` first, which is an automorphism of either
annulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .hyperbolic import as_point, mu_array
from .prime import (
    DEFAULT_POLICY,
    SAFETY,
    AnnulusDomain,
    TruncationPolicy,
    _coerce_domain,
    prime_omega_array,
)

BOUNDARY_MARGIN = 1e-9
# relative slack accepted by the slit map on the two boundary circles
_CLOSED_SLACK = 1e-12


@dataclass(frozen=True)
class SimhaAnnulus:
    """The annulus ``{1/R < |xi| < R}``."""

    R: float

    def __post_init__(self):
        if not self.R > 1.0:
            raise DomainError(f"Simha annulus needs R > 1, got {self.R}")


@dataclass(frozen=True)
class DistanceValue:
    tanh_scale: float
    hyperbolic: float

    @classmethod
    def from_tanh(cls, value: float) -> DistanceValue:
        value = float(value)
        if not value < 1.0:
            # the points are further apart than double precision can resolve
            raise ConvergenceError(f"tanh-scale distance rounded to {value!r} >= 1")
        return cls(value, float(mu_array(value)))


def _check_in_annulus(domain: AnnulusDomain, *points) -> None:
    for p in points:
        m = abs(p)
        if not (domain.r + BOUNDARY_MARGIN < m < 1.0 - BOUNDARY_MARGIN):
            raise DomainError(f"point {p} is not inside the annulus r={domain.r}")


def caratheodory_annulus_tanh_array(domain, xi1, xi2, policy: TruncationPolicy = DEFAULT_POLICY):
    """Vectorised ``tanh c_{A_r}(xi1, xi2)``; no domain checks."""
    domain = _coerce_domain(domain)
    r = domain.r
    a = np.asarray(xi1, dtype=complex)
    b = np.asarray(xi2, dtype=complex)
    rho = np.abs(a)
    w = b * np.conj(a) / rho  # rotate so the first argument is rho > 0
    m = np.abs(w)
    first = np.abs(prime_omega_array(domain, w, rho, policy)
                   / (rho * prime_omega_array(domain, w, 1.0 / rho, policy))) / rho
    second = np.abs(prime_omega_array(domain, rho, -r / m, policy)
                    / ((r / m) * prime_omega_array(domain, rho, -m / r, policy)))
    return first * second


def caratheodory_annulus(domain, xi1, xi2, policy: TruncationPolicy = DEFAULT_POLICY) -> DistanceValue:
    """Caratheodory distance between two points of ``A_r`` via the prime function."""
    domain = _coerce_domain(domain)
    xi1, xi2 = as_point(xi1), as_point(xi2)
    _check_in_annulus(domain, xi1, xi2)
    if xi1 == xi2:
        return DistanceValue(0.0, 0.0)
    return DistanceValue.from_tanh(caratheodory_annulus_tanh_array(domain, xi1, xi2, policy))


def _simha_terms(R: float, a, b, tol: float, max_terms: int) -> int:
    p = R ** -4
    x = np.abs(b / a)
    ab = np.abs(a * b)
    spread = float(np.max(x + 1.0 / x + 2.0 * R * R * (ab + 1.0 / ab) + 2.0))
    tail = p * spread / (1.0 - p)
    n = 0
    while tail > tol / SAFETY:
        n += 1
        if n > max_terms:
            raise ConvergenceError(f"Simha product not certified within {max_terms} terms")
        tail *= p
    return n


def simha_f(R: float, a, b, policy: TruncationPolicy = DEFAULT_POLICY):
    """Simha's product ``f(a, b)`` over powers ``R^(4n)``; vectorised."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n_terms = _simha_terms(R, a, b, policy.tol, policy.max_terms)
    out = 1.0 - b / a
    ab = a * b
    for n in range(1, n_terms + 1):
        big = R ** (4 * n)
        mid = R ** (4 * n - 2)
        out = out * ((1.0 - b / (big * a)) * (1.0 - a / (big * b))
                     / ((1.0 - ab / mid) * (1.0 - 1.0 / (mid * ab))))
    return out


def simha_caratheodory_tanh_array(domain: SimhaAnnulus, xi1, xi2,
                                  policy: TruncationPolicy = DEFAULT_POLICY):
    R = domain.R
    a = np.asarray(xi1, dtype=complex)
    b = np.asarray(xi2, dtype=complex)
    rho = np.abs(a)
    w = b * np.conj(a) / rho
    m = np.abs(w)
    return (np.abs(simha_f(R, rho, w, policy)) * np.abs(simha_f(R, 1.0 / rho, -m, policy))
            / (R * m))


def simha_caratheodory(domain: SimhaAnnulus, xi1, xi2,
                       policy: TruncationPolicy = DEFAULT_POLICY) -> DistanceValue:
    """Caratheodory distance on ``{1/R < |xi| < R}`` via Simha's formula."""
    if not isinstance(domain, SimhaAnnulus):
        domain = SimhaAnnulus(float(domain))
    xi1, xi2 = as_point(xi1), as_point(xi2)
    lo, hi = 1.0 / domain.R, domain.R
    for p in (xi1, xi2):
        if not lo + BOUNDARY_MARGIN < abs(p) < hi - BOUNDARY_MARGIN:
            raise DomainError(f"point {p} is not inside the annulus R={domain.R}")
    if xi1 == xi2:
        return DistanceValue(0.0, 0.0)
    return DistanceValue.from_tanh(simha_caratheodory_tanh_array(domain, xi1, xi2, policy))


def normalize_annulus(domain) -> tuple[SimhaAnnulus, float]:
    """Return ``(SimhaAnnulus(R), scale)`` with ``R = scale = r**-0.5``.

    ``xi -> scale * xi`` maps ``A_r`` onto ``{1/R < |xi| < R}`` and so preserves
    the Caratheodory distance.
    """
    domain = _coerce_domain(domain)
    scale = 1.0 / math.sqrt(domain.r)
    return SimhaAnnulus(scale), scale


def slit_map_array(domain, z, policy: TruncationPolicy = DEFAULT_POLICY):
    domain = _coerce_domain(domain)
    s = domain.sqrt_r
    return (prime_omega_array(domain, z, -s, policy)
            / (s * prime_omega_array(domain, z, -1.0 / s, policy)))


def slit_map(domain, z, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Conformal map of ``A_r`` onto a circularly slit disc, vanishing at ``-sqrt(r)``.

    Accepts points of the closed annulus so boundary behaviour can be probed.
    """
    domain = _coerce_domain(domain)
    z = as_point(z)
    m = abs(z)
    if not domain.r * (1.0 - _CLOSED_SLACK) <= m <= 1.0 + _CLOSED_SLACK:
        raise DomainError(f"point {z} is outside the closed annulus r={domain.r}")
    return complex(slit_map_array(domain, z, policy))


def tanh_c_minus_sqrt_r(domain, z: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``tanh c_{A_r}(z, -sqrt(r)) = slit_map(z)**2 / z`` for real ``z`` in ``(r, 1)``."""
    domain = _coerce_domain(domain)
    if isinstance(z, complex):
        if z.imag != 0.0:
            raise DomainError(f"z must be real, got {z}")
        z = z.real
    z = float(z)
    if not domain.r < z < 1.0:
        raise DomainError(f"z must lie in (r, 1) = ({domain.r}, 1), got {z}")
    f = slit_map(domain, z, policy)
    return (f * f).real / z
