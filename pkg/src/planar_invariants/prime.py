"""Schottky-Klein prime function of the annulus ``r < |xi| < 1``.

The prime function is the product

    omega(a, b) = (a - b) * prod_{n>=1} (a - q^n b)(b - q^n a) / ((a - q^n a)(b - q^n b)),

with ``q = r**2``, which converges for all nonzero ``a`` and ``b``. Each factor
equals ``(1 - q^n x)(1 - q^n / x) / (1 - q^n)^2`` with ``x = b / a``; that form
is what gets evaluated. The leading factor ``a - b`` is kept as is so that
``omega(a, a)`` is exactly zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

# tail bound is compared against tol / SAFETY
SAFETY = 4.0


@dataclass(frozen=True)
class AnnulusDomain:
    """The annulus ``{r < |xi| < 1}``."""

    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"annulus modulus must lie in (0, 1), got {self.r}")

    @property
    def sqrt_r(self) -> float:
        return math.sqrt(self.r)

    def contains(self, z, margin: float = 0.0) -> bool:
        m = abs(complex(z))
        return self.r + margin < m < 1.0 - margin


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.tol >= 1e-15:
            raise ValueError(f"tol must be >= 1e-15, got {self.tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_POLICY = TruncationPolicy()


def _coerce_domain(domain) -> AnnulusDomain:
    if isinstance(domain, AnnulusDomain):
        return domain
    return AnnulusDomain(float(domain))


def _terms_for_ratio_bound(r: float, spread: float, tol: float, max_terms: int) -> int:
    """Smallest N with ``q^(N+1) * spread / (1 - q) <= tol / SAFETY``."""
    q = r * r
    target = tol / SAFETY
    if not math.isfinite(spread):
        raise ConvergenceError("ratio of prime-function arguments is not finite")
    tail = q * spread / (1.0 - q)
    n = 0
    while tail > target:
        n += 1
        if n > max_terms:
            raise ConvergenceError(
                f"tail bound not met within {max_terms} terms (r={r}, spread={spread:.3g})"
            )
        tail *= q
    return n


def _spread(xi1, xi2):
    ratio = np.abs(np.asarray(xi2, dtype=complex) / np.asarray(xi1, dtype=complex))
    return float(np.max(ratio + 1.0 / ratio + 2.0))


def truncation_terms(domain, xi1, xi2, tol: float = DEFAULT_POLICY.tol,
                     max_terms: int = DEFAULT_POLICY.max_terms) -> int:
    """Number of product factors needed so the geometric tail bound meets ``tol``.

    The bound on the neglected factors is
    ``r^(2(N+1)) * (|xi1/xi2| + |xi2/xi1| + 2) / (1 - r^2)``, compared against
    ``tol / 4``. Array arguments get the count for their worst element.
    """
    domain = _coerce_domain(domain)
    _check_nonzero(xi1, xi2)
    return _terms_for_ratio_bound(domain.r, _spread(xi1, xi2), tol, max_terms)


def _check_nonzero(xi1, xi2):
    if np.any(np.asarray(xi1) == 0) or np.any(np.asarray(xi2) == 0):
        raise DomainError("the prime function is only defined for nonzero arguments")


def prime_omega_array(domain, xi1, xi2, policy: TruncationPolicy = DEFAULT_POLICY):
    """Vectorised prime function; arguments broadcast against each other."""
    domain = _coerce_domain(domain)
    a = np.asarray(xi1, dtype=complex)
    b = np.asarray(xi2, dtype=complex)
    _check_nonzero(a, b)
    n_terms = _terms_for_ratio_bound(domain.r, _spread(a, b), policy.tol, policy.max_terms)
    x = b / a
    inv_x = a / b
    q = domain.r * domain.r
    out = a - b
    qn = 1.0
    for _ in range(n_terms):
        qn *= q
        out = out * ((1.0 - qn * x) * (1.0 - qn * inv_x) / ((1.0 - qn) * (1.0 - qn)))
    return out


def prime_omega(domain, xi1, xi2, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Schottky-Klein prime function ``omega(xi1, xi2)`` of the annulus.

    Arguments may lie anywhere in the punctured plane. Raises ``DomainError``
    for a zero argument and ``ConvergenceError`` when ``policy.max_terms``
    factors do not suffice.
    """
    return complex(prime_omega_array(domain, complex(xi1), complex(xi2), policy))
