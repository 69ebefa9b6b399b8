"""Closed-form holomorphic invariants of punctured discs and annuli.

For ``Omega = D \\ K`` with ``K`` finite, the squeezing function, the Fridman
invariant ``H^c`` and the injectivity radius function ``i^c`` all equal the
pseudo-hyperbolic distance from ``z`` to the nearest puncture. For a general
base domain only the upper bound ``min_{w in K} tanh c_Omega(z, w)`` survives,
and on the punctured annulus that bound is not attained.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .annulus import DistanceValue, caratheodory_annulus, tanh_c_minus_sqrt_r
from .errors import DomainError
from .hyperbolic import as_point, disc_point, mu, pseudo_hyperbolic
from .prime import AnnulusDomain, _coerce_domain

TIE_TOL = 1e-12


@dataclass(frozen=True)
class UnitDisc:
    """The unit disc as a base domain."""

    def contains(self, z, margin: float = 0.0) -> bool:
        return abs(complex(z)) < 1.0 - margin

    def boundary_distance(self, z) -> float:
        return 1.0 - abs(complex(z))


UNIT_DISC = UnitDisc()


@dataclass(frozen=True)
class PuncturedDomain:
    """A unit disc or annulus with finitely many interior points removed."""

    base: UnitDisc | AnnulusDomain
    punctures: tuple[complex, ...]

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.punctures)
        object.__setattr__(self, "punctures", pts)
        if not pts:
            raise DomainError("a punctured domain needs at least one puncture")
        for p in pts:
            if not self.base.contains(p):
                raise DomainError(f"puncture {p} is not inside the base domain")
        if len(set(pts)) != len(pts):
            raise DomainError("punctures must be pairwise distinct")

    @classmethod
    def disc(cls, punctures: Sequence) -> PuncturedDomain:
        return cls(UNIT_DISC, tuple(punctures))

    @classmethod
    def annulus(cls, r, punctures: Sequence) -> PuncturedDomain:
        return cls(_coerce_domain(r), tuple(punctures))

    @property
    def is_annulus(self) -> bool:
        return isinstance(self.base, AnnulusDomain)

    def contains(self, z) -> bool:
        z = complex(z)
        return self.base.contains(z) and z not in self.punctures

    def base_distance(self, z, w) -> DistanceValue:
        """Caratheodory distance of the base domain (which is also that of the punctured one)."""
        if self.is_annulus:
            return caratheodory_annulus(self.base, z, w)
        return disc_metric(z, w)


def disc_metric(z, w) -> DistanceValue:
    t = pseudo_hyperbolic(z, w)
    return DistanceValue(t, mu(t))


def annulus_metric(domain) -> Callable[[complex, complex], DistanceValue]:
    domain = _coerce_domain(domain)
    return lambda z, w: caratheodory_annulus(domain, z, w)


def _disc_kernel_min(z, K) -> float:
    z = disc_point(z)
    if not K:
        raise DomainError("the puncture set K is empty")
    values = [pseudo_hyperbolic(z, w) for w in K]
    best = min(values)
    if best == 0.0:
        raise DomainError(f"z={z} is one of the punctures")
    return best


def squeezing_punctured_disc(z, K: Sequence) -> float:
    """Squeezing function of ``D \\ K`` at ``z``: ``min_{w in K} |(w - z)/(1 - conj(z) w)|``."""
    return _disc_kernel_min(z, K)


def fridman_injectivity_punctured_disc(z, K: Sequence) -> float:
    """Common value of ``H^c`` and ``i^c`` on ``D \\ K`` at ``z``.

    Same expression as :func:`squeezing_punctured_disc`; kept separate so that
    reports name the invariant they claim.
    """
    return _disc_kernel_min(z, K)


def nearest_punctures(z, K: Sequence, tol: float = TIE_TOL) -> list[complex]:
    """All punctures whose pseudo-hyperbolic distance to ``z`` is within ``tol`` of the min."""
    best = _disc_kernel_min(z, K)
    return [complex(w) for w in K if pseudo_hyperbolic(z, w) - best <= tol]


def general_upper_bound(z, K: Sequence, metric: Callable) -> float:
    """``min_{w in K} tanh c_Omega(z, w)``, an upper bound for ``S``, ``H^c`` and ``i^c`` on ``Omega \\ K``.

    ``metric(z, w)`` returns the base-domain Caratheodory distance, either as a
    :class:`DistanceValue` or as a plain hyperbolic-scale float.
    """
    if not K:
        raise DomainError("the puncture set K is empty")
    best = math.inf
    for w in K:
        d = metric(z, w)
        t = d.tanh_scale if isinstance(d, DistanceValue) else math.tanh(d)
        best = min(best, t)
    return best


def squeezing_annulus(domain, z) -> float:
    """Squeezing function ``max(|z|, r/|z|)`` of the annulus ``A_r``."""
    domain = _coerce_domain(domain)
    m = abs(as_point(z))
    if not domain.r < m < 1.0:
        raise DomainError(f"point {z} is not inside the annulus r={domain.r}")
    return max(m, domain.r / m)


def fridman_h_from_H(H: float) -> float:
    """Convert ``H = tanh(radius)`` to Fridman's original ``h = 1/radius``."""
    H = float(H)
    if not 0.0 < H < 1.0:
        raise DomainError(f"H must lie in (0, 1), got {H}")
    return 1.0 / mu(H)


@dataclass
class InvariantReport:
    z: complex
    values: dict[str, float]
    formulas: dict[str, str]
    tolerance: float
    passed: dict[str, bool]
    witnesses: list[complex] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self, include_timing: bool = False) -> dict:
        d = asdict(self)
        d["z"] = [self.z.real, self.z.imag]
        d["witnesses"] = [[w.real, w.imag] for w in self.witnesses]
        if not include_timing:
            d.pop("wall_time")
        return d


def punctured_disc_report(z, K: Sequence, tol: float = TIE_TOL) -> InvariantReport:
    """Values of ``S``, ``H^c``, ``i^c`` and the general bound on ``D \\ K`` at ``z``."""
    start = time.perf_counter()
    z = disc_point(z)
    s = squeezing_punctured_disc(z, K)
    h = fridman_injectivity_punctured_disc(z, K)
    bound = general_upper_bound(z, K, disc_metric)
    values = {
        "squeezing": s,
        "fridman_H": h,
        "injectivity_i": h,
        "fridman_h": fridman_h_from_H(h),
        "upper_bound": bound,
    }
    formulas = {
        "squeezing": "min_pseudo_hyperbolic",
        "fridman_H": "min_pseudo_hyperbolic",
        "injectivity_i": "min_pseudo_hyperbolic",
        "fridman_h": "inverse_artanh",
        "upper_bound": "min_tanh_caratheodory_disc",
    }
    passed = {"bound_attained": abs(bound - s) <= tol, "S_equals_H": s == h}
    return InvariantReport(z, values, formulas, tol, passed,
                           nearest_punctures(z, K), time.perf_counter() - start)


def annulus_gap_report(domain, z: float, p: float, tol: float = 1e-10) -> InvariantReport:
    """Numbers behind the two annulus counterexamples for ``D = A_r \\ {p}``.

    ``z`` is real in ``(r, 1)`` and ``p`` real in ``(-1, -sqrt(r)]``. Reported
    margins, each expected to be positive:

    * ``margin_nearer_point``: ``tanh c(z, p) - tanh c(z, -sqrt(r))``; the ball
      of radius just under ``c(z, p)`` already reaches ``-sqrt(r)`` and so
      wraps around the hole. Only reported when ``p != -sqrt(r)``.
    * ``margin_slit``: ``tanh c(z, -sqrt(r)) - r/z``.
    * ``margin_squeezing``: ``tanh c(z, -sqrt(r)) - S_{A_r}(z)``, reported for
      ``z < sqrt(r)`` where it shows the bound exceeds the squeezing function.
    """
    start = time.perf_counter()
    domain = _coerce_domain(domain)
    r, s = domain.r, domain.sqrt_r
    z, p = float(z), float(p)
    if not r < z < 1.0:
        raise DomainError(f"z must lie in (r, 1), got {z}")
    if not -1.0 < p <= -s:
        raise DomainError(f"p must lie in (-1, -sqrt(r)], got {p}")
    t_zp = caratheodory_annulus(domain, z, p).tanh_scale
    t_slit = tanh_c_minus_sqrt_r(domain, z)
    squeeze = squeezing_annulus(domain, z)
    values = {
        "tanh_c_z_p": t_zp,
        "upper_bound": general_upper_bound(z, [p], annulus_metric(domain)),
        "tanh_c_z_minus_sqrt_r": t_slit,
        "squeezing_annulus": squeeze,
        "r_over_z": r / z,
        "margin_slit": t_slit - r / z,
    }
    formulas = {
        "tanh_c_z_p": "prime_function_caratheodory",
        "upper_bound": "min_tanh_caratheodory_annulus",
        "tanh_c_z_minus_sqrt_r": "slit_map_squared_over_z",
        "squeezing_annulus": "max_modulus_or_r_over_modulus",
        "r_over_z": "r_over_z",
        "margin_slit": "slit_map_squared_over_z - r_over_z",
    }
    if p != -s:
        t_near = caratheodory_annulus(domain, z, -s).tanh_scale
        values["margin_nearer_point"] = t_zp - t_near
        formulas["margin_nearer_point"] = "prime_function_caratheodory difference"
    if z < s:
        values["margin_squeezing"] = t_slit - squeeze
        formulas["margin_squeezing"] = "slit_map_squared_over_z - max_modulus_or_r_over_modulus"
    passed = {k: v > tol for k, v in values.items() if k.startswith("margin_")}
    return InvariantReport(complex(z), values, formulas, tol, passed,
                           [complex(p)], time.perf_counter() - start)
