"""Named verification suites.

Each suite draws its samples from a ``numpy`` generator seeded by the caller,
runs a batch of checks, and returns one :class:`SuiteResult` per check family.
Numerical failures inside a suite are reported as failed cases rather than
raised.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .annulus import (
    caratheodory_annulus,
    caratheodory_annulus_tanh_array,
    normalize_annulus,
    simha_caratheodory,
    slit_map,
    tanh_c_minus_sqrt_r,
)
from .errors import InvariantError
from .hyperbolic import disc_automorphism, mu, mu_array, poincare_density, pseudo_hyperbolic
from .invariants import (
    PuncturedDomain,
    annulus_gap_report,
    annulus_metric,
    disc_metric,
    fridman_injectivity_punctured_disc,
    general_upper_bound,
    squeezing_annulus,
    squeezing_punctured_disc,
)
from .prime import AnnulusDomain, prime_omega
from .topology import GridSpec, classify, sample_metric_ball, simple_connectivity_threshold


@dataclass
class SuiteResult:
    suite: str
    cases_run: int
    cases_passed: int
    max_error: float
    tolerance: float
    formula: str
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cases_run > 0 and self.cases_passed == self.cases_run

    def to_dict(self, include_timing: bool = False) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        if not include_timing:
            d.pop("wall_time")
        return d


class _Tally:
    """Accumulates pass/fail cases and the worst observed error."""

    def __init__(self, name: str, tol: float, formula: str):
        self.name, self.tol, self.formula = name, tol, formula
        self.run = self.ok = 0
        self.worst = 0.0
        self.details: dict = {}
        self.start = time.perf_counter()

    def error(self, err: float) -> None:
        # NaN counts as a failure and poisons max_error on purpose
        self.run += 1
        if err <= self.tol:
            self.ok += 1
        if not err <= self.worst:
            self.worst = err

    def check(self, cond: bool, err: float = 0.0) -> None:
        self.run += 1
        self.ok += bool(cond)
        if not err <= self.worst:
            self.worst = err

    def fail(self, reason: str) -> None:
        self.run += 1
        self.details.setdefault("failures", []).append(reason)

    def result(self) -> SuiteResult:
        return SuiteResult(self.name, self.run, self.ok, float(self.worst), self.tol,
                           self.formula, time.perf_counter() - self.start, self.details)


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _random_points(rng, n, lo, hi):
    mod = rng.uniform(lo, hi, n)
    ang = rng.uniform(0.0, 2.0 * math.pi, n)
    return mod * np.exp(1j * ang)


def _annulus_samples(rng, n, r_lo, r_hi, margin=0.01):
    """``n`` triples ``(r, xi1, xi2)`` with points at least ``margin*(1-r)`` inside ``A_r``."""
    out = []
    for _ in range(n):
        r = float(rng.uniform(r_lo, r_hi))
        gap = margin * (1.0 - r)
        a, b = _random_points(rng, 2, r + gap, 1.0 - gap)
        out.append((r, complex(a), complex(b)))
    return out


# -- prime function -------------------------------------------------------------

def prime_identities(rng, n: int = 1000, tol: float = 1e-10) -> list[SuiteResult]:
    names = ("prime-antisymmetry", "prime-conjugation", "prime-inversion",
             "prime-quasi-periodicity")
    formulas = ("omega(a,b) = -omega(b,a)", "omega(conj a, conj b) = conj omega(a,b)",
                "omega(1/a,1/b) = -omega(a,b)/(a b)", "omega(r^2 a, b) = -b omega(a,b)/a")
    tallies = [_Tally(nm, tol, f) for nm, f in zip(names, formulas)]
    for _ in range(n):
        r = float(rng.uniform(0.05, 0.8))
        a, b = (complex(p) for p in _random_points(rng, 2, r / 2.0, 2.0))
        try:
            w = prime_omega(r, a, b)
            tallies[0].error(_rel(w, -prime_omega(r, b, a)))
            tallies[1].error(_rel(prime_omega(r, a.conjugate(), b.conjugate()), w.conjugate()))
            tallies[2].error(_rel(prime_omega(r, 1 / a, 1 / b), -w / (a * b)))
            tallies[3].error(_rel(prime_omega(r, r * r * a, b), -b * w / a))
        except InvariantError as exc:
            for t in tallies:
                t.fail(f"r={r}: {exc}")
    return [t.result() for t in tallies]


def prime_exact_zero(rng, n: int = 200, tol: float = 0.0) -> list[SuiteResult]:
    t = _Tally("prime-exact-zero", tol, "omega(a,a) = 0")
    for _ in range(n):
        r = float(rng.uniform(0.05, 0.8))
        a = complex(_random_points(rng, 1, r / 2.0, 2.0)[0])
        t.error(abs(prime_omega(r, a, a)))
    return [t.result()]


# -- annulus metric ---------------------------------------------------------------

def cross_formula(rng, n: int = 200, tol: float = 1e-8) -> list[SuiteResult]:
    t = _Tally("cross-formula", tol, "prime-function tanh c vs Simha tanh c after scaling by r^-1/2")
    worst_hyp = 0.0
    for r, a, b in _annulus_samples(rng, n, 0.05, 0.7):
        try:
            simha, scale = normalize_annulus(r)
            c1 = caratheodory_annulus(r, a, b)
            c2 = simha_caratheodory(simha, scale * a, scale * b)
        except InvariantError as exc:
            t.fail(f"r={r}: {exc}")
            continue
        # compared on the tanh scale: artanh amplifies rounding by 1/(1 - t^2)
        worst_hyp = max(worst_hyp, abs(c1.hyperbolic - c2.hyperbolic))
        t.error(abs(c1.tanh_scale - c2.tanh_scale))
    t.details["max_hyperbolic_error"] = worst_hyp
    return [t.result()]


def lemma_conjugation(rng, n: int = 200, tol: float = 1e-10) -> list[SuiteResult]:
    t = _Tally("lemma-main500", tol, "c(z, conj w) = c(z, w), z > 0")
    for _ in range(n):
        r = float(rng.uniform(0.05, 0.5))
        gap = 0.01 * (1.0 - r)
        z = float(rng.uniform(r + gap, 1.0 - gap))
        w = complex(_random_points(rng, 1, r + gap, 1.0 - gap)[0])
        t.error(abs(caratheodory_annulus(r, z, w.conjugate()).hyperbolic
                    - caratheodory_annulus(r, z, w).hyperbolic))
    return [t.result()]


def _midpoints(r: float) -> tuple[float, float, float]:
    s = math.sqrt(r)
    return 0.5 * (r + 1.0), 0.5 * (r + s), 0.5 * (s + 1.0)


def lemma_reflection(rng, radii=(0.04, 0.09, 0.25), n: int = 200,
                     tol: float = 1e-10) -> list[SuiteResult]:
    t = _Tally("lemma-main200-reflection", tol, "c(z, w) = c(z, r/w), z in (r,1), w in (-1,-r)")
    cases = [(r, z) for r in radii for z in _midpoints(r)]
    for k in range(n):
        r, z = cases[k % len(cases)]
        gap = 0.01 * (1.0 - r)
        w = float(rng.uniform(-1.0 + gap, -r - gap))
        t.error(abs(caratheodory_annulus(r, z, w).hyperbolic
                    - caratheodory_annulus(r, z, r / w).hyperbolic))
    return [t.result()]


def argmin_on_negative_axis(r: float, z: float, points: int = 10_000):
    """Grid scan of ``c(z, w)`` over ``points`` equispaced ``w`` in ``(-1, -r)``.

    Returns ``(w_grid, distances, step)``.
    """
    step = (1.0 - r) / (points + 1)
    w = -1.0 + step * np.arange(1, points + 1)
    d = mu_array(caratheodory_annulus_tanh_array(r, z, w))
    return w, d, step


def lemma_min_sqrt_r(rng, radii=(0.04, 0.09, 0.25), zs=None, points: int = 10_000,
                     max_offset_steps: float = 1.0) -> list[SuiteResult]:
    """Argmin of ``w -> c(z, w)`` on ``(-1, -r)`` sits within one grid step of ``-sqrt(r)``.

    ``max_error`` is the argmin offset in grid steps; a case also fails if any
    sampled ``w != -sqrt(r)`` is not strictly farther than ``-sqrt(r)``.
    """
    t = _Tally("lemma-min-sqrt-r", max_offset_steps, "argmin_w c(z, w) = -sqrt(r)")
    cases = []
    for r in radii:
        s = math.sqrt(r)
        for z in (zs if zs is not None else _midpoints(r)):
            w, d, step = argmin_on_negative_axis(r, z, points)
            w_min = float(w[int(np.argmin(d))])
            offset = abs(w_min + s) / step
            at_root = caratheodory_annulus(r, z, -s).hyperbolic
            strict = bool(np.all(d[w != -s] > at_root))
            t.check(offset <= max_offset_steps and strict, offset)
            cases.append({"r": r, "z": z, "argmin": w_min, "offset_steps": offset,
                          "strict": strict})
    t.details["cases"] = cases
    return [t.result()]


def theorem_main15(rng, radii=(0.04, 0.25, 0.5), n: int = 100, tol: float = 1e-10,
                   agree_tol: float = 1e-9) -> list[SuiteResult]:
    margin = _Tally("theorem-main15", tol, "tanh c(z,-sqrt r) - r/z > 0 and > S_{A_r}(z)")
    agree = _Tally("slit-identity", agree_tol, "slit_map(z)^2/z = tanh c(z, -sqrt r)")
    worst = math.inf
    for r in radii:
        s = math.sqrt(r)
        for k in range(1, n + 1):
            z = r + k * (s - r) / (n + 1)
            try:
                t = tanh_c_minus_sqrt_r(r, z)
                m1 = t - r / z
                m2 = t - squeezing_annulus(r, z)
                worst = min(worst, m1, m2)
                margin.check(m1 > tol and m2 > tol)
                agree.error(abs(t - caratheodory_annulus(r, z, -s).tanh_scale))
            except InvariantError as exc:
                margin.fail(f"r={r}, z={z}: {exc}")
    margin.details["min_margin"] = worst
    return [margin.result(), agree.result()]


def slit_map_suite(rng, radii=(0.04, 0.25, 0.5), samples: int = 360) -> list[SuiteResult]:
    outer = _Tally("slit-map-outer-circle", 1e-8, "|f(e^{i theta})| = 1")
    zero = _Tally("slit-map-zero", 1e-10, "f(-sqrt r) = 0")
    inner = _Tally("slit-map-inner-circle", 1e-6, "|f(r e^{i theta})| constant")
    conj = _Tally("slit-map-conjugation", 1e-10, "f(conj z) = conj f(z)")
    theta = 2.0 * math.pi * np.arange(samples) / samples
    constants = {}
    for r in radii:
        for th in theta:
            outer.error(abs(abs(slit_map(r, complex(math.cos(th), math.sin(th)))) - 1.0))
        zero.error(abs(slit_map(r, -math.sqrt(r))))
        mods = [abs(slit_map(r, r * complex(math.cos(th), math.sin(th)))) for th in theta]
        inner.error(max(mods) - min(mods))
        constants[str(r)] = float(np.mean(mods))
        for z in _random_points(rng, 100, r, 1.0):
            z = complex(z)
            conj.error(abs(slit_map(r, z.conjugate()) - slit_map(r, z).conjugate()))
    inner.details["inner_modulus"] = constants
    inner.details["sqrt_r"] = {str(r): math.sqrt(r) for r in radii}
    return [outer.result(), zero.result(), inner.result(), conj.result()]


# -- closed forms ---------------------------------------------------------------------

def _mobius_pseudo_hyperbolic(z: complex, w: complex) -> float:
    # literal Mobius quotient, a different route from the package kernel
    return abs(w - z) / abs(1.0 - z.conjugate() * w)


def _random_disc_configuration(rng, max_k: int = 20):
    k = int(rng.integers(1, max_k + 1))
    pts = _random_points(rng, k + 1, 0.0, 0.99)
    pts = np.sqrt(rng.uniform(0, 0.98, k + 1)) * np.exp(1j * np.angle(pts))
    return complex(pts[0]), [complex(p) for p in pts[1:]]


def disc_closed_forms(rng, n: int = 500, tol: float = 1e-12) -> list[SuiteResult]:
    s = _Tally("theorem-main2", tol, "S = min_K pseudo-hyperbolic (vs brute force)")
    h = _Tally("theorem-main1", tol, "H^c = i^c = min_K pseudo-hyperbolic (vs brute force)")
    for _ in range(n):
        z, K = _random_disc_configuration(rng)
        brute = min(_mobius_pseudo_hyperbolic(z, w) for w in K)
        s.error(abs(squeezing_punctured_disc(z, K) - brute))
        h.error(abs(fridman_injectivity_punctured_disc(z, K) - brute))
    return [s.result(), h.result()]


def upper_bound_suite(rng, n: int = 200, tol: float = 1e-12) -> list[SuiteResult]:
    eq = _Tally("theorem-main10-disc", tol, "S_D = min_K tanh c_D on the disc")
    mono = _Tally("theorem-main10-monotone", 0.0, "extra puncture never raises the bound")
    cov = _Tally("squeezing-mobius-covariance", tol, "S(z, K) = S(0, g_z(K))")
    for _ in range(n):
        z, K = _random_disc_configuration(rng)
        bound = general_upper_bound(z, K, disc_metric)
        eq.error(abs(squeezing_punctured_disc(z, K) - bound))
        if len(K) > 1:
            mono.check(bound <= general_upper_bound(z, K[:-1], disc_metric))
        moved = [disc_automorphism(z, w) for w in K]
        cov.error(abs(squeezing_punctured_disc(z, K) - squeezing_punctured_disc(0.0, moved)))
    ann = _Tally("theorem-main10-annulus", 1e-10,
                 "bound on A_r\\K equals min tanh c_{A_r} and decreases with K")
    for _ in range(40):
        r = float(rng.uniform(0.05, 0.6))
        gap = 0.05 * (1.0 - r)
        z = complex(_random_points(rng, 1, r + gap, 1.0 - gap)[0])
        K = [complex(p) for p in _random_points(rng, 3, r + gap, 1.0 - gap)]
        metric = annulus_metric(r)
        b3 = general_upper_bound(z, K, metric)
        direct = min(caratheodory_annulus(r, z, w).tanh_scale for w in K)
        ann.error(abs(b3 - direct))
        ann.check(b3 <= general_upper_bound(z, K[:2], metric))
    return [eq.result(), mono.result(), cov.result(), ann.result()]


def annulus_gap_suite(rng, radii=(0.04, 0.25, 0.5), n: int = 20,
                      tol: float = 1e-10) -> list[SuiteResult]:
    t = _Tally("theorem-main11-margins", tol, "annulus_gap_report margins > 0")
    for r in radii:
        s = math.sqrt(r)
        for k in range(1, n + 1):
            z = r + k * (s - r) / (n + 1)
            for p in (-s, -0.5 * (s + 1.0)):
                rep = annulus_gap_report(r, z, p, tol)
                t.check(rep.ok, -min(v for key, v in rep.values.items()
                                     if key.startswith("margin_")))
    return [t.result()]


def annulus_squeezing_suite(rng, radii=(0.04, 0.25, 0.5), samples: int = 100,
                            tol: float = 1e-12) -> list[SuiteResult]:
    t = _Tally("annulus-squeezing", tol, "S_{A_r}(z) = max(|z|, r/|z|), min sqrt(r) at |z| = sqrt(r)")
    for r in radii:
        res = squeezing_annulus_sweep(r, r + 0.01 * (1 - r), 1.0 - 0.01 * (1 - r), samples, rng)
        t.check(res["v_shape"], res["max_error"])
        t.error(abs(squeezing_annulus(r, math.sqrt(r)) - math.sqrt(r)))
        t.check(res["min_value"] >= math.sqrt(r) - tol)
    return [t.result()]


def squeezing_annulus_sweep(r: float, lo: float, hi: float, samples: int, rng=None) -> dict:
    """Sample ``S_{A_r}`` along ``|z|`` in ``[lo, hi]`` at random angles; check the V shape."""
    mods = np.linspace(lo, hi, samples)
    angles = rng.uniform(0, 2 * math.pi, samples) if rng is not None else np.zeros(samples)
    vals = np.array([squeezing_annulus(r, m * complex(math.cos(a), math.sin(a)))
                     for m, a in zip(mods, angles)])
    expected = np.maximum(mods, r / mods)
    s = math.sqrt(r)
    left, right = vals[mods <= s], vals[mods >= s]
    v_shape = bool(np.all(np.diff(left) < 0) and np.all(np.diff(right) > 0))
    return {"moduli": mods, "angles": angles, "values": vals,
            "max_error": float(np.max(np.abs(vals - expected))),
            "min_value": float(vals.min()), "argmin_modulus": float(mods[np.argmin(vals)]),
            "v_shape": v_shape}


# -- ball topology ----------------------------------------------------------------------

def disc_threshold_case(z: complex, w: complex, grid: GridSpec, steps: int = 12) -> dict:
    """Grid threshold for ``D \\ {w}`` around ``z`` vs the closed form ``mu(pseudo(z, w))``.

    The slack is two cell diagonals measured in the Poincare length element
    at ``w``. The closing ring of cells around the excluded puncture cells
    reaches about 1.5 diagonals past ``w``, so the discrete threshold lands
    inside the slack.
    """
    D = PuncturedDomain.disc([w])
    exact = mu(pseudo_hyperbolic(z, w))
    slack = 2.0 * grid.diagonal * poincare_density(w)
    thr = simple_connectivity_threshold(D, z, grid, 0.5 * exact, exact + 4.0 * slack, steps)
    return {"z": z, "w": w, "threshold": thr, "exact": exact, "slack": slack,
            "error": abs(thr - exact)}


def _threshold_pairs(rng, count: int):
    pairs = []
    while len(pairs) < count:
        z, w = (complex(p) for p in _random_points(rng, 2, 0.0, 0.8))
        if pseudo_hyperbolic(z, w) > 0.2:
            pairs.append((z, w))
    return pairs


def disc_ball_threshold(rng, pairs: int = 10, cells: int = 1024) -> list[SuiteResult]:
    t = _Tally("theorem-main1-balls", 1.0, "grid threshold vs mu(pseudo-hyperbolic), in slack units")
    grid = GridSpec.around_unit_disc(cells)
    cases = []
    for z, w in _threshold_pairs(rng, pairs):
        try:
            case = disc_threshold_case(z, w, grid)
        except InvariantError as exc:
            t.fail(f"z={z}, w={w}: {exc}")
            continue
        t.error(case["error"] / case["slack"])
        cases.append({k: ([v.real, v.imag] if isinstance(v, complex) else v)
                      for k, v in case.items()})
    t.details["cases"] = cases
    return [t.result()]


def annulus_ball_case(r: float, z: float, p: float, eps_fraction: float = 0.01,
                      cells: int = 1024) -> dict:
    """Ball of ``A_r \\ {p}`` at radius ``(1 - eps_fraction) * c(z, p)`` and its topology."""
    D = PuncturedDomain.annulus(r, [p])
    grid = GridSpec.around_unit_disc(cells)
    c = caratheodory_annulus(r, z, p).hyperbolic
    radius = (1.0 - eps_fraction) * c
    mask = sample_metric_ball(D, z, radius, grid)
    info = classify(mask)
    info.update({"r": r, "z": z, "p": p, "radius": radius, "c_z_p": c,
                 "contains_minus_sqrt_r": mask.contains_point(-math.sqrt(r)),
                 "symmetric": bool(np.array_equal(mask.cells, mask.cells[::-1]))})
    return info


def annulus_ball_suite(rng, cases=((0.25, 0.5, -0.7), (0.09, 0.5, -0.6), (0.25, 0.3, -0.8)),
                       cells: int = 1024) -> list[SuiteResult]:
    t = _Tally("theorem-main11", 0.0, "ball at c(z,p)(1-eps) reaches -sqrt r, one component, has a hole")
    out = []
    for r, z, p in cases:
        info = annulus_ball_case(r, z, p, cells=cells)
        ok = (info["contains_minus_sqrt_r"] and info["components"] == 1
              and not info["simply_connected"])
        t.check(ok)
        out.append(info)
    t.details["cases"] = out
    return [t.result()]


SUITES: dict[str, Callable[..., list[SuiteResult]]] = {
    "prime-identities": prime_identities,
    "prime-exact-zero": prime_exact_zero,
    "cross-formula": cross_formula,
    "lemma-main500": lemma_conjugation,
    "lemma-main200-reflection": lemma_reflection,
    "lemma-min-sqrt-r": lemma_min_sqrt_r,
    "theorem-main15": theorem_main15,
    "slit-map": slit_map_suite,
    "theorem-main1": disc_closed_forms,
    "theorem-main10": upper_bound_suite,
    "theorem-main11-margins": annulus_gap_suite,
    "annulus-squeezing": annulus_squeezing_suite,
    "theorem-main1-balls": disc_ball_threshold,
    "theorem-main11": annulus_ball_suite,
}

# cheap suites first; "all" runs everything in this order
SUITE_ORDER = list(SUITES)
