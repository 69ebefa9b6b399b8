"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Every test records a single ``criterion N: PASS|FAIL`` line. The lines are
printed in the terminal summary and also when the file is run as a script.
"""
import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from planar_invariants import (caratheodory_annulus, fridman_injectivity_punctured_disc,
                               slit_map, squeezing_annulus, squeezing_punctured_disc,
                               tanh_c_minus_sqrt_r)
from planar_invariants.cli import main
from planar_invariants.suites import (annulus_ball_case, argmin_on_negative_axis,
                                      cross_formula, disc_ball_threshold, lemma_conjugation,
                                      prime_identities, squeezing_annulus_sweep)

SEED = 20240601


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def midpoints(r):
    s = math.sqrt(r)
    return 0.5 * (r + 1.0), 0.5 * (r + s), 0.5 * (s + 1.0)


def test_criterion_01_prime_identities():
    t0 = time.perf_counter()
    results = prime_identities(np.random.default_rng(SEED), n=1000, tol=1e-10)
    elapsed = time.perf_counter() - t0
    worst = max(res.max_error for res in results)
    ok = all(res.passed and res.cases_run == 1000 for res in results) and elapsed < 10
    record(1, ok, f"max rel error {worst:.2e} <= 1e-10, {elapsed:.2f}s < 10s")


def test_criterion_02_cross_formula():
    t0 = time.perf_counter()
    (res,) = cross_formula(np.random.default_rng(SEED), n=200, tol=1e-8)
    elapsed = time.perf_counter() - t0
    ok = res.passed and res.cases_run == 200 and elapsed < 10
    record(2, ok, f"max error {res.max_error:.2e} <= 1e-8, {elapsed:.2f}s < 10s")


def test_criterion_03_conjugation_lemma():
    (res,) = lemma_conjugation(np.random.default_rng(SEED), n=200, tol=1e-10)
    record(3, res.passed and res.cases_run == 200, f"max |c(z,conj w) - c(z,w)| {res.max_error:.2e}")


def test_criterion_04_reflection_and_argmin():
    rng = np.random.default_rng(SEED)
    worst_reflection, worst_steps = 0.0, 0.0
    for r in (0.04, 0.09, 0.25):
        for z in midpoints(r):
            for w in -rng.uniform(r, 1.0, 20):
                if w in (-r, -1.0):
                    continue
                a = caratheodory_annulus(r, z, w).hyperbolic
                b = caratheodory_annulus(r, z, r / w).hyperbolic
                worst_reflection = max(worst_reflection, abs(a - b))
            grid, d, step = argmin_on_negative_axis(r, z, 10_000)
            offset = abs(grid[int(np.argmin(d))] + math.sqrt(r)) / step
            worst_steps = max(worst_steps, offset)
    ok = worst_reflection <= 1e-10 and worst_steps <= 1.0
    record(4, ok, f"reflection {worst_reflection:.2e} <= 1e-10, argmin offset {worst_steps:.3f} steps <= 1")


def test_criterion_05_slit_margin():
    worst_margin, worst_vs_squeezing = math.inf, math.inf
    for r in (0.04, 0.25, 0.5):
        zs = np.linspace(r, math.sqrt(r), 102)[1:-1]
        for z in zs:
            t = tanh_c_minus_sqrt_r(r, float(z))
            worst_margin = min(worst_margin, t - r / z)
            worst_vs_squeezing = min(worst_vs_squeezing, t - squeezing_annulus(r, float(z)))
    ok = worst_margin > 1e-10 and worst_vs_squeezing > 0
    record(5, ok, f"min margin {worst_margin:.3e} > 1e-10, min gap over squeezing {worst_vs_squeezing:.3e} > 0")


def test_criterion_06_slit_map():
    theta = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False)
    outer = zero = spread = sym = 0.0
    constants = []
    rng = np.random.default_rng(SEED)
    for r in (0.04, 0.25, 0.5):
        outer = max(outer, max(abs(abs(slit_map(r, complex(math.cos(t), math.sin(t)))) - 1) for t in theta))
        zero = max(zero, abs(slit_map(r, -math.sqrt(r))))
        inner = [abs(slit_map(r, r * complex(math.cos(t), math.sin(t)))) for t in theta]
        spread = max(spread, max(inner) - min(inner))
        constants.append(float(np.mean(inner)))
        for _ in range(50):
            z = rng.uniform(r, 1.0) * complex(math.cos(a := rng.uniform(0, 2 * math.pi)), math.sin(a))
            sym = max(sym, abs(slit_map(r, z.conjugate()) - slit_map(r, z).conjugate()))
    ok = outer <= 1e-8 and zero <= 1e-10 and spread <= 1e-6 and sym <= 1e-10
    consts = ", ".join(f"{c:.12f}" for c in constants)
    record(6, ok, f"outer {outer:.1e}, zero {zero:.1e}, inner spread {spread:.1e} "
                  f"(inner modulus {consts} for r=0.04,0.25,0.5), symmetry {sym:.1e}")


def test_criterion_07_disc_closed_forms():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(500):
        k = int(rng.integers(1, 21))
        pts = np.sqrt(rng.uniform(0, 0.98, k + 1)) * np.exp(1j * rng.uniform(0, 2 * math.pi, k + 1))
        z, K = complex(pts[0]), [complex(p) for p in pts[1:]]
        brute = min(abs(w - z) / abs(1 - z.conjugate() * w) for w in K)
        worst = max(worst, abs(squeezing_punctured_disc(z, K) - brute),
                    abs(fridman_injectivity_punctured_disc(z, K) - brute))
    record(7, worst <= 1e-12, f"max deviation from brute force {worst:.2e} <= 1e-12")


def test_criterion_08_disc_ball_threshold():
    t0 = time.perf_counter()
    (res,) = disc_ball_threshold(np.random.default_rng(SEED), pairs=10, cells=1024)
    elapsed = time.perf_counter() - t0
    ok = res.passed and res.cases_run == 10 and elapsed < 60
    record(8, ok, f"worst threshold error {res.max_error:.2f} of the 2-cell slack, {elapsed:.1f}s < 60s")


def test_criterion_09_annulus_ball_counterexample():
    t0 = time.perf_counter()
    info = annulus_ball_case(0.25, 0.5, -0.5, eps_fraction=0.01, cells=1024)
    elapsed = time.perf_counter() - t0
    ok = (info["contains_minus_sqrt_r"] and info["components"] == 1
          and not info["simply_connected"] and elapsed < 60)
    record(9, ok, f"contains -sqrt r: {info['contains_minus_sqrt_r']}, components {info['components']}, "
                  f"holes {info['holes']}, simply connected {info['simply_connected']}, {elapsed:.1f}s")


def test_criterion_10_annulus_squeezing():
    worst, shapes = 0.0, True
    rng = np.random.default_rng(SEED)
    for r in (0.04, 0.25, 0.5):
        s = math.sqrt(r)
        res = squeezing_annulus_sweep(r, r + 0.001, 0.999, 1001, rng)
        worst = max(worst, res["max_error"], abs(squeezing_annulus(r, s) - s),
                    abs(squeezing_annulus(r, s * 1j) - s))
        shapes = shapes and res["v_shape"] and res["min_value"] >= s - 1e-12
    record(10, worst <= 1e-12 and shapes, f"max error {worst:.2e} <= 1e-12, V shape {shapes}")


def test_criterion_11_determinism(tmp_path):
    same = True
    runs = [["verify", "all", "--format", "json"],
            ["verify", "all", "--format", "csv"],
            ["sweep", "squeezing-annulus", "--r", "0.25"],
            ["ball", "--r", "0.25", "--punctures=-0.7", "--z", "0.5", "--tanh-radius", "0.9",
             "--grid", "256x256", "--format", "json"]]
    for i, args in enumerate(runs):
        outs = [tmp_path / f"{i}-{k}.out" for k in range(2)]
        for out in outs:
            main(args + ["--seed", "11", "--out", str(out)])
        same = same and outs[0].read_bytes() == outs[1].read_bytes()
    record(11, same, "repeat runs with the same seed produce byte-identical files")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
