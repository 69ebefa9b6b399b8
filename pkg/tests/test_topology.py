import math
import xml.etree.ElementTree as ET
from collections import deque

import numpy as np
import pytest

from planar_invariants import (
    DomainError,
    GridMask,
    GridSpec,
    MultiComponentError,
    PreconditionError,
    PuncturedDomain,
    ResolutionError,
    caratheodory_annulus,
    connected_component_count,
    is_simply_connected,
    mu,
    poincare_distance,
    pseudo_hyperbolic,
    sample_metric_ball,
    simple_connectivity_threshold,
)
from planar_invariants.hyperbolic import poincare_density
from planar_invariants.topology import classify, hole_count, mask_from_rle, mask_svg, mask_to_rle
from planar_invariants.suites import annulus_ball_case

GRID = GridSpec.around_unit_disc(512)


def flood_fill_count(cells):
    """Reference 4-connected component count by breadth-first search."""
    seen = np.zeros_like(cells, dtype=bool)
    ny, nx = cells.shape
    count = 0
    for j in range(ny):
        for i in range(nx):
            if cells[j, i] and not seen[j, i]:
                count += 1
                queue = deque([(j, i)])
                seen[j, i] = True
                while queue:
                    a, b = queue.popleft()
                    for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        u, v = a + da, b + db
                        if 0 <= u < ny and 0 <= v < nx and cells[u, v] and not seen[u, v]:
                            seen[u, v] = True
                            queue.append((u, v))
    return count


def blank(n=16):
    return np.zeros((n, n), dtype=bool)


def test_component_counts():
    assert connected_component_count(blank()) == 0
    assert connected_component_count(~blank()) == 1
    cells = blank()
    cells[2:5, 2:5] = True
    cells[9:12, 8:11] = True
    assert connected_component_count(cells) == 2 == flood_fill_count(cells)


def test_diagonal_neighbours_are_separate_components():
    cells = blank()
    cells[3, 3] = cells[4, 4] = True
    assert connected_component_count(cells) == 2


def test_component_count_matches_flood_fill_on_random_masks():
    rng = np.random.default_rng(21)
    for _ in range(20):
        cells = rng.uniform(size=(20, 24)) < 0.45
        assert connected_component_count(cells) == flood_fill_count(cells)


def test_simple_connectivity_examples():
    rect = blank()
    rect[3:12, 4:13] = True
    assert is_simply_connected(rect)
    holed = rect.copy()
    holed[7, 8] = False
    assert not is_simply_connected(holed)
    ring = blank()
    ring[3:13, 3:13] = True
    ring[6:10, 6:10] = False
    assert not is_simply_connected(ring)
    assert hole_count(ring) == 1


def test_notch_touching_border_is_not_a_hole():
    cells = blank()
    cells[3:12, 3:12] = True
    cells[7, 3:8] = False  # slot open to the outside
    assert is_simply_connected(cells)


def test_ring_broken_at_a_corner_has_no_hole():
    # the ring's two sides meet only diagonally, so the 8-connected complement leaks out
    cells = blank()
    cells[3:12, 3:12] = True
    cells[4:11, 4:11] = False
    cells[3, 3] = False
    assert connected_component_count(cells) == 1
    assert is_simply_connected(cells)
    cells[3, 3] = True
    assert not is_simply_connected(cells)


def test_multi_component_error():
    cells = blank()
    cells[1, 1] = cells[5, 5] = True
    with pytest.raises(MultiComponentError):
        is_simply_connected(cells)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 1, 0, 1, 8, 32)
    with pytest.raises(ValueError):
        GridSpec(1, 0, 0, 1, 32, 32)
    with pytest.raises(ValueError):
        GridMask(GRID, np.zeros((3, 3)))


def test_cell_centres_and_lookup():
    g = GridSpec(-1, 1, -1, 1, 16, 16)
    c = g.centers()
    assert c.shape == (16, 16)
    assert c[0, 0] == pytest.approx(complex(-1 + 1 / 16, -1 + 1 / 16))
    assert g.cell_of(0.99 - 0.99j) == (0, 15)


def test_small_ball_is_a_disc():
    D = PuncturedDomain.disc([0.6])
    mask = sample_metric_ball(D, -0.2, 0.05, GRID)
    assert classify(mask) == {"components": 1, "holes": 0, "simply_connected": True}


def test_ball_past_puncture_has_point_hole():
    w = 0.5
    D = PuncturedDomain.disc([w])
    mask = sample_metric_ball(D, 0, poincare_distance(0, w) + 0.2, GRID)
    assert connected_component_count(mask) == 1
    assert hole_count(mask) == 1
    assert not mask.contains_point(w)


def test_balls_grow_monotonically():
    D = PuncturedDomain.annulus(0.2, [-0.6])
    radii = [0.3, 0.8, 1.5, 2.2]
    masks = [sample_metric_ball(D, 0.5 + 0.1j, r, GRID).cells for r in radii]
    for small, big in zip(masks, masks[1:]):
        assert np.all(big[small])


def test_ball_without_nearby_puncture_stays_simply_connected():
    D = PuncturedDomain.disc([-0.95])
    for t in np.linspace(0.05, 0.95, 10):
        mask = sample_metric_ball(D, 0.5, mu(t), GRID)
        assert is_simply_connected(mask)


def test_disc_ball_flips_exactly_once():
    z, w = 0.1 + 0.2j, -0.4 + 0.3j
    D = PuncturedDomain.disc([w])
    d = poincare_distance(z, w)
    slack = 2 * GRID.diagonal * poincare_density(w)
    flags = [classify(sample_metric_ball(D, z, r, GRID))["simply_connected"]
             for r in np.linspace(0.2 * d, d + 10 * slack, 40)]
    flips = sum(a != b for a, b in zip(flags, flags[1:]))
    assert flags[0] and not flags[-1] and flips == 1


def test_threshold_examples():
    D = PuncturedDomain.disc([0.5])
    slack = 2 * GRID.diagonal * poincare_density(0.5)
    thr = simple_connectivity_threshold(D, 0, GRID, 0.2, 1.0, 14)
    assert abs(thr - 0.5 * math.log(3)) <= slack
    D2 = PuncturedDomain.disc([0.3, -0.6])
    thr2 = simple_connectivity_threshold(D2, 0, GRID, 0.1, 0.5, 14)
    assert abs(thr2 - mu(0.3)) <= 2 * GRID.diagonal * poincare_density(0.3)


def test_threshold_precondition():
    D = PuncturedDomain.disc([0.5])
    with pytest.raises(PreconditionError):
        simple_connectivity_threshold(D, 0, GRID, 0.1, 0.2, 5)
    with pytest.raises(PreconditionError):
        simple_connectivity_threshold(D, 0, GRID, 0.9, 1.2, 5)


def test_annulus_threshold_below_c_when_p_is_beyond_minus_sqrt_r():
    r, z, p = 0.25, 0.5, -0.7
    D = PuncturedDomain.annulus(r, [p])
    c_zp = caratheodory_annulus(r, z, p).hyperbolic
    c_root = caratheodory_annulus(r, z, -0.5).hyperbolic
    thr = simple_connectivity_threshold(D, z, GRID, 1.0, 0.999 * c_zp, 12)
    assert thr < c_zp
    assert thr == pytest.approx(c_root, abs=0.05)


def test_annulus_threshold_at_minus_sqrt_r_is_not_below_c():
    # p = -sqrt(r) is the nearest point of the negative axis, so the ring closes only past c(z, p)
    r, z, p = 0.25, 0.5, -0.5
    D = PuncturedDomain.annulus(r, [p])
    c_zp = caratheodory_annulus(r, z, p).hyperbolic
    thr = simple_connectivity_threshold(D, z, GRID, 1.0, 1.05 * c_zp, 12)
    assert thr >= c_zp


def test_annulus_ball_is_conjugation_symmetric():
    D = PuncturedDomain.annulus(0.25, [-0.7])
    mask = sample_metric_ball(D, 0.5, 2.5, GRID)
    assert np.array_equal(mask.cells, mask.cells[::-1])


def test_counterexample_ball_wraps_inner_circle():
    r, z, p = 0.25, 0.5, -0.7
    D = PuncturedDomain.annulus(r, [p])
    radius = 0.99 * caratheodory_annulus(r, z, p).hyperbolic
    mask = sample_metric_ball(D, z, radius, GRID)
    assert mask.contains_point(-math.sqrt(r))
    assert connected_component_count(mask) == 1
    assert not is_simply_connected(mask)


def test_sampling_errors():
    with pytest.raises(ResolutionError):
        sample_metric_ball(PuncturedDomain.disc([0.5, 0.501]), 0, 1.0, GRID)
    with pytest.raises(ResolutionError):
        sample_metric_ball(PuncturedDomain.disc([0.999]), 0, 1.0, GRID)
    with pytest.raises(DomainError):
        sample_metric_ball(PuncturedDomain.disc([0.5]), 0.5, 1.0, GRID)
    with pytest.raises(DomainError):
        sample_metric_ball(PuncturedDomain.annulus(0.25, [0.5]), 0.1, 1.0, GRID)


def test_rle_round_trip():
    D = PuncturedDomain.annulus(0.25, [-0.7])
    mask = sample_metric_ball(D, 0.5, 2.5, GridSpec.around_unit_disc(64, 48))
    text = mask_to_rle(mask)
    back = mask_from_rle(text)
    assert back.spec == mask.spec
    assert np.array_equal(back.cells, mask.cells)
    assert text.splitlines()[5:7] == ["nx 64", "ny 48"]


def test_rle_rejects_garbage():
    with pytest.raises(ValueError):
        mask_from_rle("hello\n")


def test_svg_is_well_formed():
    cells = blank(20)
    cells[5:9, 2:15] = True
    root = ET.fromstring(mask_svg(GridMask(GridSpec(0, 1, 0, 1, 20, 20), cells)))
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    # one rectangle per run
    assert len(rects) == 20 + 2 * 4


def test_ball_wraps_inner_circle_of_thin_annulus():
    info = annulus_ball_case(0.1, 0.5, -0.5, cells=512)
    assert info["contains_minus_sqrt_r"]
    assert info["components"] == 1 and info["holes"] == 1
