"""Raster sampling of Caratheodory balls and their discrete topology.

A ball is sampled at cell centres of a rectangular grid. The set uses
4-connectivity and its complement 8-connectivity, so a diagonal gap never
opens a hole and a diagonal bridge never closes one. A complement component
that does not touch the grid border is a hole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .annulus import caratheodory_annulus_tanh_array
from .errors import DomainError, MultiComponentError, PreconditionError, ResolutionError
from .hyperbolic import as_point, mu_array, pseudo_hyperbolic_array
from .invariants import PuncturedDomain

_FOUR = ndimage.generate_binary_structure(2, 1)
_EIGHT = ndimage.generate_binary_structure(2, 2)

DEFAULT_CELLS = 1024
BOX_INFLATION = 0.05


@dataclass(frozen=True)
class GridSpec:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("grid bounding box is empty")
        if self.nx < 16 or self.ny < 16:
            raise ValueError(f"grid needs at least 16 cells per axis, got {self.nx}x{self.ny}")

    @classmethod
    def around_unit_disc(cls, nx: int = DEFAULT_CELLS, ny: int | None = None) -> GridSpec:
        """Square grid over the unit disc's bounding box inflated by 5%."""
        h = 1.0 + BOX_INFLATION
        return cls(-h, h, -h, h, nx, nx if ny is None else ny)

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def diagonal(self) -> float:
        return math.hypot(self.dx, self.dy)

    def centers(self) -> np.ndarray:
        """Complex cell centres, shape ``(ny, nx)``; row 0 is the bottom row."""
        x = self.xmin + (np.arange(self.nx) + 0.5) * self.dx
        y = self.ymin + (np.arange(self.ny) + 0.5) * self.dy
        return x[None, :] + 1j * y[:, None]

    def cell_of(self, z) -> tuple[int, int]:
        """``(row, col)`` of the cell containing ``z``."""
        z = complex(z)
        col = int(math.floor((z.real - self.xmin) / self.dx))
        row = int(math.floor((z.imag - self.ymin) / self.dy))
        if not (0 <= col < self.nx and 0 <= row < self.ny):
            raise DomainError(f"point {z} is outside the grid")
        return row, col


@dataclass
class GridMask:
    spec: GridSpec
    cells: np.ndarray

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=bool)
        if self.cells.shape != (self.spec.ny, self.spec.nx):
            raise ValueError(f"raster shape {self.cells.shape} does not match grid "
                             f"{self.spec.ny}x{self.spec.nx}")

    def contains_point(self, z) -> bool:
        return bool(self.cells[self.spec.cell_of(z)])


def _cells(mask) -> np.ndarray:
    return mask.cells if isinstance(mask, GridMask) else np.asarray(mask, dtype=bool)


def _check_resolution(domain: PuncturedDomain, grid: GridSpec) -> None:
    pts = domain.punctures
    cells = {grid.cell_of(p) for p in pts}
    if len(cells) != len(pts):
        raise ResolutionError("two punctures fall in the same grid cell")
    need = 4.0 * grid.diagonal
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if abs(p - q) <= need:
                raise ResolutionError(f"punctures {p} and {q} are closer than 4 cell diagonals")
        m = abs(p)
        gap = 1.0 - m
        if domain.is_annulus:
            gap = min(gap, m - domain.base.r)
        if gap <= need:
            raise ResolutionError(f"puncture {p} is within 4 cell diagonals of the boundary")


def base_distance_array(domain: PuncturedDomain, center, points) -> np.ndarray:
    """Hyperbolic-scale base-domain distance from ``center`` to an array of base points."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if domain.is_annulus:
            t = caratheodory_annulus_tanh_array(domain.base, center, points)
        else:
            t = pseudo_hyperbolic_array(center, points)
        return mu_array(t)


def sample_metric_ball(domain: PuncturedDomain, center, radius: float, grid: GridSpec) -> GridMask:
    """Rasterise the Caratheodory ball ``{xi : c(center, xi) < radius}`` of ``domain``.

    Cells whose centre is within half a cell diagonal of a puncture are always
    false, so point holes stay visible to the topology checks.
    """
    center = as_point(center)
    if not domain.contains(center):
        raise DomainError(f"centre {center} is not in the domain")
    if not radius > 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    _check_resolution(domain, grid)
    pts = grid.centers()
    mod = np.abs(pts)
    inside = mod < 1.0
    if domain.is_annulus:
        inside &= mod > domain.base.r
    half = 0.5 * grid.diagonal
    for p in domain.punctures:
        inside &= np.abs(pts - p) > half
    cells = np.zeros(pts.shape, dtype=bool)
    dist = base_distance_array(domain, center, pts[inside])
    cells[inside] = dist < radius
    return GridMask(grid, cells)


def connected_component_count(mask) -> int:
    """Number of 4-connected components of true cells."""
    _, n = ndimage.label(_cells(mask), structure=_FOUR)
    return int(n)


def hole_count(mask) -> int:
    """Number of 8-connected false components that do not touch the grid border."""
    cells = _cells(mask)
    labels, n = ndimage.label(~cells, structure=_EIGHT)
    if n == 0:
        return 0
    border = np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]))
    return int(n - np.count_nonzero(border))


def is_simply_connected(mask) -> bool:
    """True when the single component of ``mask`` has no holes."""
    n = connected_component_count(mask)
    if n != 1:
        raise MultiComponentError(f"expected exactly one component, found {n}")
    return hole_count(mask) == 0


def classify(mask) -> dict:
    n = connected_component_count(mask)
    holes = hole_count(mask)
    return {"components": n, "holes": holes, "simply_connected": n == 1 and holes == 0}


def _ball_is_simply_connected(domain, center, radius, grid) -> bool:
    return classify(sample_metric_ball(domain, center, radius, grid))["simply_connected"]


def simple_connectivity_threshold(domain: PuncturedDomain, center, grid: GridSpec,
                                  radius_lo: float, radius_hi: float, steps: int) -> float:
    """Bisect for the radius at which the sampled ball stops being simply connected.

    Returns the upper end of the final bracket, whose width is
    ``(radius_hi - radius_lo) / 2**steps``. A ball with other than one
    component counts as not simply connected.
    """
    if not radius_lo < radius_hi:
        raise PreconditionError("radius_lo must be below radius_hi")
    if not _ball_is_simply_connected(domain, center, radius_lo, grid):
        raise PreconditionError(f"ball is not simply connected at radius_lo={radius_lo}")
    if _ball_is_simply_connected(domain, center, radius_hi, grid):
        raise PreconditionError(f"ball is still simply connected at radius_hi={radius_hi}")
    lo, hi = radius_lo, radius_hi
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if _ball_is_simply_connected(domain, center, mid, grid):
            lo = mid
        else:
            hi = mid
    return hi


# -- raster I/O ---------------------------------------------------------------

RASTER_MAGIC = "# gridmask v1"


def _runs(row: np.ndarray) -> list[int]:
    # alternating run lengths starting with a (possibly empty) false run
    change = np.flatnonzero(np.diff(row.astype(np.int8))) + 1
    bounds = np.concatenate([[0], change, [row.size]])
    runs = np.diff(bounds).tolist()
    if row.size and row[0]:
        runs.insert(0, 0)
    return runs


def mask_to_rle(mask: GridMask) -> str:
    """Text raster: a header of grid fields, then one run-length line per row."""
    s = mask.spec
    lines = [RASTER_MAGIC]
    for name in ("xmin", "xmax", "ymin", "ymax"):
        lines.append(f"{name} {getattr(s, name):.17g}")
    lines.append(f"nx {s.nx}")
    lines.append(f"ny {s.ny}")
    for row in mask.cells:
        lines.append(" ".join(map(str, _runs(row))))
    return "\n".join(lines) + "\n"


def mask_from_rle(text: str) -> GridMask:
    lines = text.splitlines()
    if not lines or lines[0] != RASTER_MAGIC:
        raise ValueError("not a gridmask raster")
    fields = {}
    for line in lines[1:7]:
        key, value = line.split()
        fields[key] = value
    spec = GridSpec(float(fields["xmin"]), float(fields["xmax"]), float(fields["ymin"]),
                    float(fields["ymax"]), int(fields["nx"]), int(fields["ny"]))
    rows = lines[7:]
    if len(rows) != spec.ny:
        raise ValueError(f"expected {spec.ny} rows, found {len(rows)}")
    cells = np.zeros((spec.ny, spec.nx), dtype=bool)
    for j, line in enumerate(rows):
        pos, value = 0, False
        for run in map(int, line.split()):
            cells[j, pos:pos + run] = value
            pos += run
            value = not value
        if pos != spec.nx:
            raise ValueError(f"row {j} has {pos} cells, expected {spec.nx}")
    return GridMask(spec, cells)


def heatmap_svg(values: np.ndarray, spec: GridSpec, vmin: float | None = None,
                vmax: float | None = None) -> str:
    """Cell-rectangle SVG heatmap on a 256-level grayscale ramp (NaN cells are skipped).

    Horizontal runs of equal level share one rectangle; row 0 is drawn at the bottom.
    """
    values = np.asarray(values, dtype=float)
    finite = np.isfinite(values)
    lo = float(np.min(values[finite])) if vmin is None and finite.any() else (vmin or 0.0)
    hi = float(np.max(values[finite])) if vmax is None and finite.any() else (vmax or 1.0)
    span = hi - lo if hi > lo else 1.0
    levels = np.full(values.shape, -1, dtype=int)
    levels[finite] = np.clip(np.round((values[finite] - lo) / span * 255), 0, 255).astype(int)
    ny, nx = levels.shape
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{nx}" height="{ny}" '
           f'viewBox="0 0 {nx} {ny}" shape-rendering="crispEdges">']
    for j in range(ny):
        y = ny - 1 - j
        row = levels[j]
        i = 0
        while i < nx:
            k = i
            while k + 1 < nx and row[k + 1] == row[i]:
                k += 1
            if row[i] >= 0:
                g = 255 - row[i]
                out.append(f'<rect x="{i}" y="{y}" width="{k - i + 1}" height="1" '
                           f'fill="rgb({g},{g},{g})"/>')
            i = k + 1
    out.append("</svg>")
    return "\n".join(out) + "\n"


def mask_svg(mask: GridMask) -> str:
    return heatmap_svg(mask.cells.astype(float), mask.spec, 0.0, 1.0)
