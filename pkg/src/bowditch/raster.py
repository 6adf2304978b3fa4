"""Deterministic rasterisation of the classification over a sheet of a level surface."""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import ndimage

from .character import ImaginaryCharacter
from .classifier import DEFAULT_BUDGET, BOWDITCH_VARIANTS, Budget, Variant, classify
from .errors import DomainError
from .surface import SheetSelector, Window, _check_window_covered, integrate_mask, z_sheet_array
from .tree import fractions_along

VOID = 0
VARIANT_CODES = {v: i + 1 for i, v in enumerate(Variant)}
CODE_VARIANTS = {i: v for v, i in VARIANT_CODES.items()}

PALETTE = (
    (0, 0, 0),
    (31, 119, 180),
    (214, 39, 40),
    (255, 127, 14),
    (44, 160, 44),
    (148, 103, 189),
    (127, 127, 127),
    (140, 86, 75),
    (227, 119, 194),
    (188, 189, 34),
    (23, 190, 207),
    (174, 199, 232),
    (255, 187, 120),
    (152, 223, 138),
    (255, 152, 150),
    (197, 176, 213),
)


class Coloring(enum.Enum):
    BY_VARIANT = "ByVariant"
    BY_END_ESTIMATE = "ByEndEstimate"
    BY_DEPTH = "ByDepth"

    @classmethod
    def parse(cls, text) -> "Coloring":
        if isinstance(text, Coloring):
            return text
        key = str(text).replace("-", "").replace("_", "").lower()
        for c in cls:
            if c.value.lower() in (key, "by" + key):
                return c
        raise ValueError(f"unknown coloring {text!r}")


@dataclass(frozen=True)
class RasterJob:
    k: float
    sheet: SheetSelector
    window: Window
    budget: Budget = DEFAULT_BUDGET
    coloring: Coloring = Coloring.BY_VARIANT

    def to_json(self) -> dict:
        return {"k": float(self.k), "sheet": str(self.sheet), "window": self.window.to_json(),
                "budget": self.budget.to_json(), "coloring": self.coloring.value}


@dataclass
class Grid:
    """Per-pixel classification results, top row first."""

    window: Window
    variant: np.ndarray
    depth: np.ndarray
    z: np.ndarray
    tone: np.ndarray = field(repr=False)

    def mask(self, variants: Iterable[Variant]) -> np.ndarray:
        codes = [VARIANT_CODES[v] for v in variants]
        return np.isin(self.variant, codes)

    @property
    def void(self) -> np.ndarray:
        return self.variant == VOID

    def stats(self) -> dict:
        counts = np.bincount(self.variant.ravel(), minlength=len(Variant) + 1)
        out = {"void": int(counts[VOID])}
        for v, code in VARIANT_CODES.items():
            out[v.value] = int(counts[code])
        return out

    def to_csv(self) -> str:
        lines = ["x,y,z,variant,depth"]
        xs, ys = self.window.xs(), self.window.ys()
        for r in range(self.window.ny):
            for c in range(self.window.nx):
                code = int(self.variant[r, c])
                name = "void" if code == VOID else CODE_VARIANTS[code].value
                z = self.z[r, c]
                zs = "" if math.isnan(z) else f"{z:.17g}"
                lines.append(f"{xs[c]:.17g},{ys[r]:.17g},{zs},{name},{int(self.depth[r, c])}")
        return "\n".join(lines) + "\n"


def _tone_of(result, coloring: Coloring) -> int:
    if coloring is Coloring.BY_DEPTH:
        return 1 + min(14, int(math.log2(result.depth + 1)))
    frac = None
    if result.variant is Variant.ELLIPTIC_PRIMITIVE:
        frac = result.region_fraction
    elif result.variant is Variant.UNDETERMINED:
        est = result.end_estimate
        if est is not None:
            frac = est.fraction if est.fraction is not None else tuple(est.cf_prefix) or None
    elif result.variant is not Variant.EXCEPTIONAL:
        frac = fractions_along(result.word.colors())[2]
    if frac is None:
        return 6
    h = 0
    for t in frac:
        h = (h * 1_000_003 + int(t)) & 0xFFFFFFFF
    return 1 + h % 15


def _row(job: RasterJob, r: int, xs: np.ndarray, y: float):
    n = xs.size
    zs = z_sheet_array(float(job.k), xs, np.full(n, y), job.sheet)
    variant = np.zeros(n, dtype=np.uint8)
    depth = np.zeros(n, dtype=np.int32)
    tone = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        z = zs[i]
        if math.isnan(z):
            continue
        res = classify(ImaginaryCharacter(float(xs[i]), float(y), float(z)), job.budget)
        variant[i] = VARIANT_CODES[res.variant]
        depth[i] = res.depth
        tone[i] = VARIANT_CODES[res.variant] if job.coloring is Coloring.BY_VARIANT else _tone_of(res, job.coloring)
    return r, variant, depth, zs, tone


def classify_grid(job: RasterJob, n_threads: int = 1) -> Grid:
    w = job.window
    xs, ys = w.xs(), w.ys()
    variant = np.zeros((w.ny, w.nx), dtype=np.uint8)
    depth = np.zeros((w.ny, w.nx), dtype=np.int32)
    zgrid = np.zeros((w.ny, w.nx), dtype=float)
    tone = np.zeros((w.ny, w.nx), dtype=np.uint8)

    def store(out):
        r, v, d, z, t = out
        variant[r], depth[r], zgrid[r], tone[r] = v, d, z, t

    if n_threads <= 1:
        for r in range(w.ny):
            store(_row(job, r, xs, float(ys[r])))
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            for out in pool.map(lambda r: _row(job, r, xs, float(ys[r])), range(w.ny)):
                store(out)
    return Grid(w, variant, depth, zgrid, tone)


@dataclass(frozen=True)
class Image:
    width: int
    height: int
    pixels: bytes

    def to_ppm(self) -> bytes:
        return b"P6\n%d %d\n255\n" % (self.width, self.height) + self.pixels

    def write(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_ppm())


def image_from_grid(grid: Grid) -> Image:
    lut = np.array(PALETTE, dtype=np.uint8)
    rgb = lut[grid.tone]
    return Image(grid.window.nx, grid.window.ny, rgb.tobytes())


def render(job: RasterJob, n_threads: int = 1) -> Image:
    """Colour every pixel centre of the window by its classification."""
    return image_from_grid(classify_grid(job, n_threads))


def sidecar(job: RasterJob, grid: Grid) -> dict:
    return {
        "schema": "v1",
        "k": float(job.k),
        "sheet": str(job.sheet),
        "window": job.window.to_json(),
        "resolution": [job.window.nx, job.window.ny],
        "budget": job.budget.to_json(),
        "coloring": job.coloring.value,
        "palette": [list(c) for c in PALETTE],
        "legend": {"void": 0, **{v.value: code for v, code in VARIANT_CODES.items()}},
        "stats": grid.stats(),
    }


def write_render(job: RasterJob, path: str, n_threads: int = 1, csv_path: Optional[str] = None) -> dict:
    grid = classify_grid(job, n_threads)
    image_from_grid(grid).write(path)
    meta = sidecar(job, grid)
    with open(path + ".json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    if csv_path:
        with open(csv_path, "w") as fh:
            fh.write(grid.to_csv())
    return meta


@dataclass(frozen=True)
class DensityReport:
    bowditch_fraction: float
    max_gap_pixels: int


def density_scan(job: RasterJob, n_threads: int = 1, grid: Optional[Grid] = None) -> DensityReport:
    """Fraction of Bowditch pixels and the worst chessboard distance from a non-Bowditch pixel to one."""
    if not job.k > 2:
        raise DomainError(f"density scan needs k > 2, got {job.k}")
    if grid is None:
        grid = classify_grid(job, n_threads)
    inside = grid.mask(BOWDITCH_VARIANTS)
    live = ~grid.void
    if not live.any():
        raise DomainError("every pixel of the window is void")
    frac = float(inside.sum()) / float(live.sum())
    if not inside.any():
        return DensityReport(frac, -1)
    dist = ndimage.distance_transform_cdt(~inside, metric="chessboard")
    gaps = dist[live & ~inside]
    return DensityReport(frac, int(gaps.max()) if gaps.size else 0)


@dataclass(frozen=True)
class MeasureReport:
    value: float
    resolution: int
    error_estimate: float

    def to_json(self) -> dict:
        return {"value": self.value, "resolution": self.resolution, "error_estimate": self.error_estimate}


def measure_region(k, sheet, window: Window, variants: Iterable[Variant] = BOWDITCH_VARIANTS,
                   budget: Budget = DEFAULT_BUDGET, n_threads: int = 1) -> MeasureReport:
    """Area of the pixels whose class is in ``variants``, at the window's resolution and at twice it."""
    sheet = SheetSelector.parse(sheet)
    variants = list(variants)
    _check_window_covered(k, window)
    values = []
    for w in (window, window.with_resolution(2 * window.nx, 2 * window.ny)):
        grid = classify_grid(RasterJob(float(k), sheet, w, budget), n_threads)
        values.append(integrate_mask(float(k), w, grid.mask(variants)) if variants else 0.0)
    return MeasureReport(values[0], window.nx, abs(values[1] - values[0]))


def psi(a: float, b: float) -> ImaginaryCharacter:
    """Diagonal-representation parametrisation of the Minus sheet of the level ``k = 2``."""
    return ImaginaryCharacter(2.0 * math.sinh(a / 2.0), 2.0 * math.sinh(b / 2.0), -2.0 * math.cosh((a + b) / 2.0))
