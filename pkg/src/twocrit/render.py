"""Raster images of parameter and dynamical planes.

Every pixel center is classified independently, so rows are split into
bands and handed to a thread pool (the compiled kernels release the GIL).
The result does not depend on the number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import _kernels as K
from .errors import ParameterError
from .family import FamilyParams, c_of_t, critical_data, default_trap
from .orbits import (CYCLE_TOL, DEFAULT_BUDGET, MAX_PERIOD, PARAM_KINDS, ParamBatch, ParamKind,
                     PointClass, PointKind)

THREADS_ENV = "RENDER_THREADS"

# Green depth is mapped logarithmically from [1e-4, 1e2] onto [SHADE_MIN, 1].
DEPTH_LO = math.log(1e-4)
DEPTH_HI = math.log(1e2)
SHADE_MIN = 0.25


@dataclass(frozen=True)
class ViewRect:
    """Axis-aligned window of the complex plane."""

    center: complex
    width: float
    height: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not (self.width > 0 and self.height > 0):
            raise ParameterError("view width and height must be positive")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise ParameterError("view center must be finite")

    @classmethod
    def from_bounds(cls, re_min, re_max, im_min, im_max) -> "ViewRect":
        return cls(complex((re_min + re_max) / 2, (im_min + im_max) / 2),
                   re_max - re_min, im_max - im_min)

    def pixel_center(self, col: int, row: int, width_px: int, height_px: int) -> complex:
        """Point at the center of pixel (col, row); row 0 is the top edge."""
        re = self.center.real - self.width / 2 + (col + 0.5) * self.width / width_px
        im = self.center.imag + self.height / 2 - (row + 0.5) * self.height / height_px
        return complex(re, im)

    def pixel_centers(self, width_px: int, height_px: int) -> np.ndarray:
        cols = np.arange(width_px)
        rows = np.arange(height_px)
        re = self.center.real - self.width / 2 + (cols + 0.5) * self.width / width_px
        im = self.center.imag + self.height / 2 - (rows + 0.5) * self.height / height_px
        return re[None, :] + 1j * im[:, None]

    def pixel_of(self, z: complex, width_px: int, height_px: int):
        """(col, row) of the pixel containing z."""
        col = math.floor((z.real - (self.center.real - self.width / 2)) / self.width * width_px)
        row = math.floor(((self.center.imag + self.height / 2) - z.imag) / self.height * height_px)
        return col, row


PARAM_VIEW = ViewRect(0j, 5.0, 5.0)
PC_VIEW = ViewRect(complex(-2.0, 0.0), 10.0, 10.0)
PC_T_VIEW = ViewRect.from_bounds(-0.2, 0.25, -0.25, 0.25)
DYN_VIEW = ViewRect(0j, 6.0, 6.0)


@dataclass(frozen=True)
class Palette:
    """Base color per class code; shaded classes are dimmed by Green depth."""

    colors: tuple
    undecided: tuple = (255, 0, 255)
    overlay: tuple = (255, 255, 255)


# Parameter plane, indexed like ParamKind.
PARAM_PALETTE = Palette(colors=(
    (120, 160, 220),   # AlphaEscape
    (230, 190, 110),   # BetaEscape
    (60, 20, 90),      # AlphaResidual
    (90, 40, 20),      # BetaResidual
    (220, 60, 60),     # AlphaCycle
    (40, 170, 90),     # BetaCycle
    (176, 176, 176),   # BothEscape
    (255, 0, 255),     # Undecided
))

# Dynamical and polynomial planes, indexed by kernel outcome (zero, inf, cycle, undecided).
POINT_PALETTE = Palette(colors=(
    (30, 90, 200),
    (240, 200, 60),
    (40, 170, 90),
    (255, 0, 255),
))

PC_PALETTE = Palette(colors=(
    (235, 235, 210),   # critical orbit -> 0
    (176, 176, 176),   # escape
    (40, 170, 90),     # attracting cycle
    (255, 0, 255),
))


@dataclass
class RasterImage:
    pixels: np.ndarray  # (height, width, 3) uint8, row-major

    @property
    def width_px(self) -> int:
        return self.pixels.shape[1]

    @property
    def height_px(self) -> int:
        return self.pixels.shape[0]

    def pixel(self, col: int, row: int):
        return tuple(int(v) for v in self.pixels[row, col])

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width_px} {self.height_px}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()


@dataclass
class PointBatch:
    outcome: np.ndarray
    index: np.ndarray
    period: np.ndarray
    multiplier: np.ndarray
    depth: np.ndarray

    def cell(self, k) -> PointClass:
        return PointClass.from_kernel(self.outcome[k], self.index[k], self.period[k],
                                      self.multiplier[k])


@dataclass
class ClassGrid:
    """Per-pixel classes, row-major, same shape as the rendered image.

    ``codes`` holds ParamKind indices for the f_t parameter plane and kernel
    outcome codes (see PointKind) otherwise.
    """

    plane: str
    codes: np.ndarray
    detail: object = field(repr=False, default=None)

    @property
    def width_px(self) -> int:
        return self.codes.shape[1]

    @property
    def height_px(self) -> int:
        return self.codes.shape[0]

    def cell(self, col: int, row: int):
        k = row * self.width_px + col
        if self.detail is not None:
            return self.detail.cell(k)
        return self.kind_at(col, row)

    def kind_at(self, col: int, row: int):
        code = int(self.codes[row, col])
        if self.plane == "parameter":
            return PARAM_KINDS[code]
        return _POINT_KINDS[code]

    def code_of(self, kind) -> int:
        if isinstance(kind, ParamKind):
            return PARAM_KINDS.index(kind)
        if isinstance(kind, PointKind):
            return _POINT_KINDS.index(kind)
        return int(kind)


_POINT_KINDS = [PointKind.BASIN_ZERO, PointKind.BASIN_INFINITY, PointKind.CYCLE,
                PointKind.UNDECIDED]


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit value or cpu count, capped by RENDER_THREADS."""
    cap = os.environ.get(THREADS_ENV)
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError:
            raise ParameterError(f"{THREADS_ENV} must be a positive integer, got {cap!r}")
        if cap < 1:
            raise ParameterError(f"{THREADS_ENV} must be a positive integer, got {cap}")
    if workers is None:
        workers = cap or os.cpu_count() or 1
    if workers < 1:
        raise ParameterError("workers must be >= 1")
    return min(workers, cap) if cap else workers


def _bands(height, workers):
    # a few bands per worker to even out costly rows
    count = min(height, workers * 4) if workers > 1 else 1
    edges = np.linspace(0, height, count + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _run_bands(height, width, workers, job):
    bands = _bands(height, workers)
    if workers == 1 or len(bands) == 1:
        for a, b in bands:
            job(a * width, b * width)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda ab: job(ab[0] * width, ab[1] * width), bands))


def _shade(depth: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        level = (np.log(depth) - DEPTH_LO) / (DEPTH_HI - DEPTH_LO)
    level = np.where(np.isnan(level), 1.0, np.clip(level, 0.0, 1.0))
    return SHADE_MIN + (1.0 - SHADE_MIN) * level


def _colorize(codes, depth, palette: Palette, undecided_code: int):
    base = np.array(palette.colors, dtype=np.float64)[codes]
    shade = _shade(depth)
    shade = np.where(codes == undecided_code, 1.0, shade)
    rgb = np.floor(base * shade[..., None] + 0.5)
    rgb[codes == undecided_code] = palette.undecided
    return rgb.astype(np.uint8)


def _size(px):
    if isinstance(px, int):
        return px, px
    w, h = px
    return int(w), int(h)


def _check_px(w, h):
    if w < 1 or h < 1:
        raise ParameterError("pixel dimensions must be >= 1")


def _overlay_unit_circle(pixels, view: ViewRect, points, palette: Palette):
    pitch = max(view.width / pixels.shape[1], view.height / pixels.shape[0])
    mask = np.abs(np.abs(points) - 1.0) <= 0.5 * pitch
    pixels[mask] = palette.overlay


def classify_parameter_array(m, n, ts, budget=DEFAULT_BUDGET, workers=None) -> ParamBatch:
    """Threaded batch classification of a flat parameter array."""
    ts = np.ascontiguousarray(np.asarray(ts, dtype=np.complex128).ravel())
    trap = default_trap(m, n)
    crit = critical_data(m, n)
    size = len(ts)
    ints = np.zeros((size, 7), dtype=np.int64)
    cplx = np.zeros((size, 2), dtype=np.complex128)
    depth = np.zeros(size)

    def job(a, b):
        K.param_batch(m, n, ts[a:b], budget, trap.radius_unit, trap.safety, crit.v_alpha_1,
                      crit.v_beta_1, CYCLE_TOL, MAX_PERIOD, ints[a:b], cplx[a:b], depth[a:b])

    # treat the flat array as one row per chunk of 1024 for banding
    width = 1024
    height = -(-size // width) if size else 0
    _run_bands(height, width, resolve_workers(workers), lambda a, b: job(a, min(b, size)))
    return ParamBatch(ints[:, 0], ints[:, 1], ints[:, 2], ints[:, 3], ints[:, 4],
                      ints[:, 5], ints[:, 6], cplx[:, 0], cplx[:, 1], depth)


def render_parameter_plane(m: int, n: int, view: ViewRect = PARAM_VIEW, px=400,
                           budget: int = DEFAULT_BUDGET, palette: Palette = PARAM_PALETTE,
                           unit_circle: bool = False, workers: int | None = None):
    """Classify every pixel t of the f_t parameter plane; returns (image, grid)."""
    FamilyParams(m, n, 1.0)
    w, h = _size(px)
    _check_px(w, h)
    points = view.pixel_centers(w, h)
    ts = points.ravel()
    # t = 0 is not a parameter; its pixel is shown as AlphaResidual (the limit near 0)
    ts = np.where(ts == 0, complex(1e-300, 0.0), ts)
    batch = classify_parameter_array(m, n, ts, budget, workers)
    codes = batch.codes.reshape(h, w)
    pixels = _colorize(codes, batch.depth.reshape(h, w), palette, K.PARAM_UNDECIDED)
    if unit_circle:
        _overlay_unit_circle(pixels, view, points, palette)
    return RasterImage(pixels), ClassGrid("parameter", codes, batch)


def render_pc_parameter_plane(m: int, n: int, view: ViewRect = PC_VIEW, px=400,
                              budget: int = DEFAULT_BUDGET, palette: Palette = PC_PALETTE,
                              t_plane: bool = False, unit_circle: bool = False,
                              workers: int | None = None):
    """Fate of the free critical point -m/(m+n) of P_c over a window of c.

    With ``t_plane`` the window is in t and each pixel uses c = c_of_t(t),
    which is only defined for (m, n) = (2, 1).
    """
    FamilyParams(m, n, 1.0)
    w, h = _size(px)
    _check_px(w, h)
    points = view.pixel_centers(w, h)
    flat = points.ravel()
    if t_plane:
        c_of_t(1.0, m, n)
        safe = np.where(flat == 0, 1.0, flat)
        cs = np.where(flat == 0, complex(1e300, 0.0), -(safe + 2.0 + 1.0 / safe) / 2.0)
    else:
        cs = np.where(flat == 0, complex(1e-300, 0.0), flat)
    cs = np.ascontiguousarray(cs, dtype=np.complex128)
    size = len(cs)
    ints = np.zeros((size, 3), dtype=np.int64)
    mult = np.zeros(size, dtype=np.complex128)
    depth = np.zeros(size)

    def job(a, b):
        K.poly_param_batch(m, n, cs[a:b], budget, 0.9, CYCLE_TOL, MAX_PERIOD,
                           ints[a:b], mult[a:b], depth[a:b])

    _run_bands(h, w, resolve_workers(workers), job)
    codes = ints[:, 0].reshape(h, w)
    pixels = _colorize(codes, depth.reshape(h, w), palette, K.UNDECIDED)
    if unit_circle and t_plane:
        _overlay_unit_circle(pixels, view, points, palette)
    batch = PointBatch(ints[:, 0], ints[:, 1], ints[:, 2], mult, depth)
    return RasterImage(pixels), ClassGrid("pc-parameter", codes, batch)


def render_dynamical_plane(p: FamilyParams, view: ViewRect = DYN_VIEW, px=400,
                           budget: int = DEFAULT_BUDGET, palette: Palette = POINT_PALETTE,
                           workers: int | None = None):
    """Fate of every pixel z under f_t; returns (image, grid)."""
    w, h = _size(px)
    _check_px(w, h)
    trap = default_trap(p.m, p.n)
    t_abs = abs(p.t)
    rho = K.trap_radius(p.m, p.n, t_abs, trap.radius_unit, trap.safety)
    big = K.escape_radius(p.m, p.n, t_abs)
    boundary = -math.log(t_abs) / (p.m - 1)
    zs = np.ascontiguousarray(view.pixel_centers(w, h).ravel())
    size = len(zs)
    ints = np.zeros((size, 3), dtype=np.int64)
    mult = np.zeros(size, dtype=np.complex128)
    depth = np.zeros(size)

    def job(a, b):
        K.point_batch(K.FAMILY, p.m, p.n, p.t, zs[a:b], budget, rho, big, CYCLE_TOL,
                      MAX_PERIOD, boundary, boundary, ints[a:b], mult[a:b], depth[a:b])

    _run_bands(h, w, resolve_workers(workers), job)
    codes = ints[:, 0].reshape(h, w)
    pixels = _colorize(codes, depth.reshape(h, w), palette, K.UNDECIDED)
    batch = PointBatch(ints[:, 0], ints[:, 1], ints[:, 2], mult, depth)
    return RasterImage(pixels), ClassGrid("dynamical", codes, batch)


def count_components(grid: ClassGrid, target) -> int:
    """Number of 4-connected regions of pixels with class ``target``."""
    if grid.codes.size == 0:
        raise ParameterError("grid is empty")
    mask = grid.codes == grid.code_of(target)
    _, count = ndimage.label(mask)
    return int(count)


def write_image(img: RasterImage, path, format: str = "ppm") -> None:
    """Write binary PPM (P6)."""
    if format != "ppm":
        raise ParameterError(f"unsupported image format {format!r}")
    data = img.to_ppm()
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write image to {path}: {exc}") from exc


def read_ppm(path) -> RasterImage:
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError(f"{path} is not an 8-bit binary PPM written by write_image")
    w, h = (int(v) for v in parts[1].split())
    pixels = np.frombuffer(parts[3], dtype=np.uint8, count=w * h * 3).reshape(h, w, 3)
    return RasterImage(pixels.copy())
