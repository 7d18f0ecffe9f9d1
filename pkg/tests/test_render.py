import hashlib
import math
from pathlib import Path

import numpy as np
import pytest

from twocrit.errors import ParameterError
from twocrit.family import FamilyParams, c_of_t, critical_data
from twocrit.orbits import ParamKind, PointKind, classify_parameter
from twocrit.render import (PARAM_PALETTE, PC_PALETTE, POINT_PALETTE, ClassGrid, RasterImage,
                            ViewRect, classify_parameter_array, count_components, read_ppm,
                            render_dynamical_plane, render_parameter_plane,
                            render_pc_parameter_plane, resolve_workers, write_image)

GOLDEN = Path(__file__).parent / "data" / "param_21_32.sha256"

MIRROR = {
    ParamKind.ALPHA_ESCAPE: ParamKind.BETA_ESCAPE,
    ParamKind.BETA_ESCAPE: ParamKind.ALPHA_ESCAPE,
    ParamKind.ALPHA_RESIDUAL: ParamKind.BETA_RESIDUAL,
    ParamKind.BETA_RESIDUAL: ParamKind.ALPHA_RESIDUAL,
    ParamKind.ALPHA_CYCLE: ParamKind.BETA_CYCLE,
    ParamKind.BETA_CYCLE: ParamKind.ALPHA_CYCLE,
    ParamKind.BOTH_ESCAPE: ParamKind.BOTH_ESCAPE,
}


def small_view(z, half=0.05):
    return ViewRect(z, 2 * half, 2 * half)


# ---------------------------------------------------------------- PPM output

def test_ppm_single_white_pixel(tmp_path):
    img = RasterImage(np.full((1, 1, 3), 255, dtype=np.uint8))
    path = tmp_path / "w.ppm"
    write_image(img, path)
    data = path.read_bytes()
    assert data == b"P6\n1 1\n255\n\xff\xff\xff"
    # 11 header bytes plus one RGB triple
    assert len(data) == 14


def test_ppm_two_pixels_row_order(tmp_path):
    pixels = np.array([[[0, 0, 0], [255, 255, 255]]], dtype=np.uint8)
    path = tmp_path / "bw.ppm"
    write_image(RasterImage(pixels), path)
    data = path.read_bytes()
    header = b"P6\n2 1\n255\n"
    assert data[:len(header)] == header
    assert data[len(header):] == b"\x00\x00\x00\xff\xff\xff"
    back = read_ppm(path)
    assert back.pixel(0, 0) == (0, 0, 0) and back.pixel(1, 0) == (255, 255, 255)


def test_write_image_errors(tmp_path):
    img = RasterImage(np.zeros((1, 1, 3), dtype=np.uint8))
    with pytest.raises(ParameterError):
        write_image(img, tmp_path / "x.png", format="png")
    with pytest.raises(OSError, match="missing"):
        write_image(img, tmp_path / "missing" / "x.ppm")


def test_read_ppm_rejects_other_formats(tmp_path):
    path = tmp_path / "bad.ppm"
    path.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(ValueError):
        read_ppm(path)


# ---------------------------------------------------------------- views

def test_corner_pixels_map_to_view_corners():
    view = ViewRect(complex(0.3, -0.2), 4.0, 2.0)
    w, h = 40, 25
    pitch_x, pitch_y = view.width / w, view.height / h
    top_left = complex(0.3 - 2.0, -0.2 + 1.0)
    bottom_right = complex(0.3 + 2.0, -0.2 - 1.0)
    a = view.pixel_center(0, 0, w, h)
    b = view.pixel_center(w - 1, h - 1, w, h)
    assert abs(a.real - top_left.real) <= pitch_x / 2 + 1e-12
    assert abs(a.imag - top_left.imag) <= pitch_y / 2 + 1e-12
    assert abs(b.real - bottom_right.real) <= pitch_x / 2 + 1e-12
    assert abs(b.imag - bottom_right.imag) <= pitch_y / 2 + 1e-12
    grid = view.pixel_centers(w, h)
    assert grid.shape == (h, w)
    assert grid[0, 0] == a and grid[h - 1, w - 1] == b
    assert view.pixel_of(a, w, h) == (0, 0)
    assert view.pixel_of(b, w, h) == (w - 1, h - 1)


def test_view_validation():
    with pytest.raises(ParameterError):
        ViewRect(0j, 0.0, 1.0)
    with pytest.raises(ParameterError):
        ViewRect(complex(math.inf, 0), 1.0, 1.0)
    v = ViewRect.from_bounds(-0.2, 0.25, -0.25, 0.25)
    assert v.width == pytest.approx(0.45) and v.height == pytest.approx(0.5)


# ---------------------------------------------------------------- palettes

@pytest.mark.parametrize("palette", [PARAM_PALETTE, POINT_PALETTE, PC_PALETTE])
def test_palette_injective(palette):
    assert len(set(palette.colors)) == len(palette.colors)
    assert palette.overlay not in palette.colors


# ---------------------------------------------------------------- determinism

def test_parameter_render_deterministic_across_workers():
    a, _ = render_parameter_plane(2, 1, px=40, budget=400, workers=1)
    b, _ = render_parameter_plane(2, 1, px=40, budget=400, workers=3)
    c, _ = render_parameter_plane(2, 1, px=40, budget=400, workers=1)
    assert a.to_ppm() == b.to_ppm() == c.to_ppm()


def test_golden_parameter_render():
    img, _ = render_parameter_plane(2, 1, px=32, budget=500, unit_circle=True, workers=2)
    digest = hashlib.sha256(img.to_ppm()).hexdigest()
    assert digest == GOLDEN.read_text().split()[0]


def test_render_workers_env(monkeypatch):
    monkeypatch.setenv("RENDER_THREADS", "2")
    assert resolve_workers(8) == 2
    assert resolve_workers(1) == 1
    monkeypatch.setenv("RENDER_THREADS", "zero")
    with pytest.raises(ParameterError):
        resolve_workers()
    monkeypatch.setenv("RENDER_THREADS", "0")
    with pytest.raises(ParameterError):
        resolve_workers()


def test_rejects_bad_pixel_counts():
    with pytest.raises(ParameterError):
        render_parameter_plane(2, 1, px=0)


# ---------------------------------------------------------------- parameter plane

def test_parameter_pixel_classes():
    for t, kind in [(1.0, ParamKind.BOTH_ESCAPE), (0.01, ParamKind.ALPHA_RESIDUAL)]:
        img, grid = render_parameter_plane(2, 1, small_view(t, 0.001), px=3, budget=2000)
        assert grid.kind_at(1, 1) is kind
        assert img.pixel(1, 1)[0] <= PARAM_PALETTE.colors[grid.code_of(kind)][0]
        assert grid.cell(1, 1).kind is kind


def test_shape_and_grid_agree():
    img, grid = render_parameter_plane(2, 1, px=(30, 20), budget=300)
    assert (img.width_px, img.height_px) == (30, 20)
    assert grid.codes.shape == (20, 30)
    assert img.pixels.shape == (20, 30, 3)


def test_unit_circle_overlay():
    view = ViewRect(0j, 2.4, 2.4)
    img, _ = render_parameter_plane(2, 1, view, px=60, budget=300, unit_circle=True)
    col, row = view.pixel_of(1 + 0j, 60, 60)
    assert img.pixel(col - 1, row) == PARAM_PALETTE.overlay or img.pixel(col, row) == \
        PARAM_PALETTE.overlay


def test_parameter_plane_mirror_under_inversion():
    """For d odd the class at t mirrors the class at 1/t."""
    _, grid = render_parameter_plane(2, 1, ViewRect(0j, 1.8, 1.8), px=24, budget=2000)
    ts = ViewRect(0j, 1.8, 1.8).pixel_centers(24, 24)
    rng = np.random.default_rng(3)
    probes = [(int(c), int(r)) for c, r in rng.integers(0, 24, size=(400, 2))]
    probes = [(c, r) for c, r in probes if 0.2 <= abs(ts[r, c]) <= 0.9][:200]
    assert len(probes) >= 50
    inverted = classify_parameter_array(2, 1, [1 / ts[r, c] for c, r in probes], 2000)
    decided = agree = 0
    for k, (c, r) in enumerate(probes):
        a = grid.kind_at(c, r)
        b = ParamKind(inverted.cell(k).kind)
        if ParamKind.UNDECIDED in (a, b):
            continue
        decided += 1
        agree += MIRROR[a] is b
    assert decided >= 50 and agree / decided >= 0.95


# ---------------------------------------------------------------- P_c plane

def test_pc_pixel_classes():
    _, grid = render_pc_parameter_plane(2, 1, small_view(-4.5, 1e-4), px=3)
    assert grid.kind_at(1, 1) is PointKind.CYCLE
    info = grid.cell(1, 1)
    assert info.period == 1 and abs(info.multiplier) < 1e-8
    _, grid = render_pc_parameter_plane(2, 1, small_view(1e6, 1.0), px=3)
    assert grid.kind_at(1, 1) is PointKind.BASIN_INFINITY


def test_pc_correspondence_at_small_t():
    t = 0.01
    _, grid = render_pc_parameter_plane(2, 1, small_view(c_of_t(t), 1e-6), px=3)
    escapes = grid.kind_at(1, 1) is PointKind.BASIN_INFINITY
    residual = classify_parameter(2, 1, t).kind is ParamKind.ALPHA_RESIDUAL
    assert escapes == residual


def test_pc_t_plane_matches_c_plane():
    t = 0.3 + 0.2j
    _, by_t = render_pc_parameter_plane(2, 1, small_view(t, 1e-6), px=3, t_plane=True)
    _, by_c = render_pc_parameter_plane(2, 1, small_view(c_of_t(t), 1e-9), px=3)
    assert by_t.kind_at(1, 1) is by_c.kind_at(1, 1)


# ---------------------------------------------------------------- dynamical plane

def test_dynamical_plane_at_t_one():
    p = FamilyParams(2, 1, 1.0)
    _, grid = render_dynamical_plane(p, small_view(0.01, 1e-4), px=3)
    assert grid.kind_at(1, 1) is PointKind.BASIN_ZERO
    _, grid = render_dynamical_plane(p, small_view(100.0, 1e-2), px=3)
    assert grid.kind_at(1, 1) is PointKind.BASIN_INFINITY
    # a one-pixel-high strip along (0, 1)
    view = ViewRect(0.5 + 0j, 1.0, 1e-3)
    _, grid = render_dynamical_plane(p, view, px=(100, 1))
    assert all(grid.kind_at(c, 0) is PointKind.BASIN_ZERO for c in range(100))


def test_dynamical_plane_beta_in_zero_basin_when_residual():
    p = FamilyParams(2, 1, 0.01)
    _, grid = render_dynamical_plane(p, small_view(critical_data(2, 1).beta, 1e-6), px=3)
    assert grid.kind_at(1, 1) is PointKind.BASIN_ZERO


def test_dynamical_colors_distinct_by_basin():
    p = FamilyParams(2, 1, 1.0)
    img, grid = render_dynamical_plane(p, ViewRect(0j, 6, 6), px=40)
    zero = grid.codes == grid.code_of(PointKind.BASIN_ZERO)
    inf = grid.codes == grid.code_of(PointKind.BASIN_INFINITY)
    assert zero.any() and inf.any()
    colors_zero = {tuple(v) for v in img.pixels[zero]}
    colors_inf = {tuple(v) for v in img.pixels[inf]}
    assert not colors_zero & colors_inf


# ---------------------------------------------------------------- components

def test_count_components_uniform_and_checkerboard():
    uniform = ClassGrid("dynamical", np.zeros((5, 7), dtype=np.int64))
    assert count_components(uniform, PointKind.BASIN_ZERO) == 1
    board = ClassGrid("dynamical", np.array([[0, 1], [1, 0]]))
    assert count_components(board, PointKind.BASIN_ZERO) == 2
    assert count_components(board, PointKind.BASIN_INFINITY) == 2
    assert count_components(board, PointKind.CYCLE) == 0
    with pytest.raises(ParameterError):
        count_components(ClassGrid("dynamical", np.zeros((0, 0), dtype=np.int64)), 0)


def test_level_one_components_reported():
    # diagnostic: the count is resolution dependent, only sanity is asserted
    _, grid = render_parameter_plane(2, 1, px=80, budget=500)
    assert count_components(grid, ParamKind.BOTH_ESCAPE) >= 1
