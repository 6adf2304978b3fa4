import json
import math

import numpy as np
import pytest

from bowditch import DomainError, ImaginaryCharacter, SheetSelector, Variant, Window, apply, classify, kappa, z_sheet
from bowditch.character import Generator
from bowditch.classifier import BOWDITCH_VARIANTS, Budget
from bowditch.raster import (
    VARIANT_CODES,
    Coloring,
    RasterJob,
    classify_grid,
    density_scan,
    measure_region,
    psi,
    render,
    write_render,
)
from bowditch.surface import slopes

PLUS, MINUS = SheetSelector.PLUS, SheetSelector.MINUS


def job(k, window, sheet=PLUS, coloring=Coloring.BY_VARIANT, budget=Budget()):
    return RasterJob(k, sheet, window, budget, coloring)


class TestRender:
    def test_pixel_at_one_one(self):
        g = classify_grid(job(8, Window(0.5, 1.5, 0.5, 1.5, 1, 1)))
        assert g.z[0, 0] == 3.0
        assert g.variant[0, 0] == VARIANT_CODES[Variant.GENERALIZED_FRICKE_C11]

    def test_image_layout(self):
        img = render(job(8, Window(-4, 4, -4, 4, 7, 5)))
        assert (img.width, img.height, len(img.pixels)) == (7, 5, 105)
        assert img.to_ppm().startswith(b"P6\n7 5\n255\n")

    @pytest.mark.parametrize("coloring", list(Coloring))
    def test_thread_count_irrelevant(self, coloring):
        j = job(3, Window(-4, 4, -4, 4, 24, 24), coloring=coloring)
        ref = render(j, 1).to_ppm()
        assert render(j, 3).to_ppm() == ref
        assert render(j, 1).to_ppm() == ref

    def test_void_disc(self):
        w = Window(-3, 3, -3, 3, 40, 40)
        g = classify_grid(job(-14, w))
        xs, ys = np.meshgrid(w.xs(), w.ys())
        disc = (xs**2 + 4) * (ys**2 + 4) < 4 * (2 - -14)
        assert np.array_equal(g.void, disc)
        assert g.void[20, 20]

    def test_rotation_symmetry(self):
        g = classify_grid(job(8, Window(-4, 4, -4, 4, 32, 32)))
        assert np.array_equal(g.variant, g.variant[::-1, ::-1])

    def test_sign_change_swaps_sheets(self):
        w = Window(-4, 4, -4, 4, 32, 32)
        plus = classify_grid(job(5, w, PLUS))
        minus = classify_grid(job(5, w, MINUS))
        assert np.array_equal(plus.variant, minus.variant[:, ::-1])

    def test_sector_between_slopes(self):
        mp, mm = slopes(3)
        m = (mp + mm) / 2
        for x in np.linspace(0.05, 1.5, 30):
            c = ImaginaryCharacter(x, m * x, z_sheet(3, x, m * x, PLUS))
            assert classify(c).variant in BOWDITCH_VARIANTS

    def test_write_render(self, tmp_path):
        out = tmp_path / "img.ppm"
        csv = tmp_path / "grid.csv"
        meta = write_render(job(8, Window(-2, 2, -2, 2, 6, 4)), str(out), 2, str(csv))
        side = json.loads((tmp_path / "img.ppm.json").read_text())
        assert side == meta
        assert set(side) >= {"k", "sheet", "window", "resolution", "budget", "palette", "stats"}
        assert len(side["palette"]) == 16
        assert sum(side["stats"].values()) == 24
        lines = csv.read_text().splitlines()
        assert lines[0] == "x,y,z,variant,depth" and len(lines) == 25
        assert out.read_bytes().startswith(b"P6\n6 4\n255\n")


class TestDensity:
    def test_requires_high_level(self):
        with pytest.raises(DomainError):
            density_scan(job(-14, Window(-0.5, 0.5, -0.5, 0.5, 4, 4)))
        with pytest.raises(DomainError):
            density_scan(job(1, Window(-1, 1, -1, 1, 4, 4)))

    def test_small_scan(self):
        rep = density_scan(job(8, Window(-4, 4, -4, 4, 48, 48)))
        assert 0.9 < rep.bowditch_fraction <= 1 and 0 <= rep.max_gap_pixels <= 2


class TestMeasureRegion:
    def test_empty_filter(self):
        rep = measure_region(8, PLUS, Window(-1, 1, -1, 1, 8, 8), [])
        assert rep.value == 0 and rep.error_estimate == 0

    def test_reflection(self):
        a = measure_region(8, PLUS, Window(0.5, 3, -1, 2, 20, 20))
        b = measure_region(8, PLUS, Window(-3, -0.5, -2, 1, 20, 20))
        assert a.value == pytest.approx(b.value, rel=1e-12)

    def test_void_window(self):
        with pytest.raises(DomainError):
            measure_region(-14, PLUS, Window(-1, 1, -1, 1, 4, 4))

    @pytest.mark.slow
    def test_converges(self):
        rep = measure_region(8, PLUS, Window(-4, 4, -4, 4, 256, 256))
        assert rep.value > 0
        assert rep.error_estimate < 0.01 * rep.value


class TestPsi:
    def test_origin(self):
        assert psi(0, 0).as_tuple() == (0.0, 0.0, -2.0)

    def test_one_one(self):
        c = psi(1, 1)
        assert c.x == pytest.approx(2 * math.sinh(0.5), rel=1e-15)
        assert c.z == pytest.approx(-2 * math.cosh(1), rel=1e-15)
        assert abs(kappa(c) - 2) < 1e-12

    def test_on_minus_sheet_and_sign_change(self):
        rng = np.random.default_rng(4)
        for a, b in rng.uniform(-3, 3, size=(200, 2)):
            c = psi(a, b)
            assert c.z <= -2
            assert c.z == pytest.approx(z_sheet(2, c.x, c.y, MINUS), rel=1e-12, abs=1e-12)
            d = apply(c, Generator.S1)
            assert d.z >= 2
            assert d.z == pytest.approx(z_sheet(2, d.x, d.y, PLUS), rel=1e-12, abs=1e-12)
