"""Profile extraction: stroke-line deprojection, gap filling, ordering."""

import numpy as np
import numpy.testing as npt
import pytest

from backstroke import (
    DEFAULT_INTRINSICS,
    BackProfile,
    BoundsError,
    CameraIntrinsics,
    DepthImage,
    GapError,
    InsufficientDataError,
    InvalidInputError,
    OrderingError,
    StrokeLine,
    SyntheticScene,
    extract_profile,
    render_synthetic,
)

K = DEFAULT_INTRINSICS


def column_image(depths_mm, width=3, u=1, height_pad=0):
    """Small test image whose column `u` carries the given depths."""
    height = len(depths_mm) + height_pad
    data = np.full((height, width), 600.0)
    data[: len(depths_mm), u] = depths_mm
    return DepthImage(width, height, data)


SMALL_K = CameraIntrinsics(fx=600.0, fy=600.0, cx=1.0, cy=3.0, width=3, height=7)


class TestStrokeLine:
    def test_rejects_negative_pixels(self):
        with pytest.raises(InvalidInputError):
            StrokeLine(u=-1, v_start=0, v_end=5)

    def test_rejects_inverted_rows(self):
        with pytest.raises(InvalidInputError):
            StrokeLine(u=10, v_start=5, v_end=5)

    def test_coerces_to_int(self):
        line = StrokeLine(u=np.int64(3), v_start=np.int64(1), v_end=np.int64(4))
        assert (line.u, line.v_start, line.v_end) == (3, 1, 4)


class TestBackProfile:
    def test_minimum_sample_count(self):
        with pytest.raises(InsufficientDataError):
            BackProfile(x_fixed=0.0, y=np.array([0.0, 0.01, 0.02]), z=np.full(3, 0.5))

    def test_rejects_non_increasing_y(self):
        y = np.array([0.0, 0.01, 0.01, 0.03])
        with pytest.raises(OrderingError):
            BackProfile(x_fixed=0.0, y=y, z=np.full(4, 0.5))

    def test_rejects_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            BackProfile(x_fixed=0.0, y=np.arange(4.0), z=np.arange(5.0))

    def test_rejects_non_finite(self):
        y = np.array([0.0, 0.01, 0.02, 0.03])
        z = np.array([0.5, np.nan, 0.5, 0.5])
        with pytest.raises(InvalidInputError):
            BackProfile(x_fixed=0.0, y=y, z=z)

    def test_arrays_read_only(self):
        prof = BackProfile(x_fixed=0.0, y=np.arange(4) * 0.01, z=np.full(4, 0.5))
        with pytest.raises(ValueError):
            prof.y[0] = 1.0

    def test_samples_and_len(self):
        prof = BackProfile(x_fixed=0.1, y=np.arange(4) * 0.01, z=np.full(4, 0.5))
        assert len(prof) == 4
        assert prof.samples[2] == (0.02, 0.5)


class TestExtractFlat:
    def setup_method(self):
        self.img = render_synthetic(SyntheticScene(a=0.0, b=0.0, c=0.0, d=0.5))

    def test_depths_constant(self):
        prof = extract_profile(self.img, StrokeLine(u=100, v_start=10, v_end=470), K)
        assert len(prof) == 461
        npt.assert_allclose(prof.z, 0.5, rtol=0, atol=1e-6)

    def test_y_spacing_is_z_over_fy(self):
        # Consecutive rows are z/fy = 0.5/600 m apart on a flat surface.
        prof = extract_profile(self.img, StrokeLine(u=100, v_start=10, v_end=470), K)
        npt.assert_allclose(np.diff(prof.y), 0.5 / 600.0, rtol=1e-12)

    def test_x_fixed_off_center_column(self):
        # u - cx = 60: every row has x = 60 * 0.5 / 600 = 0.05, so the mean does too.
        prof = extract_profile(self.img, StrokeLine(u=380, v_start=100, v_end=200), K)
        npt.assert_allclose(prof.x_fixed, 0.05, rtol=0, atol=1e-15)

    def test_deterministic(self):
        line = StrokeLine(u=42, v_start=50, v_end=300)
        a = extract_profile(self.img, line, K)
        b = extract_profile(self.img, line, K)
        assert a.x_fixed == b.x_fixed
        npt.assert_array_equal(a.y, b.y)
        npt.assert_array_equal(a.z, b.z)


class TestExtractCubic:
    def test_samples_satisfy_scene_cubic(self, smooth_scene, smooth_depth):
        # Principal column: x = 0, so z should equal the generating cubic at y.
        prof = extract_profile(smooth_depth, StrokeLine(u=320, v_start=90, v_end=390), K)
        assert len(prof) == 301
        npt.assert_allclose(prof.x_fixed, 0.0, rtol=0, atol=1e-12)
        residual = prof.z - smooth_scene.surface_depth(0.0, prof.y)
        assert np.max(np.abs(residual)) <= 1e-6

    def test_noisy_extraction_sorts_by_y(self):
        # 2 mm noise locally reorders deprojected y; output must still be
        # strictly increasing and keep every row.
        scene = SyntheticScene(a=1.2, b=-0.4, c=0.15, d=0.45, noise_sigma_mm=2.0, seed=3)
        img = render_synthetic(scene)
        prof = extract_profile(img, StrokeLine(u=320, v_start=90, v_end=390), K)
        assert len(prof) == 301
        assert np.all(np.diff(prof.y) > 0)


class TestGapFilling:
    def test_midpoint_interpolation(self):
        # Invalid pixel between 500 and 502 mm is filled with their midpoint 501.
        img = column_image([500.0, 500.0, 500.0, 0.0, 502.0, 503.0, 504.0])
        prof = extract_profile(img, StrokeLine(u=1, v_start=0, v_end=6), SMALL_K)
        assert prof.z[3] == 0.501

    def test_wide_gap_linear(self):
        # Two missing rows between 500 and 506 fill at 502 and 504.
        img = column_image([500.0, 0.0, 0.0, 506.0, 506.0, 506.0, 506.0])
        prof = extract_profile(img, StrokeLine(u=1, v_start=0, v_end=6), SMALL_K)
        npt.assert_allclose(prof.z[1:3], [0.502, 0.504], rtol=0, atol=1e-15)

    def test_invalid_start_endpoint(self):
        img = column_image([0.0, 500.0, 501.0, 502.0, 503.0, 504.0, 505.0])
        with pytest.raises(GapError):
            extract_profile(img, StrokeLine(u=1, v_start=0, v_end=6), SMALL_K)

    def test_invalid_end_endpoint(self):
        img = column_image([500.0, 501.0, 502.0, 503.0, 504.0, 505.0, 0.0])
        with pytest.raises(GapError):
            extract_profile(img, StrokeLine(u=1, v_start=0, v_end=6), SMALL_K)

    def test_too_few_valid_pixels(self):
        img = column_image([500.0, 0.0, 0.0, 501.0, 0.0, 0.0, 502.0])
        with pytest.raises(InsufficientDataError):
            extract_profile(img, StrokeLine(u=1, v_start=0, v_end=6), SMALL_K)


class TestExtractValidation:
    def test_line_outside_image(self):
        img = column_image([500.0] * 7)
        with pytest.raises(BoundsError):
            extract_profile(img, StrokeLine(u=3, v_start=0, v_end=6), SMALL_K)
        with pytest.raises(BoundsError):
            extract_profile(img, StrokeLine(u=1, v_start=0, v_end=7), SMALL_K)

    def test_intrinsics_image_mismatch(self):
        img = column_image([500.0] * 7)
        with pytest.raises(InvalidInputError):
            extract_profile(img, StrokeLine(u=1, v_start=0, v_end=6), K)
