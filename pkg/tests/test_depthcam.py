"""Pinhole projection, depth-image PGM I/O, and the synthetic renderer."""

import struct

import numpy as np
import numpy.testing as npt
import pytest

from backstroke import (
    DEFAULT_INTRINSICS,
    BehindCameraError,
    BoundsError,
    CameraIntrinsics,
    ConfigError,
    DepthImage,
    FormatError,
    InvalidInputError,
    InvalidPixelError,
    Point3,
    RenderError,
    SyntheticScene,
    deproject,
    load_depth_image,
    load_scene,
    project,
    render_synthetic,
    save_depth_image,
    visible_y_span,
)
from backstroke.depthcam import MIN_VALID_DEPTH_MM, intrinsics_from_kv

K = DEFAULT_INTRINSICS  # fx = fy = 600, cx = 320, cy = 240, 640x480


class TestCameraIntrinsics:
    def test_rejects_non_positive_focal(self):
        with pytest.raises(InvalidInputError):
            CameraIntrinsics(fx=0.0, fy=600.0, cx=320.0, cy=240.0, width=640, height=480)

    def test_rejects_principal_point_outside(self):
        with pytest.raises(InvalidInputError):
            CameraIntrinsics(fx=600.0, fy=600.0, cx=700.0, cy=240.0, width=640, height=480)


class TestDeproject:
    def test_principal_point_on_axis(self):
        # At (cx, cy) the ray is the optical axis: x = y = 0, z = 1000 mm = 1 m.
        p = deproject(320.0, 240.0, 1000.0, K)
        assert (p.x, p.y, p.z) == (0.0, 0.0, 1.0)

    def test_hand_computed_offsets(self):
        # u - cx = 120, z = 0.5: x = 120 * 0.5 / 600 = 0.1
        # v - cy = 60,  z = 0.5: y = 60 * 0.5 / 600 = 0.05
        p = deproject(440.0, 300.0, 500.0, K)
        npt.assert_allclose([p.x, p.y, p.z], [0.1, 0.05, 0.5], rtol=0, atol=1e-15)

    def test_one_focal_length_off_axis(self):
        # With fx = 300 a pixel one focal length right of center has x = z.
        k = CameraIntrinsics(fx=300.0, fy=300.0, cx=160.0, cy=120.0, width=640, height=480)
        p = deproject(460.0, 120.0, 700.0, k)
        npt.assert_allclose(p.x, p.z, rtol=0, atol=1e-15)

    def test_invalid_depth(self):
        with pytest.raises(InvalidPixelError):
            deproject(100.0, 100.0, 0.0, K)
        with pytest.raises(InvalidPixelError):
            deproject(100.0, 100.0, -5.0, K)

    def test_out_of_bounds_pixel(self):
        with pytest.raises(BoundsError):
            deproject(640.0, 100.0, 500.0, K)
        with pytest.raises(BoundsError):
            deproject(-1.0, 100.0, 500.0, K)

    def test_non_finite_input(self):
        with pytest.raises(InvalidInputError):
            deproject(float("nan"), 100.0, 500.0, K)


class TestProject:
    def test_hand_computed_case(self):
        # Inverse of the deproject case: (0.1, 0.05, 0.5) -> (440, 300, 500 mm).
        u, v, d = project(Point3(0.1, 0.05, 0.5), K)
        npt.assert_allclose([u, v, d], [440.0, 300.0, 500.0], rtol=0, atol=1e-9)

    def test_behind_camera(self):
        with pytest.raises(BehindCameraError):
            project(Point3(0.0, 0.0, 0.0), K)
        with pytest.raises(BehindCameraError):
            project(Point3(0.1, 0.1, -0.5), K)

    def test_off_screen_projection_allowed(self):
        # A point far to the side projects outside the image without error.
        u, _, _ = project(Point3(2.0, 0.0, 0.5), K)
        assert u > K.width

    def test_round_trip(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            u = rng.uniform(0.0, K.width - 1e-6)
            v = rng.uniform(0.0, K.height - 1e-6)
            depth = rng.uniform(200.0, 2000.0)
            u2, v2, d2 = project(deproject(u, v, depth, K), K)
            npt.assert_allclose([u2, v2, d2], [u, v, depth], rtol=0, atol=1e-9)


class TestDepthImage:
    def test_shape_must_match(self):
        with pytest.raises(InvalidInputError):
            DepthImage(3, 2, np.zeros((3, 3)))

    def test_rejects_negative_depth(self):
        with pytest.raises(InvalidInputError):
            DepthImage(2, 2, np.array([[0.0, 1.0], [-1.0, 2.0]]))

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            DepthImage(2, 1, np.array([[np.nan, 1.0]]))

    def test_data_read_only(self):
        img = DepthImage(2, 2, np.ones((2, 2)))
        with pytest.raises(ValueError):
            img.data[0, 0] = 5.0

    def test_valid_mask(self):
        img = DepthImage(2, 2, np.array([[0.0, 500.0], [1.0, 0.0]]))
        npt.assert_array_equal(img.valid_mask(), [[False, True], [True, False]])


class TestPgmRoundTrip:
    def test_exact_bytes(self, tmp_path):
        # 2x2 image, row-major big-endian 16-bit samples after the header.
        img = DepthImage(2, 2, np.array([[0.0, 500.0], [1000.0, 65535.0]]))
        path = tmp_path / "depth.pgm"
        save_depth_image(img, path)
        expected = b"P5\n2 2\n65535\n" + struct.pack(">4H", 0, 500, 1000, 65535)
        assert path.read_bytes() == expected

    def test_load_recovers_values(self, tmp_path):
        img = DepthImage(2, 2, np.array([[0.0, 500.0], [1000.0, 65535.0]]))
        path = tmp_path / "depth.pgm"
        save_depth_image(img, path)
        loaded = load_depth_image(path)
        assert (loaded.width, loaded.height) == (2, 2)
        npt.assert_array_equal(loaded.data, img.data)

    def test_save_rounds_to_nearest_mm(self, tmp_path):
        img = DepthImage(2, 1, np.array([[500.4, 500.6]]))
        path = tmp_path / "depth.pgm"
        save_depth_image(img, path)
        npt.assert_array_equal(load_depth_image(path).data, [[500.0, 501.0]])

    def test_save_rejects_out_of_range(self, tmp_path):
        img = DepthImage(1, 1, np.array([[65536.0]]))
        with pytest.raises(FormatError):
            save_depth_image(img, tmp_path / "depth.pgm")

    def test_load_rejects_wrong_magic(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P6\n2 2\n65535\n" + b"\x00" * 8)
        with pytest.raises(FormatError):
            load_depth_image(path)

    def test_load_rejects_8bit_maxval(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + b"\x00" * 4)
        with pytest.raises(FormatError):
            load_depth_image(path)

    def test_load_rejects_truncated_payload(self, tmp_path):
        path = tmp_path / "short.pgm"
        path.write_bytes(b"P5\n2 2\n65535\n" + b"\x00" * 7)
        with pytest.raises(FormatError):
            load_depth_image(path)

    def test_header_comments_tolerated(self, tmp_path):
        path = tmp_path / "comment.pgm"
        payload = struct.pack(">2H", 400, 600)
        path.write_bytes(b"P5\n# sensor dump\n2 1\n65535\n" + payload)
        npt.assert_array_equal(load_depth_image(path).data, [[400.0, 600.0]])


class TestSyntheticScene:
    def test_surface_depth_hand_values(self):
        # 2*0.001 - 1*0.01 + 0.3*0.1 + 0.45 = 0.002 - 0.01 + 0.03 + 0.45 = 0.472
        scene = SyntheticScene(a=2.0, b=-1.0, c=0.3, d=0.45)
        npt.assert_allclose(scene.surface_depth(0.0, 0.1), 0.472, rtol=0, atol=1e-12)

    def test_lateral_term(self):
        # Adds lateral * x**2: 0.5 * 0.2**2 = 0.02 on top of 0.472.
        scene = SyntheticScene(a=2.0, b=-1.0, c=0.3, d=0.45, lateral=0.5)
        npt.assert_allclose(scene.surface_depth(0.2, 0.1), 0.492, rtol=0, atol=1e-12)

    def test_rejects_negative_noise(self):
        with pytest.raises(InvalidInputError):
            SyntheticScene(a=0.0, b=0.0, c=0.0, d=0.5, noise_sigma_mm=-1.0)

    def test_rejects_negative_seed(self):
        with pytest.raises(InvalidInputError):
            SyntheticScene(a=0.0, b=0.0, c=0.0, d=0.5, seed=-1)

    def test_rejects_non_finite_coefficient(self):
        with pytest.raises(InvalidInputError):
            SyntheticScene(a=float("inf"), b=0.0, c=0.0, d=0.5)


class TestRenderSynthetic:
    def test_flat_scene_renders_constant_depth(self):
        # z = d everywhere: the fixed point converges immediately to 500 mm.
        img = render_synthetic(SyntheticScene(a=0.0, b=0.0, c=0.0, d=0.5))
        assert img.data.shape == (480, 640)
        assert np.all(img.data == 500.0)

    def test_noisy_render_deterministic(self):
        scene = SyntheticScene(a=1.2, b=-0.4, c=0.15, d=0.45, noise_sigma_mm=2.0, seed=9)
        first = render_synthetic(scene)
        second = render_synthetic(scene)
        npt.assert_array_equal(first.data, second.data)

    def test_different_seeds_differ(self):
        base = dict(a=1.2, b=-0.4, c=0.15, d=0.45, noise_sigma_mm=2.0)
        img0 = render_synthetic(SyntheticScene(seed=0, **base))
        img1 = render_synthetic(SyntheticScene(seed=1, **base))
        assert not np.array_equal(img0.data, img1.data)

    def test_central_column_matches_cubic(self, smooth_scene, smooth_depth):
        # On the principal column x = 0, so depth solves z = cubic(y(z)).
        for v in range(0, 480, 24):
            p = deproject(320.0, float(v), float(smooth_depth.data[v, 320]), K)
            assert abs(p.z - smooth_scene.surface_depth(0.0, p.y)) <= 1e-6

    def test_noise_clamped_above_invalid_marker(self):
        k = CameraIntrinsics(fx=300.0, fy=300.0, cx=32.0, cy=24.0, width=64, height=48)
        scene = SyntheticScene(a=0.0, b=0.0, c=0.0, d=0.45,
                               noise_sigma_mm=400.0, intrinsics=k, seed=2)
        img = render_synthetic(scene)
        assert np.all(img.data >= MIN_VALID_DEPTH_MM)
        assert np.any(img.data == MIN_VALID_DEPTH_MM)

    def test_steep_surface_fails_to_converge(self):
        # Slope 5 with rays out to |rv| = 0.4 makes the fixed point diverge.
        with pytest.raises(RenderError):
            render_synthetic(SyntheticScene(a=0.0, b=0.0, c=5.0, d=0.5))

    def test_surface_behind_camera_rejected(self):
        with pytest.raises(RenderError):
            render_synthetic(SyntheticScene(a=0.0, b=0.0, c=0.0, d=-0.2))


class TestVisibleYSpan:
    def test_flat_scene_span(self):
        # Row 0: y = (0 - 240)/600 * 0.5 = -0.2; row 479: 239/600 * 0.5.
        lo, hi = visible_y_span(SyntheticScene(a=0.0, b=0.0, c=0.0, d=0.5))
        npt.assert_allclose(lo, -0.2, rtol=0, atol=1e-12)
        npt.assert_allclose(hi, 239.0 * 0.5 / 600.0, rtol=0, atol=1e-12)

    def test_span_ordered(self, smooth_scene):
        lo, hi = visible_y_span(smooth_scene)
        assert lo < 0.0 < hi


class TestSceneConfig:
    def test_smooth_fixture(self, fixtures_dir):
        scene = load_scene(fixtures_dir / "scene_smooth.cfg")
        assert (scene.a, scene.b, scene.c, scene.d) == (1.2, -0.4, 0.15, 0.45)
        assert scene.lateral == 0.0
        assert scene.noise_sigma_mm == 0.0
        assert scene.seed == 0
        assert scene.intrinsics == DEFAULT_INTRINSICS

    def test_noisy_fixture(self, fixtures_dir):
        scene = load_scene(fixtures_dir / "scene_noisy.cfg")
        assert scene.noise_sigma_mm == 2.0
        assert scene.seed == 7

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "scene.cfg"
        path.write_text("a = 0.0\nb = 0.0\nc = 0.0\nd = 0.5\nslope = 1.0\n")
        with pytest.raises(ConfigError):
            load_scene(path)

    def test_missing_required_key(self, tmp_path):
        path = tmp_path / "scene.cfg"
        path.write_text("a = 0.0\nb = 0.0\nc = 0.0\n")
        with pytest.raises(ConfigError):
            load_scene(path)

    def test_intrinsics_partial_override(self):
        k = intrinsics_from_kv({"fx": "300.0", "cx": "160.0", "width": "320"}, "test")
        assert k.fx == 300.0
        assert k.cx == 160.0
        assert k.width == 320
        assert k.fy == DEFAULT_INTRINSICS.fy
        assert k.height == DEFAULT_INTRINSICS.height
