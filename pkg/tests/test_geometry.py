"""Camera geometry: projections, aiming, view angles."""

import math

import pytest

from ptzflow.geometry import (
    CameraConfig,
    Footprint,
    HorizonError,
    OutOfRangeError,
    PtzSetting,
    Rect,
    aim_at,
    footprint,
    quality_value,
    sight_angle,
    wide_setting,
)

CAM = CameraConfig(id=0, x=50.0, y=0.0, height=50.0)
DOWN = -math.pi / 2


def test_rect_basics():
    r = Rect(0.0, 0.0, 300.0, 160.0)
    assert r.center == (150.0, 80.0)
    assert r.contains(0.0, 0.0) and r.contains(300.0, 160.0)
    assert not r.contains(-0.1, 5.0)
    assert len(r.corners) == 4


def test_rect_rejects_degenerate():
    with pytest.raises(ValueError):
        Rect(1.0, 0.0, 1.0, 5.0)
    with pytest.raises(ValueError):
        Rect(0.0, 5.0, 10.0, 5.0)


def test_ptz_setting_rejects_bad_zoom():
    with pytest.raises(ValueError):
        PtzSetting(0.0, DOWN, 0.5)
    with pytest.raises(ValueError):
        PtzSetting(0.0, DOWN, math.inf)
    PtzSetting(0.0, DOWN, 1.0)  # boundary ok


def test_camera_config_validation():
    with pytest.raises(ValueError):
        CameraConfig(id=0, x=0.0, y=0.0, height=0.0)
    with pytest.raises(ValueError):
        CameraConfig(id=0, x=0.0, y=0.0, height=10.0, fov=math.pi)
    with pytest.raises(ValueError):
        CameraConfig(id=0, x=0.0, y=0.0, height=10.0, max_zoom=0.9)


def test_footprint_rejects_nonconvex():
    # bowtie ordering self-intersects
    with pytest.raises(ValueError):
        Footprint(((0, 0), (1, 1), (1, 0), (0, 1)))
    with pytest.raises(ValueError):
        Footprint(((0, 0), (1, 0), (1, 1)))  # type: ignore[arg-type]


def test_footprint_contains_and_disc():
    fp = Footprint(((0, 0), (10, 0), (10, 10), (0, 10)))
    assert fp.area() == pytest.approx(100.0)
    assert fp.contains(5, 5) and fp.contains(0, 0)
    assert not fp.contains(10.1, 5)
    assert fp.contains_disc((5, 5), 4.9)
    assert not fp.contains_disc((5, 5), 5.1)
    assert not fp.contains_disc((20, 5), 1.0)


def test_straight_down_footprint_zoom1():
    # fov pi/2 straight down from 50 ft: half-angle pi/4 spans 50 ft each way
    fp = footprint(CAM, PtzSetting(0.0, DOWN, 1.0))
    assert fp.area() == pytest.approx(100.0 * 100.0, rel=1e-9)
    xs = [c[0] for c in fp.corners]
    ys = [c[1] for c in fp.corners]
    assert min(xs) == pytest.approx(0.0, abs=1e-9)
    assert max(xs) == pytest.approx(100.0, abs=1e-9)
    assert min(ys) == pytest.approx(-50.0, abs=1e-9)
    assert max(ys) == pytest.approx(50.0, abs=1e-9)


def test_straight_down_footprint_zoom10():
    fp = footprint(CAM, PtzSetting(0.0, DOWN, 10.0))
    side = 2.0 * 50.0 * math.tan(math.pi / 40.0)
    assert side == pytest.approx(7.87017, abs=1e-5)
    xs = [c[0] for c in fp.corners]
    assert max(xs) - min(xs) == pytest.approx(side, rel=1e-9)


def test_footprint_horizon_error():
    # zoom-1 top ray clears the horizon at shallow tilt
    with pytest.raises(HorizonError):
        footprint(CAM, PtzSetting(0.0, -0.1, 1.0))
    with pytest.raises(HorizonError):
        footprint(CAM, PtzSetting(0.0, 0.0, 10.0))


def test_aim_at_straight_down_small_disc_max_zoom():
    # zoom-10 footprint below the mast is 7.87 ft wide, so a 3.9 ft disc fits
    setting = aim_at(CAM, (CAM.x, CAM.y), 3.9)
    assert setting.zoom == pytest.approx(CAM.max_zoom)
    assert setting.tilt == pytest.approx(DOWN)


def test_aim_at_bisects_zoom_for_larger_disc():
    setting = aim_at(CAM, (CAM.x, CAM.y), 4.0)
    assert 1.0 <= setting.zoom < CAM.max_zoom
    fp = footprint(CAM, setting)
    assert fp.contains_disc((CAM.x, CAM.y), 4.0)
    # tighter zoom must not still fit, else the bisection stopped early
    tighter = PtzSetting(setting.pan, setting.tilt, setting.zoom * 1.01)
    assert not footprint(CAM, tighter).contains_disc((CAM.x, CAM.y), 4.0)


def test_aim_at_pan_bearing():
    setting = aim_at(CAM, (CAM.x + 10.0, CAM.y + 10.0), 1.0)
    assert setting.pan == pytest.approx(math.pi / 4)
    assert setting.tilt == pytest.approx(-math.atan2(50.0, math.hypot(10, 10)))
    fp = footprint(CAM, setting)
    assert fp.contains(CAM.x + 10.0, CAM.y + 10.0)


def test_aim_at_out_of_range_pan():
    cam = CameraConfig(id=1, x=0.0, y=0.0, height=50.0, pan_range=(-0.5, 0.5))
    with pytest.raises(OutOfRangeError):
        aim_at(cam, (0.0, -100.0), 1.0)  # due south needs |pan| = pi


def test_aim_at_oversized_disc_returns_widest_view():
    # target 300 ft out: ground-reaching views start at zoom ~4.76, and no
    # zoom fits a 500 ft disc, so the widest feasible view comes back
    setting = aim_at(CAM, (CAM.x, 300.0), 500.0)
    tilt = -math.atan2(50.0, 300.0)
    assert setting.zoom == pytest.approx((math.pi / 2) / (-2 * tilt), rel=1e-5)
    fp = footprint(CAM, setting)  # must be projectable
    assert not fp.contains_disc((CAM.x, 300.0), 500.0)


def test_aim_at_too_shallow_to_frame():
    # from 5 ft up, a target 300 ft out needs zoom > max_zoom just to keep
    # the frustum under the horizon
    cam = CameraConfig(id=2, x=0.0, y=0.0, height=5.0)
    with pytest.raises(OutOfRangeError):
        aim_at(cam, (0.0, 300.0), 1.0)


def test_wide_setting_covers_region():
    region = Rect(0.0, 0.0, 100.0, 160.0)
    setting = wide_setting(CAM, region)
    assert setting.zoom == 1.0
    fp = footprint(CAM, setting)  # must not raise HorizonError
    cx, cy = region.center
    assert fp.contains(cx, cy)


def test_sight_angle_quarter_turn():
    cam = CameraConfig(id=0, x=0.0, y=0.0, height=50.0)
    assert sight_angle(cam, (1.0, 1.0), (1.0, 0.0)) == pytest.approx(math.pi / 4)
    assert sight_angle(cam, (1.0, 0.0), (1.0, 0.0)) == pytest.approx(0.0)
    assert sight_angle(cam, (-2.0, 0.0), (1.0, 0.0)) == pytest.approx(math.pi)


def test_sight_angle_rejects_degenerate():
    cam = CameraConfig(id=0, x=0.0, y=0.0, height=50.0)
    with pytest.raises(ValueError):
        sight_angle(cam, (0.0, 0.0), (1.0, 0.0))
    with pytest.raises(ValueError):
        sight_angle(cam, (1.0, 1.0), (0.0, 0.0))


def test_quality_value_boundaries():
    eps = 1e-12
    assert quality_value(0.0) == 3
    assert quality_value(math.pi / 6) == 3
    assert quality_value(math.pi / 6 + 1e-9) == 2
    assert quality_value(math.pi / 3) == 2
    assert quality_value(math.pi / 3 + 1e-9) == 1
    assert quality_value(math.pi / 2) == 1
    assert quality_value(math.pi / 2 + 1e-9) == 0
    assert quality_value(math.pi) == 0
    assert quality_value(-math.pi / 6 + eps) == 3  # sign ignored
