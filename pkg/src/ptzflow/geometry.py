"""Camera geometry: pinhole frustum ground projection, PTZ aiming, view angles.

Cameras sit at (x, y, height) above a flat field (z = 0). Pan is the bearing
of the optical axis measured from +y (north), east-positive; tilt is the
elevation of the axis, negative meaning downward. Zoom divides the field of
view: the effective half-angle per image axis is fov / (2 * zoom).
"""

import math
from dataclasses import dataclass

EPS = 1e-12
NORTH = (0.0, 1.0)


class HorizonError(ValueError):
    """A frustum ray does not descend toward the ground plane."""


class OutOfRangeError(ValueError):
    """Requested pan/tilt falls outside the camera's mechanical range."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [xmin, xmax] x [ymin, ymax]."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"degenerate rect {self}")

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    @property
    def corners(self) -> tuple[tuple[float, float], ...]:
        return (
            (self.xmin, self.ymin),
            (self.xmax, self.ymin),
            (self.xmax, self.ymax),
            (self.xmin, self.ymax),
        )

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


@dataclass(frozen=True)
class PtzSetting:
    pan: float
    tilt: float
    zoom: float

    def __post_init__(self):
        if not (self.zoom >= 1.0 and math.isfinite(self.zoom)):
            raise ValueError(f"zoom must be >= 1, got {self.zoom}")


@dataclass(frozen=True)
class CameraConfig:
    id: int
    x: float
    y: float
    height: float
    fov: float = math.pi / 2
    aspect: float = 1.0
    pan_range: tuple[float, float] = (-math.pi, math.pi)
    tilt_range: tuple[float, float] = (-math.pi / 2, 0.0)
    max_zoom: float = 10.0
    transition_time: float = 1.0
    capture_time: float = 2.0

    def __post_init__(self):
        if self.height <= 0:
            raise ValueError("camera height must be positive")
        if not 0 < self.fov < math.pi:
            raise ValueError("fov must lie in (0, pi)")
        if self.max_zoom < 1.0:
            raise ValueError("max_zoom must be >= 1")

    @property
    def pos(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Footprint:
    """Convex ground quad covered by a frustum, corners in circular order."""

    corners: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.corners) != 4:
            raise ValueError("footprint needs 4 corners")
        if abs(self._signed_area()) < EPS:
            raise ValueError("degenerate footprint")
        # consistent turn direction <=> convex and non-self-intersecting
        signs = set()
        for i in range(4):
            ax, ay = self.corners[i]
            bx, by = self.corners[(i + 1) % 4]
            cx, cy = self.corners[(i + 2) % 4]
            cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if abs(cross) > EPS:
                signs.add(cross > 0)
        if len(signs) != 1:
            raise ValueError("footprint corners are not convex")

    def _signed_area(self) -> float:
        s = 0.0
        for i in range(4):
            x0, y0 = self.corners[i]
            x1, y1 = self.corners[(i + 1) % 4]
            s += x0 * y1 - x1 * y0
        return 0.5 * s

    def area(self) -> float:
        return abs(self._signed_area())

    def contains(self, x: float, y: float) -> bool:
        orient = 1.0 if self._signed_area() > 0 else -1.0
        for i in range(4):
            x0, y0 = self.corners[i]
            x1, y1 = self.corners[(i + 1) % 4]
            cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
            if orient * cross < -1e-9:
                return False
        return True

    def contains_disc(self, center: tuple[float, float], radius: float) -> bool:
        cx, cy = center
        if not self.contains(cx, cy):
            return False
        for i in range(4):
            x0, y0 = self.corners[i]
            x1, y1 = self.corners[(i + 1) % 4]
            ex, ey = x1 - x0, y1 - y0
            dist = abs(ex * (cy - y0) - ey * (cx - x0)) / math.hypot(ex, ey)
            if dist < radius - 1e-9:
                return False
        return True


def _basis(pan: float, tilt: float):
    """Optical axis, right, and up unit vectors for a pan/tilt pose."""
    ct, st = math.cos(tilt), math.sin(tilt)
    axis = (math.sin(pan) * ct, math.cos(pan) * ct, st)
    right = (math.cos(pan), -math.sin(pan), 0.0)
    up = (
        right[1] * axis[2] - right[2] * axis[1],
        right[2] * axis[0] - right[0] * axis[2],
        right[0] * axis[1] - right[1] * axis[0],
    )
    return axis, right, up


def footprint(cam: CameraConfig, setting: PtzSetting) -> Footprint:
    """Project the frustum of a PTZ setting onto the ground plane.

    Raises HorizonError if any corner ray fails to descend (the ground
    trace would be unbounded).
    """
    half = cam.fov / (2.0 * setting.zoom)
    tan_v = math.tan(half)
    tan_h = tan_v * cam.aspect
    axis, right, up = _basis(setting.pan, setting.tilt)
    corners = []
    for su, sv in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        d = tuple(axis[k] + su * tan_h * right[k] + sv * tan_v * up[k] for k in range(3))
        if d[2] >= -1e-9:
            raise HorizonError(
                f"camera {cam.id}: frustum ray at pan={setting.pan:.3f} "
                f"tilt={setting.tilt:.3f} zoom={setting.zoom:.3f} does not reach the ground"
            )
        s = -cam.height / d[2]
        corners.append((cam.x + s * d[0], cam.y + s * d[1]))
    return Footprint(tuple(corners))


def _pan_reachable(cam: CameraConfig, pan: float) -> bool:
    lo, hi = cam.pan_range
    if hi - lo >= 2 * math.pi - 1e-9:
        return True
    while pan <= -math.pi:
        pan += 2 * math.pi
    while pan > math.pi:
        pan -= 2 * math.pi
    return lo - 1e-9 <= pan <= hi + 1e-9


def aim_at(cam: CameraConfig, target: tuple[float, float], required_radius: float) -> PtzSetting:
    """Point the camera at a ground target, zoomed as tight as possible
    while the footprint still contains disc(target, required_radius).

    Zoom is continuous: the largest value <= max_zoom whose footprint
    contains the disc. When even the widest ground-reaching view cannot
    contain the disc, that widest view is returned as-is.
    """
    dx, dy = target[0] - cam.x, target[1] - cam.y
    dist = math.hypot(dx, dy)
    pan = math.atan2(dx, dy) if dist > EPS else 0.0
    tilt = -math.atan2(cam.height, dist)
    if not _pan_reachable(cam, pan):
        raise OutOfRangeError(f"camera {cam.id}: pan {pan:.3f} outside {cam.pan_range}")
    if not cam.tilt_range[0] - 1e-9 <= tilt <= cam.tilt_range[1] + 1e-9:
        raise OutOfRangeError(f"camera {cam.id}: tilt {tilt:.3f} outside {cam.tilt_range}")

    # below this zoom the top frustum rays clear the horizon
    widest = 1.0
    if -tilt < cam.fov / 2.0:
        widest = cam.fov / (-2.0 * tilt) * (1.0 + 1e-6)
        if widest > cam.max_zoom:
            raise OutOfRangeError(
                f"camera {cam.id}: target at distance {dist:.1f} too shallow to frame"
            )

    def fits(zoom: float) -> bool:
        try:
            return footprint(cam, PtzSetting(pan, tilt, zoom)).contains_disc(
                target, required_radius
            )
        except HorizonError:
            return False

    if not fits(widest):
        return PtzSetting(pan, tilt, widest)
    if fits(cam.max_zoom):
        return PtzSetting(pan, tilt, cam.max_zoom)
    lo, hi = widest, cam.max_zoom  # fits(lo), not fits(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return PtzSetting(pan, tilt, lo)


def wide_setting(cam: CameraConfig, region: Rect) -> PtzSetting:
    """Zoom-1 surveillance pose for a fixed region.

    Pans at the region center; tilts so the top frustum ray lands at the
    distance of the region's farthest corner, keeping the whole frustum
    below the horizon while reaching the far edge of the region.
    """
    cx, cy = region.center
    dx, dy = cx - cam.x, cy - cam.y
    pan = math.atan2(dx, dy) if math.hypot(dx, dy) > EPS else 0.0
    d_far = max(math.hypot(px - cam.x, py - cam.y) for px, py in region.corners)
    half = cam.fov / 2.0
    tilt = -(math.atan2(cam.height, d_far) + half)
    tilt = min(max(tilt, cam.tilt_range[0]), cam.tilt_range[1])
    if not _pan_reachable(cam, pan):
        raise OutOfRangeError(f"camera {cam.id}: pan {pan:.3f} outside {cam.pan_range}")
    return PtzSetting(pan, tilt, 1.0)


def sight_angle(
    cam: CameraConfig, target: tuple[float, float], reference_dir: tuple[float, float]
) -> float:
    """Unsigned angle in [0, pi] between the ground-projected camera->target
    vector and reference_dir. Target must not sit at the camera's base."""
    ux, uy = target[0] - cam.x, target[1] - cam.y
    if math.hypot(ux, uy) < EPS:
        raise ValueError("target coincides with the camera ground position")
    rx, ry = reference_dir
    if math.hypot(rx, ry) < EPS:
        raise ValueError("reference direction must be nonzero")
    return abs(math.atan2(ux * ry - uy * rx, ux * rx + uy * ry))


def quality_value(e: float) -> int:
    """Piecewise view-quality score of a sight angle."""
    e = abs(e)
    if e <= math.pi / 6:
        return 3
    if e <= math.pi / 3:
        return 2
    if e <= math.pi / 2:
        return 1
    return 0
