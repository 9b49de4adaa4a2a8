"""Constant-velocity Kalman tracking of ground targets.

State is [x, y, vx, vy]. The motion model is a constant-velocity random
walk with isotropic process noise Q = q * dt * I4; measurements are noisy
positions with R = r * I2. Detection box height/width ride along on the
observation record but do not enter the filter.

kf_predict / kf_update are pure: they return a new Track and never mutate
their input. The *_batch variants apply the identical formulas across
stacked arrays and exist for the simulator's per-frame hot path.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_PROCESS_NOISE = 0.01
DEFAULT_MEAS_NOISE = 0.25
BIRTH_VARIANCE = 10.0


class DegenerateNoiseError(ValueError):
    """Innovation covariance is numerically singular."""


@dataclass(frozen=True)
class TrackState:
    x: float
    y: float
    vx: float
    vy: float

    def __post_init__(self):
        for v in (self.x, self.y, self.vx, self.vy):
            if not math.isfinite(v):
                raise ValueError(f"non-finite track state {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.vx, self.vy])

    @property
    def pos(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)


@dataclass(frozen=True)
class Observation:
    """Detected target: ground center plus apparent box size."""

    x: float
    y: float
    h: float = 1.0
    w: float = 1.0

    def __post_init__(self):
        if not (self.h > 0 and self.w > 0):
            raise ValueError("observation box must have positive size")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("non-finite observation")


@dataclass(frozen=True)
class Track:
    id: int
    state: TrackState
    covariance: np.ndarray  # 4x4, symmetric PSD
    birth_time: float
    interrogated: bool = False

    def __post_init__(self):
        if self.covariance.shape != (4, 4):
            raise ValueError("covariance must be 4x4")


def birth_track(track_id: int, obs: Observation, now: float) -> Track:
    """Start a track at a first observation with zero velocity prior."""
    state = TrackState(obs.x, obs.y, 0.0, 0.0)
    cov = np.eye(4) * BIRTH_VARIANCE
    return Track(track_id, state, cov, birth_time=now)


def transition_matrix(dt: float) -> np.ndarray:
    a = np.eye(4)
    a[0, 2] = dt
    a[1, 3] = dt
    return a


def kf_predict(track: Track, dt: float, q: float = DEFAULT_PROCESS_NOISE) -> Track:
    """Advance a track dt seconds under the constant-velocity model."""
    if not (dt >= 0 and math.isfinite(dt)):
        raise ValueError(f"dt must be finite and >= 0, got {dt}")
    if dt == 0:
        return track
    a = transition_matrix(dt)
    x = a @ track.state.as_array()
    p = a @ track.covariance @ a.T + q * dt * np.eye(4)
    p = 0.5 * (p + p.T)
    return replace(track, state=TrackState(*x), covariance=p)


def kf_update(track: Track, obs: Observation, r: float = DEFAULT_MEAS_NOISE) -> Track:
    """Correct a track with a position measurement (Joseph form)."""
    p = track.covariance
    s = p[:2, :2] + r * np.eye(2)
    det = s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
    if abs(det) < 1e-30:
        raise DegenerateNoiseError("innovation covariance is singular")
    s_inv = np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]]) / det
    k = p[:, :2] @ s_inv
    innov = np.array([obs.x, obs.y]) - track.state.as_array()[:2]
    x = track.state.as_array() + k @ innov
    m = np.eye(4)
    m[:, :2] -= k
    p_new = m @ p @ m.T + r * (k @ k.T)
    p_new = 0.5 * (p_new + p_new.T)
    return replace(track, state=TrackState(*x), covariance=p_new)


def kf_predict_batch(
    states: np.ndarray, covs: np.ndarray, dts: np.ndarray, q: float = DEFAULT_PROCESS_NOISE
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized kf_predict over n tracks with per-track dt."""
    states = states.copy()
    states[:, 0] += states[:, 2] * dts
    states[:, 1] += states[:, 3] * dts
    d = dts[:, None, None]
    pp, pv = covs[:, :2, :2], covs[:, :2, 2:]
    vp, vv = covs[:, 2:, :2], covs[:, 2:, 2:]
    out = np.empty_like(covs)
    out[:, :2, :2] = pp + d * (pv + vp) + d * d * vv
    out[:, :2, 2:] = pv + d * vv
    out[:, 2:, :2] = vp + d * vv
    out[:, 2:, 2:] = vv
    out += (q * dts)[:, None, None] * np.eye(4)
    out = 0.5 * (out + out.transpose(0, 2, 1))
    return states, out


def kf_update_batch(
    states: np.ndarray, covs: np.ndarray, zs: np.ndarray, r: float = DEFAULT_MEAS_NOISE
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized kf_update over n tracks, one measurement each."""
    s = covs[:, :2, :2] + r * np.eye(2)
    det = s[:, 0, 0] * s[:, 1, 1] - s[:, 0, 1] * s[:, 1, 0]
    if np.any(np.abs(det) < 1e-30):
        raise DegenerateNoiseError("innovation covariance is singular")
    s_inv = np.empty_like(s)
    s_inv[:, 0, 0] = s[:, 1, 1]
    s_inv[:, 1, 1] = s[:, 0, 0]
    s_inv[:, 0, 1] = -s[:, 0, 1]
    s_inv[:, 1, 0] = -s[:, 1, 0]
    s_inv /= det[:, None, None]
    k = covs[:, :, :2] @ s_inv
    innov = zs - states[:, :2]
    states = states + (k @ innov[:, :, None])[:, :, 0]
    m = np.broadcast_to(np.eye(4), covs.shape).copy()
    m[:, :, :2] -= k
    covs = m @ covs @ m.transpose(0, 2, 1) + r * (k @ k.transpose(0, 2, 1))
    covs = 0.5 * (covs + covs.transpose(0, 2, 1))
    return states, covs


def predict_exit_time(track: Track, bounds, now: float) -> float:
    """Time at which the current state's straight-line motion leaves bounds.

    Returns now if the position is already outside, math.inf if the
    velocity never carries it out (e.g. zero velocity).
    """
    s = track.state
    if not bounds.contains(s.x, s.y):
        return now
    horizon = math.inf
    if s.vx > 0:
        horizon = min(horizon, (bounds.xmax - s.x) / s.vx)
    elif s.vx < 0:
        horizon = min(horizon, (bounds.xmin - s.x) / s.vx)
    if s.vy > 0:
        horizon = min(horizon, (bounds.ymax - s.y) / s.vy)
    elif s.vy < 0:
        horizon = min(horizon, (bounds.ymin - s.y) / s.vy)
    return now + horizon


def predict_positions(track: Track, periods: int, period_len: float) -> list[tuple[float, float]]:
    """Mean positions at the ends of periods 1..periods from now."""
    s = track.state
    return [
        (s.x + s.vx * k * period_len, s.y + s.vy * k * period_len)
        for k in range(1, periods + 1)
    ]
