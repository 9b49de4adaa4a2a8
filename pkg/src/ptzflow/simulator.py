"""Discrete-event simulation of pedestrians under PTZ surveillance.

Ground truth advances frame by frame: pedestrians enter from the north
edge by a Poisson process, walk roughly south with a small velocity
random walk, and leave when they cross any field edge. A pedestrian is
detected the first time a camera's current view contains them; from then
on the vision pipeline feeds the Kalman track book one noisy position
measurement per frame wherever they walk. The master-slave baseline's
static camera is idealized as a full-field overview, so its entrants are
detected immediately.

Two executives share that world model. run_flexible replans every period
through the network-flow planner and executes only the first period of
each plan; run_master_slave dedicates camera 0 to the wide overview and
runs the remaining cameras as greedy single-target interrogators. Both
emit a plain-text trace from which all metrics are computed.

Determinism: the world stream (arrivals, trajectories) and the sensor
stream (measurement noise) are independent PCG64 generators derived from
the scenario seed, and each pedestrian's full trajectory is drawn at
spawn time, so a seed fixes identical arrivals and truth across planner
methods.
"""

import configparser
import hashlib
import logging
import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import planner as planner_mod
from . import tracking
from .geometry import CameraConfig, Footprint, PtzSetting, Rect, aim_at, footprint, wide_setting
from .solver import ActionKind

logger = logging.getLogger(__name__)

PLANNERS = ("flexible", "flexible_grouped", "master_slave")
MS_POLICIES = ("edf", "round_robin")

OBS_HEIGHT = 6.0  # apparent detection box, ft; rides along, never filtered
OBS_WIDTH = 2.0
# tracked pedestrians are re-identified every frame, so a track that has
# gone unseen for longer than a beat of dropped frames is already gone
STALE_TIMEOUT_PLANNED = 1.0
STALE_TIMEOUT_STATIC = 1.0
CAPTURE_MARGIN = 3.0  # ft of zoom slack: body width plus prediction drift
MAX_LIFE_FRAMES = 100_000


class ConfigError(ValueError):
    """Scenario configuration missing, malformed, or inconsistent."""


def default_cameras() -> list[CameraConfig]:
    return [
        CameraConfig(id=i, x=50.0 + 100.0 * i, y=0.0, height=50.0) for i in range(3)
    ]


@dataclass
class ScenarioConfig:
    field_width: float = 300.0
    field_height: float = 160.0
    fps: int = 18
    arrival_rate: float = 1.0 / 20.0  # expected arrivals per frame
    n_total: int = 400
    speed_min: float = 3.0
    speed_max: float = 5.0
    heading_jitter_deg: float = 15.0
    truth_accel_var: float = 0.01  # velocity random walk, (ft/s)^2 per s
    horizon: int = 10
    window: int = 5
    period_len: float = 3.0
    group_radius: float = 6.0
    planner: str = "flexible_grouped"
    master_slave_policy: str = "edf"
    seed: int = 1
    process_noise: float = tracking.DEFAULT_PROCESS_NOISE
    meas_noise: float = tracking.DEFAULT_MEAS_NOISE
    cameras: list[CameraConfig] = field(default_factory=default_cameras)

    def __post_init__(self):
        if self.planner not in PLANNERS:
            raise ConfigError(f"planner must be one of {PLANNERS}, got {self.planner!r}")
        if self.master_slave_policy not in MS_POLICIES:
            raise ConfigError(f"master_slave_policy must be one of {MS_POLICIES}")
        if self.n_total < 1:
            raise ConfigError("n_total must be >= 1")
        if not 0 < self.arrival_rate <= 10:
            raise ConfigError("arrival_rate (per frame) must lie in (0, 10]")
        if self.speed_min <= 0 or self.speed_max < self.speed_min:
            raise ConfigError("need 0 < speed_min <= speed_max")
        if self.horizon < 1 or self.window < 1 or self.horizon % self.window:
            raise ConfigError("window must divide horizon")
        fpp = self.period_len * self.fps
        if abs(fpp - round(fpp)) > 1e-9 or round(fpp) < 1:
            raise ConfigError("period_len must be a whole number of frames")
        if len(self.cameras) < 1:
            raise ConfigError("need at least one camera")
        for cam in self.cameras:
            if cam.transition_time + cam.capture_time > self.period_len + 1e-9:
                raise ConfigError(
                    f"camera {cam.id}: transition+capture exceeds the period"
                )

    @property
    def frame_dt(self) -> float:
        return 1.0 / self.fps

    @property
    def frames_per_period(self) -> int:
        return round(self.period_len * self.fps)

    @property
    def bounds(self) -> Rect:
        return Rect(0.0, 0.0, self.field_width, self.field_height)

    def config_hash(self) -> str:
        parts = []
        for f in fields(self):
            if f.name == "cameras":
                parts.append(f"cameras={[repr(c) for c in self.cameras]}")
            else:
                parts.append(f"{f.name}={getattr(self, f.name)!r}")
        return hashlib.sha256("|".join(parts).encode()).hexdigest()[:12]


def scenario1(**overrides) -> ScenarioConfig:
    """400 pedestrians at 0.9/s: a steady crowd the flexible planners absorb."""
    base = ScenarioConfig(
        n_total=400, arrival_rate=1.0 / 20.0,
        speed_min=2.2, speed_max=3.4, group_radius=4.0,
    )
    return replace(base, **overrides)


def scenario2(**overrides) -> ScenarioConfig:
    """450 pedestrians at 1.0/s: an overload that only grouping keeps up with."""
    base = ScenarioConfig(
        n_total=450, arrival_rate=1.0 / 18.0,
        speed_min=2.2, speed_max=3.4, group_radius=12.0,
    )
    return replace(base, **overrides)


_SCALAR_KEYS = {
    "field_width": float,
    "field_height": float,
    "fps": int,
    "arrival_rate": float,
    "n_total": int,
    "speed_min": float,
    "speed_max": float,
    "heading_jitter_deg": float,
    "truth_accel_var": float,
    "horizon": int,
    "window": int,
    "period_len": float,
    "group_radius": float,
    "planner": str,
    "master_slave_policy": str,
    "seed": int,
    "process_noise": float,
    "meas_noise": float,
}

_CAMERA_KEYS = {
    "x": float,
    "y": float,
    "height": float,
    "fov_deg": float,
    "max_zoom": float,
    "transition_time": float,
    "capture_time": float,
}


def load_config(path: str) -> ScenarioConfig:
    """Read an INI scenario file: a [scenario] section of key = value
    pairs plus optional [camera N] sections."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    kwargs = {}
    if parser.has_section("scenario"):
        for key, raw in parser.items("scenario"):
            if key not in _SCALAR_KEYS:
                raise ConfigError(f"unknown [scenario] key {key!r}")
            try:
                kwargs[key] = _SCALAR_KEYS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    cameras = []
    for section in parser.sections():
        if not section.startswith("camera"):
            if section != "scenario":
                raise ConfigError(f"unknown section [{section}]")
            continue
        try:
            cam_id = int(section.split()[1])
        except (IndexError, ValueError) as exc:
            raise ConfigError(f"camera section must be [camera N]: [{section}]") from exc
        vals = {}
        for key, raw in parser.items(section):
            if key not in _CAMERA_KEYS:
                raise ConfigError(f"unknown [{section}] key {key!r}")
            try:
                vals[key] = _CAMERA_KEYS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        fov = math.radians(vals.pop("fov_deg", 90.0))
        try:
            cameras.append(CameraConfig(id=cam_id, fov=fov, **vals))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad camera {cam_id}: {exc}") from exc
    if cameras:
        cameras.sort(key=lambda c: c.id)
        if [c.id for c in cameras] != list(range(len(cameras))):
            raise ConfigError("camera ids must be 0..k-1")
        kwargs["cameras"] = cameras
    try:
        return ScenarioConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# trace


@dataclass(frozen=True)
class TraceEvent:
    t: float
    kind: str
    attrs: tuple[tuple[str, str], ...]

    def line(self) -> str:
        rest = " ".join(f"{k}={v}" for k, v in self.attrs)
        return f"t={self.t:.4f} event={self.kind}" + (f" {rest}" if rest else "")

    def get(self, key: str) -> str:
        for k, v in self.attrs:
            if k == key:
                return v
        raise KeyError(key)


class Trace:
    """Append-only event log; the single source for all metrics."""

    def __init__(self, method: str, seed: int, config_hash: str):
        self.method = method
        self.seed = seed
        self.config_hash = config_hash
        self.events: list[TraceEvent] = []
        self.add(0.0, "meta", method=method, seed=seed, config=config_hash)

    def add(self, t: float, kind: str, **attrs):
        fmt = lambda v: f"{v:.4f}" if isinstance(v, float) else str(v)
        self.events.append(
            TraceEvent(t, kind, tuple((k, fmt(v)) for k, v in attrs.items()))
        )

    def lines(self) -> list[str]:
        return [ev.line() for ev in self.events]

    def write(self, path):
        with open(path, "w") as fh:
            fh.write("\n".join(self.lines()) + "\n")

    @classmethod
    def parse(cls, lines) -> "Trace":
        if isinstance(lines, str):
            with open(lines) as fh:
                lines = fh.read().splitlines()
        events = []
        for line in lines:
            if not line.strip():
                continue
            toks = line.split()
            if not toks[0].startswith("t=") or not toks[1].startswith("event="):
                raise ValueError(f"malformed trace line: {line!r}")
            t = float(toks[0][2:])
            kind = toks[1][6:]
            attrs = tuple(tuple(tok.split("=", 1)) for tok in toks[2:])
            events.append(TraceEvent(t, kind, attrs))
        if not events or events[0].kind != "meta":
            raise ValueError("trace must start with a meta event")
        meta = dict(events[0].attrs)
        trace = cls(meta["method"], int(meta["seed"]), meta["config"])
        trace.events = events
        return trace


# ---------------------------------------------------------------------------
# ground truth


@dataclass
class Pedestrian:
    id: int
    spawn_frame: int
    traj: np.ndarray  # (k, 2) in-field positions, frame-aligned
    v0: tuple[float, float]

    @property
    def exit_frame(self) -> int:  # first frame no longer in the field
        return self.spawn_frame + len(self.traj)

    def pos(self, frame: int) -> np.ndarray:
        return self.traj[frame - self.spawn_frame]


def _spawn_pedestrian(pid: int, frame: int, cfg: ScenarioConfig, rng) -> Pedestrian:
    x = rng.uniform(0.0, cfg.field_width)
    speed = rng.uniform(cfg.speed_min, cfg.speed_max)
    jitter = math.radians(rng.uniform(-cfg.heading_jitter_deg, cfg.heading_jitter_deg))
    v0 = (speed * math.sin(jitter), -speed * math.cos(jitter))
    dt = cfg.frame_dt
    sigma = math.sqrt(cfg.truth_accel_var * dt)
    bounds = cfg.bounds
    pos = np.array([x, cfg.field_height])
    vel = np.array(v0)
    parts = [pos[None, :].copy()]
    produced = 1
    chunk = 256
    while produced < MAX_LIFE_FRAMES:
        accel = rng.normal(0.0, sigma, size=(chunk, 2))
        vels = vel + np.vstack([np.zeros(2), np.cumsum(accel, axis=0)[:-1]])
        steps = pos + np.cumsum(vels * dt, axis=0)
        outside = (
            (steps[:, 0] < bounds.xmin)
            | (steps[:, 0] > bounds.xmax)
            | (steps[:, 1] < bounds.ymin)
            | (steps[:, 1] > bounds.ymax)
        )
        hits = np.nonzero(outside)[0]
        if hits.size:
            parts.append(steps[: hits[0]])
            produced += hits[0]
            break
        parts.append(steps)
        produced += chunk
        pos = steps[-1]
        vel = vel + np.sum(accel, axis=0)
    else:
        logger.warning("pedestrian %d exceeded %d frames; forcing exit", pid, MAX_LIFE_FRAMES)
    return Pedestrian(pid, frame, np.vstack(parts), v0)


# ---------------------------------------------------------------------------
# track book (batch Kalman state for every pedestrian ever detected)


class TrackBook:
    def __init__(self, cfg: ScenarioConfig):
        n = cfg.n_total
        self.cfg = cfg
        self.states = np.zeros((n, 4))
        self.covs = np.zeros((n, 4, 4))
        self.last_t = np.zeros(n)
        self.first_seen = np.full(n, -1.0)
        self.born = np.zeros(n, dtype=bool)
        self.retired = np.zeros(n, dtype=bool)
        self.interrogated = np.zeros(n, dtype=bool)

    def observe(self, pids: np.ndarray, zs: np.ndarray, t: float):
        was_born = self.born[pids]
        fresh = pids[~was_born]
        if fresh.size:
            self.states[fresh, :2] = zs[~was_born]
            self.states[fresh, 2:] = 0.0
            self.covs[fresh] = np.eye(4) * tracking.BIRTH_VARIANCE
            self.first_seen[fresh] = t
            self.last_t[fresh] = t
            self.born[fresh] = True
        known = pids[was_born]
        if known.size:
            s, c = tracking.kf_predict_batch(
                self.states[known],
                self.covs[known],
                t - self.last_t[known],
                q=self.cfg.process_noise,
            )
            s, c = tracking.kf_update_batch(s, c, zs[was_born], r=self.cfg.meas_noise)
            self.states[known] = s
            self.covs[known] = c
            self.last_t[known] = t

    def active_ids(self) -> np.ndarray:
        return np.nonzero(self.born & ~self.retired)[0]

    def sweep_retired(self, now: float, stale_timeout: float):
        """Retire tracks whose prediction left the field or went stale."""
        ids = self.active_ids()
        if not ids.size:
            return
        dts = now - self.last_t[ids]
        px = self.states[ids, 0] + self.states[ids, 2] * dts
        py = self.states[ids, 1] + self.states[ids, 3] * dts
        b = self.cfg.bounds
        m = planner_mod.EDGE_MARGIN
        gone = (
            (px < b.xmin - m)
            | (px > b.xmax + m)
            | (py < b.ymin - m)
            | (py > b.ymax + m)
            | (dts > stale_timeout)
        )
        self.retired[ids[gone]] = True

    def snapshot(self, now: float) -> list[tracking.Track]:
        """Live tracks predicted to `now`, as immutable Track values."""
        ids = self.active_ids()
        if not ids.size:
            return []
        s, c = tracking.kf_predict_batch(
            self.states[ids],
            self.covs[ids],
            now - self.last_t[ids],
            q=self.cfg.process_noise,
        )
        return [
            tracking.Track(
                id=int(pid),
                state=tracking.TrackState(*s[row]),
                covariance=c[row],
                birth_time=float(self.first_seen[pid]),
                interrogated=bool(self.interrogated[pid]),
            )
            for row, pid in enumerate(ids)
        ]

    def predicted_positions(self, ids: np.ndarray, now: float) -> np.ndarray:
        dts = now - self.last_t[ids]
        out = np.empty((len(ids), 2))
        out[:, 0] = self.states[ids, 0] + self.states[ids, 2] * dts
        out[:, 1] = self.states[ids, 1] + self.states[ids, 3] * dts
        return out

    def exit_estimates(self, ids: np.ndarray) -> np.ndarray:
        """Absolute exit-time estimate per track from its filtered state."""
        b = self.cfg.bounds
        x, y = self.states[ids, 0], self.states[ids, 1]
        vx, vy = self.states[ids, 2], self.states[ids, 3]
        with np.errstate(divide="ignore"):
            tx = np.where(vx > 0, (b.xmax - x), np.where(vx < 0, (b.xmin - x), np.nan)) / np.where(
                vx != 0, vx, 1.0
            )
            ty = np.where(vy > 0, (b.ymax - y), np.where(vy < 0, (b.ymin - y), np.nan)) / np.where(
                vy != 0, vy, 1.0
            )
        tx = np.where(vx != 0, tx, np.inf)
        ty = np.where(vy != 0, ty, np.inf)
        horizon = np.minimum(np.maximum(tx, 0.0), np.maximum(ty, 0.0))
        return self.last_t[ids] + horizon


# ---------------------------------------------------------------------------
# shared world loop pieces


@dataclass
class PendingCapture:
    members: tuple[int, ...]
    label: int
    finish_frame: int
    view: Footprint


@dataclass
class CameraRuntime:
    cfg: CameraConfig
    setting: PtzSetting | None = None
    view: Footprint | None = None  # ground quad of the current setting
    active_from: float = 0.0  # capture begins after any transition
    pending: PendingCapture | None = None

    def point(self, setting: PtzSetting):
        if setting != self.setting:
            self.setting = setting
            self.view = footprint(self.cfg, setting)


class _World:
    """Truth state plus the sensing/track plumbing both executives share."""

    def __init__(self, cfg: ScenarioConfig, method: str):
        self.cfg = cfg
        self.rng_world = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, 1])))
        self.rng_sensor = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, 2])))
        self.trace = Trace(method, cfg.seed, cfg.config_hash())
        self.book = TrackBook(cfg)
        self.peds: dict[int, Pedestrian] = {}
        self.live: list[int] = []
        self.spawned = 0
        self.exited = 0
        self.noise_sigma = math.sqrt(cfg.meas_noise)

    def spawn_step(self, frame: int, t: float):
        cfg = self.cfg
        if self.spawned >= cfg.n_total:
            return
        k = min(int(self.rng_world.poisson(cfg.arrival_rate)), cfg.n_total - self.spawned)
        for _ in range(k):
            ped = _spawn_pedestrian(self.spawned, frame, cfg, self.rng_world)
            self.peds[ped.id] = ped
            self.live.append(ped.id)
            self.trace.add(
                t, "spawn", ped=ped.id,
                x=float(ped.traj[0, 0]), y=float(ped.traj[0, 1]),
                vx=float(ped.v0[0]), vy=float(ped.v0[1]),
            )
            self.spawned += 1

    def exit_step(self, frame: int, t: float):
        still = []
        for pid in self.live:
            if self.peds[pid].exit_frame <= frame:
                self.exited += 1
                self.trace.add(t, "exit", ped=pid)
            else:
                still.append(pid)
        self.live = still

    def sense_step(self, frame: int, t: float, views=None):
        # a pedestrian enters the track book the first time some camera's
        # current view contains them; from then on the vision pipeline
        # re-identifies the track every frame wherever it walks. views=None
        # means an idealized full-field overview (the baseline's static
        # camera) where entrants are picked up immediately.
        if not self.live:
            return
        born = self.book.born
        pids = [
            pid for pid in self.live
            if born[pid] or views is None
            or self._visible(self.peds[pid].pos(frame), views)
        ]
        if not pids:
            return
        pids = np.array(pids)
        pos = np.stack([self.peds[pid].pos(frame) for pid in pids])
        noise = self.rng_sensor.normal(0.0, self.noise_sigma, size=(len(pids), 2))
        self.book.observe(pids, pos + noise, t)

    @staticmethod
    def _visible(pos, views) -> bool:
        x, y = pos
        return any(v is not None and v.contains(x, y) for v in views)

    def finish_capture(self, cam: CameraRuntime, frame: int, t: float):
        # only the planned members are identified, and only if they are
        # still standing inside the executed view when it completes
        pending = cam.pending
        cam.pending = None
        if pending is None:
            return
        captured = []
        for pid in pending.members:
            ped = self.peds[pid]
            if ped.exit_frame <= frame or self.book.interrogated[pid]:
                continue
            x, y = ped.pos(frame)
            if pending.view.contains(x, y):
                captured.append(pid)
        if not captured:
            return
        self.book.interrogated[captured] = True
        # waits run from appearance in the field, not from first detection
        waits = ",".join(
            f"{t - self.peds[pid].spawn_frame / self.cfg.fps:.4f}" for pid in captured
        )
        self.trace.add(
            t, "capture", cam=cam.cfg.id, group=pending.label,
            peds=",".join(str(p) for p in captured), waits=waits,
        )


# ---------------------------------------------------------------------------
# executives


def run_flexible(cfg: ScenarioConfig, grouped: bool | None = None) -> Trace:
    """Receding-horizon flow-planned run; `grouped` picks set-cover groups
    versus singleton groups (defaults from cfg.planner)."""
    if grouped is None:
        if cfg.planner == "master_slave":
            raise ConfigError("run_flexible needs a flexible planner config")
        grouped = cfg.planner == "flexible_grouped"
    method = "flexible_grouped" if grouped else "flexible"
    world = _World(cfg, method)
    regions = planner_mod.make_regions(cfg.bounds, len(cfg.cameras))
    setup = planner_mod.PlannerSetup(
        cameras=cfg.cameras,
        regions=regions,
        bounds=cfg.bounds,
        horizon=cfg.horizon,
        window=cfg.window,
        period_len=cfg.period_len,
        group_radius=cfg.group_radius,
        grouped=grouped,
    )
    cameras = [CameraRuntime(c) for c in cfg.cameras]
    fpp = cfg.frames_per_period
    last_look: dict[int, int] = {}  # region -> global period of latest look
    frame = 0
    while True:
        t = frame / cfg.fps
        if frame % fpp == 0:
            for cam in cameras:
                if cam.pending and cam.pending.finish_frame == frame:
                    world.finish_capture(cam, frame, t)
            if world.exited >= cfg.n_total:
                break
            world.book.sweep_retired(t, STALE_TIMEOUT_PLANNED)
            tracks = world.book.snapshot(t)
            g0 = frame // fpp + 1
            window_start = (g0 - 1) // cfg.window * cfg.window + 1
            satisfied = frozenset(
                k for k, gp in last_look.items() if gp >= window_start
            )
            plan = planner_mod.build_plan(setup, tracks, t, g0, satisfied)
            world.trace.add(
                t, "plan", period=frame // fpp, tracks=len(tracks),
                groups=len(plan.groups), departing=plan.context.n_departing,
                nodes=len(plan.graph.nodes), arcs=len(plan.graph.arcs),
                objective=plan.solution.objective,
            )
            for cam, action in zip(cameras, plan.schedule.first_period()):
                if action.kind is ActionKind.GROUP:
                    group = plan.groups[action.target]
                    # zoom as tight as the planned subjects allow: lone
                    # targets get a close-up, groups the covering radius
                    radius = CAPTURE_MARGIN
                    if group.size > 1:
                        radius += cfg.group_radius
                    setting = aim_at(cam.cfg, group.focus_per_period[0], radius)
                    cam.pending = PendingCapture(
                        group.member_ids, group.id, frame + fpp,
                        footprint(cam.cfg, setting),
                    )
                    if logger.isEnabledFor(logging.DEBUG):
                        logger.debug(
                            "t=%.1f cam=%d capture group=%d size=%d exit=%.1f",
                            t, cam.cfg.id, group.id, group.size, group.exit_time,
                        )
                else:
                    setting = wide_setting(cam.cfg, regions[action.target].rect)
                    world.trace.add(t, "fixed_look", cam=cam.cfg.id, region=action.target)
                    last_look[action.target] = g0
                moved = setting != cam.setting
                cam.active_from = t + cam.cfg.transition_time if moved else t
                cam.point(setting)
        world.spawn_step(frame, t)
        world.exit_step(frame, t)
        if world.exited >= cfg.n_total and world.spawned >= cfg.n_total:
            break
        world.sense_step(frame, t, [cam.view for cam in cameras])
        frame += 1
    return world.trace


def run_master_slave(cfg: ScenarioConfig) -> Trace:
    """Baseline: camera 0 is the static wide overview (never interrogates),
    the others take one track each per task, greedily by deadline."""
    if len(cfg.cameras) < 2:
        raise ConfigError("master_slave needs a static camera plus >= 1 PTZ")
    world = _World(cfg, "master_slave")
    ptzs = [CameraRuntime(c) for c in cfg.cameras[1:]]
    edf = cfg.master_slave_policy == "edf"
    frame = 0
    while True:
        t = frame / cfg.fps
        for cam in ptzs:
            if cam.pending and cam.pending.finish_frame == frame:
                world.finish_capture(cam, frame, t)
        if world.exited >= cfg.n_total:
            break
        busy = {
            pid for cam in ptzs if cam.pending for pid in cam.pending.members
        }
        for cam in ptzs:
            if cam.pending is not None:
                continue
            world.book.sweep_retired(t, STALE_TIMEOUT_STATIC)
            task_s = cam.cfg.transition_time + cam.cfg.capture_time
            ids = world.book.active_ids()
            ids = ids[~world.book.interrogated[ids]]
            ids = np.array([pid for pid in ids if pid not in busy])
            if not ids.size:
                continue
            exits = world.book.exit_estimates(ids)
            # skip targets predicted to leave before the task could finish
            feasible = exits > t + task_s
            ids = ids[feasible]
            if not ids.size:
                continue
            keys = exits[feasible] if edf else world.book.first_seen[ids]
            pick = ids[np.lexsort((ids, keys))[0]]
            dt_ahead = t + task_s - world.book.last_t[pick]
            focus = (
                world.book.states[pick, 0] + world.book.states[pick, 2] * dt_ahead,
                world.book.states[pick, 1] + world.book.states[pick, 3] * dt_ahead,
            )
            setting = aim_at(cam.cfg, focus, CAPTURE_MARGIN)
            moved = setting != cam.setting
            cam.active_from = t + cam.cfg.transition_time if moved else t
            cam.point(setting)
            task_frames = round(task_s * cfg.fps)
            cam.pending = PendingCapture(
                (int(pick),), int(pick), frame + task_frames,
                footprint(cam.cfg, setting),
            )
            busy.add(int(pick))
        world.spawn_step(frame, t)
        world.exit_step(frame, t)
        if world.exited >= cfg.n_total and world.spawned >= cfg.n_total:
            break
        world.sense_step(frame, t)
        frame += 1
    return world.trace


def run_scenario(cfg: ScenarioConfig) -> Trace:
    """Dispatch on cfg.planner."""
    if cfg.planner == "master_slave":
        return run_master_slave(cfg)
    return run_flexible(cfg)
