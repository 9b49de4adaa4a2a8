"""Integer values for capture and surveillance actions.

Groups predicted to leave within the planning horizon are "departing";
the rest are "staying". Within each class, rank 1 is the most urgent
(earliest exit, group id breaking ties). Departing values dominate
staying values by construction, and staying values dominate typical
fixed-look values, so the optimizer prioritizes urgent captures, then
ordinary captures, then wide-area surveillance.

All values are exact Python ints; the departing exponent saturates at
EXPONENT_CAP so adversarial rank counts cannot blow up downstream
integer arithmetic.
"""

import logging
from dataclasses import dataclass

from .geometry import quality_value

logger = logging.getLogger(__name__)

EXPONENT_CAP = 62


@dataclass(frozen=True)
class GroupClass:
    departing: bool
    rank: int  # 1-based within its class


@dataclass(frozen=True)
class ValueContext:
    horizon: int
    n_departing: int
    n_staying: int
    classes: dict[int, GroupClass]  # group id -> class/rank

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


def classify_and_rank(
    groups, horizon: int, period_len: float, now: float
) -> ValueContext:
    """Split groups into departing/staying and rank each class by urgency."""
    cutoff = now + horizon * period_len
    departing = sorted(
        (g for g in groups if g.exit_time < cutoff), key=lambda g: (g.exit_time, g.id)
    )
    staying = sorted(
        (g for g in groups if g.exit_time >= cutoff), key=lambda g: (g.exit_time, g.id)
    )
    classes = {}
    for rank, g in enumerate(departing, start=1):
        classes[g.id] = GroupClass(departing=True, rank=rank)
    for rank, g in enumerate(staying, start=1):
        classes[g.id] = GroupClass(departing=False, rank=rank)
    return ValueContext(
        horizon=horizon,
        n_departing=len(departing),
        n_staying=len(staying),
        classes=classes,
    )


def fixed_value(n_tracks_in_view: int, e: float) -> int:
    """Value of one wide look at a fixed region."""
    if n_tracks_in_view < 0:
        raise ValueError("track count cannot be negative")
    return n_tracks_in_view + quality_value(e)


def staying_value(ctx: ValueContext, period: int, rank: int, e: float, group_size: int) -> int:
    """Value of capturing a staying group at a given plan period.

    Decays linearly with the period so equal-value optima resolve toward
    earlier captures; scales with group size.
    """
    _check_rank_period(rank, ctx.n_staying, period, ctx.horizon, group_size)
    n_s = ctx.n_staying
    bracket = (n_s + 1) * (ctx.horizon - (period - 1)) + n_s - rank + quality_value(e)
    return bracket * group_size


def departing_value(ctx: ValueContext, rank: int, e: float, group_size: int) -> int:
    """Value of capturing a departing group: exponential in urgency so the
    most imminent exits dominate every staying capture."""
    _check_rank_period(rank, ctx.n_departing, 1, ctx.horizon, group_size)
    v1 = (ctx.n_staying + 1) * ctx.horizon
    expo = ctx.n_departing + 1 - rank
    if expo > EXPONENT_CAP:
        logger.warning("departing exponent %d saturated at %d", expo, EXPONENT_CAP)
        expo = EXPONENT_CAP
    return (v1 * 2**expo + quality_value(e)) * group_size


def _check_rank_period(rank, class_size, period, horizon, group_size):
    if not 1 <= rank <= max(class_size, 1):
        raise ValueError(f"rank {rank} outside 1..{class_size}")
    if not 1 <= period <= horizon:
        raise ValueError(f"period {period} outside 1..{horizon}")
    if group_size < 1:
        raise ValueError("group size must be >= 1")
