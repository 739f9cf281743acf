"""
Work accounting and epoch statistics.

An epoch is the stretch during which one vertex keeps one color. It opens
with a recolor of that vertex and closes with the next one; epochs still
open when the run ends are final.
"""
import logging
import math
from dataclasses import dataclass

from django.db import models

from .graph import NO_LEVEL

logger = logging.getLogger(__name__)

CALL_BOUND_A = 20
CALL_BOUND_B = 50


class WorkCategory(models.TextChoices):
    PREPROCESS = 'preprocess', 'Preprocess'
    DELETION = 'deletion', 'Deletion'
    CONFLICTLESS_INSERT = 'conflictless_insert', 'Conflict-less insertion'
    CONFLICTING_INSERT = 'conflicting_insert', 'Conflicting insertion'
    DET_COLOR = 'det_color', 'Deterministic recolor'
    RAND_COLOR = 'rand_color', 'Randomized recolor'
    SET_LEVEL = 'set_level', 'Level change'
    PALETTE_SCAN = 'palette_scan', 'Palette scan'


class CallKind(models.TextChoices):
    DELETION = 'deletion', 'Deletion'
    CONFLICTLESS_INSERT = 'conflictless_insert', 'Conflict-less insertion'
    CONFLICTING_INSERT = 'conflicting_insert', 'Conflicting insertion'
    DET_COLOR = 'det_color', 'Deterministic recolor'
    RAND_COLOR = 'rand_color', 'Randomized recolor'


class Termination(models.TextChoices):
    ORIGINAL = 'original', 'Original'
    INDUCED = 'induced', 'Induced'
    FINAL = 'final', 'Final'


class RecolorCause(models.TextChoices):
    INSERTION = 'insertion', 'Conflicting insertion'
    INDUCED = 'induced', 'Induced by an up-neighbor'


LEVELED_CALLS = (CallKind.DET_COLOR, CallKind.RAND_COLOR)


@dataclass(frozen=True)
class CallBoundViolation:
    kind: str
    level: int | None
    units: int
    bound: int

    def __str__(self):
        where = '' if self.level is None else f" at level {self.level}"
        return f"{self.kind}{where} spent {self.units} units, bound {self.bound}"


class WorkMeter:
    """
    Counts elementary work units by category.

    Between `begin_call` and `end_call` it also keeps a tally of the current
    procedure call, which `end_call` checks against that call's bound.
    """

    def __init__(self, bound_a=CALL_BOUND_A, bound_b=CALL_BOUND_B):
        self.bound_a = bound_a
        self.bound_b = bound_b
        self.counters = dict.fromkeys(WorkCategory.values, 0)
        self.calls = dict.fromkeys(CallKind.values, 0)
        self.violations = []
        self._tally = 0

    @property
    def total(self):
        return sum(self.counters.values())

    @property
    def update_units(self):
        return self.total - self.counters[WorkCategory.PREPROCESS]

    def charge(self, category, units=1):
        if units < 0:
            raise ValueError(f"cannot charge {units} units")
        self.counters[category] += units
        self._tally += units

    def begin_call(self):
        self._tally = 0

    def bound_for(self, kind, level=None):
        if kind in LEVELED_CALLS:
            return self.bound_a * 3 ** (level + 2) + self.bound_b
        return self.bound_b

    def end_call(self, kind, level=None):
        units = self._tally
        self.calls[kind] += 1
        bound = self.bound_for(kind, level)
        if units > bound:
            self.violations.append(CallBoundViolation(str(kind), level, units, bound))
        self._tally = 0
        return units


@dataclass
class EpochRecord:
    vertex: int
    level: int
    color: int
    palette_size: int | None = None
    start_stamp: int = 0
    end_stamp: int | None = None
    dur: int = 0
    cost: int = 0
    termination: str | None = None


def short_duration(level):
    return 3 ** level / (32 * math.e)


@dataclass
class LevelStats:
    level: int
    epochs: int = 0
    original: int = 0
    induced: int = 0
    final: int = 0
    short: int = 0
    incident_insertions: int = 0
    cost: int = 0
    charged_cost: int = 0

    @property
    def completed(self):
        return self.original + self.induced

    @property
    def short_fraction(self):
        if not self.completed:
            return 0.0
        return self.short / self.completed

    @property
    def classification(self):
        if not self.epochs:
            return ''
        if 2 * self.induced >= self.epochs:
            return 'induced-heavy'
        if 8 * self.final >= self.epochs:
            return 'final-heavy'
        return 'original-heavy'


@dataclass(frozen=True)
class InvariantViolation:
    vertex: int
    level: int
    palette_size: int
    down_count: int
    rule: str

    def __str__(self):
        return (f"vertex {self.vertex} at level {self.level}: {self.rule} "
                f"(palette {self.palette_size}, down {self.down_count})")


class Instrumentation:
    """Epoch tracking and recolor-time checks for one engine."""

    def __init__(self, n, bound_a=CALL_BOUND_A, bound_b=CALL_BOUND_B, keep_epochs=False):
        self.meter = WorkMeter(bound_a, bound_b)
        self.open_epochs = [EpochRecord(vertex=v, level=NO_LEVEL, color=1) for v in range(n)]
        self.levels = {}
        self.keep_epochs = keep_epochs
        self.closed_epochs = []
        self.invariant_violations = []
        self.palette_violations = []
        self._finalized = None

    def _stats(self, level):
        stats = self.levels.get(level)
        if stats is None:
            stats = self.levels[level] = LevelStats(level)
        return stats

    def _fold(self, epoch):
        stats = self._stats(epoch.level)
        stats.epochs += 1
        stats.cost += epoch.cost
        if epoch.level != NO_LEVEL:
            stats.charged_cost += epoch.cost

        if epoch.termination == Termination.FINAL:
            stats.final += 1
        else:
            if epoch.termination == Termination.ORIGINAL:
                stats.original += 1
            else:
                stats.induced += 1
            if epoch.dur < short_duration(epoch.level):
                stats.short += 1

        if self.keep_epochs:
            self.closed_epochs.append(epoch)

    def on_incident_insertion(self, u, v, level_u, level_v):
        self.open_epochs[u].dur += 1
        self.open_epochs[v].dur += 1
        self._stats(level_u).incident_insertions += 1
        self._stats(level_v).incident_insertions += 1

    def on_palette(self, v, level, palette_size, down_count):
        if 2 * palette_size < down_count + 2:
            self.palette_violations.append(
                InvariantViolation(v, level, palette_size, down_count, 'palette below down_count/2 + 1')
            )

    def on_recolor(self, v, old_color, new_color, new_level, palette_size, down_count, cause, cost, stamp):
        closing = self.open_epochs[v]
        closing.end_stamp = stamp
        closing.termination = Termination.ORIGINAL if cause == RecolorCause.INSERTION else Termination.INDUCED
        self._fold(closing)

        if new_level == NO_LEVEL:
            # a level -1 epoch's cost goes to the epoch it replaced
            self._stats(closing.level).charged_cost += cost
        else:
            self._check_invariant(v, new_level, palette_size, down_count)

        self.open_epochs[v] = EpochRecord(
            vertex=v,
            level=new_level,
            color=new_color,
            palette_size=palette_size,
            start_stamp=stamp,
            cost=cost,
        )
        logger.debug("vertex %d recolored %d -> %d at level %d (%s)", v, old_color, new_color, new_level, cause)

    def _check_invariant(self, v, level, palette_size, down_count):
        floor = 3 ** (level + 1)
        if palette_size is None or 2 * palette_size < floor + 2:
            self.invariant_violations.append(
                InvariantViolation(v, level, palette_size or 0, down_count, f"palette below {floor}/2 + 1")
            )
        if down_count < floor:
            self.invariant_violations.append(
                InvariantViolation(v, level, palette_size or 0, down_count, f"fewer than {floor} down-neighbors")
            )

    def finalize_epochs(self):
        if self._finalized is None:
            for epoch in self.open_epochs:
                epoch.termination = Termination.FINAL
                self._fold(epoch)
            self._finalized = dict(sorted(self.levels.items()))
        return self._finalized

    def assert_call_bounds(self):
        return list(self.meter.violations)


def short_epoch_levels(levels, min_epochs=256, max_fraction=0.25):
    """Levels >= 0 with enough completed epochs whose short-epoch share is too high."""
    return [
        stats.level
        for stats in levels.values()
        if stats.level >= 0 and stats.completed >= min_epochs and stats.short_fraction > max_fraction
    ]
