"""
Fully dynamic (delta + 1)-coloring with constant amortized update time.

Vertices live on levels -1..L. A conflicting insertion recolors the endpoint
recolored last; a vertex with few neighbors below the next level takes a
blank color and drops to level -1, otherwise it climbs to the lowest level
where its lower neighborhood is small again and samples uniformly from the
colors that are blank or held by exactly one down-neighbor. Sampling a held
color hands the conflict down to that neighbor.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field

from .exceptions import InvalidConfig, StructuralCorruption
from .graph import NO_LEVEL, LeveledGraph, level_cap
from .instrumentation import (
    CALL_BOUND_A,
    CALL_BOUND_B,
    CallKind,
    Instrumentation,
    RecolorCause,
    WorkCategory,
)
from .validators import validate_update

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineConfig:
    n: int
    delta: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidConfig(f"n must be at least 1, got {self.n}")
        if self.delta < 1:
            raise InvalidConfig(f"delta must be at least 1, got {self.delta}")

    @property
    def max_level(self):
        return level_cap(self.n)


class RandomSource:
    """Seeded generator; `uniform_below` draws by rejection, so it has no modulo bias."""

    def __init__(self, seed):
        self._rng = random.Random(seed)

    def uniform_below(self, k):
        if k < 1:
            raise ValueError(f"cannot sample below {k}")
        return self._rng.randrange(k)


@dataclass
class PaletteSample:
    colors: list = field(default_factory=list)
    occupant: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.colors)


@dataclass(frozen=True)
class RecolorOutcome:
    next_vertex: int | None = None

    @property
    def done(self):
        return self.next_vertex is None


DONE = RecolorOutcome()


class ColoringEngine:
    def __init__(self, config, bound_a=CALL_BOUND_A, bound_b=CALL_BOUND_B, keep_epochs=False):
        self.config = config
        self.graph = LeveledGraph(config.n, config.delta)
        self.random = RandomSource(config.seed)
        self.instrumentation = Instrumentation(config.n, bound_a, bound_b, keep_epochs=keep_epochs)
        self.meter = self.instrumentation.meter

        self.clock = 0
        self.updates = 0
        self.insertions = 0
        self.deletions = 0
        self.conflicts = 0
        self.recolor_calls = 0
        self.det_colors = 0
        self.rand_colors = 0
        self.max_level_seen = NO_LEVEL
        self.last_palette = None

        self.meter.charge(WorkCategory.PREPROCESS, config.n * (self.graph.palette_size + 1))

    @classmethod
    def preprocess(cls, config, **kwargs):
        return cls(config, **kwargs)

    # queries

    def color(self, v):
        return self.graph.records[v].color

    def level(self, v):
        return self.graph.records[v].level

    def coloring(self):
        return [record.color for record in self.graph.records]

    def levels(self):
        return [record.level for record in self.graph.records]

    def edges(self):
        return list(self.graph.edges())

    def metrics(self):
        return {
            'updates': self.updates,
            'insertions': self.insertions,
            'deletions': self.deletions,
            'conflicts': self.conflicts,
            'recolor_calls': self.recolor_calls,
            'det_colors': self.det_colors,
            'rand_colors': self.rand_colors,
            'max_level': self.max_level_seen,
            'work': dict(self.meter.counters),
            'total_units': self.meter.total,
        }

    # updates

    def apply_update(self, event):
        validate_update(self.graph, event)
        self.updates += 1
        if event.is_insert:
            self.handle_insertion(event.u, event.v)
        else:
            self.handle_deletion(event.u, event.v)

    def handle_deletion(self, u, v):
        self.deletions += 1
        self.meter.begin_call()
        units = self.graph.detach_edge_views(u, v)
        self.meter.charge(WorkCategory.DELETION, units + 1)
        self.meter.end_call(CallKind.DELETION)

    def handle_insertion(self, u, v):
        graph = self.graph
        self.insertions += 1
        self.instrumentation.on_incident_insertion(u, v, graph.level(u), graph.level(v))

        conflicting = graph.color(u) == graph.color(v)
        self.meter.begin_call()
        units = graph.attach_edge_views(u, v)
        if not conflicting:
            self.meter.charge(WorkCategory.CONFLICTLESS_INSERT, units + 1)
            self.meter.end_call(CallKind.CONFLICTLESS_INSERT)
            return

        self.meter.charge(WorkCategory.CONFLICTING_INSERT, units + 1)
        self.meter.end_call(CallKind.CONFLICTING_INSERT)
        self.conflicts += 1

        x = self.select_conflict_endpoint(u, v)
        cause = RecolorCause.INSERTION
        while x is not None:
            x = self.recolor(x, cause).next_vertex
            cause = RecolorCause.INDUCED

    def select_conflict_endpoint(self, u, v):
        """The endpoint recolored last; ties go to the first-listed endpoint."""
        records = self.graph.records
        return v if records[v].stamp > records[u].stamp else u

    # recoloring

    def recolor(self, x, cause=RecolorCause.INSERTION):
        record = self.graph.records[x]
        level = record.level
        old_color = record.color

        self.meter.begin_call()
        phi = self.graph.phi(x, level + 1)
        if phi < 3 ** (level + 2):
            self.meter.charge(WorkCategory.DET_COLOR, 2)
            self.det_color(x)
            outcome, palette_size = DONE, None
            kind, bound_level = CallKind.DET_COLOR, level
            self.det_colors += 1
        else:
            self.meter.charge(WorkCategory.RAND_COLOR, 2)
            outcome = self.rand_color(x)
            palette_size = len(self.last_palette)
            kind, bound_level = CallKind.RAND_COLOR, record.level
            self.rand_colors += 1

        self.clock += 1
        record.stamp = self.clock
        self.recolor_calls += 1
        cost = self.meter.end_call(kind, bound_level)

        self.instrumentation.on_recolor(
            x, old_color, record.color, record.level, palette_size, len(record.down), cause, cost, self.clock
        )
        return outcome

    def det_color(self, x):
        graph = self.graph
        record = graph.records[x]
        scratch = graph.down_occupancy_scan(x)

        chosen = None
        scanned = 0
        for color in record.book.availability:
            scanned += 1
            if not scratch.occupancy(color):
                chosen = color
                break
        self.meter.charge(WorkCategory.PALETTE_SCAN, len(record.down) + scanned)

        if chosen is None:
            logger.error("no blank color for vertex %d (degree %d)", x, graph.degree(x))
            raise StructuralCorruption(f"no blank color for vertex {x}")

        old_color = record.color
        if chosen != old_color:
            record.color = chosen
            self.meter.charge(WorkCategory.DET_COLOR, self.propagate_color_change(x, old_color, chosen))
        self.meter.charge(WorkCategory.SET_LEVEL, graph.move_vertex_level(x, NO_LEVEL))

    def find_target_level(self, x):
        """Lowest level above x's where phi_x(level + 1) < 3^(level + 2)."""
        record = self.graph.records[x]
        up = record.up
        level = record.level

        below = len(record.down) + len(up.get(level, ()))
        candidate = level + 1
        tested = 0
        while candidate <= self.graph.max_level:
            below += len(up.get(candidate, ()))
            tested += 1
            if below < 3 ** (candidate + 2):
                self.meter.charge(WorkCategory.RAND_COLOR, tested)
                return candidate
            candidate += 1

        logger.error("vertex %d found no target level below %d", x, self.graph.max_level)
        raise StructuralCorruption(f"no target level for vertex {x}")

    def compute_palette(self, x):
        graph = self.graph
        record = graph.records[x]
        scratch = graph.down_occupancy_scan(x)
        phi = len(record.down)

        palette = PaletteSample()
        scanned = 0
        for color in itertools.islice(record.book.availability, phi + 1):
            scanned += 1
            occupancy = scratch.occupancy(color)
            if occupancy == 0:
                palette.colors.append(color)
            elif occupancy == 1:
                palette.colors.append(color)
                palette.occupant[color] = scratch.representative(color)
        self.meter.charge(WorkCategory.PALETTE_SCAN, phi + scanned)

        if not palette.colors:
            logger.error("empty palette for vertex %d with %d down-neighbors", x, phi)
            raise StructuralCorruption(f"empty palette for vertex {x}")

        self.instrumentation.on_palette(x, record.level, len(palette), phi)
        return palette

    def rand_color(self, x):
        graph = self.graph
        record = graph.records[x]

        target = self.find_target_level(x)
        self.meter.charge(WorkCategory.SET_LEVEL, graph.move_vertex_level(x, target))
        if target > self.max_level_seen:
            self.max_level_seen = target

        palette = self.compute_palette(x)
        self.last_palette = palette
        color = palette.colors[self.random.uniform_below(len(palette))]

        old_color = record.color
        if color != old_color:
            record.color = color
            self.meter.charge(WorkCategory.RAND_COLOR, self.propagate_color_change(x, old_color, color))

        occupant = palette.occupant.get(color)
        if occupant is None:
            return DONE
        return RecolorOutcome(occupant)

    def propagate_color_change(self, v, old_color, new_color):
        """
        Move v's color in the up-color books of everyone holding v as an up-neighbor.

        Those are v's down-neighbors and its same-level neighbors.
        """
        graph = self.graph
        record = graph.records[v]
        units = 0
        for w in itertools.chain(record.down, record.up.get(record.level, ())):
            graph.adjust_up_color(w, old_color, -1)
            graph.adjust_up_color(w, new_color, +1)
            units += 1
        return units
