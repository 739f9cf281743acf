"""
Level-partitioned adjacency and per-vertex color bookkeeping.

Every vertex keeps its neighbors split by level: `down` holds neighbors on
strictly lower levels, `up[l]` holds neighbors on level l >= its own. For
its up-neighbors a vertex also keeps how many carry each color (mu_plus) and
the list of colors none of them carries (availability). Colors of
down-neighbors are not cached anywhere; they are counted on demand into a
shared scratch table when a recolor needs them.
"""
import logging
from dataclasses import dataclass

from .exceptions import StructuralCorruption

logger = logging.getLogger(__name__)

NO_LEVEL = -1


def level_cap(n):
    """Highest usable level, ceil(log3(n - 1)) - 1; -1 when n <= 2."""
    if n <= 2:
        return NO_LEVEL
    exponent, power = 0, 1
    while power < n - 1:
        power *= 3
        exponent += 1
    return exponent - 1


class AvailabilityList:
    """
    Colors 1..k kept in a doubly linked order.

    Links live in two arrays indexed by color, slot 0 being the sentinel, so
    a color is its own handle: removal and append are O(1).
    """

    __slots__ = ('_next', '_prev', '_linked', '_size')

    def __init__(self, palette_size):
        k = palette_size
        self._next = list(range(1, k + 2))
        self._next[k] = 0
        self._prev = [k] + list(range(k))
        self._linked = [False] + [True] * k
        self._size = k

    def __contains__(self, color):
        return self._linked[color]

    def __len__(self):
        return self._size

    def __iter__(self):
        color = self._next[0]
        while color:
            yield color
            color = self._next[color]

    def remove(self, color):
        if not self._linked[color]:
            raise StructuralCorruption(f"color {color} is not in the availability list")
        prev, nxt = self._prev[color], self._next[color]
        self._next[prev] = nxt
        self._prev[nxt] = prev
        self._linked[color] = False
        self._size -= 1

    def append(self, color):
        if self._linked[color]:
            raise StructuralCorruption(f"color {color} is already in the availability list")
        tail = self._prev[0]
        self._next[tail] = color
        self._prev[color] = tail
        self._next[color] = 0
        self._prev[0] = color
        self._linked[color] = True
        self._size += 1


class UpColorBook:
    __slots__ = ('mu_plus', 'availability')

    def __init__(self, palette_size):
        self.mu_plus = [0] * (palette_size + 1)
        self.availability = AvailabilityList(palette_size)

    def adjust(self, color, delta):
        count = self.mu_plus[color] + delta
        if count < 0:
            raise StructuralCorruption(f"up-color counter underflow on color {color}")
        self.mu_plus[color] = count
        if delta > 0 and count == 1:
            self.availability.remove(color)
        elif delta < 0 and count == 0:
            self.availability.append(color)


class ScratchOccupancy:
    """
    Per-color counts of one vertex's down-neighbors.

    Entries are tagged with the generation that wrote them; bumping the
    generation clears the whole table in O(1).
    """

    __slots__ = ('generation', '_count', '_representative', '_tag')

    def __init__(self, palette_size):
        self.generation = 0
        self._count = [0] * (palette_size + 1)
        self._representative = [0] * (palette_size + 1)
        self._tag = [0] * (palette_size + 1)

    def reset(self):
        self.generation += 1

    def mark(self, color, vertex):
        if self._tag[color] != self.generation:
            self._tag[color] = self.generation
            self._count[color] = 1
            self._representative[color] = vertex
        else:
            self._count[color] += 1

    def occupancy(self, color):
        if self._tag[color] != self.generation:
            return 0
        return self._count[color]

    def representative(self, color):
        """The single down-neighbor holding `color`, or None unless exactly one does."""
        if self.occupancy(color) != 1:
            return None
        return self._representative[color]


class VertexRecord:
    __slots__ = ('level', 'color', 'stamp', 'down', 'up', 'neighbors', 'book')

    def __init__(self, palette_size):
        self.level = NO_LEVEL
        self.color = 1
        self.stamp = 0
        # dicts used as insertion-ordered sets
        self.down = {}
        self.up = {}
        self.neighbors = set()
        self.book = UpColorBook(palette_size)

    @property
    def down_count(self):
        return len(self.down)

    @property
    def degree(self):
        return len(self.neighbors)


@dataclass(frozen=True)
class Discrepancy:
    vertex: int
    field: str
    detail: str

    def __str__(self):
        return f"vertex {self.vertex} {self.field}: {self.detail}"


class LeveledGraph:
    """
    The structure the coloring engine works on.

    Mutating operations return the number of elementary work units they
    spent; callers charge them to the work meter.
    """

    def __init__(self, n, delta):
        self.n = n
        self.delta = delta
        self.palette_size = delta + 1
        self.max_level = level_cap(n)
        self.records = [VertexRecord(self.palette_size) for _ in range(n)]
        self.scratch = ScratchOccupancy(self.palette_size)
        self.edge_count = 0

    def has_edge(self, u, v):
        return v in self.records[u].neighbors

    def degree(self, v):
        return len(self.records[v].neighbors)

    def level(self, v):
        return self.records[v].level

    def color(self, v):
        return self.records[v].color

    def edges(self):
        for u, record in enumerate(self.records):
            for v in sorted(record.neighbors):
                if u < v:
                    yield u, v

    # up-bucket helpers

    @staticmethod
    def _bucket_add(up, level, vertex):
        bucket = up.get(level)
        if bucket is None:
            up[level] = {vertex: None}
        else:
            bucket[vertex] = None

    @staticmethod
    def _bucket_remove(up, level, vertex):
        bucket = up.get(level)
        if bucket is None or vertex not in bucket:
            raise StructuralCorruption(f"vertex {vertex} missing from up-bucket {level}")
        del bucket[vertex]
        if not bucket:
            del up[level]

    def _shift_bucket(self, holder, vertex, old, new):
        up = self.records[holder].up
        self._bucket_remove(up, old, vertex)
        self._bucket_add(up, new, vertex)

    def _join_up(self, holder, vertex):
        record = self.records[vertex]
        holder_record = self.records[holder]
        self._bucket_add(holder_record.up, record.level, vertex)
        holder_record.book.adjust(record.color, +1)

    def _leave_up(self, holder, vertex):
        record = self.records[vertex]
        holder_record = self.records[holder]
        self._bucket_remove(holder_record.up, record.level, vertex)
        holder_record.book.adjust(record.color, -1)

    # edge views

    def attach_edge_views(self, u, v):
        ru, rv = self.records[u], self.records[v]
        ru.neighbors.add(v)
        rv.neighbors.add(u)
        self.edge_count += 1

        if ru.level > rv.level:
            ru.down[v] = None
            self._join_up(v, u)
        elif ru.level < rv.level:
            rv.down[u] = None
            self._join_up(u, v)
        else:
            self._join_up(u, v)
            self._join_up(v, u)
        return 2

    def detach_edge_views(self, u, v):
        ru, rv = self.records[u], self.records[v]
        ru.neighbors.discard(v)
        rv.neighbors.discard(u)
        self.edge_count -= 1

        if ru.level > rv.level:
            self._drop_down(u, v)
            self._leave_up(v, u)
        elif ru.level < rv.level:
            self._drop_down(v, u)
            self._leave_up(u, v)
        else:
            self._leave_up(u, v)
            self._leave_up(v, u)
        return 2

    def _drop_down(self, holder, vertex):
        try:
            del self.records[holder].down[vertex]
        except KeyError:
            raise StructuralCorruption(f"vertex {vertex} missing from down({holder})") from None

    # queries

    def phi(self, v, level):
        """Number of neighbors of v on levels strictly below `level`."""
        record = self.records[v]
        if level > record.level:
            total = len(record.down)
            up = record.up
            for i in range(record.level, level):
                bucket = up.get(i)
                if bucket:
                    total += len(bucket)
            return total
        records = self.records
        return sum(1 for w in record.down if records[w].level < level)

    def adjust_up_color(self, v, color, delta):
        self.records[v].book.adjust(color, delta)

    def down_occupancy_scan(self, v):
        scratch = self.scratch
        scratch.reset()
        records = self.records
        for w in self.records[v].down:
            scratch.mark(records[w].color, w)
        return scratch

    # level changes

    def move_vertex_level(self, v, new):
        """
        Put v on level `new` and reclassify every neighbor relation it takes part in.

        Only neighbors whose side or bucket changes are touched, plus one unit
        per level crossed while raising.
        """
        record = self.records[v]
        old = record.level
        if new == old:
            return 0
        if not NO_LEVEL <= new <= self.max_level:
            raise StructuralCorruption(f"level {new} outside [-1, {self.max_level}] for vertex {v}")

        if new < old:
            units = self._lower(v, record, old, new)
        else:
            units = self._raise(v, record, old, new)
        record.level = new
        return units

    def _lower(self, v, record, old, new):
        records = self.records
        color = record.color
        units = 0

        for w in list(record.down):
            other = records[w]
            lw = other.level
            if lw < new:
                self._shift_bucket(w, v, old, new)
            else:
                del record.down[w]
                self._bucket_add(record.up, lw, w)
                record.book.adjust(other.color, +1)
                if lw == new:
                    self._shift_bucket(w, v, old, new)
                else:
                    self._bucket_remove(other.up, old, v)
                    other.down[v] = None
                    other.book.adjust(color, -1)
            units += 1

        # former same-level neighbors now see v below them
        for w in record.up.get(old, ()):
            other = records[w]
            self._bucket_remove(other.up, old, v)
            other.down[v] = None
            other.book.adjust(color, -1)
            units += 1

        return units

    def _raise(self, v, record, old, new):
        records = self.records
        color = record.color
        units = 0

        for w in record.down:
            self._shift_bucket(w, v, old, new)
            units += 1

        for i in range(old, new + 1):
            units += 1
            bucket = record.up.get(i)
            if not bucket:
                continue

            if i == new:
                for w in bucket:
                    other = records[w]
                    del other.down[v]
                    self._bucket_add(other.up, new, v)
                    other.book.adjust(color, +1)
                    units += 1
                continue

            del record.up[i]
            for w in bucket:
                other = records[w]
                record.down[w] = None
                record.book.adjust(other.color, -1)
                if i == old:
                    self._shift_bucket(w, v, old, new)
                else:
                    del other.down[v]
                    self._bucket_add(other.up, new, v)
                    other.book.adjust(color, +1)
                units += 1

        return units

    # auditing

    def audit_structures(self):
        """Recompute every view from the raw edge sets and list what disagrees."""
        records = self.records
        issues = []

        for v, record in enumerate(records):
            if not NO_LEVEL <= record.level <= self.max_level:
                issues.append(Discrepancy(v, 'level', f"{record.level} outside [-1, {self.max_level}]"))
            if not 1 <= record.color <= self.palette_size:
                issues.append(Discrepancy(v, 'color', f"{record.color} outside [1, {self.palette_size}]"))

            for w in record.neighbors:
                if v not in records[w].neighbors:
                    issues.append(Discrepancy(v, 'neighbors', f"edge to {w} not mirrored"))

            expected_down = set()
            expected_up = {}
            counts = [0] * (self.palette_size + 1)
            for w in record.neighbors:
                other = records[w]
                if other.level < record.level:
                    expected_down.add(w)
                else:
                    expected_up.setdefault(other.level, set()).add(w)
                    counts[other.color] += 1

            if set(record.down) != expected_down:
                issues.append(Discrepancy(
                    v, 'down', f"have {sorted(record.down)}, expected {sorted(expected_down)}"
                ))

            actual_up = {level: set(bucket) for level, bucket in record.up.items()}
            if actual_up != expected_up:
                issues.append(Discrepancy(v, 'up', f"have {actual_up}, expected {expected_up}"))

            book = record.book
            for color in range(1, self.palette_size + 1):
                if book.mu_plus[color] != counts[color]:
                    issues.append(Discrepancy(
                        v, 'mu_plus', f"color {color}: have {book.mu_plus[color]}, expected {counts[color]}"
                    ))
                if (color in book.availability) != (counts[color] == 0):
                    issues.append(Discrepancy(v, 'availability', f"color {color} membership wrong"))

            if sum(1 for _ in book.availability) != len(book.availability):
                issues.append(Discrepancy(v, 'availability', "linked order does not match its size"))

        if issues:
            logger.debug("audit found %d discrepancies", len(issues))
        return issues
