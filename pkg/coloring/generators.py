"""
Oblivious update-stream generators.

Streams are produced from their own seeded generator before any engine
exists, so nothing in them depends on the engine's random choices.
"""
import collections
import random

from django.db import models

from .exceptions import InvalidConfig
from .streams import StreamHeader, UpdateEvent

PAIR_ATTEMPTS = 64
# share of star-stress steps that try to link two neighbors of the hub
CHORD_SHARE = 0.4


class StreamModel(models.TextChoices):
    CHURN = 'churn', 'Churn'
    SLIDING_WINDOW = 'sliding-window', 'Sliding window'
    STAR_STRESS = 'star-stress', 'Star stress'


class _LiveGraph:
    """
    Edges present so far, with O(1) uniform choice and removal.

    Vertices still below the degree cap sit in `open`, so pairs are drawn
    among them only and a saturated graph never forces a scan of all pairs.
    """

    def __init__(self, n, delta, rng):
        self.n = n
        self.cap = min(delta, n - 1)
        self.rng = rng
        self.degree = [0] * n
        self.edges = []
        self.position = {}
        self.open = list(range(n)) if self.cap > 0 else []
        self.open_at = list(range(n)) if self.cap > 0 else [-1] * n

    def __len__(self):
        return len(self.edges)

    @staticmethod
    def key(u, v):
        return (u, v) if u < v else (v, u)

    def feasible(self, u, v):
        return (
            u != v
            and self.degree[u] < self.cap
            and self.degree[v] < self.cap
            and self.key(u, v) not in self.position
        )

    def _close(self, v):
        index = self.open_at[v]
        last = self.open.pop()
        if last != v:
            self.open[index] = last
            self.open_at[last] = index
        self.open_at[v] = -1

    def _reopen(self, v):
        self.open_at[v] = len(self.open)
        self.open.append(v)

    def add(self, u, v):
        self.position[self.key(u, v)] = len(self.edges)
        self.edges.append((u, v))
        for end in (u, v):
            self.degree[end] += 1
            if self.degree[end] == self.cap:
                self._close(end)

    def remove(self, u, v):
        index = self.position.pop(self.key(u, v))
        last = self.edges.pop()
        if index < len(self.edges):
            self.edges[index] = last
            self.position[self.key(*last)] = index
        for end in (u, v):
            if self.degree[end] == self.cap:
                self._reopen(end)
            self.degree[end] -= 1

    def random_edge(self):
        return self.edges[self.rng.randrange(len(self.edges))]

    def random_pair(self, anchor=None, exhaustive=True):
        """
        A uniformly random feasible absent pair (containing `anchor` if given), or None.

        Without `exhaustive`, None may also mean that sampling gave up on a
        nearly saturated graph.
        """
        rng, open_ = self.rng, self.open
        k = len(open_)
        if anchor is not None:
            if self.open_at[anchor] < 0:
                return None
            for _ in range(PAIR_ATTEMPTS):
                v = open_[rng.randrange(k)]
                if self.feasible(anchor, v):
                    return anchor, v
            if not exhaustive:
                return None
            candidates = [(anchor, v) for v in open_ if self.feasible(anchor, v)]
        else:
            if k < 2:
                return None
            if k * (k - 1) // 2 > PAIR_ATTEMPTS:
                for _ in range(PAIR_ATTEMPTS):
                    u, v = open_[rng.randrange(k)], open_[rng.randrange(k)]
                    if self.feasible(u, v):
                        return u, v
                if not exhaustive:
                    return None
            candidates = self.open_pairs()

        if not candidates:
            return None
        return candidates[rng.randrange(len(candidates))]

    def open_pairs(self):
        """Every feasible pair; only vertices below the cap take part."""
        open_ = self.open
        return [(u, v) for i, u in enumerate(open_) for v in open_[i + 1:] if self.feasible(u, v)]


def churn(n, delta, t, seed, p=0.6):
    if not 0.0 <= p <= 1.0:
        raise InvalidConfig(f"churn probability must be in [0, 1], got {p}")

    rng = random.Random(seed)
    live = _LiveGraph(n, delta, rng)
    events = []

    while len(events) < t:
        if rng.random() < p:
            # below p=1 a failed draw turns into a deletion
            pair = live.random_pair(exhaustive=p == 1.0)
            if pair is not None:
                live.add(*pair)
                events.append(UpdateEvent.insert(*pair))
                continue
            if p == 1.0 or not len(live):
                raise InvalidConfig(f"no feasible insertion left after {len(events)} events")
        elif not len(live):
            if p == 0.0:
                raise InvalidConfig("churn with p=0 never inserts")
            # nothing to delete yet: resample
            continue

        u, v = live.random_edge()
        live.remove(u, v)
        events.append(UpdateEvent.delete(u, v))

    return events


def sliding_window(n, delta, t, seed, window):
    """Insert random edges; once `window` edges are live, each new insertion is preceded by deleting the oldest."""
    if window < 1:
        raise InvalidConfig(f"window must be at least 1, got {window}")
    cap = min(delta, n - 1)
    if window > n * cap // 2:
        raise InvalidConfig(f"window {window} exceeds the {n * cap // 2} edges a degree-{cap} graph can hold")

    rng = random.Random(seed)
    live = _LiveGraph(n, delta, rng)
    order = collections.deque()
    events = []

    while len(events) < t:
        if len(live) >= window:
            u, v = order.popleft()
            live.remove(u, v)
            events.append(UpdateEvent.delete(u, v))
            continue

        pair = live.random_pair()
        if pair is None:
            raise InvalidConfig(f"window {window} cannot be filled under delta={delta}")
        live.add(*pair)
        order.append(pair)
        events.append(UpdateEvent.insert(*pair))

    return events


def star_stress(n, delta, t, seed, hubs=None):
    """
    Churn concentrated on a few hubs. Each step picks a hub and either links
    two of its neighbors (closing a triangle), links the hub to a random
    vertex, or, once the hub is full, unlinks one of its edges or an earlier
    triangle edge.

    Colors are never consulted: triangle edges conflict whenever two
    neighbors of a hub still share a color, which untouched vertices do.
    """
    if n < 2:
        raise InvalidConfig("star-stress needs at least two vertices")

    rng = random.Random(seed)
    live = _LiveGraph(n, delta, rng)
    hub_count = hubs or max(1, n // max(live.cap, 1))
    hub_ids = rng.sample(range(n), min(hub_count, n))
    incident = {hub: [] for hub in hub_ids}
    chords = []
    events = []

    def link(pair):
        live.add(*pair)
        for end in pair:
            if end in incident:
                incident[end].append(pair)
        events.append(UpdateEvent.insert(*pair))

    while len(events) < t:
        hub = hub_ids[rng.randrange(len(hub_ids))]

        if rng.random() < CHORD_SHARE:
            pair = _chord(live, hub, incident[hub])
            if pair is not None:
                link(pair)
                chords.append(pair)
                continue

        pair = live.random_pair(anchor=hub) if live.degree[hub] < live.cap else None
        if pair is not None:
            link(pair)
            continue

        pair = None
        if chords and rng.random() < 0.5:
            pair = _pop_live_edge(live, chords)
        if pair is None:
            pair = _pop_live_edge(live, incident[hub])
        if pair is None:
            continue
        live.remove(*pair)
        events.append(UpdateEvent.delete(*pair))

    return events


def _chord(live, hub, edges):
    """A feasible pair of two current neighbors of `hub`, or None."""
    if len(edges) < 2:
        return None
    ends = []
    for _ in range(2):
        u, v = edges[live.rng.randrange(len(edges))]
        if live.key(u, v) not in live.position:
            return None
        ends.append(v if u == hub else u)
    if not live.feasible(*ends):
        return None
    return tuple(ends)


def _pop_live_edge(live, edges):
    # entries go stale when the edge was already deleted through another list
    while edges:
        u, v = edges.pop(live.rng.randrange(len(edges)))
        if live.key(u, v) in live.position:
            return u, v
    return None


def generate(model, n, delta, t, seed, p=0.6, window=None, hubs=None):
    if n < 1 or delta < 1:
        raise InvalidConfig("n and delta must be at least 1")
    if t < 0:
        raise InvalidConfig(f"stream length must be non-negative, got {t}")

    if model == StreamModel.CHURN:
        events = churn(n, delta, t, seed, p)
    elif model == StreamModel.SLIDING_WINDOW:
        if window is None:
            raise InvalidConfig("sliding-window needs a window size")
        events = sliding_window(n, delta, t, seed, window)
    elif model == StreamModel.STAR_STRESS:
        events = star_stress(n, delta, t, seed, hubs)
    else:
        raise InvalidConfig(f"unknown stream model {model!r}")

    return StreamHeader(n, delta), events
