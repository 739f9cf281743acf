from .validators import validate_update


class NaiveColoring:
    """
    The O(delta) scheme: on a conflicting insertion, scan the first-listed
    endpoint's neighbors and give it the smallest color none of them has.
    """

    def __init__(self, n, delta):
        self.n = n
        self.delta = delta
        self.adjacency = [set() for _ in range(n)]
        self.colors = [1] * n
        self.work_units = 0
        self.recolors = 0

    def has_edge(self, u, v):
        return v in self.adjacency[u]

    def degree(self, v):
        return len(self.adjacency[v])

    def edges(self):
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in sorted(nbrs) if u < v]

    def naive_apply_update(self, event):
        validate_update(self, event)
        u, v = event.u, event.v

        if not event.is_insert:
            self.adjacency[u].discard(v)
            self.adjacency[v].discard(u)
            return

        self.adjacency[u].add(v)
        self.adjacency[v].add(u)
        if self.colors[u] == self.colors[v]:
            self._recolor(u)

    def _recolor(self, x):
        used = set()
        for w in self.adjacency[x]:
            used.add(self.colors[w])
            self.work_units += 1

        color = 1
        while color in used:
            color += 1
        self.colors[x] = color
        self.recolors += 1

    def naive_work_units(self):
        return self.work_units


def check_proper(colors, edges):
    """Every edge whose endpoints share a color."""
    return [(u, v) for u, v in edges if colors[u] == colors[v]]
