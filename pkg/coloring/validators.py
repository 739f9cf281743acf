from .exceptions import DegreeCapExceeded, DuplicateEdge, InvalidEdge, MissingEdge


def validate_update(graph, event):
    """
    Reject an update that the fixed-degree, simple-graph model cannot take.

    `graph` needs `n`, `delta`, `has_edge(u, v)` and `degree(v)`; both the
    leveled engine graph and the naive baseline provide them.
    """
    u, v = event.u, event.v

    if u == v:
        raise InvalidEdge(event, "self-loops are not allowed")
    if not (0 <= u < graph.n and 0 <= v < graph.n):
        raise InvalidEdge(event, f"vertex id out of range for n={graph.n}")

    if event.is_insert:
        if graph.has_edge(u, v):
            raise DuplicateEdge(event, "edge already present")
        if graph.degree(u) >= graph.delta or graph.degree(v) >= graph.delta:
            raise DegreeCapExceeded(event, f"degree would exceed delta={graph.delta}")
    elif not graph.has_edge(u, v):
        raise MissingEdge(event, "edge not present")
