"""Build the page surface, neck curves, open book and Lefschetz data.

The page Sigma of an accepted plumbing graph is assembled from one piece
per vertex: a genus-g_v surface with m_v numbered sockets.  Each edge
consumes one socket at each endpoint (a connect-sum tube); the remaining
m_v - d_v sockets stay open as boundary components.  Every tube and every
open socket contributes one neck curve, and the monodromy of the induced
open book is one right-handed Dehn twist along each neck; the same curves
are the vanishing cycles of the Lefschetz fibration whose unique singular
fiber is the vertex configuration together with one disk per open socket.

Socket assignment and curve order are canonicalized so that identical
inputs produce byte-identical outputs:

  * sockets at a vertex are numbered 1..m_v and edges take the lowest
    free socket at each endpoint, in input edge order;
  * boundary-parallel necks are ordered by (vertex id, socket index),
    then edge necks by (sorted endpoint ids, occurrence index).

Twists are right-handed throughout (`TWIST_CONVENTION`); the homology
module shares the same convention.
"""

from dataclasses import dataclass

from .graph import PlumbingGraph, HypothesisError, validate

TWIST_CONVENTION = "right"

INTERCHANGE_FORMAT = "plumbook-openbook/1"


@dataclass(frozen=True)
class PieceData:
    """One vertex piece of the page: genus g_v with m_v sockets."""
    vertex: str
    genus: int
    sockets: int


@dataclass(frozen=True)
class EdgeGluing:
    """An edge's tube: which socket it consumes at each endpoint."""
    edge_id: str
    ends: tuple  # ((vertex_id, socket), (vertex_id, socket)), input order


@dataclass(frozen=True)
class NeckCurve:
    id: str
    kind: str       # "edge" or "boundary_parallel"
    location: tuple  # edge: (edge_id, end, end); boundary: (vertex_id, socket)

    def location_dict(self):
        if self.kind == "edge":
            edge_id, (u, i), (v, j) = self.location
            return {"edge": edge_id, "between": [u, v], "sockets": [i, j]}
        v, t = self.location
        return {"vertex": v, "socket": t}


@dataclass(frozen=True)
class FiberSurface:
    genus: int
    boundary_count: int
    pieces: tuple        # PieceData per vertex, input order
    gluings: tuple       # EdgeGluing per edge, input order
    free_sockets: tuple  # (vertex_id, socket), per-vertex in socket order

    @property
    def chi(self):
        return 2 - 2 * self.genus - self.boundary_count


@dataclass(frozen=True)
class OpenBook:
    page: FiberSurface
    monodromy: tuple  # NeckCurve multiset; every twist is right-handed


@dataclass(frozen=True)
class LefschetzFibrationData:
    fiber: FiberSurface
    vanishing_cycles: tuple   # NeckCurve, canonical order
    closed_components: tuple  # (vertex_id, genus, weight) per vertex
    disk_components: tuple    # (vertex_id, socket) per open socket
    double_point_count: int


def _require_accepted(graph, force=False):
    report = validate(graph)
    if not report.accepted and not force:
        raise HypothesisError(
            "graph fails acceptance (degree_ok=%s, strict=%s, negative_definite=%s)"
            % (report.degree_ok, report.strict_vertex_exists,
               report.negative_definite))
    return report


def _assign_sockets(graph):
    """Deterministic socket bookkeeping: gluings plus leftover free sockets."""
    next_socket = {v.id: 1 for v in graph.vertices}
    gluings = []
    for k, (a, b) in enumerate(graph.edges):
        ia = next_socket[a]
        next_socket[a] += 1
        ib = next_socket[b]
        next_socket[b] += 1
        gluings.append(EdgeGluing("e%d" % k, ((a, ia), (b, ib))))
    free = []
    for v in graph.vertices:
        if next_socket[v.id] > v.weight + 1:
            raise HypothesisError(
                "vertex %r has valence %d > weight %d: not enough sockets"
                % (v.id, graph.degree(v.id), v.weight))
        free.extend((v.id, t) for t in range(next_socket[v.id], v.weight + 1))
    return tuple(gluings), tuple(free)


def build_fiber(graph, force=False):
    """Assemble the page surface of an accepted graph.

    genus(Sigma) = sum g_v + E - n + 1 and the boundary count is
    sum (m_v - d_v); `force=True` skips the acceptance gate (the result
    is still a surface, just not one the main theorem speaks about).
    """
    _require_accepted(graph, force)
    gluings, free = _assign_sockets(graph)
    total_edges = len(graph.edges)
    genus = sum(v.genus for v in graph.vertices) + total_edges - graph.n + 1
    pieces = tuple(PieceData(v.id, v.genus, v.weight) for v in graph.vertices)
    return FiberSurface(
        genus=genus,
        boundary_count=len(free),
        pieces=pieces,
        gluings=gluings,
        free_sockets=free,
    )


def _canonical_edge_keys(graph):
    """Edge id -> (min id, max id, occurrence index) for canonical sorting."""
    counts = {}
    keys = {}
    for k, (a, b) in enumerate(graph.edges):
        pair = (min(a, b), max(a, b))
        occurrence = counts.get(pair, 0)
        counts[pair] = occurrence + 1
        keys["e%d" % k] = pair + (occurrence,)
    return keys


def neck_curves(graph, force=False):
    """All connect-sum neck curves, in the canonical vanishing-cycle order."""
    fiber = build_fiber(graph, force)
    boundary = [NeckCurve("d.%s.%d" % (v, t), "boundary_parallel", (v, t))
                for (v, t) in sorted(fiber.free_sockets)]
    keys = _canonical_edge_keys(graph)
    edge_necks = [NeckCurve("c.%s" % g.edge_id, "edge", (g.edge_id,) + g.ends)
                  for g in fiber.gluings]
    edge_necks.sort(key=lambda c: keys[c.location[0]])
    return boundary + edge_necks


def build_open_book(graph, force=False):
    """The open book (page, one right twist per neck curve)."""
    return OpenBook(page=build_fiber(graph, force),
                    monodromy=tuple(neck_curves(graph, force)))


def build_lefschetz(graph, force=False):
    """Lefschetz fibration data: vanishing cycles and the singular fiber."""
    fiber = build_fiber(graph, force)
    cycles = tuple(neck_curves(graph, force))
    closed = tuple((v.id, v.genus, v.weight) for v in graph.vertices)
    return LefschetzFibrationData(
        fiber=fiber,
        vanishing_cycles=cycles,
        closed_components=closed,
        disk_components=fiber.free_sockets,
        double_point_count=len(cycles),
    )


# ---- Euler characteristic bookkeeping --------------------------------------

def chi_fiber(fiber):
    return fiber.chi


def chi_plumbing(graph):
    """chi of the vertex configuration: sum chi(C_v) minus one per crossing."""
    return sum(2 - 2 * v.genus for v in graph.vertices) - len(graph.edges)


def chi_total_check(graph, force=False):
    """chi(Sigma) + #necks must equal chi of the configuration."""
    fiber = build_fiber(graph, force)
    k = len(neck_curves(graph, force))
    return chi_fiber(fiber) + k == chi_plumbing(graph)


# ---- isotopy-light curve queries -------------------------------------------

def bridge_side(graph, edge_index):
    """Vertex ids on the first-endpoint side of edge k, or None if not a bridge."""
    a, b = graph.edges[edge_index]
    adj = {v.id: [] for v in graph.vertices}
    for k, (x, y) in enumerate(graph.edges):
        if k == edge_index:
            continue
        adj[x].append(y)
        adj[y].append(x)
    stack, seen = [a], {a}
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if b in seen:
        return None
    return seen


def is_boundary_parallel(graph, curve):
    """Whether a neck curve is isotopic to a boundary component of the page.

    Open-socket necks always are.  An edge neck is boundary-parallel
    exactly when it is a bridge and one side of the bridge contributes an
    annulus to the page: total genus zero, no extra edges beyond its
    spanning tree, and a single open socket.
    """
    if curve.kind == "boundary_parallel":
        return True
    edge_id = curve.location[0]
    k = int(edge_id[1:])
    for side in (bridge_side(graph, k), _other_side(graph, k)):
        if side is None:
            return False
        genus = sum(graph.vertex(v).genus for v in side)
        inside_edges = sum(1 for i, (x, y) in enumerate(graph.edges)
                           if i != k and x in side and y in side)
        open_sockets = sum(graph.vertex(v).weight - graph.degree(v)
                           for v in side)
        if genus == 0 and inside_edges == len(side) - 1 and open_sockets == 1:
            return True
    return False


def _other_side(graph, edge_index):
    side = bridge_side(graph, edge_index)
    if side is None:
        return None
    return {v.id for v in graph.vertices} - side


# ---- interchange document ---------------------------------------------------

def open_book_to_dict(graph, force=False):
    """Serialize the compiled open book / Lefschetz data.

    The document is self-contained: the closed singular-fiber components
    carry the vertex decorations and the edge curves carry endpoints, so
    `parse_interchange` can rebuild the graph exactly.
    """
    data = build_lefschetz(graph, force)
    fiber = data.fiber
    return {
        "format": INTERCHANGE_FORMAT,
        "page": {"genus": fiber.genus, "boundary": fiber.boundary_count},
        "curves": [{"id": c.id, "kind": c.kind, "location": c.location_dict()}
                   for c in data.vanishing_cycles],
        "monodromy": [c.id for c in data.vanishing_cycles],
        "twist_convention": TWIST_CONVENTION,
        "singular_fiber": (
            [{"type": "closed", "vertex": vid, "genus": g, "selfint": -m}
             for vid, g, m in data.closed_components]
            + [{"type": "disk", "vertex": vid, "socket": t}
               for vid, t in data.disk_components]),
    }


class InterchangeError(ValueError):
    """Malformed or inconsistent interchange document."""


def parse_interchange(doc):
    """Rebuild (graph, LefschetzFibrationData) from an interchange document."""
    if not isinstance(doc, dict) or doc.get("format") != INTERCHANGE_FORMAT:
        raise InterchangeError("not a %r document" % INTERCHANGE_FORMAT)
    closed = [c for c in doc.get("singular_fiber", []) if c.get("type") == "closed"]
    if not closed:
        raise InterchangeError("no closed singular-fiber components")
    vertices = [{"id": c["vertex"], "genus": c["genus"], "selfint": c["selfint"]}
                for c in closed]
    edge_curves = [c for c in doc.get("curves", []) if c.get("kind") == "edge"]
    try:
        edge_curves.sort(key=lambda c: int(c["location"]["edge"][1:]))
        edges = [c["location"]["between"] for c in edge_curves]
    except (KeyError, ValueError, TypeError) as exc:
        raise InterchangeError("bad edge curve location: %s" % exc) from None
    graph = PlumbingGraph.from_dict({"vertices": vertices, "edges": edges})
    rebuilt = build_lefschetz(graph, force=True)
    if open_book_to_dict(graph, force=True) != doc:
        raise InterchangeError("document does not match its own graph data")
    return graph, rebuilt
