"""Decorated plumbing graphs and exact validation of the convexity hypotheses.

A plumbing graph is a connected multigraph whose vertex v carries a genus
g_v >= 0 and a weight m_v >= 1 (the disk bundle over v has Euler number
-m_v).  The intersection matrix Q has diagonal -m_v and off-diagonal
entries the edge multiplicities.  A graph is accepted by `validate` when

  (i)   it has no loop edges,
  (ii)  m_v >= d_v at every vertex (d_v = valence, with multiplicity),
  (iii) Q is negative definite,

and these are exactly the hypotheses under which the open book / Lefschetz
compiler downstream is meaningful.  Under (i), (ii) and connectivity,
condition (iii) is equivalent to solvability of -Q a = b in positive
vectors, to solvability for a single positive b, and to strictness of (ii)
at one vertex; `definiteness_conditions` evaluates all four independently.

All arithmetic here is exact (integers and fractions.Fraction).
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactla


class GraphFormatError(ValueError):
    """Malformed graph input (bad JSON shape, loops, dangling ids...)."""


class HypothesisError(ValueError):
    """An operation was applied to a graph that fails its preconditions."""


class NotSolvable(ValueError):
    """-Q a = b has no solution (Q singular)."""


class NotPositive(ValueError):
    """-Q a = b has a solution, but not a strictly positive one."""

    def __init__(self, solution):
        self.solution = solution
        bad = [i for i, x in enumerate(solution) if x <= 0]
        super().__init__(
            "solution has nonpositive entries at indices %s" % bad)


@dataclass(frozen=True)
class VertexLabel:
    """A vertex decoration: genus g >= 0 and weight m >= 1.

    The surface C_v has genus `genus`; its self-intersection in the
    plumbing is -weight.
    """
    id: str
    genus: int
    weight: int

    def __post_init__(self):
        if self.genus < 0:
            raise GraphFormatError("vertex %r: genus must be >= 0 (got %d)"
                                   % (self.id, self.genus))
        if self.weight < 1:
            raise GraphFormatError("vertex %r: weight must be >= 1 (got %d)"
                                   % (self.id, self.weight))


@dataclass(frozen=True)
class PlumbingGraph:
    """A connected loop-free multigraph with decorated vertices.

    Edges are stored as an explicit tuple of unordered id pairs, in input
    order; repeating a pair encodes multiplicity, and each occurrence
    keeps its own identity (edge index) for the neck curves downstream.
    """
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        ids = [v.id for v in self.vertices]
        if not ids:
            raise GraphFormatError("graph has no vertices")
        seen = set()
        for i, vid in enumerate(ids):
            if vid in seen:
                raise GraphFormatError("vertices[%d]: duplicate id %r" % (i, vid))
            seen.add(vid)
        for k, (a, b) in enumerate(self.edges):
            if a == b:
                raise GraphFormatError("edges[%d]: loop at vertex %r" % (k, a))
            for end in (a, b):
                if end not in seen:
                    raise GraphFormatError("edges[%d]: unknown vertex id %r" % (k, end))
        if not self._is_connected():
            raise GraphFormatError("graph is not connected")

    def _is_connected(self):
        ids = [v.id for v in self.vertices]
        adj = {vid: set() for vid in ids}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        stack, seen = [ids[0]], {ids[0]}
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(ids)

    # ---- indexing helpers -------------------------------------------------

    @property
    def n(self):
        return len(self.vertices)

    @property
    def ids(self):
        return tuple(v.id for v in self.vertices)

    def index_of(self, vid):
        return self.ids.index(vid)

    def degree(self, vid):
        return sum((a == vid) + (b == vid) for a, b in self.edges)

    def degrees(self):
        return {v.id: self.degree(v.id) for v in self.vertices}

    def vertex(self, vid):
        return self.vertices[self.index_of(vid)]

    # ---- construction from the JSON document shape ------------------------

    @classmethod
    def from_dict(cls, doc):
        """Build from {"vertices": [{"id", "genus", "selfint"}], "edges": [[a, b]]}.

        `selfint` is the self-intersection -m_v and must be negative.
        Error messages carry the offending position.
        """
        if not isinstance(doc, dict):
            raise GraphFormatError("graph document must be a JSON object")
        raw_vertices = doc.get("vertices")
        raw_edges = doc.get("edges", [])
        if not isinstance(raw_vertices, list) or not raw_vertices:
            raise GraphFormatError("'vertices' must be a nonempty list")
        if not isinstance(raw_edges, list):
            raise GraphFormatError("'edges' must be a list")
        vertices = []
        for i, rv in enumerate(raw_vertices):
            if not isinstance(rv, dict):
                raise GraphFormatError("vertices[%d]: expected an object" % i)
            try:
                vid, genus, selfint = rv["id"], rv["genus"], rv["selfint"]
            except KeyError as exc:
                raise GraphFormatError(
                    "vertices[%d]: missing field %s" % (i, exc)) from None
            if not isinstance(vid, str):
                raise GraphFormatError("vertices[%d]: id must be a string" % i)
            if not isinstance(genus, int) or not isinstance(selfint, int):
                raise GraphFormatError(
                    "vertices[%d]: genus and selfint must be integers" % i)
            if selfint >= 0:
                raise GraphFormatError(
                    "vertices[%d]: selfint must be negative (got %d)" % (i, selfint))
            if genus < 0:
                raise GraphFormatError(
                    "vertices[%d]: genus must be >= 0 (got %d)" % (i, genus))
            vertices.append(VertexLabel(vid, genus, -selfint))
        edges = []
        for k, re_ in enumerate(raw_edges):
            if (not isinstance(re_, (list, tuple)) or len(re_) != 2
                    or not all(isinstance(x, str) for x in re_)):
                raise GraphFormatError(
                    "edges[%d]: expected a pair of vertex ids" % k)
            if re_[0] == re_[1]:
                raise GraphFormatError("edges[%d]: loop at vertex %r" % (k, re_[0]))
            edges.append((re_[0], re_[1]))
        return cls(tuple(vertices), tuple(edges))

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError("invalid JSON: %s" % exc) from None
        return cls.from_dict(doc)

    def to_dict(self):
        return {
            "vertices": [{"id": v.id, "genus": v.genus, "selfint": -v.weight}
                         for v in self.vertices],
            "edges": [[a, b] for a, b in self.edges],
        }


@dataclass(frozen=True)
class IntersectionMatrix:
    """Symmetric integer matrix Q: diagonal -m_v, off-diagonal multiplicities."""
    ids: tuple
    entries: tuple

    @property
    def n(self):
        return len(self.ids)

    def as_lists(self):
        return [list(row) for row in self.entries]


@dataclass
class DegreeCheck:
    per_vertex: dict            # id -> bool, m_v >= d_v
    strict_vertex_exists: bool  # some m_v > d_v
    failing: list = field(default_factory=list)


@dataclass
class ValidationReport:
    """Outcome of all graph-level hypothesis checks, with exact certificates."""
    ids: tuple
    loops_ok: bool
    degree_ok: bool
    strict_vertex_exists: bool
    negative_definite: bool
    minor_signs: list                      # leading principal minors of Q, exact
    positive_solution_witness: list | None  # a with -Q a = 1, when it exists
    failing_vertices: list

    @property
    def accepted(self):
        return (self.loops_ok and self.degree_ok
                and self.strict_vertex_exists and self.negative_definite)

    def to_dict(self):
        return {
            "ids": list(self.ids),
            "loops_ok": self.loops_ok,
            "degree_ok": self.degree_ok,
            "strict_vertex_exists": self.strict_vertex_exists,
            "negative_definite": self.negative_definite,
            "minor_signs": [int(x) for x in self.minor_signs],
            "positive_solution_witness": (
                None if self.positive_solution_witness is None
                else [str(x) for x in self.positive_solution_witness]),
            "failing_vertices": list(self.failing_vertices),
            "accepted": self.accepted,
        }


def build_intersection_matrix(graph):
    """Intersection matrix of the plumbing, in input vertex order."""
    n = graph.n
    idx = {vid: i for i, vid in enumerate(graph.ids)}
    q = [[0] * n for _ in range(n)]
    for i, v in enumerate(graph.vertices):
        q[i][i] = -v.weight
    for a, b in graph.edges:
        q[idx[a]][idx[b]] += 1
        q[idx[b]][idx[a]] += 1
    return IntersectionMatrix(graph.ids, tuple(tuple(row) for row in q))


def row_sums(q):
    """Row sums s_i of the intersection matrix; s_i = d_i - m_i."""
    return [sum(row) for row in q.entries]


def check_degrees(graph):
    """Per-vertex weight-vs-valence check m_v >= d_v, plus strictness."""
    degs = graph.degrees()
    per_vertex = {v.id: v.weight >= degs[v.id] for v in graph.vertices}
    strict = any(v.weight > degs[v.id] for v in graph.vertices)
    failing = [vid for vid, ok in per_vertex.items() if not ok]
    return DegreeCheck(per_vertex, strict, failing)


def is_negative_definite(q):
    """Sylvester test on exact leading principal minors.

    Q is negative definite iff (-1)^k det(Q_k) > 0 for k = 1..n.  Returns
    (verdict, minors) where minors are the exact determinant values.
    """
    minors = exactla.leading_principal_minors(q.as_lists())
    verdict = all((minor < 0 if k % 2 == 1 else minor > 0)
                  for k, minor in enumerate(minors, start=1))
    return verdict, minors


def solve_positive(q, b):
    """Exact positive solution a of -Q a = b, for positive rational b.

    Raises NotSolvable when Q is singular and NotPositive (carrying the
    solution as witness) when the unique solution has a nonpositive entry.
    """
    b = [Fraction(x) for x in b]
    if any(x <= 0 for x in b):
        raise ValueError("b must be strictly positive")
    neg_q = [[-x for x in row] for row in q.entries]
    try:
        a = exactla.solve_exact(neg_q, b)
    except exactla.SingularMatrixError:
        raise NotSolvable("intersection matrix is singular") from None
    if any(x <= 0 for x in a):
        raise NotPositive(a)
    return a


def quadratic_form_decomposition(q, w):
    """Split w^T Q w into the row-sum and edge-difference parts.

    Returns (sum_i s_i w_i^2, -sum_{i<j} q_ij (w_i - w_j)^2, w^T Q w);
    the first two add up to the third, exactly.
    """
    n = q.n
    s = row_sums(q)
    first = sum(s[i] * w[i] * w[i] for i in range(n))
    second = -sum(q.entries[i][j] * (w[i] - w[j]) ** 2
                  for i in range(n) for j in range(i + 1, n))
    total = sum(w[i] * q.entries[i][j] * w[j]
                for i in range(n) for j in range(n))
    return first, second, total


def _random_positive_b(n, rng):
    return [Fraction(rng.randint(1, 12), rng.randint(1, 12)) for _ in range(n)]


def definiteness_conditions(graph, seed=0, trials=8):
    """The four equivalent acceptance conditions, each decided on its own.

    (1) -Q a = b is positively solvable for every positive b.  Universal
        quantification is not enumerable; it is decided on a basket of
        positive b (the all-ones vector plus `trials` seeded random
        positive rational vectors), which under the preconditions below
        has the same truth value as (4).
    (2) -Q a = b is positively solvable for the all-ones b.
    (3) some vertex has m_v > d_v.
    (4) Q is negative definite (exact Sylvester minors).

    Preconditions: the graph is connected and loop-free (guaranteed by
    construction) and m_v >= d_v everywhere; otherwise the four conditions
    need not agree and a HypothesisError is raised.
    """
    degree = check_degrees(graph)
    if not all(degree.per_vertex.values()):
        raise HypothesisError(
            "m_v >= d_v fails at %s; the equivalence needs it" % degree.failing)
    q = build_intersection_matrix(graph)

    def solvable(b):
        try:
            solve_positive(q, b)
            return True
        except (NotSolvable, NotPositive):
            return False

    rng = random.Random(seed)
    basket = [[Fraction(1)] * q.n]
    basket += [_random_positive_b(q.n, rng) for _ in range(trials)]
    cond1 = all(solvable(b) for b in basket)
    cond2 = solvable([Fraction(1)] * q.n)
    cond3 = degree.strict_vertex_exists
    cond4, _ = is_negative_definite(q)
    return cond1, cond2, cond3, cond4


def validate(graph):
    """Run every hypothesis check and return the full report."""
    q = build_intersection_matrix(graph)
    degree = check_degrees(graph)
    negdef, minors = is_negative_definite(q)
    witness = None
    try:
        witness = solve_positive(q, [Fraction(1)] * q.n)
    except (NotSolvable, NotPositive):
        pass
    return ValidationReport(
        ids=graph.ids,
        loops_ok=True,  # loops are rejected at construction
        degree_ok=all(degree.per_vertex.values()),
        strict_vertex_exists=degree.strict_vertex_exists,
        negative_definite=negdef,
        minor_signs=minors,
        positive_solution_witness=witness,
        failing_vertices=degree.failing,
    )
