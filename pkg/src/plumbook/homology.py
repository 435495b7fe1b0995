"""First homology of the page, neck-curve classes, and twist actions.

The page Sigma (genus g, b >= 1 boundary components) has H_1 of rank
2g + b - 1.  The model basis is assembled from the page's structure:

  * a_i, b_i        one symplectic pair per handle of each vertex piece,
  * x_e, y_e        one symplectic pair per independent cycle of the
                    multigraph (one per non-tree edge e); x_e is the class
                    of e's neck curve, y_e a dual loop through the tubes,
  * d_1..d_{b-1}    boundary classes, spanning the radical; the class of
                    the last boundary component (canonical order) is
                    -(d_1 + ... + d_{b-1}).

Neck-curve classes are pinned by the gluing presentation: writing
sigma_{v,t} for the socket circles (oriented as boundary of the vertex
piece), H_1 of the union of pieces and tubes is generated by the handle
classes, the socket circles, and the y_e, modulo one relation per piece
(its socket circles sum to zero) and one per tube (its two socket circles
are opposite).  Eliminating the relations expresses every neck class as
an exact integer vector in the basis above; the elimination matrix is a
signed vertex/edge incidence matrix, so it is totally unimodular and the
quotient is torsion free.

A right-handed Dehn twist along a curve of class c acts on H_1 by the
transvection x -> x + <x, c> c.  This is the homological shadow only:
equality of words here is necessary, not sufficient, for isotopy of the
underlying mapping classes.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import exactla
from .graph import HypothesisError


@dataclass(frozen=True)
class HomologyModel:
    rank: int
    labels: tuple        # human-readable basis labels, in coordinate order
    pairing: tuple       # rank x rank antisymmetric integer matrix
    genus: int
    boundary_count: int
    neck_classes: dict   # neck curve id -> coordinate tuple
    boundary_order: tuple  # free sockets in canonical order (last = eliminated)

    def pairing_lists(self):
        return [list(row) for row in self.pairing]

    def pair(self, u, v):
        return sum(u[i] * self.pairing[i][j] * v[j]
                   for i in range(self.rank) for j in range(self.rank))


@dataclass(frozen=True)
class CurveClass:
    coordinates: tuple


# A twist word is a tuple of (coordinate tuple, +1 | -1) pairs, applied
# left to right; +1 is a right-handed twist.
TwistWord = tuple


def _spanning_tree(edge_items):
    """Indices of a spanning tree among (edge_id, (u, v)) items, greedily."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for pos, (_, (u, v)) in enumerate(edge_items):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.add(pos)
    return tree


def homology_basis(fiber):
    """Build the H_1 model of a page, with its intersection pairing.

    Requires b >= 1 (every accepted graph has a strict vertex, hence a
    boundary component).
    """
    if fiber.boundary_count < 1:
        raise HypothesisError("page has no boundary; model needs b >= 1")

    vertex_ids = [p.vertex for p in fiber.pieces]
    vertex_index = {vid: i for i, vid in enumerate(vertex_ids)}
    # canonical edge order: (sorted endpoints, occurrence index)
    counts = {}
    edge_items = []
    for g in fiber.gluings:
        (u, _), (v, _) = g.ends
        pair = (min(u, v), max(u, v))
        occurrence = counts.get(pair, 0)
        counts[pair] = occurrence + 1
        edge_items.append((g.edge_id, (u, v), pair + (occurrence,)))
    edge_items.sort(key=lambda item: item[2])
    edge_items = [(eid, ends) for eid, ends, _ in edge_items]
    tree_positions = _spanning_tree(edge_items)
    nontree = [edge_items[p] for p in range(len(edge_items))
               if p not in tree_positions]
    tree = [edge_items[p] for p in sorted(tree_positions)]

    boundary_order = tuple(sorted(fiber.free_sockets))
    kept_boundaries = boundary_order[:-1]

    # basis layout
    labels = []
    for piece in fiber.pieces:
        for i in range(1, piece.genus + 1):
            labels.append("a%d@%s" % (i, piece.vertex))
            labels.append("b%d@%s" % (i, piece.vertex))
    x_pos = {}
    y_pos = {}
    for eid, _ in nontree:
        x_pos[eid] = len(labels)
        labels.append("x@%s" % eid)
        y_pos[eid] = len(labels)
        labels.append("y@%s" % eid)
    d_pos = {}
    for v, t in kept_boundaries:
        d_pos[(v, t)] = len(labels)
        labels.append("d@%s:%d" % (v, t))
    rank = len(labels)
    expected = 2 * fiber.genus + fiber.boundary_count - 1
    assert rank == expected, (rank, expected)

    # pairing: symplectic pairs (a_i, b_i) and (x_e, y_e); radical = d's
    pairing = [[0] * rank for _ in range(rank)]
    i = 0
    for piece in fiber.pieces:
        for _ in range(piece.genus):
            pairing[i][i + 1] = 1
            pairing[i + 1][i] = -1
            i += 2
    for eid, _ in nontree:
        xi, yi = x_pos[eid], y_pos[eid]
        pairing[xi][yi] = 1
        pairing[yi][xi] = -1

    # relation matrix over the socket-circle generators: rows = pieces,
    # columns = edges (chosen end = smaller vertex id) then free sockets
    n = len(vertex_ids)
    columns = [("edge", eid, ends) for eid, ends in edge_items]
    columns += [("socket", vt, None) for vt in boundary_order]
    m = [[0] * len(columns) for _ in range(n)]
    for c, (kind, key, ends) in enumerate(columns):
        if kind == "edge":
            u, v = ends
            chosen = min(u, v)
            other = max(u, v)
            m[vertex_index[chosen]][c] += 1
            m[vertex_index[other]][c] -= 1
        else:
            m[vertex_index[key[0]]][c] += 1

    tree_ids = {eid for eid, _ in tree}
    k_cols = [c for c, col in enumerate(columns)
              if (col[0] == "edge" and col[1] in tree_ids)
              or (col[0] == "socket" and col[1] == boundary_order[-1])]
    f_cols = [c for c in range(len(columns)) if c not in k_cols]
    assert len(k_cols) == n

    # express eliminated generators in terms of the free ones
    if f_cols:
        m_k = [[m[r][c] for c in k_cols] for r in range(n)]
        m_f = [[m[r][c] for c in f_cols] for r in range(n)]
        x = exactla.solve_exact(m_k, m_f)
        for row in x:
            for entry in row:
                if entry.denominator != 1:
                    raise AssertionError("presentation quotient not integral")
        expansion = {k_cols[r]: [-int(e) for e in x[r]] for r in range(n)}
    else:
        expansion = {k_cols[r]: [] for r in range(n)}

    def free_generator_coords(col_index):
        """Coordinates (in the model basis) of a free sigma-generator."""
        coords = [0] * rank
        kind, key, _ = columns[col_index]
        if kind == "edge":
            coords[x_pos[key]] = 1
        else:
            coords[d_pos[key]] = 1
        return coords

    def column_coords(col_index):
        if col_index in expansion:
            coords = [0] * rank
            for pos, coeff in zip(f_cols, expansion[col_index]):
                if coeff:
                    base = free_generator_coords(pos)
                    coords = [c + coeff * x_ for c, x_ in zip(coords, base)]
            return coords
        return free_generator_coords(col_index)

    # keys match the neck-curve ids assigned by the fiber builder
    neck_classes = {}
    for c, (kind, key, _) in enumerate(columns):
        if kind == "edge":
            neck_classes["c.%s" % key] = tuple(column_coords(c))
        else:
            v, t = key
            neck_classes["d.%s.%d" % (v, t)] = tuple(column_coords(c))

    # internal consistency: the eliminated boundary equals minus the others
    last = boundary_order[-1]
    got = neck_classes["d.%s.%d" % last]
    want = [0] * rank
    for vt in kept_boundaries:
        want[d_pos[vt]] -= 1
    assert list(got) == want, "boundary classes do not sum to zero"

    return HomologyModel(
        rank=rank,
        labels=tuple(labels),
        pairing=tuple(tuple(row) for row in pairing),
        genus=fiber.genus,
        boundary_count=fiber.boundary_count,
        neck_classes=neck_classes,
        boundary_order=boundary_order,
    )


def standard_page_model(genus, boundary):
    """A graph-free H_1 model of an abstract page.

    Basis convention shared with `homology_basis`: symplectic pairs
    first (a_1, b_1, ..., a_g, b_g), then the b - 1 boundary classes.
    Relation files express their words in this basis.
    """
    if boundary < 1:
        raise HypothesisError("page must have boundary")
    labels = []
    for i in range(1, genus + 1):
        labels.append("a%d" % i)
        labels.append("b%d" % i)
    for j in range(1, boundary):
        labels.append("d%d" % j)
    rank = len(labels)
    pairing = [[0] * rank for _ in range(rank)]
    for i in range(genus):
        pairing[2 * i][2 * i + 1] = 1
        pairing[2 * i + 1][2 * i] = -1
    return HomologyModel(
        rank=rank,
        labels=tuple(labels),
        pairing=tuple(tuple(row) for row in pairing),
        genus=genus,
        boundary_count=boundary,
        neck_classes={},
        boundary_order=(),
    )


def class_of_neck(model, curve):
    """Homology class of a neck curve from the fiber builder."""
    if curve.kind == "boundary_parallel":
        v, t = curve.location
        key = "d.%s.%d" % (v, t)
    else:
        key = "c.%s" % curve.location[0]
    if key not in model.neck_classes:
        raise KeyError("unknown neck curve %r" % curve.id)
    return CurveClass(model.neck_classes[key])


def class_from_coords(model, coords):
    coords = tuple(int(c) for c in coords)
    if len(coords) != model.rank:
        raise ValueError("expected %d coordinates, got %d"
                         % (model.rank, len(coords)))
    return CurveClass(coords)


def transvection(model, curve_class):
    """Matrix of the right twist along c: x -> x + <x, c> c.

    Preserves the pairing; the identity when c is in the radical.
    """
    c = list(curve_class.coordinates)
    if len(c) != model.rank:
        raise ValueError("class has wrong dimension")
    pc = exactla.mat_vec(model.pairing_lists(), c)
    t = exactla.identity(model.rank)
    for i in range(model.rank):
        for j in range(model.rank):
            t[i][j] += c[i] * pc[j]
    return t


def _transvection_inverse(model, curve_class):
    c = list(curve_class.coordinates)
    pc = exactla.mat_vec(model.pairing_lists(), c)
    t = exactla.identity(model.rank)
    for i in range(model.rank):
        for j in range(model.rank):
            t[i][j] -= c[i] * pc[j]
    return t


def word_action(model, word):
    """Ordered product of twist transvections (sign -1 = inverse twist)."""
    result = exactla.identity(model.rank)
    for coords, sign in word:
        cls = class_from_coords(model, coords)
        factor = (transvection(model, cls) if sign > 0
                  else _transvection_inverse(model, cls))
        result = exactla.mat_mul(result, factor)
    return result


def homologically_equal(model, word1, word2):
    """Whether two twist words agree on H_1.

    A necessary condition for the words to be isotopic in the mapping
    class group, never a sufficient one.
    """
    return word_action(model, word1) == word_action(model, word2)


def multitwist_word(model, curves):
    """The word of one right twist along each given neck curve."""
    return tuple((class_of_neck(model, c).coordinates, 1) for c in curves)


def word_from_entries(model, entries):
    """Parse word entries: {"curve": id} or {"coords": [...]}, with "sign"."""
    word = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ValueError("word[%d]: expected an object" % i)
        sign = entry.get("sign", 1)
        if sign not in (1, -1):
            raise ValueError("word[%d]: sign must be +1 or -1" % i)
        if "curve" in entry:
            key = entry["curve"]
            if key not in model.neck_classes:
                raise ValueError("word[%d]: unknown curve id %r" % (i, key))
            word.append((model.neck_classes[key], sign))
        elif "coords" in entry:
            word.append((class_from_coords(model, entry["coords"]).coordinates,
                         sign))
        else:
            raise ValueError("word[%d]: needs 'curve' or 'coords'" % i)
    return tuple(word)


def pairing_rank(model):
    """Rank of the pairing (2g) and of its radical (b - 1)."""
    r = exactla.rank_exact(model.pairing_lists())
    return r, model.rank - r


def preserves_pairing(model, matrix):
    p = model.pairing_lists()
    lhs = exactla.mat_mul(exactla.mat_mul(exactla.transpose(matrix), p), matrix)
    return lhs == p
