"""Cut-and-paste bookkeeping: substitution relations, chi arithmetic, and
the homology of the plumbing boundary.

A substitution relation is a pair of twist words (tau, tau_prime) on a
fixed page that are isotopic in the mapping class group.  Replacing the
Lefschetz piece fibered by tau (here: a plumbing neighborhood) with the
one fibered by tau_prime is then a symplectic operation; this module
tracks what is mechanically checkable about it: the page types match,
the words agree on H_1 (a necessary condition recorded as such), and the
Euler characteristics on both sides.

Relations are data, not code: they live in a versioned JSON file and the
same loader accepts user-supplied relation files.  Isotopy-level validity
is recorded in the `citation` field; this module never claims to verify
it beyond homology.
"""

import json
from dataclasses import dataclass
from importlib import resources

from . import exactla
from .fiber import build_fiber, neck_curves, chi_plumbing
from .graph import build_intersection_matrix, validate, HypothesisError
from .homology import (homology_basis, multitwist_word, word_action,
                       standard_page_model)

RELATION_FILE_VERSION = 1


class PageMismatch(ValueError):
    """The relation's page is not the graph's page."""


class TauMismatch(ValueError):
    """The relation's tau side is not the graph's multitwist."""


class RelationCheckFailure(ValueError):
    """A relation's two words differ already on homology."""


@dataclass(frozen=True)
class SubstitutionRelation:
    name: str
    page: tuple        # (genus, boundary_count)
    tau: tuple         # twist word, (coords, sign) pairs
    tau_prime: tuple
    citation: str

    def to_dict(self):
        def entries(word):
            return [{"coords": list(c), "sign": s} for c, s in word]
        return {"name": self.name,
                "page": {"genus": self.page[0], "boundary": self.page[1]},
                "tau": entries(self.tau),
                "tau_prime": entries(self.tau_prime),
                "citation": self.citation}


@dataclass
class CutPasteReport:
    """chi bookkeeping for replacing the plumbing piece by the relation's."""
    page: tuple
    twists_removed: int       # |tau|, the plumbing side
    twists_added: int         # |tau_prime|
    chi_z: int                # chi(Sigma) + |tau|
    chi_z_prime: int          # chi(Sigma) + |tau_prime|
    delta_chi: int
    homology_equal: bool
    sigma_plumbing: int       # signature of the plumbing side: -n

    def to_dict(self):
        return {
            "page": {"genus": self.page[0], "boundary": self.page[1]},
            "twists_removed": self.twists_removed,
            "twists_added": self.twists_added,
            "chi_Z": self.chi_z,
            "chi_Z_prime": self.chi_z_prime,
            "delta_chi": self.delta_chi,
            "homology_equal": self.homology_equal,
            "homology_caveat": "homology-level necessary condition",
            "sigma_plumbing": self.sigma_plumbing,
        }


@dataclass
class BoundaryHomology:
    """H_1 of the plumbing boundary: coker(Q) plus 2 sum(g_v) free classes."""
    invariant_factors: tuple  # nonzero Smith diagonal, divisibility order
    torsion: tuple            # the factors > 1
    free_rank: int

    def to_dict(self):
        return {"invariant_factors": list(self.invariant_factors),
                "torsion": list(self.torsion),
                "free_rank": self.free_rank}


def chi_lefschetz(page, word_length):
    """chi of a Lefschetz fibration over the disk: chi(page) + #twists."""
    genus, boundary = page
    if word_length < 0:
        raise ValueError("word length must be >= 0")
    return (2 - 2 * genus - boundary) + word_length


def _word_multiset(word):
    return sorted((tuple(c), s) for c, s in word)


def substitute(graph, relation):
    """Cut-and-paste report for replacing the graph's piece via a relation.

    The relation's page must equal the compiled page and its tau side
    must be the graph's multitwist (same multiset of neck-curve homology
    classes, all right twists); otherwise this raises PageMismatch /
    TauMismatch.
    """
    fiber = build_fiber(graph)
    page = (fiber.genus, fiber.boundary_count)
    if page != tuple(relation.page):
        raise PageMismatch(
            "relation page %s != compiled page %s" % (relation.page, page))
    model = homology_basis(fiber)
    graph_word = multitwist_word(model, neck_curves(graph))
    if _word_multiset(graph_word) != _word_multiset(relation.tau):
        raise TauMismatch(
            "relation tau %s is not the graph multitwist %s"
            % (_word_multiset(relation.tau), _word_multiset(graph_word)))
    action_tau = word_action(model, relation.tau)
    action_tau_prime = word_action(model, relation.tau_prime)
    k, k_prime = len(relation.tau), len(relation.tau_prime)
    chi_z = chi_lefschetz(page, k)
    chi_z_prime = chi_lefschetz(page, k_prime)
    assert chi_z == chi_plumbing(graph), "chi bookkeeping out of sync"
    return CutPasteReport(
        page=page,
        twists_removed=k,
        twists_added=k_prime,
        chi_z=chi_z,
        chi_z_prime=chi_z_prime,
        delta_chi=k_prime - k,
        homology_equal=action_tau == action_tau_prime,
        sigma_plumbing=-graph.n,
    )


def boundary_homology(graph):
    """Smith normal form of Q; H_1(boundary) = coker(Q) + Z^(2 sum g_v)."""
    report = validate(graph)
    if not report.accepted:
        raise HypothesisError("boundary homology needs an accepted graph")
    q = build_intersection_matrix(graph)
    s, u, v = exactla.smith_normal_form(q.as_lists())
    n = q.n
    diag = [s[i][i] for i in range(n)]
    nonzero = [d for d in diag if d != 0]
    zero_count = n - len(nonzero)
    genus_rank = 2 * sum(vx.genus for vx in graph.vertices)
    return BoundaryHomology(
        invariant_factors=tuple(nonzero),
        torsion=tuple(d for d in nonzero if d > 1),
        free_rank=zero_count + genus_rank,
    )


# ---------------------------------------------------------------------------
# relation files
# ---------------------------------------------------------------------------

def _parse_word(entries, rank, where):
    word = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "coords" not in entry:
            raise ValueError("%s[%d]: expected {'coords': [...], 'sign': +-1}"
                             % (where, i))
        coords = tuple(int(x) for x in entry["coords"])
        if len(coords) != rank:
            raise ValueError("%s[%d]: expected %d coordinates, got %d"
                             % (where, i, rank, len(coords)))
        sign = entry.get("sign", 1)
        if sign not in (1, -1):
            raise ValueError("%s[%d]: sign must be +1 or -1" % (where, i))
        word.append((coords, sign))
    return tuple(word)


def load_relation(doc):
    """Parse and homology-check one relation document.

    Word coordinates refer to the standard basis of the page: symplectic
    pairs first, boundary classes last.  A relation whose two words act
    differently on H_1 is rejected, with both action matrices in the
    error message.
    """
    try:
        name = doc["name"]
        page = (int(doc["page"]["genus"]), int(doc["page"]["boundary"]))
        citation = doc.get("citation", "")
    except (KeyError, TypeError) as exc:
        raise ValueError("malformed relation document: %s" % exc) from None
    if page[1] < 1:
        raise ValueError("relation pages must have boundary")
    model = standard_page_model(*page)
    tau = _parse_word(doc.get("tau", []), model.rank, "tau")
    tau_prime = _parse_word(doc.get("tau_prime", []), model.rank, "tau_prime")
    if not tau:
        raise ValueError("tau must be nonempty")
    a1 = word_action(model, tau)
    a2 = word_action(model, tau_prime)
    if a1 != a2:
        raise RelationCheckFailure(
            "relation %r fails its homology check:\n tau acts by %s\n"
            " tau' acts by %s" % (name, a1, a2))
    return SubstitutionRelation(name=name, page=page, tau=tau,
                                tau_prime=tau_prime, citation=citation)


def load_relation_file(doc):
    """Parse a {"version": 1, "relations": [...]} document."""
    if not isinstance(doc, dict) or doc.get("version") != RELATION_FILE_VERSION:
        raise ValueError("expected a version-%d relation file"
                         % RELATION_FILE_VERSION)
    return [load_relation(r) for r in doc.get("relations", [])]


def relation_library():
    """The shipped relations; every entry passes its own homology check."""
    text = resources.files("plumbook").joinpath("data/relations.json").read_text()
    try:
        return load_relation_file(json.loads(text))
    except (ValueError, RelationCheckFailure) as exc:
        raise RuntimeError("shipped relation library is broken: %s" % exc)


def find_relation(name):
    for rel in relation_library():
        if rel.name == name:
            return rel
    raise KeyError("no shipped relation named %r" % name)
