"""Ascending/descending links and collapsibility certificates.

The vertex links of the affine cell decomposition reduce to three checks:
induced subcomplexes of the flag complex on the facet adjacency graph
(copy barycenters), of the 4-dimensional cross-polytope (boundary cube
barycenters), and of a triangular prism joined with a 4-cycle (bad square
barycenters).  Each check produces a replayable collapse certificate; a
failed search is reported as inconclusive, never as a refutation.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from itertools import combinations

from . import polytope as poly
from .coloring import find_standard_coloring
from .polytope import FACETS, NUM_FACETS
from .states import OrientedDualSkeleton, canonical_move_set


def default_seed():
    return int(os.environ.get("FIBERFORGE_SEED", "0"))


# ---------------------------------------------------------------------------
# simplicial complexes


class SimplicialComplex:
    """A finite simplicial complex stored by its maximal simplices."""

    def __init__(self, maximal, vertices=None):
        maximal = [frozenset(m) for m in maximal if m]
        # drop non-maximal entries
        self.maximal = tuple(
            sorted(
                (m for m in maximal if not any(m < n for n in maximal)),
                key=sorted,
            )
        )
        vs = set()
        for m in self.maximal:
            vs |= m
        self.vertices = frozenset(vertices if vertices is not None else vs)

    @classmethod
    def flag_of_graph(cls, vertices, edges):
        """The flag complex: simplices are the cliques of the graph."""
        vertices = sorted(vertices)
        adj = {v: set() for v in vertices}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        maximal = _maximal_cliques(set(vertices), adj)
        maximal.extend(frozenset([v]) for v in vertices if not adj[v])
        return cls(maximal, vertices=vertices)

    def is_empty(self):
        return not self.maximal

    def dimension(self):
        return max((len(m) - 1 for m in self.maximal), default=-1)

    def all_faces(self):
        faces = set()
        for m in self.maximal:
            for k in range(1, len(m) + 1):
                for sub in combinations(sorted(m), k):
                    faces.add(frozenset(sub))
        return faces

    def cone_vertex(self):
        """A vertex contained in every maximal simplex, if one exists."""
        if not self.maximal:
            return None
        common = set(self.maximal[0])
        for m in self.maximal[1:]:
            common &= m
        return min(common) if common else None

    def induced(self, subset):
        subset = frozenset(subset)
        return SimplicialComplex([m & subset for m in self.maximal])

    def f_counts(self):
        faces = self.all_faces()
        out = {}
        for f in faces:
            out[len(f) - 1] = out.get(len(f) - 1, 0) + 1
        return out


def _maximal_cliques(vertices, adj):
    """Bron-Kerbosch with pivoting."""
    out = []

    def bk(r, p, x):
        if not p and not x:
            if r:
                out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(vertices), set())
    return out


# ---------------------------------------------------------------------------
# generic cell-poset complexes (prisms, squares, joins)


class CellComplex:
    """A regular cell complex given as a graded poset.

    `cells` maps a cell id to its dimension; `boundary` maps a cell to the
    ids of the cells it covers.  Vertices have empty boundary.
    """

    def __init__(self, cells, boundary):
        self.cells = dict(cells)
        self.boundary = {c: frozenset(boundary.get(c, ())) for c in self.cells}
        for c, bd in self.boundary.items():
            for b in bd:
                assert self.cells[b] == self.cells[c] - 1

    @classmethod
    def from_simplicial(cls, sc):
        faces = sc.all_faces()
        cells = {f: len(f) - 1 for f in faces}
        boundary = {
            f: [f - {v} for v in f if len(f) > 1] for f in faces
        }
        return cls(cells, boundary)

    def subcomplex(self, cell_ids):
        keep = set(cell_ids)
        # downward closure
        changed = True
        while changed:
            changed = False
            for c in list(keep):
                for b in self.boundary[c]:
                    if b not in keep:
                        keep.add(b)
                        changed = True
        cells = {c: self.cells[c] for c in keep}
        boundary = {c: self.boundary[c] for c in keep}
        return CellComplex(cells, boundary)

    def induced_on_vertices(self, vertex_subset):
        vs = set(vertex_subset)
        verts_of = self.vertices_of_cells()
        keep = [c for c in self.cells if verts_of[c] <= vs]
        cells = {c: self.cells[c] for c in keep}
        boundary = {c: self.boundary[c] & set(keep) for c in keep}
        return CellComplex(cells, boundary)

    def vertices_of_cells(self):
        out = {}
        for c in sorted(self.cells, key=lambda c: self.cells[c]):
            if self.cells[c] == 0:
                out[c] = frozenset([c])
            else:
                vs = frozenset()
                for b in self.boundary[c]:
                    vs |= out[b]
                out[c] = vs
        return out

    def join_with_points(self, points):
        """Join with a discrete set of new vertices."""
        cells = dict(self.cells)
        boundary = {c: set(b) for c, b in self.boundary.items()}
        for p in points:
            pid = ("pt", p)
            cells[pid] = 0
            boundary[pid] = set()
            for c in list(self.cells):
                jid = ("join", c, p)
                cells[jid] = self.cells[c] + 1
                bd = {("join", b, p) for b in self.boundary[c]}
                bd.add(c)
                if self.cells[c] == 0:
                    bd.add(pid)
                boundary[jid] = bd
        return CellComplex(cells, boundary)

    def is_empty(self):
        return not self.cells


def prism_complex():
    """The boundary of a triangular prism: vertices are (apex, base edge)
    pairs, squares are dual to the base vertices."""
    apexes = (0, 1)
    base_edges = (frozenset((0, 1)), frozenset((1, 2)), frozenset((0, 2)))
    cells = {}
    boundary = {}
    for a in apexes:
        for e in base_edges:
            cells[(a, e)] = 0
            boundary[(a, e)] = []
    # triangle edges (same apex) and vertical edges (same base edge)
    for a in apexes:
        for e, f in combinations(base_edges, 2):
            eid = ("t", a, frozenset((e, f)))
            cells[eid] = 1
            boundary[eid] = [(a, e), (a, f)]
    for e in base_edges:
        eid = ("v", e)
        cells[eid] = 1
        boundary[eid] = [(0, e), (1, e)]
    # two triangles
    for a in apexes:
        cid = ("tri", a)
        cells[cid] = 2
        boundary[cid] = [
            ("t", a, frozenset((e, f))) for e, f in combinations(base_edges, 2)
        ]
    # three squares, one per base vertex
    for w in (0, 1, 2):
        at_w = [e for e in base_edges if w in e]
        cid = ("sq", w)
        cells[cid] = 2
        boundary[cid] = [
            ("t", 0, frozenset(at_w)),
            ("t", 1, frozenset(at_w)),
            ("v", at_w[0]),
            ("v", at_w[1]),
        ]
    return CellComplex(cells, boundary)


def square_complex(n=4):
    """A combinatorial n-cycle (the boundary of the square for n=4)."""
    cells = {}
    boundary = {}
    for i in range(n):
        cells[("v", i)] = 0
        boundary[("v", i)] = []
        cells[("e", i)] = 1
        boundary[("e", i)] = [("v", i), ("v", (i + 1) % n)]
    return CellComplex(cells, boundary)


# ---------------------------------------------------------------------------
# collapses


@dataclass
class CollapseCertificate:
    """Replayable witness that a complex collapses to a point."""

    kind: str  # "cone" | "collapse" | "inconclusive"
    cone_vertex: object = None
    pairs: tuple = ()
    final_cell: object = None

    @property
    def collapsible(self):
        return self.kind in ("cone", "collapse")


def greedy_collapse(cells, boundary, seed=0, restarts=64):
    """Free-face collapsing with randomized restarts.

    cells: dict id -> dim; boundary: dict id -> iterable of covered ids.
    Returns a CollapseCertificate ('collapse' or 'inconclusive').
    """
    ids = sorted(cells, key=repr)
    if not ids:
        raise ValueError("empty complex")
    strict_cofaces = {c: set() for c in ids}
    for c in ids:
        for b in boundary[c]:
            strict_cofaces[b].add(c)
    # transitive closure of cofaces, by decreasing dimension
    for c in sorted(ids, key=lambda c: -cells[c]):
        extra = set()
        for d in strict_cofaces[c]:
            extra |= strict_cofaces[d]
        strict_cofaces[c] |= extra

    for attempt in range(restarts):
        rng = random.Random((seed, attempt))
        alive = set(ids)
        cof = {c: set(strict_cofaces[c]) for c in ids}
        seq = []
        while True:
            if len(alive) == 1:
                (last,) = alive
                if cells[last] == 0:
                    return CollapseCertificate(
                        kind="collapse", pairs=tuple(seq), final_cell=last
                    )
                break
            free = [c for c in alive if len(cof[c]) == 1]
            if not free:
                break
            sigma = rng.choice(sorted(free, key=repr))
            (tau,) = cof[sigma]
            alive.discard(sigma)
            alive.discard(tau)
            for c in alive:
                cof[c].discard(sigma)
                cof[c].discard(tau)
            seq.append((sigma, tau))
    return CollapseCertificate(kind="inconclusive")


def collapse_to_point(complex_, seed=None, restarts=64):
    """Certificate that a complex collapses to a single vertex.

    Simplicial complexes are first screened for a cone vertex, which is a
    complete witness on its own; otherwise (and for poset complexes) we
    fall back to greedy free-face collapsing.  A failed search returns an
    inconclusive verdict, never a refutation.
    """
    seed = default_seed() if seed is None else seed
    if isinstance(complex_, SimplicialComplex):
        if complex_.is_empty():
            raise ValueError("empty complex")
        v = complex_.cone_vertex()
        if v is not None:
            return CollapseCertificate(kind="cone", cone_vertex=v)
        cc = CellComplex.from_simplicial(complex_)
        return greedy_collapse(cc.cells, cc.boundary, seed=seed, restarts=restarts)
    if complex_.is_empty():
        raise ValueError("empty complex")
    return greedy_collapse(
        complex_.cells, complex_.boundary, seed=seed, restarts=restarts
    )


def replay_certificate(complex_, cert):
    """Machine-check a certificate against the complex it was issued for."""
    if cert.kind == "inconclusive":
        return False
    if isinstance(complex_, SimplicialComplex):
        if cert.kind == "cone":
            return all(cert.cone_vertex in m for m in complex_.maximal)
        cc = CellComplex.from_simplicial(complex_)
    else:
        if cert.kind == "cone":
            return False
        cc = complex_
    alive = set(cc.cells)
    strict_cofaces = {c: set() for c in alive}
    for c in alive:
        for b in cc.boundary[c]:
            strict_cofaces[b].add(c)
    for c in sorted(alive, key=lambda c: -cc.cells[c]):
        extra = set()
        for d in strict_cofaces[c]:
            extra |= strict_cofaces[d]
        strict_cofaces[c] |= extra
    live_cof = {c: set(strict_cofaces[c]) for c in alive}
    for sigma, tau in cert.pairs:
        if sigma not in alive or tau not in alive:
            return False
        if live_cof[sigma] != {tau}:
            return False
        if cc.cells[tau] != cc.cells[sigma] + 1:
            return False
        alive.discard(sigma)
        alive.discard(tau)
        for c in alive:
            live_cof[c].discard(sigma)
            live_cof[c].discard(tau)
    return alive == {cert.final_cell} and cc.cells[cert.final_cell] == 0


# ---------------------------------------------------------------------------
# the three link checks


_K = None


def flag_complex_k():
    """The flag complex on the facet adjacency graph (16 vertices, dim 4)."""
    global _K
    if _K is None:
        edges = [
            (i, j)
            for i in range(NUM_FACETS)
            for j in range(i + 1, NUM_FACETS)
            if poly.are_adjacent(FACETS[i], FACETS[j])
        ]
        _K = SimplicialComplex.flag_of_graph(range(NUM_FACETS), edges)
    return _K


def ascending_link(state, complex_k=None):
    K = complex_k or flag_complex_k()
    return K.induced(state.o_facets)


def descending_link(state, complex_k=None):
    K = complex_k or flag_complex_k()
    return K.induced(state.i_facets)


def octahedron_complex(incident_facets):
    """The 4-dimensional cross-polytope dual to an ideal vertex cube link.

    Vertices are the eight incident facet indices; simplices are the
    subsets containing no opposite (non-adjacent) pair."""
    inc = sorted(incident_facets)
    edges = [
        (a, b)
        for a, b in combinations(inc, 2)
        if poly.are_adjacent(FACETS[a], FACETS[b])
    ]
    return SimplicialComplex.flag_of_graph(inc, edges)


@dataclass
class LinkVerdict:
    name: str
    collapsible: bool
    certificates: tuple = ()
    details: dict = field(default_factory=dict)


def octahedron_link_check(state, vertex, seed=None):
    """Collapsibility of the ascending/descending links at an ideal vertex.

    Also certifies the structural witness: some opposite facet pair of the
    cube link carries opposite statuses, which makes each link a cone in
    the cross-polytope."""
    if not vertex.is_ideal:
        raise ValueError("expected an ideal vertex")
    inc, pairs = poly.ideal_vertex_link(vertex)
    oct_ = octahedron_complex(inc)
    witness = [
        (a, b) for a, b in pairs if state.status(a) != state.status(b)
    ]
    asc = oct_.induced([f for f in inc if state.status(f) == "O"])
    desc = oct_.induced([f for f in inc if state.status(f) == "I"])
    if asc.is_empty() or desc.is_empty():
        return LinkVerdict(
            name="octahedron", collapsible=False,
            details={"reason": "one-sided state", "witness_pairs": witness},
        )
    ca = collapse_to_point(asc, seed=seed)
    cd = collapse_to_point(desc, seed=seed)
    ok = bool(witness) and ca.collapsible and cd.collapsible
    return LinkVerdict(
        name="octahedron",
        collapsible=ok,
        certificates=(ca, cd),
        details={"witness_pairs": witness,
                 "complexes": (asc, desc)},
    )


def _prism_statuses(state, ridge_id, coloring):
    """Vertex statuses of the prism dual to a bad ridge.

    Prism vertex (apex a, base edge {i,j}): the status of the unique extra
    facet cutting the ridge in the triangle spanned by that apex and that
    pair of ideal vertices."""
    lat = poly.face_lattice()
    ridge = lat.faces[ridge_id]
    reals = sorted(ridge.real_vertices())
    ideals = sorted(ridge.ideal_vertices())
    assert len(reals) == 2 and len(ideals) == 3
    statuses = {}
    facet_at = {}
    for tri_id in lat.covers[ridge_id]:
        tri = lat.faces[tri_id]
        (real_v,) = tri.real_vertices()
        pair = frozenset(ideals.index(v) for v in tri.ideal_vertices())
        extra = sorted(tri.facets - ridge.facets)
        assert len(extra) == 1
        key = (reals.index(real_v), frozenset(pair))
        statuses[key] = state.status(extra[0])
        facet_at[key] = extra[0]
    assert len(statuses) == 6
    return statuses, facet_at


def _shape_of(cc):
    """Coarse shape classification used to match the two figure cases."""
    dims = sorted(cc.cells.values())
    if dims == [0]:
        return "point"
    if dims == [0, 0, 0, 1, 1, 1, 2]:
        return "triangle"
    if dims == [0, 0, 0, 1, 1]:
        verts_of = cc.vertices_of_cells()
        edges = [verts_of[c] for c in cc.cells if cc.cells[c] == 1]
        if len(edges) == 2 and len(edges[0] & edges[1]) == 1:
            return "path2"
    return "other"


def prism_link_check(state, ridge_id, coloring=None, seed=None):
    """Collapsibility at a bad-square barycenter.

    Builds the prism dual to the bad ridge with the six surrounding facet
    statuses, certifies its ascending/descending parts collapsible, and
    asserts they remain so after the join with the I,O,I,O square (two
    same-status isolated vertices on each side)."""
    coloring = coloring or find_standard_coloring()
    statuses, _ = _prism_statuses(state, ridge_id, coloring)
    prism = prism_complex()

    # prism vertex (apex a, base edge {i, j}) -> status key (a, {i, j})
    def status_of(v):
        a, e = v
        return statuses[(a, frozenset(e))]

    verts = [c for c in prism.cells if prism.cells[c] == 0]
    o_verts = [v for v in verts if status_of(v) == "O"]
    i_verts = [v for v in verts if status_of(v) == "I"]
    asc = prism.induced_on_vertices(o_verts)
    desc = prism.induced_on_vertices(i_verts)
    if asc.is_empty() or desc.is_empty():
        return LinkVerdict("prism", False, details={"reason": "one-sided"})
    ca = collapse_to_point(asc, seed=seed)
    cd = collapse_to_point(desc, seed=seed)
    # join stability with the bad square (two same-status points per side)
    asc_j = asc.join_with_points(["sqO1", "sqO2"])
    desc_j = desc.join_with_points(["sqI1", "sqI2"])
    cja = collapse_to_point(asc_j, seed=seed)
    cjd = collapse_to_point(desc_j, seed=seed)
    ok = all(c.collapsible for c in (ca, cd, cja, cjd))
    return LinkVerdict(
        name="prism",
        collapsible=ok,
        certificates=(ca, cd, cja, cjd),
        details={
            "shapes": (_shape_of(asc), _shape_of(desc)),
            "pattern": tuple(sorted((k, v) for k, v in statuses.items())),
            "complexes": (asc, desc, asc_j, desc_j),
        },
    )


def prism_square_face_check(state, ridge_id, ideal_position, coloring=None, seed=None):
    """Boundary bad squares: the prism's square face dual to one ideal
    vertex of the bad ridge, joined with the I,O,I,O square; ascending link
    must collapse, descending may additionally use the boundary cone point."""
    coloring = coloring or find_standard_coloring()
    statuses, _ = _prism_statuses(state, ridge_id, coloring)
    lat = poly.face_lattice()
    ideals = sorted(lat.faces[ridge_id].ideal_vertices())
    w = ideals.index(ideal_position) if ideal_position in ideals else ideal_position
    pairs_at_w = [frozenset(p) for p in combinations(range(3), 2) if w in p]
    # the square face: vertices (apex, edge at w), a 4-cycle
    cyc = [
        (0, pairs_at_w[0]),
        (0, pairs_at_w[1]),
        (1, pairs_at_w[1]),
        (1, pairs_at_w[0]),
    ]
    sq = square_complex(4)
    vid = {("v", i): cyc[i] for i in range(4)}

    def status_of(cell):
        return statuses[(vid[cell][0], vid[cell][1])]

    o_vs = [c for c in sq.cells if sq.cells[c] == 0 and status_of(c) == "O"]
    i_vs = [c for c in sq.cells if sq.cells[c] == 0 and status_of(c) == "I"]
    asc = sq.induced_on_vertices(o_vs)
    desc = sq.induced_on_vertices(i_vs)
    if asc.is_empty() or desc.is_empty():
        return LinkVerdict("prism-square", False, details={"reason": "one-sided"})
    asc_j = asc.join_with_points(["sqO1", "sqO2"])
    desc_j = desc.join_with_points(["sqI1", "sqI2"])
    certs = tuple(
        collapse_to_point(c, seed=seed) for c in (asc, desc, asc_j, desc_j)
    )
    return LinkVerdict(
        name="prism-square",
        collapsible=all(c.collapsible for c in certs),
        certificates=certs,
    )


# ---------------------------------------------------------------------------
# the full certificate


@dataclass
class FibrationCertificate:
    verdict: str  # "certified" | "failed" | "inconclusive"
    type1_checks: int
    type2_checks: int
    type3_checks: int
    distinct_states: int
    failures: list
    inconclusive: list
    certificates: dict  # name -> (complex, CollapseCertificate) samples

    @property
    def certified(self):
        return self.verdict == "certified"


def fibration_certificate(complex_, states, moves=None, coloring=None, seed=None,
                          collect=False):
    """Run the reduced link checks at every vertex of the subdivided
    decomposition: copy barycenters, boundary-cube barycenters, and
    bad-square barycenters (interior and boundary)."""
    moves = moves or canonical_move_set()
    coloring = coloring or complex_.coloring or find_standard_coloring()
    skel = OrientedDualSkeleton(complex_, states, moves, coloring)
    cube_report = skel.classify_cubes()
    failures = []
    inconclusive = []
    all_certs = []

    if cube_report["unclassifiable"]:
        failures.extend(("cube", w) for w in cube_report["unclassifiable"])

    K = flag_complex_k()
    lat = complex_.base.lattice

    # type 1: one check per copy, dedup by state
    seen_states = {}
    type1 = 0
    for copy in complex_.copies:
        type1 += 1
        s = states[copy]
        if s in seen_states:
            continue
        asc, desc = ascending_link(s, K), descending_link(s, K)
        if asc.is_empty() or desc.is_empty():
            failures.append(("type1", copy, "one-sided state"))
            continue
        ca = collapse_to_point(asc, seed=seed)
        cd = collapse_to_point(desc, seed=seed)
        seen_states[s] = (ca, cd)
        for c, cx in ((ca, asc), (cd, desc)):
            if c.kind == "inconclusive":
                inconclusive.append(("type1", copy))
            all_certs.append((cx, c))

    # type 2: boundary cube barycenters, dedup by (state, vertex)
    seen2 = set()
    type2 = 0
    for cls in complex_.face_classes(rank=0):
        for copy, loc in cls:
            if not complex_.base.is_ideal_vertex[loc]:
                continue
            type2 += 1
            (v_idx,) = lat.faces[loc].vertices
            v = poly.VERTICES[v_idx]
            key = (states[copy], v)
            if key in seen2:
                continue
            seen2.add(key)
            verdict = octahedron_link_check(states[copy], v, seed=seed)
            if not verdict.collapsible:
                failures.append(("type2", (copy, v_idx)))
            for c in verdict.certificates:
                if c.kind == "inconclusive":
                    inconclusive.append(("type2", (copy, v_idx)))
            if verdict.details.get("complexes"):
                for cx, c in zip(verdict.details["complexes"], verdict.certificates):
                    all_certs.append((cx, c))

    # type 3: bad square barycenters, interior and boundary
    from .states import bad_ridges as _bad_ridges

    bad = set(_bad_ridges(coloring, moves))
    seen3 = set()
    seen3b = set()
    type3 = 0
    for rid in bad:
        for copy in complex_.copies:
            type3 += 1
            s = states[copy]
            key = (s, rid)
            if key not in seen3:
                seen3.add(key)
                verdict = prism_link_check(s, rid, coloring, seed=seed)
                if not verdict.collapsible:
                    failures.append(("type3", (copy, rid)))
                for c in verdict.certificates:
                    if c.kind == "inconclusive":
                        inconclusive.append(("type3", (copy, rid)))
                if verdict.details.get("complexes"):
                    for cx, c in zip(verdict.details["complexes"],
                                     verdict.certificates):
                        all_certs.append((cx, c))
            for w in range(3):
                keyb = (s, rid, w)
                if keyb in seen3b:
                    continue
                seen3b.add(keyb)
                verdict = prism_square_face_check(s, rid, w, coloring, seed=seed)
                if not verdict.collapsible:
                    failures.append(("type3-boundary", (copy, rid, w)))
                for c in verdict.certificates:
                    if c.kind == "inconclusive":
                        inconclusive.append(("type3-boundary", (copy, rid, w)))

    verdict = "certified"
    if inconclusive:
        verdict = "inconclusive"
    if failures:
        verdict = "failed"
    return FibrationCertificate(
        verdict=verdict,
        type1_checks=type1,
        type2_checks=type2,
        type3_checks=type3,
        distinct_states=len(seen_states),
        failures=failures,
        inconclusive=inconclusive,
        certificates={"samples": all_certs if collect else all_certs[:8]},
    )
