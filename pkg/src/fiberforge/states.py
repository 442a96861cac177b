"""States, moves, balanced states, and the oriented dual skeleton.

A state splits the 16 facets into I (in) and O (out); a move set is a
partition of the 8 colors whose blocks act on states by flipping every
facet colored in the block.  Crossing a facet of color i flips exactly
the block containing i, which orients the edges of the dual cubulation
and singles out the bad squares that must be subdivided.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import polytope as poly
from .coloring import NUM_COLORS, Coloring, PolytopalComplex, find_standard_coloring
from .polytope import FACETS, FACET_INDEX, NUM_FACETS

# ---------------------------------------------------------------------------
# states


@dataclass(frozen=True)
class State:
    """I/O assignment on the 16 facets, stored as the set of I facet indices."""

    i_facets: frozenset

    def status(self, fi):
        return "I" if fi in self.i_facets else "O"

    def is_in(self, fi):
        return fi in self.i_facets

    @property
    def o_facets(self):
        return frozenset(range(NUM_FACETS)) - self.i_facets

    def reversed(self):
        return State(self.o_facets)

    def io_string(self):
        """Statuses in lexicographic facet order, e.g. 'IOOI...'."""
        return "".join(self.status(fi) for fi in range(NUM_FACETS))

    @classmethod
    def from_io_string(cls, s):
        if len(s) != NUM_FACETS or any(c not in "IO" for c in s):
            raise ValueError("bad IO string: %r" % s)
        return cls(frozenset(i for i, c in enumerate(s) if c == "I"))


@dataclass(frozen=True)
class MoveSet:
    """A partition of the colors 1..8 into moves (blocks)."""

    blocks: tuple  # tuple of frozensets

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            assert not (b & seen), "blocks must be disjoint"
            seen |= b
        assert seen == set(range(1, NUM_COLORS + 1)), "blocks must cover all colors"

    def block_of(self, color):
        for b in self.blocks:
            if color in b:
                return b
        raise KeyError(color)

    @classmethod
    def from_lists(cls, lists):
        return cls(tuple(sorted((frozenset(b) for b in lists), key=sorted)))


def canonical_move_set():
    return MoveSet.from_lists([{1, 5}, {2, 6}, {3, 7}, {4, 8}])


def singleton_move_set():
    return MoveSet.from_lists([{c} for c in range(1, NUM_COLORS + 1)])


def apply_move(state, block, coloring=None):
    """Flip the status of every facet whose color lies in the block."""
    coloring = coloring or find_standard_coloring()
    flip = frozenset(
        fi for fi in range(NUM_FACETS) if coloring.colors[fi] in block
    )
    return State(state.i_facets ^ flip)


# ---------------------------------------------------------------------------
# quartets and balanced states


@dataclass(frozen=True)
class Quartet:
    """The four facets colored t or t+4, split into its two adjacent pairs."""

    t: int
    pairs: tuple  # ((low_facet_idx, high_facet_idx), (low, high))

    @property
    def facets(self):
        return frozenset(f for p in self.pairs for f in p)


def quartets(coloring=None):
    coloring = coloring or find_standard_coloring()
    out = []
    for t in range(1, 5):
        pairs = coloring.adjacent_pairs(t)
        assert pairs is not None
        out.append(
            Quartet(
                t,
                tuple(
                    (FACET_INDEX[low], FACET_INDEX[high]) for low, high in pairs
                ),
            )
        )
    return out


def enumerate_balanced(coloring=None):
    """The 16 balanced states: per quartet, one adjacent pair I, the other O."""
    qs = quartets(coloring)
    states = [frozenset()]
    for q in qs:
        states = [
            s | set(pick)
            for s in states
            for pick in (q.pairs[0], q.pairs[1])
        ]
    out = sorted((State(frozenset(s)) for s in states), key=lambda s: s.io_string())
    assert len(out) == 16
    return out


def is_balanced(state, coloring=None):
    for q in quartets(coloring):
        picks = [p for p in q.pairs if set(p) <= state.i_facets]
        others = [p for p in q.pairs if not (set(p) & state.i_facets)]
        if len(picks) != 1 or len(others) != 1:
            return False
    return True


def distinguished_facet(state, coloring=None):
    """The unique I facet adjacent to every other I facet (balanced states)."""
    i_set = sorted(state.i_facets)
    hubs = [
        f
        for f in i_set
        if all(poly.are_adjacent(FACETS[f], FACETS[g]) for g in i_set if g != f)
    ]
    if len(hubs) != 1:
        raise ValueError("state has no unique all-incident I facet")
    return hubs[0]


def canonical_initial_state(coloring=None):
    """The balanced state whose all-incident I facet has color 8
    (lexicographically least of the two candidates)."""
    coloring = coloring or find_standard_coloring()
    cands = [
        s
        for s in enumerate_balanced(coloring)
        if coloring.colors[distinguished_facet(s, coloring)] == 8
    ]
    assert cands
    return cands[0]


# ---------------------------------------------------------------------------
# state assignment over copies


def assign_states(s0, moves, v, coloring=None):
    """State of copy v: apply each block whose coordinate sum over v is odd."""
    coloring = coloring or find_standard_coloring()
    s = s0
    for block in moves.blocks:
        sigma = sum((v >> (i - 1)) & 1 for i in block) % 2
        if sigma:
            s = apply_move(s, block, coloring)
    return s


def assign_all_states(s0, moves, coloring=None):
    coloring = coloring or find_standard_coloring()
    return {v: assign_states(s0, moves, v, coloring) for v in range(256)}


# ---------------------------------------------------------------------------
# sparseness


def partitions_of_colors():
    """All partitions of {1..8}, enumerated by restricted growth strings."""
    n = NUM_COLORS
    out = []

    def grow(prefix, maxblock):
        if len(prefix) == n:
            blocks = {}
            for i, b in enumerate(prefix):
                blocks.setdefault(b, set()).add(i + 1)
            out.append(MoveSet.from_lists(blocks.values()))
            return
        for b in range(maxblock + 2):
            grow(prefix + [b], max(maxblock, b))

    grow([0], 0)
    return out


def is_sparse(coloring, moves):
    """Every block's facets pairwise disjoint (non-adjacent and distinct)."""
    classes = coloring.classes()
    for block in moves.blocks:
        facets = [fi for c in block for fi in classes[c]]
        for a, b in combinations(facets, 2):
            if poly.are_adjacent(FACETS[a], FACETS[b]):
                return False
    return True


def sparse_move_sets(coloring=None):
    coloring = coloring or find_standard_coloring()
    return [S for S in partitions_of_colors() if is_sparse(coloring, S)]


# ---------------------------------------------------------------------------
# bad ridges


def bad_ridges(coloring=None, moves=None):
    """Lattice ids of the ridges whose two facet colors share a block."""
    coloring = coloring or find_standard_coloring()
    moves = moves or canonical_move_set()
    lat = poly.face_lattice()
    out = []
    for rid in lat.by_rank[3]:
        f1, f2 = sorted(lat.faces[rid].facets)
        if moves.block_of(coloring.colors[f1]) is moves.block_of(
            coloring.colors[f2]
        ) or moves.block_of(coloring.colors[f1]) == moves.block_of(
            coloring.colors[f2]
        ):
            out.append(rid)
    return out


def bad_ridges_pairwise_disjoint(ridge_ids):
    """Disjointness in the truncated polytope: two bad ridges share no real
    vertex and no face of positive rank (they may limit to a common ideal
    point, which the truncation removes)."""
    lat = poly.face_lattice()
    for a, b in combinations(ridge_ids, 2):
        common = lat.faces[a].vertices & lat.faces[b].vertices
        if any(not poly.VERTICES[v].is_ideal for v in common):
            return False
        for f in lat.faces:
            if f.rank >= 1 and f.vertices <= common:
                return False
    return True


# ---------------------------------------------------------------------------
# R16 action on colors, with status-reversal bars


def color_action_with_bars(g, state, coloring=None):
    """The color permutation of g plus the set of barred positions.

    Position i is barred when g carries the i-colored pair onto its image
    pair while reversing both statuses of the given balanced state.
    """
    coloring = coloring or find_standard_coloring()
    classes = coloring.classes()
    perm = [0] * NUM_COLORS
    bars = set()
    for c in range(1, NUM_COLORS + 1):
        images = {FACET_INDEX[g.apply_facet(FACETS[fi])] for fi in classes[c]}
        target_colors = {coloring.colors[fi] for fi in images}
        assert len(target_colors) == 1, "isometry must preserve the coloring"
        perm[c - 1] = next(iter(target_colors))
        flips = {
            state.status(FACET_INDEX[g.apply_facet(FACETS[fi])]) != state.status(fi)
            for fi in classes[c]
        }
        assert len(flips) == 1, "pair statuses move together"
        if flips.pop():
            bars.add(c)
    return tuple(perm), frozenset(bars)


def r16_state_action(g, state):
    """The image state: g carries facets with their statuses."""
    return State(
        frozenset(
            FACET_INDEX[g.apply_facet(FACETS[fi])] for fi in state.i_facets
        )
    )


# ---------------------------------------------------------------------------
# oriented dual skeleton


@dataclass
class SquareInfo:
    ridge_class_rep: tuple  # (copy, local ridge id)
    corner_count: int
    bad: bool
    corner_pattern: tuple  # per corner, (status of facet 1, status of facet 2)


class OrientedDualSkeleton:
    """Edge orientations of the dual cubulation induced by states and moves.

    Interior dual edges run from the O-side copy to the I-side copy of the
    facet they cross; edges meeting the boundary point towards it, and
    boundary edges copy the parallel interior edge.  The object records the
    square and cube classification derived from these orientations.
    """

    def __init__(self, complex_, states, moves, coloring=None):
        self.complex = complex_
        self.states = dict(states)
        self.moves = moves
        self.coloring = coloring or complex_.coloring or find_standard_coloring()
        self._verify_crossing_rule()
        self.squares = self._classify_squares()

    # interior edges -----------------------------------------------------

    def edge_orientation(self, copy, facet_idx):
        """(tail copy, head copy) of the dual edge crossing the given facet."""
        base = self.complex.base
        loc = base.facet_local[facet_idx]
        c2, loc2, iso = self.complex.gluings[(copy, loc)]
        k2 = base.facet_key_of_local[loc2]
        here = self.states[copy].status(facet_idx)
        there = self.states[c2].status(k2)
        assert here != there, "crossing a facet must flip its status"
        return (copy, c2) if here == "I" else (c2, copy)

    def _verify_crossing_rule(self):
        base = self.complex.base
        for copy in self.complex.copies:
            s = self.states[copy]
            for k in range(NUM_FACETS):
                loc = base.facet_local[k]
                c2, loc2, iso = self.complex.gluings[(copy, loc)]
                k2 = base.facet_key_of_local[loc2]
                block = self.moves.block_of(self.coloring.colors[k])
                s2 = self.states[c2]
                g = iso
                for j in range(NUM_FACETS):
                    jf = FACETS[j]
                    j2 = FACET_INDEX[g.apply_facet(jf)] if g is not None else j
                    flipped = s.status(j) != s2.status(j2)
                    expect = self.coloring.colors[j] in block
                    assert flipped == expect, (
                        "crossing a facet must flip exactly its block"
                    )

    # squares --------------------------------------------------------------

    def _ridge_corners(self, copy, ridge_loc):
        """The 4 corners around a ridge: (copy, facet statuses of its 2 sides)."""
        base = self.complex.base
        sides = self.complex._local_facets_of(ridge_loc)
        assert len(sides) == 2
        corners = []
        c, r, side = copy, ridge_loc, sides[0]
        for _ in range(4):
            fks = sorted(
                base.facet_key_of_local[f] for f in self.complex._local_facets_of(r)
            )
            corners.append(
                (c, tuple(self.states[c].status(k) for k in fks), tuple(fks))
            )
            c2, side_img, iso = self.complex.gluings[(c, side)]
            fmap = base.face_map(iso)
            r2 = r if fmap is None else fmap[r]
            others = [f for f in self.complex._local_facets_of(r2) if f != side_img]
            c, r, side = c2, r2, others[0]
        assert (c, r, side) == (copy, ridge_loc, sides[0])
        return corners

    def _classify_squares(self):
        base = self.complex.base
        out = []
        for cls in self.complex.face_classes(rank=base.max_rank - 2):
            copy, loc = cls[0]
            fks = sorted(
                base.facet_key_of_local[f] for f in self.complex._local_facets_of(loc)
            )
            c1, c2 = (self.coloring.colors[k] for k in fks)
            bad = self.moves.block_of(c1) == self.moves.block_of(c2)
            corners = self._ridge_corners(copy, loc)
            pattern = tuple(st for (_, st, _) in corners)
            if bad:
                # both statuses agree at each corner and alternate around
                assert all(a == b for a, b in pattern), "bad square statuses"
                seq = [a for a, _ in pattern]
                assert seq[0] != seq[1] and seq[0] == seq[2] and seq[1] == seq[3]
            else:
                # crossing one facet leaves the other status unchanged
                (a0, b0), (a1, b1), (a2, b2), (a3, b3) = pattern
                assert a0 != a1 and b0 == b1 and b1 != b2 and a1 == a2
            out.append(
                SquareInfo(
                    ridge_class_rep=cls[0],
                    corner_count=len(corners),
                    bad=bad,
                    corner_pattern=pattern,
                )
            )
        return out

    def bad_square_classes(self):
        return [sq for sq in self.squares if sq.bad]

    # cubes ------------------------------------------------------------------

    def classify_cubes(self):
        """Good/bad labels for every dual cube (interior strata and boundary
        strata of every dimension).  A cube is bad when exactly one pair of
        its directions shares a move block; two such pairs would be
        unclassifiable and are reported."""
        base = self.complex.base
        report = {"good": {}, "bad": {}, "unclassifiable": []}

        def classify(face_colors, where, dim):
            pairs = [
                (a, b)
                for a, b in combinations(sorted(face_colors), 2)
                if self.moves.block_of(a) == self.moves.block_of(b)
            ]
            if len(pairs) == 0:
                report["good"][dim] = report["good"].get(dim, 0) + 1
            elif len(pairs) == 1:
                report["bad"][dim] = report["bad"].get(dim, 0) + 1
            else:
                report["unclassifiable"].append(where)

        lat = base.lattice
        for rank in range(0, base.max_rank - 1):
            for cls in self.complex.face_classes(rank=rank):
                copy, loc = cls[0]
                if rank == 0 and base.is_ideal_vertex[loc]:
                    continue
                fks = lat.faces[loc].facets
                colors = [self.coloring.colors[k] for k in fks]
                assert len(set(colors)) == len(colors)
                classify(colors, ("interior", cls[0]), len(colors))
        # boundary strata: (face, ideal vertex) flags
        for rank in range(1, base.max_rank):
            for cls in self.complex.face_classes(rank=rank):
                copy, loc = cls[0]
                face = lat.faces[loc]
                fks = face.facets
                colors = [self.coloring.colors[k] for k in fks]
                for v in face.ideal_vertices():
                    classify(colors, ("boundary", cls[0], v), len(colors))
        return report

    # boundary tori -----------------------------------------------------------

    def boundary_torus_analysis(self):
        """Per-cusp fibration certificates.

        Small cusps: the restricted state is balanced on opposite cube
        facets and the restricted moves are the opposite-facet pairs.
        Large cusps: a single block gives a cube-opposite facet pair with
        opposite statuses (the preferred direction); the other blocks give
        adjacent pairs with equal statuses, and all orientations are
        invariant under a unit translation along the preferred direction.
        """
        reports = []
        for cusp in self.complex.cusp_census():
            if cusp.kind == "small":
                reports.append(self._analyze_small(cusp))
            elif cusp.kind == "large":
                reports.append(self._analyze_large(cusp))
            else:
                reports.append(
                    {"cusp": cusp.representative, "kind": cusp.kind,
                     "certified": False, "reason": "not a cubic torus cusp"}
                )
        return reports

    def _vertex_of_local(self, loc):
        lat = self.complex.base.lattice
        (v,) = lat.faces[loc].vertices
        return poly.VERTICES[v]

    def _analyze_small(self, cusp):
        ok = True
        for copy, loc in cusp.members:
            v = self._vertex_of_local(loc)
            inc = sorted(v.incident_facets())
            colors = [self.coloring.colors[k] for k in inc]
            by_color = {}
            for k in inc:
                by_color.setdefault(self.coloring.colors[k], []).append(k)
            if len(by_color) != 4 or any(len(v_) != 2 for v_ in by_color.values()):
                ok = False
                break
            blocks_hit = {frozenset(self.moves.block_of(c)) for c in by_color}
            if len(blocks_hit) != 4:
                ok = False
                break
            s = self.states[copy]
            for c, (k1, k2) in by_color.items():
                if poly.are_adjacent(FACETS[k1], FACETS[k2]):
                    ok = False
                if s.status(k1) == s.status(k2):
                    ok = False
        return {
            "cusp": cusp.representative,
            "kind": "small",
            "certified": ok,
            "pattern": "diagonal",
        }

    def _analyze_large(self, cusp):
        rep_copy, rep_loc = cusp.representative
        v = self._vertex_of_local(rep_loc)
        inc = sorted(v.incident_facets())
        colors = [self.coloring.colors[k] for k in inc]
        if len(set(colors)) != 8:
            return {"cusp": cusp.representative, "kind": "large",
                    "certified": False, "reason": "colors not distinct"}
        facet_of_color = {self.coloring.colors[k]: k for k in inc}
        preferred = []
        for block in self.moves.blocks:
            ks = [facet_of_color[c] for c in sorted(block)]
            if len(ks) == 2 and not poly.are_adjacent(FACETS[ks[0]], FACETS[ks[1]]):
                preferred.append(block)
        if len(preferred) != 1:
            return {"cusp": cusp.representative, "kind": "large",
                    "certified": False, "reason": "no unique opposite pair"}
        pref = preferred[0]
        ok = True
        for copy, loc in cusp.members:
            s = self.states[copy]
            for block in self.moves.blocks:
                ks = [facet_of_color[c] for c in sorted(block)]
                same = s.status(ks[0]) == s.status(ks[1])
                if block == pref and same:
                    ok = False
                if block != pref and not same:
                    ok = False
            # unit translation along the preferred direction preserves the
            # statuses of all non-preferred facets
            for c in sorted(pref):
                k = facet_of_color[c]
                c2 = copy ^ (1 << (self.coloring.colors[k] - 1))
                s2 = self.states[c2]
                for j in inc:
                    if self.coloring.colors[j] in pref:
                        continue
                    if s.status(j) != s2.status(j):
                        ok = False
        return {
            "cusp": cusp.representative,
            "kind": "large",
            "certified": ok,
            "preferred_block": sorted(pref),
        }


def orient_dual_edges(complex_, s0, moves, coloring=None):
    """Assign states to all copies and build the oriented dual skeleton."""
    coloring = coloring or complex_.coloring or find_standard_coloring()
    states = assign_all_states(s0, moves, coloring)
    return OrientedDualSkeleton(complex_, states, moves, coloring)
