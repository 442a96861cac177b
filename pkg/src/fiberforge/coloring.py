"""Facet coloring and assembly of manifolds from colored polytope copies.

A proper 8-coloring on the 16 facets drives the gluing: one copy of the
polytope per vector in (Z_2)^8, with the facet of color i attaching copy
v to copy v+e_i by the identity.  The same machinery also hosts arbitrary
isometric facet pairings (two-copy quotients), derived sub-complexes over
a face, and the cusp census.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

from . import polytope as poly
from .polytope import DIM, FACETS, FACET_INDEX, NUM_FACETS, SignedPermutation

NUM_COLORS = 8

# color permutations induced by the generating symmetries (1-based images,
# bars ignored); these pin the coloring down to a compatible relabeling
GENERATOR_COLOR_ACTION = {
    "i": (2, 1, 4, 3, 6, 5, 8, 7),
    "j": (3, 4, 1, 2, 7, 8, 5, 6),
    "k": (4, 3, 2, 1, 8, 7, 6, 5),
    "iota": (5, 6, 8, 7, 1, 2, 4, 3),
}


def rho(facet):
    """Negate the first four coordinates; pairs of facets sharing a color."""
    return tuple(-x for x in facet[:4]) + (facet[4],)


def rho_pairs():
    """The 8 unordered facet pairs {w, rho(w)}, deterministically ordered."""
    pairs = {frozenset((f, rho(f))) for f in FACETS}
    return sorted(tuple(sorted(p)) for p in pairs)


@dataclass(frozen=True)
class Coloring:
    """Assignment of colors 1..8 to the 16 facets (by facet index)."""

    colors: tuple

    def color(self, facet):
        return self.colors[FACET_INDEX[facet]]

    def color_of_index(self, fi):
        return self.colors[fi]

    def classes(self):
        out = {c: [] for c in range(1, NUM_COLORS + 1)}
        for fi, c in enumerate(self.colors):
            out[c].append(fi)
        return {c: frozenset(v) for c, v in out.items()}

    def is_proper(self):
        return all(
            self.colors[i] != self.colors[j]
            for i in range(NUM_FACETS)
            for j in range(i + 1, NUM_FACETS)
            if poly.are_adjacent(FACETS[i], FACETS[j])
        )

    def adjacent_pairs(self, t):
        """The two adjacent pairs of the quartet colored {t, t+4}.

        Each pair is (facet colored t, facet colored t+4), the two normals
        differing exactly at coordinates t and 5.
        """
        lows = [FACETS[i] for i in range(NUM_FACETS) if self.colors[i] == t]
        highs = [FACETS[i] for i in range(NUM_FACETS) if self.colors[i] == t + 4]
        pairs = []
        for f in lows:
            mates = [
                g
                for g in highs
                if [k for k in range(DIM) if f[k] != g[k]] == [t - 1, 4]
            ]
            if len(mates) != 1:
                return None
            pairs.append((f, mates[0]))
        return pairs if len(pairs) == 2 else None


def _color_action_of(g, coloring):
    """Color permutation induced by an isometry, or None if colors break."""
    image = {}
    for fi in range(NUM_FACETS):
        src = coloring.colors[fi]
        dst = coloring.colors[FACET_INDEX[g.apply_facet(FACETS[fi])]]
        if image.setdefault(src, dst) != dst:
            return None
    return tuple(image[c] for c in range(1, NUM_COLORS + 1))


def color_action(g, coloring):
    """The permutation of {1..8} induced by g (g must preserve the coloring)."""
    act = _color_action_of(g, coloring)
    if act is None:
        raise ValueError("isometry does not preserve the coloring")
    return act


def _generator_isometries():
    q = poly.quaternion_maps()
    return {
        "i": q["i"],
        "j": q["j"],
        "k": q["k"],
        "iota": poly.involution_iota(),
    }


def all_standard_colorings():
    """Every color assignment satisfying the pairing, quartet and symmetry
    constraints.  Exhaustive over the 8! ways of labeling the rho-pairs."""
    pairs = rho_pairs()
    gens = _generator_isometries()
    out = []
    for perm in permutations(range(1, NUM_COLORS + 1)):
        colors = [0] * NUM_FACETS
        for pair, c in zip(pairs, perm):
            for f in pair:
                colors[FACET_INDEX[f]] = c
        cand = Coloring(tuple(colors))
        if any(cand.adjacent_pairs(t) is None for t in range(1, 5)):
            continue
        ok = True
        for name, g in gens.items():
            act = _color_action_of(g, cand)
            if act != GENERATOR_COLOR_ACTION[name]:
                ok = False
                break
        if ok:
            assert cand.is_proper()
            out.append(cand)
    return out


_STANDARD = None


def find_standard_coloring():
    """The canonical coloring (first solution in deterministic search order)."""
    global _STANDARD
    if _STANDARD is None:
        sols = all_standard_colorings()
        if not sols:
            raise RuntimeError("no coloring satisfies the constraints")
        _STANDARD = sols[0]
    return _STANDARD


# ---------------------------------------------------------------------------
# bases: the local cell structure carried by every copy of a complex


class PolytopeBase:
    """The full polytope as the base cell of a complex."""

    def __init__(self):
        lat = poly.face_lattice()
        self.lattice = lat
        self.num_faces = len(lat.faces)
        self.rank = tuple(f.rank for f in lat.faces)
        self.max_rank = DIM
        self.top = lat.top
        self.facet_local = tuple(lat.facet_face[k] for k in range(NUM_FACETS))
        self.facet_key_of_local = {
            lat.facet_face[k]: k for k in range(NUM_FACETS)
        }
        self.is_ideal_vertex = tuple(
            f.rank == 0 and poly.VERTICES[next(iter(f.vertices))].is_ideal
            for f in lat.faces
        )
        self.faces_in_facet = {
            loc: tuple(sorted(lat.subfaces[loc])) + (loc,)
            for loc in self.facet_local
        }
        self.subfaces = lat.subfaces
        self.covers = lat.covers
        self._face_perm_cache = {}

    def face_map(self, iso):
        """Array local face -> local face for an isometry (None = identity)."""
        if iso is None or iso.is_identity:
            return None
        if iso not in self._face_perm_cache:
            self._face_perm_cache[iso] = poly.face_permutation(iso, self.lattice)
        return self._face_perm_cache[iso]

    def facets_containing(self, local_face):
        return tuple(sorted(self.lattice.faces[local_face].facets))

    def describe_face(self, local_face):
        f = self.lattice.faces[local_face]
        return {"rank": f.rank, "vertices": sorted(f.vertices)}


_BASE = None


def polytope_base():
    global _BASE
    if _BASE is None:
        _BASE = PolytopeBase()
    return _BASE


class FaceBase:
    """A single face of the polytope as the base cell (for sub-complexes)."""

    def __init__(self, face_id):
        lat = poly.face_lattice()
        self.lattice = lat
        self.face_id = face_id
        members = sorted(lat.subfaces[face_id]) + [face_id]
        self.local_of_global = {g: i for i, g in enumerate(members)}
        self.global_of_local = members
        self.num_faces = len(members)
        self.rank = tuple(lat.faces[g].rank for g in members)
        self.max_rank = lat.faces[face_id].rank
        self.top = self.local_of_global[face_id]
        self.facet_local = tuple(
            self.local_of_global[g] for g in sorted(lat.covers[face_id])
        )
        self.facet_key_of_local = {loc: loc for loc in self.facet_local}
        self.is_ideal_vertex = tuple(
            lat.faces[g].rank == 0
            and poly.VERTICES[next(iter(lat.faces[g].vertices))].is_ideal
            for g in members
        )
        self.faces_in_facet = {
            loc: tuple(
                self.local_of_global[g]
                for g in sorted(lat.subfaces[self.global_of_local[loc]])
            )
            + (loc,)
            for loc in self.facet_local
        }
        self.subfaces = [
            [self.local_of_global[g]
             for g in lat.subfaces[self.global_of_local[i]]
             if g in self.local_of_global]
            for i in range(self.num_faces)
        ]
        self.covers = [
            [self.local_of_global[g]
             for g in lat.covers[self.global_of_local[i]]
             if g in self.local_of_global]
            for i in range(self.num_faces)
        ]

    def face_map(self, iso):
        if iso is None or iso.is_identity:
            return None
        raise NotImplementedError("sub-complexes only support identity gluings")

    def facets_containing(self, local_face):
        g = self.global_of_local[local_face]
        face = self.lattice.faces[g]
        top = self.lattice.faces[self.face_id]
        return tuple(sorted(face.facets - top.facets)) if face is not top else ()


# ---------------------------------------------------------------------------
# union-find


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        out = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return out


# ---------------------------------------------------------------------------
# the glued complex


@dataclass(frozen=True)
class CuspClass:
    """An ideal-vertex class of a complex with its section data."""

    representative: tuple  # (copy, local vertex face)
    members: tuple  # all (copy, local vertex face) pairs
    cube_count: int

    @property
    def kind(self):
        return {256: "large", 16: "small"}.get(self.cube_count, "other")


class PolytopalComplex:
    """Finitely many copies of a base cell with isometric facet gluings."""

    def __init__(self, base, copies, gluings, coloring=None):
        self.base = base
        self.copies = tuple(copies)
        self.copy_index = {c: i for i, c in enumerate(self.copies)}
        self.gluings = dict(gluings)
        self.coloring = coloring
        self._face_uf = None
        self.validate()

    # -- structural checks ---------------------------------------------

    def validate(self):
        for c in self.copies:
            for loc in self.base.facet_local:
                key = (c, loc)
                if key not in self.gluings:
                    if self._facet_may_be_boundary(loc):
                        continue
                    raise ValueError("unglued facet %r" % (key,))
                c2, loc2, iso = self.gluings[key]
                if (c2, loc2) == (c, loc):
                    raise ValueError("facet glued to itself: %r" % (key,))
                back = self.gluings.get((c2, loc2))
                if back is None or back[0] != c or back[1] != loc:
                    raise ValueError("pairing not involutive at %r" % (key,))
                iso_b = back[2]
                g = iso or SignedPermutation.identity()
                gb = iso_b or SignedPermutation.identity()
                if not g.compose(gb).is_identity:
                    raise ValueError("gluing isometries not inverse at %r" % (key,))
                fmap = self.base.face_map(iso)
                img = loc if fmap is None else fmap[loc]
                if img != loc2:
                    raise ValueError("isometry does not carry facet at %r" % (key,))

    def _facet_may_be_boundary(self, loc):
        # only rank-0 facets of 1-dimensional bases (ideal endpoints)
        return self.base.rank[loc] == 0 and self.base.is_ideal_vertex[loc]

    # -- face classes ----------------------------------------------------

    def _instance(self, copy, local_face):
        return self.copy_index[copy] * self.base.num_faces + local_face

    def _uninstance(self, inst):
        ci, loc = divmod(inst, self.base.num_faces)
        return self.copies[ci], loc

    def face_union_find(self):
        if self._face_uf is None:
            nf = self.base.num_faces
            uf = UnionFind(len(self.copies) * nf)
            for (c, loc), (c2, loc2, iso) in self.gluings.items():
                ci = self.copy_index[c] * nf
                ci2 = self.copy_index[c2] * nf
                fmap = self.base.face_map(iso)
                if fmap is None:
                    for f in self.base.faces_in_facet[loc]:
                        uf.union(ci + f, ci2 + f)
                else:
                    for f in self.base.faces_in_facet[loc]:
                        uf.union(ci + f, ci2 + fmap[f])
            self._face_uf = uf
        return self._face_uf

    def face_classes(self, rank=None):
        """Face classes as lists of (copy, local face), optionally one rank."""
        uf = self.face_union_find()
        out = {}
        for inst in range(len(self.copies) * self.base.num_faces):
            loc = inst % self.base.num_faces
            if rank is not None and self.base.rank[loc] != rank:
                continue
            out.setdefault(uf.find(inst), []).append(self._uninstance(inst))
        return sorted(out.values())

    def class_counts_by_rank(self):
        uf = self.face_union_find()
        roots = {}
        for inst in range(len(self.copies) * self.base.num_faces):
            r = uf.find(inst)
            if r not in roots:
                roots[r] = self.base.rank[r % self.base.num_faces]
        counts = [0] * (self.base.max_rank + 1)
        for rank in roots.values():
            counts[rank] += 1
        return tuple(counts)

    # -- ridge cycles ------------------------------------------------------

    def ridge_cycle_lengths(self):
        """Traverse the cycle of copies around every codimension-2 class.

        Returns the multiset of cycle lengths; a consistent right-angled
        gluing gives length 4 everywhere with trivial holonomy.
        """
        lengths = {}
        seen = set()
        ridge_rank = self.base.max_rank - 2
        for c in self.copies:
            for loc in range(self.base.num_faces):
                if self.base.rank[loc] != ridge_rank:
                    continue
                for side in self.base.facets_containing_local(loc) if hasattr(
                    self.base, "facets_containing_local"
                ) else self._local_facets_of(loc):
                    start = (c, loc, side)
                    if start in seen:
                        continue
                    cycle = self._traverse_ridge(start, seen)
                    lengths[cycle] = lengths.get(cycle, 0) + 1
        return lengths

    def _local_facets_of(self, loc):
        """Local ids of the base facets containing a given local face."""
        return tuple(
            fl for fl in self.base.facet_local if loc in self.base.faces_in_facet[fl]
        )

    def _traverse_ridge(self, start, seen):
        copy, r, side = start
        hol = SignedPermutation.identity()
        steps = 0
        while True:
            seen.add((copy, r, side))
            c2, side_img, iso = self.gluings[(copy, side)]
            g = iso or SignedPermutation.identity()
            fmap = self.base.face_map(iso)
            r2 = r if fmap is None else fmap[r]
            others = [f for f in self._local_facets_of(r2) if f != side_img]
            assert len(others) == 1, "a ridge lies in exactly two facets"
            copy, r, side = c2, r2, others[0]
            hol = g.compose(hol)
            steps += 1
            if (copy, r, side) == start:
                assert hol.is_identity, "nontrivial holonomy around a ridge"
                return steps
            if steps > 64:
                raise RuntimeError("ridge cycle does not close")

    # -- connectivity and cusps -------------------------------------------

    def components(self):
        uf = UnionFind(len(self.copies))
        for (c, _), (c2, _, _) in self.gluings.items():
            uf.union(self.copy_index[c], self.copy_index[c2])
        groups = uf.classes()
        return [sorted(self.copies[i] for i in members) for members in groups.values()]

    def cusp_census(self):
        """Ideal-vertex classes with their section cube counts."""
        out = []
        for cls in self.face_classes(rank=0):
            _, loc0 = cls[0]
            if not self.base.is_ideal_vertex[loc0]:
                continue
            out.append(
                CuspClass(representative=cls[0], members=tuple(cls), cube_count=len(cls))
            )
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self):
        rows = []
        for (c, loc), (c2, loc2, iso) in sorted(
            self.gluings.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])
        ):
            g = iso or SignedPermutation.identity()
            key = self.base.facet_key_of_local.get(loc, loc)
            key2 = self.base.facet_key_of_local.get(loc2, loc2)
            rows.append(
                {
                    "copy": str(c),
                    "facet": poly.sign_string(FACETS[key])
                    if isinstance(self.base, PolytopeBase)
                    else str(key),
                    "to_copy": str(c2),
                    "to_facet": poly.sign_string(FACETS[key2])
                    if isinstance(self.base, PolytopeBase)
                    else str(key2),
                    "perm": g.axis_string(),
                }
            )
        doc = {"copies": [str(c) for c in self.copies], "gluings": rows}
        if self.coloring is not None:
            doc["coloring"] = {
                poly.sign_string(FACETS[i]): self.coloring.colors[i]
                for i in range(NUM_FACETS)
            }
        return doc


# ---------------------------------------------------------------------------
# the 256-copy manifold


def assemble_m5(coloring=None):
    """Glue 2^8 polytope copies by the identity along same-colored facets."""
    coloring = coloring or find_standard_coloring()
    base = polytope_base()
    copies = tuple(range(256))
    gluings = {}
    for c in copies:
        for k in range(NUM_FACETS):
            loc = base.facet_local[k]
            color = coloring.colors[k]
            c2 = c ^ (1 << (color - 1))
            gluings[(c, loc)] = (c2, loc, None)
    return PolytopalComplex(base, copies, gluings, coloring=coloring)


def face_quotient(complex_, face_id):
    """The sub-complex of a fully identity-glued complex lying over a face.

    The pieces are the classes of (copy, face); pieces meet along the
    facets of the face, crossing the unique extra polytope facet there.
    Ranks 1..4 only.
    """
    base = complex_.base
    if not isinstance(base, PolytopeBase):
        raise ValueError("face quotients are taken in a polytope complex")
    lat = base.lattice
    rank = lat.faces[face_id].rank
    if rank not in (1, 2, 3, 4):
        raise ValueError("face rank must be 1..4")
    if any(iso is not None for (_, _, iso) in complex_.gluings.values()):
        raise ValueError("face quotients require identity gluings")

    uf = complex_.face_union_find()
    nf = base.num_faces
    reps = {}
    for c in complex_.copies:
        root = uf.find(complex_.copy_index[c] * nf + face_id)
        reps.setdefault(root, c)
    piece_of_copy = {
        c: reps[uf.find(complex_.copy_index[c] * nf + face_id)]
        for c in complex_.copies
    }

    sub = FaceBase(face_id)
    top_facets = lat.faces[face_id].facets
    gluings = {}
    for root_copy in reps.values():
        for loc in sub.facet_local:
            g_id = sub.global_of_local[loc]
            extra = sorted(lat.faces[g_id].facets - top_facets)
            if len(extra) != 1:
                continue  # ideal endpoint of a 1-dimensional base: a cusp
            color = complex_.coloring.colors[extra[0]]
            c2 = root_copy ^ (1 << (color - 1))
            gluings[(root_copy, loc)] = (piece_of_copy[c2], loc, None)
    return PolytopalComplex(sub, sorted(reps.values()), gluings)


def connected_component_count_over(complex_, face_id):
    """2^c pieces rule: components of the sub-complex over a face."""
    sub = face_quotient(complex_, face_id)
    return len(sub.components()), sub


def write_complex_json(complex_, path):
    with open(path, "w") as fh:
        json.dump(complex_.to_json(), fh, indent=1, sort_keys=True)
