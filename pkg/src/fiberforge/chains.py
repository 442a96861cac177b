"""Chain complexes of glued cell structures.

Two routes are implemented and cross-checked against each other:

* the order complex of the face-class poset (barycentric subdivision):
  sign-free, uniform over polytopal complexes and triangulations, used as
  the canonical route on small objects;
* cellular chain complexes on the truncated cells themselves, with
  incidence signs propagated through the diamond property and transported
  along gluings by a sign-tracked union-find.  This is what makes the
  large complexes tractable.

Truncation replaces every ideal vertex by its link cell, computing the
homotopy type of the cusped interior.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import polytope as poly
from .homology import ChainComplex, SparseIntMatrix
from .polytope import DIM, FACETS, NUM_FACETS


# ---------------------------------------------------------------------------
# graded posets with incidence signs


class CellPoset:
    """A graded poset of cells with diamond-consistent incidence signs.

    covers[i] lists the cells of one rank lower met along the boundary of
    cell i.  Signs are chosen rank by rank so that every length-two
    interval (a diamond) contributes cancelling terms, which is exactly
    d d = 0 for the cellular boundary.
    """

    def __init__(self, ranks, covers, names=None):
        self.n = len(ranks)
        self.ranks = tuple(ranks)
        self.covers = [tuple(c) for c in covers]
        self.names = names
        self.max_rank = max(self.ranks) if self.ranks else -1
        self.signs = {}
        self._compute_signs()
        self._check_dd_zero()
        self._downsets = None

    def _compute_signs(self):
        order = sorted(range(self.n), key=lambda c: self.ranks[c])
        for c in order:
            r = self.ranks[c]
            if r == 0:
                continue
            cov = self.covers[c]
            if r == 1:
                assert len(cov) == 2, "an edge must have two endpoints"
                a, b = sorted(cov)
                self.signs[(c, a)] = -1
                self.signs[(c, b)] = 1
                continue
            # propagate through shared sub-covers
            shared = {}
            cov_sets = {a: set(self.covers[a]) for a in cov}
            assigned = {}
            start = min(cov)
            assigned[start] = 1
            frontier = [start]
            while frontier:
                a = frontier.pop()
                for b in cov:
                    if b == a:
                        continue
                    common = cov_sets[a] & cov_sets[b]
                    for g in common:
                        want = -assigned[a] * self.signs[(a, g)] * self.signs[(b, g)]
                        if b in assigned:
                            assert assigned[b] == want, "inconsistent diamond"
                        else:
                            assigned[b] = want
                            frontier.append(b)
            assert len(assigned) == len(cov), "cover graph not connected"
            for a, s in assigned.items():
                self.signs[(c, a)] = s

    def _check_dd_zero(self):
        for c in range(self.n):
            if self.ranks[c] < 2:
                continue
            acc = {}
            for a in self.covers[c]:
                sa = self.signs[(c, a)]
                for g in self.covers[a]:
                    acc[g] = acc.get(g, 0) + sa * self.signs[(a, g)]
            assert all(v == 0 for v in acc.values()), "dd != 0 in cell poset"

    def downset(self, c):
        """All cells below c, including c (memoized)."""
        if self._downsets is None:
            self._downsets = {}
        if c not in self._downsets:
            out = {c}
            stack = [c]
            while stack:
                x = stack.pop()
                for a in self.covers[x]:
                    if a not in out:
                        out.add(a)
                        stack.append(a)
            self._downsets[c] = frozenset(out)
        return self._downsets[c]

    def map_sign(self, mapping):
        """Orientation comparison for a cover-preserving partial poset map.

        Returns eps: cell -> +-1 with sign(m c, m a) = eps[c] eps[a] sign(c, a)
        for every cover a of c in the domain."""
        eps = {}
        for c in sorted(mapping, key=lambda c: self.ranks[c]):
            if self.ranks[c] == 0:
                eps[c] = 1
                continue
            val = None
            for a in self.covers[c]:
                e = (
                    self.signs[(mapping[c], mapping[a])]
                    * eps[a]
                    * self.signs[(c, a)]
                )
                if val is None:
                    val = e
                else:
                    assert val == e, "map is not orientation-consistent"
            eps[c] = val
        return eps


# ---------------------------------------------------------------------------
# signed union-find


class SignedUnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.sign = [1] * n
        self.twisted_roots = set()

    def find(self, x):
        path = []
        root = x
        while self.parent[root] != root:
            path.append(root)
            root = self.parent[root]
        s = 1
        for node in reversed(path):
            s *= self.sign[node]
            self.parent[node] = root
            self.sign[node] = s
        return root, self.sign[x] if path else 1

    def union(self, x, y, rel):
        """Record orient(x) = rel * orient(y)."""
        rx, sx = self.find(x)
        ry, sy = self.find(y)
        if rx == ry:
            if sx != rel * sy:
                self.twisted_roots.add(rx)
            return
        # orient(rx) = sx^-1 * rel * sy * orient(ry), signs are +-1
        self.parent[rx] = ry
        self.sign[rx] = sx * rel * sy


# ---------------------------------------------------------------------------
# glued cellular complexes


def glued_chain_complex(poset, n_units, relations, keep=None):
    """Cellular chain complex of units glued along poset maps.

    relations: iterable of (unit, unit2, mapping dict cell -> cell); each
    mapping must be cover-preserving on a downward-closed domain.
    keep: optional predicate (unit, cell) -> bool restricting to a
    subcomplex (must be closed under taking covers).
    """
    n = poset.n
    uf = SignedUnionFind(n_units * n)
    eps_cache = {}
    for u, u2, mapping in relations:
        key = id(mapping) if not isinstance(mapping, tuple) else mapping
        if isinstance(mapping, dict):
            items = mapping.items()
            eps = poset.map_sign(mapping)
        else:  # identity over an iterable of cells
            items = ((c, c) for c in mapping)
            eps = None
        for c, c2 in items:
            uf.union(u * n + c, u2 * n + c2, 1 if eps is None else eps[c])
    if uf.twisted_roots:
        raise ValueError(
            "twisted cell classes (%d); use the order-complex route"
            % len(uf.twisted_roots)
        )

    alive = []
    for u in range(n_units):
        for c in range(n):
            if keep is None or keep(u, c):
                alive.append(u * n + c)
    roots = {}
    for inst in alive:
        r, _ = uf.find(inst)
        roots.setdefault(r, inst)
    # index classes by rank, deterministically by root id
    by_rank = {}
    index = {}
    for r in sorted(roots):
        rank = poset.ranks[r % n]
        index[r] = len(by_rank.setdefault(rank, []))
        by_rank[rank].append(r)

    max_rank = max(by_rank) if by_rank else 0
    dims = [len(by_rank.get(k, [])) for k in range(max_rank + 1)]
    boundaries = {}
    for k in range(1, max_rank + 1):
        entries = []
        for col, root in enumerate(by_rank.get(k, [])):
            u, c = divmod(root, n)
            for a in poset.covers[c]:
                r2, s2 = uf.find(u * n + a)
                entries.append((index[r2], col, poset.signs[(c, a)] * s2))
        boundaries[k] = SparseIntMatrix(
            len(by_rank.get(k - 1, [])), len(by_rank.get(k, [])), entries
        )
    cc = ChainComplex(dims=dims, boundaries=boundaries)
    cc.check_dd_zero()
    return cc


# ---------------------------------------------------------------------------
# order-complex (flag) route


class FlagSystem:
    """Chains of a local face poset, shared by every unit of a complex."""

    def __init__(self, ranks, subfaces, ideal_rank0=None):
        n = len(ranks)
        order = sorted(range(n), key=lambda f: ranks[f])
        chains_at = [[] for _ in range(n)]
        for f in order:
            local = [(f,)]
            for g in subfaces[f]:
                local.extend(ch + (f,) for ch in chains_at[g])
            chains_at[f] = local
        self.chains = [ch for f in order for ch in chains_at[f]]
        self.chains.sort()
        self.chain_id = {ch: i for i, ch in enumerate(self.chains)}
        self.top_of = [ch[-1] for ch in self.chains]
        self.first_of = [ch[0] for ch in self.chains]
        self.dim_of = [len(ch) - 1 for ch in self.chains]
        self.ranks = ranks
        if ideal_rank0 is None:
            self.through_ideal = [False] * len(self.chains)
        else:
            self.through_ideal = [
                ranks[ch[0]] == 0 and ideal_rank0[ch[0]] for ch in self.chains
            ]

    def chains_with_top_in(self, face_set):
        fs = set(face_set)
        return [i for i, t in enumerate(self.top_of) if t in fs]

    def map_chain(self, i, face_map):
        return self.chain_id[tuple(face_map[f] for f in self.chains[i])]


def flag_chain_complex_from(system, n_units, relations, truncate_ideal=False,
                            keep_chain=None):
    """Order-complex chain complex over flag classes.

    relations: (unit, unit2, chain ids, face_map or None); the boundary is
    the alternating sum over deleted flag entries, so no signs are needed.
    """
    nch = len(system.chains)
    parent = list(range(n_units * nch))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            parent[rb] = ra

    for u, u2, chain_ids, face_map in relations:
        if face_map is None:
            for ci in chain_ids:
                union(u * nch + ci, u2 * nch + ci)
        else:
            for ci in chain_ids:
                union(u * nch + ci, u2 * nch + system.map_chain(ci, face_map))

    def included(inst):
        ci = inst % nch
        if truncate_ideal and system.through_ideal[ci]:
            return False
        if keep_chain is not None and not keep_chain(inst // nch, ci):
            return False
        return True

    roots = {}
    for inst in range(n_units * nch):
        if not included(inst):
            continue
        roots.setdefault(find(inst), None)
    by_dim = {}
    index = {}
    for r in sorted(roots):
        d = system.dim_of[r % nch]
        index[r] = len(by_dim.setdefault(d, []))
        by_dim[d].append(r)

    max_dim = max(by_dim) if by_dim else 0
    dims = [len(by_dim.get(k, [])) for k in range(max_dim + 1)]
    boundaries = {}
    for k in range(1, max_dim + 1):
        entries = []
        for col, root in enumerate(by_dim.get(k, [])):
            u, ci = divmod(root, nch)
            ch = system.chains[ci]
            for i in range(len(ch)):
                sub = ch[:i] + ch[i + 1 :]
                inst2 = u * nch + system.chain_id[sub]
                if not included(inst2):
                    continue
                r2 = find(inst2)
                entries.append((index[r2], col, (-1) ** i))
        boundaries[k] = SparseIntMatrix(
            len(by_dim.get(k - 1, [])), len(by_dim.get(k, [])), entries
        )
    cc = ChainComplex(dims=dims, boundaries=boundaries)
    cc.check_dd_zero()
    return cc


# ---------------------------------------------------------------------------
# flag route for polytopal complexes


_POLY_FLAGS = None


def polytope_flag_system():
    global _POLY_FLAGS
    if _POLY_FLAGS is None:
        lat = poly.face_lattice()
        ranks = [f.rank for f in lat.faces]
        ideal = [
            f.rank == 0 and poly.VERTICES[next(iter(f.vertices))].is_ideal
            for f in lat.faces
        ]
        _POLY_FLAGS = FlagSystem(ranks, lat.subfaces, ideal)
    return _POLY_FLAGS


def flag_chain_complex(complex_, truncate_ideal=True):
    """Order complex of the face-class poset of a polytopal complex."""
    base = complex_.base
    lat = base.lattice
    system = (
        polytope_flag_system()
        if base.num_faces == len(lat.faces)
        else _face_base_flag_system(base)
    )
    idx = complex_.copy_index
    chains_in = {}
    relations = []
    for (c, loc), (c2, loc2, iso) in complex_.gluings.items():
        if loc not in chains_in:
            chains_in[loc] = system.chains_with_top_in(base.faces_in_facet[loc])
        fmap = base.face_map(iso)
        relations.append((idx[c], idx[c2], chains_in[loc], fmap))
    return flag_chain_complex_from(
        system, len(complex_.copies), relations, truncate_ideal=truncate_ideal
    )


def _face_base_flag_system(base):
    ideal = list(base.is_ideal_vertex)
    return FlagSystem(list(base.rank), base.subfaces, ideal)


def cusp_section_flag_complex(complex_, cusp):
    """The barycentric chain complex of a cusp cross-section.

    Cells are the classes of flags of faces strictly containing the ideal
    vertex; this is the boundary component of the truncated manifold that
    the cusp determines."""
    base = complex_.base
    system = polytope_flag_system()
    members = list(cusp.members)
    member_idx = {m: i for i, m in enumerate(members)}
    # chains entirely above a given vertex face: first element strictly
    # contains the vertex
    above_cache = {}

    def chains_above(vloc):
        if vloc not in above_cache:
            lat = base.lattice
            above_cache[vloc] = [
                i
                for i, ch in enumerate(system.chains)
                if system.ranks[ch[0]] >= 1
                and vloc in lat.subfaces[ch[0]]
            ]
        return above_cache[vloc]

    nch = len(system.chains)
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            parent[rb] = ra

    instances = set()
    for (c, vloc) in members:
        u = member_idx[(c, vloc)]
        for ci in chains_above(vloc):
            instances.add(u * nch + ci)
    for (c, vloc) in members:
        u = member_idx[(c, vloc)]
        for k in poly.VERTICES[
            next(iter(base.lattice.faces[vloc].vertices))
        ].incident_facets():
            loc = base.facet_local[k]
            c2, loc2, iso = complex_.gluings[(c, loc)]
            fmap = base.face_map(iso)
            v2 = vloc if fmap is None else fmap[vloc]
            u2 = member_idx[(c2, v2)]
            for ci in chains_above(vloc):
                if system.top_of[ci] not in base.faces_in_facet[loc]:
                    continue
                ci2 = ci if fmap is None else system.map_chain(ci, fmap)
                union(u * nch + ci, u2 * nch + ci2)

    roots = {}
    for inst in sorted(instances):
        roots.setdefault(find(inst), None)
    by_dim = {}
    index = {}
    for r in sorted(roots):
        d = system.dim_of[r % nch]
        index[r] = len(by_dim.setdefault(d, []))
        by_dim[d].append(r)
    max_dim = max(by_dim)
    dims = [len(by_dim.get(k, [])) for k in range(max_dim + 1)]
    boundaries = {}
    for k in range(1, max_dim + 1):
        entries = []
        for col, root in enumerate(by_dim.get(k, [])):
            u, ci = divmod(root, nch)
            ch = system.chains[ci]
            for i in range(len(ch)):
                sub = ch[:i] + ch[i + 1 :]
                r2 = find(u * nch + system.chain_id[sub])
                entries.append((index[r2], col, (-1) ** i))
        boundaries[k] = SparseIntMatrix(
            len(by_dim.get(k - 1, [])), len(by_dim.get(k, [])), entries
        )
    cc = ChainComplex(dims=dims, boundaries=boundaries)
    cc.check_dd_zero()
    return cc


# ---------------------------------------------------------------------------
# the truncated polytope and its cellular route


class TruncatedPolytope:
    """The compact polytope obtained by cutting off the ideal vertices.

    Vertices: the 16 real vertices plus one cut vertex per (ideal vertex,
    incident edge) pair; facets: the 16 truncated facets (keeping their
    colors) plus one cube facet per ideal vertex.  The face lattice is
    computed by Galois closure and carries diamond-propagated signs.
    """

    def __init__(self):
        lat = poly.face_lattice()
        self._lat = lat
        verts = []
        for i, v in enumerate(poly.VERTICES):
            if not v.is_ideal:
                verts.append(("real", i))
        for i, v in enumerate(poly.VERTICES):
            if not v.is_ideal:
                continue
            vface = lat.vertex_face[i]
            for e in lat.coverers[vface]:
                verts.append(("cut", i, e))
        self.vertices = sorted(verts)
        vid = {v: i for i, v in enumerate(self.vertices)}
        nfac = NUM_FACETS + 10
        ideal_ids = [i for i, v in enumerate(poly.VERTICES) if v.is_ideal]
        cube_of_ideal = {vi: NUM_FACETS + j for j, vi in enumerate(ideal_ids)}
        self.cube_of_ideal = cube_of_ideal

        fmask = []
        for v in self.vertices:
            m = 0
            if v[0] == "real":
                for k in poly.VERTICES[v[1]].incident_facets():
                    m |= 1 << k
            else:
                _, vi, e = v
                for k in lat.faces[e].facets:
                    m |= 1 << k
                m |= 1 << cube_of_ideal[vi]
            fmask.append(m)

        # Galois closure from single vertices
        def close(fm):
            vm = 0
            for i in range(len(self.vertices)):
                if fmask[i] & fm == fm:
                    vm |= 1 << i
            return vm

        seen = {}
        queue = []
        for i in range(len(self.vertices)):
            vm = close(fmask[i])
            assert vm == 1 << i
            seen[vm] = fmask[i]
            queue.append(vm)
        head = 0
        while head < len(queue):
            vm = queue[head]
            head += 1
            fm = seen[vm]
            for i in range(len(self.vertices)):
                if vm >> i & 1:
                    continue
                nfm = fm & fmask[i]
                if nfm == 0:
                    continue
                nvm = close(nfm)
                if nvm not in seen:
                    seen[nvm] = nfm
                    queue.append(nvm)
        faces = sorted(seen.items())
        allv = (1 << len(self.vertices)) - 1
        faces.append((allv, 0))  # the polytope itself

        # ranks by longest chain
        order = sorted(range(len(faces)), key=lambda i: bin(faces[i][0]).count("1"))
        rank = {}
        for i in order:
            vm = faces[i][0]
            below = [
                rank[j]
                for j in order
                if j in rank and faces[j][0] != vm and faces[j][0] & vm == faces[j][0]
            ]
            rank[i] = max(below) + 1 if below else 0
        self.face_vmask = [faces[i][0] for i in range(len(faces))]
        self.face_fmask = [faces[i][1] for i in range(len(faces))]
        self.rank = [rank[i] for i in range(len(faces))]
        self.n = len(faces)
        self.id_of_vmask = {vm: i for i, vm in enumerate(self.face_vmask)}

        covers = [[] for _ in range(self.n)]
        subs = [[] for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    continue
                if (
                    self.face_vmask[j] & self.face_vmask[i] == self.face_vmask[j]
                ):
                    subs[i].append(j)
                    if self.rank[j] == self.rank[i] - 1:
                        covers[i].append(j)
        self.poset = CellPoset(self.rank, covers)
        self.subfaces = subs

        # the truncated facet cells, by polytope facet index
        self.facet_cell = {}
        for i in range(self.n):
            if self.rank[i] == DIM - 1 and bin(self.face_fmask[i]).count("1") == 1:
                k = self.face_fmask[i].bit_length() - 1
                if k < NUM_FACETS:
                    self.facet_cell[k] = i
        assert len(self.facet_cell) == NUM_FACETS
        self._action_cache = {}
        self._vid = vid

    def f_vector(self):
        out = [0] * (DIM + 1)
        for r in self.rank:
            out[r] += 1
        return tuple(out)

    def cell_action(self, iso):
        """Face id -> face id action of a polytope isometry (None = identity)."""
        if iso is None or iso.is_identity:
            return None
        if iso not in self._action_cache:
            lat = self._lat
            vperm_poly = poly.vertex_permutation(iso)
            fperm = poly.face_permutation(iso, lat)
            vmap = {}
            for i, v in enumerate(self.vertices):
                if v[0] == "real":
                    vmap[i] = self._vid[("real", vperm_poly[v[1]])]
                else:
                    _, vi, e = v
                    vmap[i] = self._vid[("cut", vperm_poly[vi], fperm[e])]
            out = []
            for i in range(self.n):
                vm = self.face_vmask[i]
                nm = 0
                j = 0
                while vm:
                    if vm & 1:
                        nm |= 1 << vmap[j]
                    vm >>= 1
                    j += 1
                out.append(self.id_of_vmask[nm])
            self._action_cache[iso] = tuple(out)
        return self._action_cache[iso]


_TRUNCATED = None


def truncated_polytope():
    global _TRUNCATED
    if _TRUNCATED is None:
        _TRUNCATED = TruncatedPolytope()
    return _TRUNCATED


def cellular_chain_complex(complex_):
    """Cellular chain complex of the truncated manifold of a polytopal
    complex (arbitrary isometric gluings)."""
    trunc = truncated_polytope()
    base = complex_.base
    idx = complex_.copy_index
    relations = []
    domain_of = {}
    for (c, loc), (c2, loc2, iso) in complex_.gluings.items():
        k = base.facet_key_of_local[loc]
        if k not in domain_of:
            domain_of[k] = sorted(trunc.poset.downset(trunc.facet_cell[k]))
        dom = domain_of[k]
        act = trunc.cell_action(iso)
        if act is None:
            relations.append((idx[c], idx[c2], dom))
        else:
            relations.append((idx[c], idx[c2], {x: act[x] for x in dom}))
    return glued_chain_complex(trunc.poset, len(complex_.copies), relations)


# ---------------------------------------------------------------------------
# triangulation posets


def simplex_poset(dim):
    """Poset of nonempty vertex subsets of a dim-simplex."""
    cells = []
    for mask in range(1, 1 << (dim + 1)):
        cells.append(mask)
    cells.sort(key=lambda m: (bin(m).count("1"), m))
    cid = {m: i for i, m in enumerate(cells)}
    ranks = [bin(m).count("1") - 1 for m in cells]
    covers = []
    for m in cells:
        cov = []
        if bin(m).count("1") > 1:
            mm = m
            while mm:
                b = mm & (-mm)
                cov.append(cid[m ^ b])
                mm ^= b
        covers.append(cov)
    poset = CellPoset(ranks, covers)
    poset.cell_of_mask = cid
    poset.mask_of_cell = cells
    return poset


def truncated_simplex_poset(dim, ideal_slots):
    """Poset of the dim-simplex with the given ideal vertices cut off.

    Cells: ("f", S) for the truncated faces (bare ideal vertices removed)
    and ("c", S, v) for the cut cell of S at its ideal vertex v."""
    ideal = frozenset(ideal_slots)
    names = []
    for mask in range(1, 1 << (dim + 1)):
        S = frozenset(i for i in range(dim + 1) if mask >> i & 1)
        if len(S) == 1 and S <= ideal:
            pass
        else:
            names.append(("f", S))
        if len(S) >= 2:
            for v in sorted(S & ideal):
                names.append(("c", S, v))

    def rank_of(cell):
        if cell[0] == "f":
            return len(cell[1]) - 1
        return len(cell[1]) - 2

    names.sort(key=lambda c: (rank_of(c), repr(c)))
    cid = {c: i for i, c in enumerate(names)}
    ranks = [rank_of(c) for c in names]
    covers = []
    for cell in names:
        cov = []
        if cell[0] == "f":
            S = cell[1]
            for s in sorted(S):
                S2 = S - {s}
                if not S2:
                    continue
                if len(S2) == 1 and S2 <= ideal:
                    continue
                cov.append(cid[("f", S2)])
            if len(S) >= 2:
                for v in sorted(S & ideal):
                    cov.append(cid[("c", S, v)])
            if len(S) == 1:
                pass
        else:
            _, S, v = cell
            for s in sorted(S - {v}):
                S2 = S - {s}
                if len(S2) >= 2:
                    cov.append(cid[("c", S2, v)])
        covers.append(cov)
    poset = CellPoset(ranks, covers, names=names)
    poset.cell_id = cid
    return poset


def simplex_face_map(poset, perm, domain_slots):
    """Mapping of subset-cells under a slot bijection, restricted to
    subsets of domain_slots (for plain simplex posets)."""
    out = {}
    for mask, cell in poset.cell_of_mask.items():
        S = [i for i in range(len(perm)) if mask >> i & 1]
        if any(s not in domain_slots for s in S):
            continue
        m2 = 0
        for s in S:
            m2 |= 1 << perm[s]
        out[cell] = poset.cell_of_mask[m2]
    return out


def truncated_simplex_face_map(poset, perm, domain_slots):
    out = {}
    dom = set(domain_slots)
    for cell in poset.names:
        if cell[0] == "f":
            S = cell[1]
            if not S <= dom:
                continue
            out[poset.cell_id[cell]] = poset.cell_id[
                ("f", frozenset(perm[s] for s in S))
            ]
        else:
            _, S, v = cell
            if not S <= dom:
                continue
            out[poset.cell_id[cell]] = poset.cell_id[
                ("c", frozenset(perm[s] for s in S), perm[v])
            ]
    return out
