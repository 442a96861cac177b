"""Exact combinatorial model of the right-angled 5-polytope with 16 facets.

Facets are recorded as the +-1 vectors orthogonal to their supporting
hyperplanes (even number of minus signs).  Vertices are the 10 ideal
points on the coordinate axes plus 16 real points (1/3)*eta with eta an
odd-minus sign vector.  Every incidence test reduces to an integer dot
product, so the face lattice and all symmetry computations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

DIM = 5
NUM_FACETS = 16
NUM_VERTICES = 26


def sign_string(vec):
    """Render a +-1 vector as a string like '+-++-'."""
    return "".join("+" if x > 0 else "-" for x in vec)


def parse_sign_string(s):
    if len(s) != DIM or any(c not in "+-" for c in s):
        raise ValueError("bad sign string: %r" % s)
    return tuple(1 if c == "+" else -1 for c in s)


def enumerate_facets():
    """The 16 facet normals, lexicographically ordered (-1 before +1)."""
    return [v for v in product((-1, 1), repeat=DIM) if v.count(-1) % 2 == 0]


FACETS = enumerate_facets()
FACET_INDEX = {f: i for i, f in enumerate(FACETS)}


def are_adjacent(f, g):
    """Two facets meet in a ridge iff their normals differ in exactly two signs."""
    return sum(1 for a, b in zip(f, g) if a != b) == 2


def facet_adjacency():
    """Adjacency lists (facet index -> sorted tuple of neighbour indices)."""
    return {
        i: tuple(j for j, g in enumerate(FACETS) if are_adjacent(f, g))
        for i, f in enumerate(FACETS)
    }


# ---------------------------------------------------------------------------
# vertices


@dataclass(frozen=True, order=True)
class Vertex:
    """A polytope vertex.

    Ideal vertices sit on a coordinate axis and are stored as (axis, sign);
    real vertices are (1/3)*eta and store the sign vector eta (odd number
    of minus signs).  Both kinds expose exact integer incidence tests.
    """

    kind: str  # "ideal" | "real"
    data: tuple

    @property
    def is_ideal(self):
        return self.kind == "ideal"

    def incident_facets(self):
        """Indices of the facets containing this vertex."""
        if self.kind == "ideal":
            axis, sign = self.data
            return frozenset(i for i, f in enumerate(FACETS) if f[axis] == sign)
        eta = self.data
        return frozenset(
            i for i, f in enumerate(FACETS) if sum(a * b for a, b in zip(f, eta)) == 3
        )

    def __str__(self):
        if self.kind == "ideal":
            axis, sign = self.data
            return "%se%d" % ("+" if sign > 0 else "-", axis + 1)
        return "(1/3)" + sign_string(self.data)


def enumerate_vertices():
    """The 26 vertices: 10 ideal, then 16 real, deterministically ordered."""
    ideal = [Vertex("ideal", (axis, sign)) for axis in range(DIM) for sign in (-1, 1)]
    real = [
        Vertex("real", eta)
        for eta in product((-1, 1), repeat=DIM)
        if eta.count(-1) % 2 == 1
    ]
    return ideal + real


VERTICES = enumerate_vertices()
VERTEX_INDEX = {v: i for i, v in enumerate(VERTICES)}


def vertex_facet_incidence():
    """Map vertex index -> frozenset of incident facet indices."""
    return {i: v.incident_facets() for i, v in enumerate(VERTICES)}


# ---------------------------------------------------------------------------
# face lattice


@dataclass(frozen=True)
class Face:
    """A closed face: the pair (vertex set, facet set) of a Galois-closed pair."""

    rank: int
    vertices: frozenset  # vertex indices
    facets: frozenset  # facet indices

    def ideal_vertices(self):
        return frozenset(v for v in self.vertices if VERTICES[v].is_ideal)

    def real_vertices(self):
        return frozenset(v for v in self.vertices if not VERTICES[v].is_ideal)


class FaceLattice:
    """The graded face poset, computed by closure on the vertex-facet incidence.

    A face is a closed pair (V, F): F is the set of facets containing all of
    V, and V the set of vertices lying on all of F.  Faces are generated
    bottom-up from single vertices; the top face (the polytope itself, rank 5)
    carries every vertex and no facet.
    """

    def __init__(self):
        inc = vertex_facet_incidence()
        self._vmask_of_vertex = [1 << i for i in range(NUM_VERTICES)]
        fmask_of_vertex = [0] * NUM_VERTICES
        for v, fs in inc.items():
            m = 0
            for f in fs:
                m |= 1 << f
            fmask_of_vertex[v] = m
        self._fmask_of_vertex = fmask_of_vertex

        def close(fmask):
            vmask = 0
            for v in range(NUM_VERTICES):
                if fmask_of_vertex[v] & fmask == fmask:
                    vmask |= 1 << v
            return vmask

        # breadth-first closure starting from the vertices
        seen = {}
        queue = []
        for v in range(NUM_VERTICES):
            fm = fmask_of_vertex[v]
            vm = close(fm)
            assert vm == 1 << v, "vertex closure must be the vertex itself"
            seen[vm] = fm
            queue.append(vm)
        head = 0
        while head < len(queue):
            vm = queue[head]
            head += 1
            fm = seen[vm]
            for v in range(NUM_VERTICES):
                if vm >> v & 1:
                    continue
                nfm = fm & fmask_of_vertex[v]
                if nfm == 0:
                    continue  # only the top face has an empty facet set
                nvm = close(nfm)
                if nvm not in seen:
                    seen[nvm] = nfm
                    queue.append(nvm)

        faces = sorted(seen.items())  # deterministic
        # rank by longest chain below
        order = sorted(range(len(faces)), key=lambda i: bin(faces[i][0]).count("1"))
        rank = {}
        for i in order:
            vm = faces[i][0]
            below = [rank[j] for j in order if rank.get(j) is not None
                     and faces[j][0] != vm and faces[j][0] & vm == faces[j][0]]
            rank[i] = (max(below) + 1) if below else 0

        self.faces = []
        for i, (vm, fm) in enumerate(faces):
            verts = frozenset(v for v in range(NUM_VERTICES) if vm >> v & 1)
            fcts = frozenset(f for f in range(NUM_FACETS) if fm >> f & 1)
            self.faces.append(Face(rank[i], verts, fcts))
        # append the full polytope as the rank-5 top face
        self.faces.append(Face(DIM, frozenset(range(NUM_VERTICES)), frozenset()))

        self.faces.sort(key=lambda f: (f.rank, sorted(f.vertices)))
        self.by_rank = {r: [] for r in range(DIM + 1)}
        for i, f in enumerate(self.faces):
            self.by_rank[f.rank].append(i)
        self._id_by_vertexset = {f.vertices: i for i, f in enumerate(self.faces)}
        assert len(self._id_by_vertexset) == len(self.faces)

        n = len(self.faces)
        self.subfaces = [[] for _ in range(n)]  # strict subfaces, any rank
        self.covers = [[] for _ in range(n)]  # faces covered (rank-1 below)
        self.coverers = [[] for _ in range(n)]
        for i, fi in enumerate(self.faces):
            for j, fj in enumerate(self.faces):
                if i != j and fj.vertices < fi.vertices:
                    self.subfaces[i].append(j)
                    if fj.rank == fi.rank - 1:
                        self.covers[i].append(j)
                        self.coverers[j].append(i)

        self.top = self._id_by_vertexset[frozenset(range(NUM_VERTICES))]
        self.vertex_face = {
            v: self._id_by_vertexset[frozenset([v])] for v in range(NUM_VERTICES)
        }
        self.facet_face = {}
        for i in self.by_rank[DIM - 1]:
            (f,) = self.faces[i].facets
            self.facet_face[f] = i

    def f_vector(self):
        return tuple(len(self.by_rank[r]) for r in range(DIM))

    def face_id(self, vertices):
        return self._id_by_vertexset[frozenset(vertices)]

    def containing_facets(self, face_id):
        """Facet indices of the facets containing the given face."""
        return self.faces[face_id].facets


_LATTICE = None


def face_lattice():
    global _LATTICE
    if _LATTICE is None:
        _LATTICE = FaceLattice()
    return _LATTICE


# ---------------------------------------------------------------------------
# symmetries


@dataclass(frozen=True, order=True)
class SignedPermutation:
    """The isometry sending axis i to axis sigma[i] with sign eps[i].

    Acting on a point: y[sigma[i]] = eps[i] * x[i].  The product of the
    signs is +1 (even number of -1), which keeps the polytope invariant.
    """

    sigma: tuple
    eps: tuple

    def apply_vector(self, x):
        y = [0] * DIM
        for i in range(DIM):
            y[self.sigma[i]] = self.eps[i] * x[i]
        return tuple(y)

    def apply_facet(self, f):
        return self.apply_vector(f)

    def apply_vertex(self, v):
        if v.kind == "ideal":
            axis, sign = v.data
            return Vertex("ideal", (self.sigma[axis], sign * self.eps[axis]))
        return Vertex("real", self.apply_vector(v.data))

    def compose(self, other):
        """self o other (apply `other` first)."""
        sigma = tuple(self.sigma[other.sigma[i]] for i in range(DIM))
        eps = tuple(other.eps[i] * self.eps[other.sigma[i]] for i in range(DIM))
        return SignedPermutation(sigma, eps)

    def inverse(self):
        sigma = [0] * DIM
        eps = [0] * DIM
        for i in range(DIM):
            sigma[self.sigma[i]] = i
            eps[self.sigma[i]] = self.eps[i]
        return SignedPermutation(tuple(sigma), tuple(eps))

    @property
    def is_identity(self):
        return self.sigma == tuple(range(DIM)) and all(e == 1 for e in self.eps)

    def axis_string(self):
        """1-based image string, '13245' = axis 2 and 3 swapped."""
        return "".join(str(self.sigma[i] + 1) for i in range(DIM))

    @classmethod
    def identity(cls):
        return cls(tuple(range(DIM)), (1,) * DIM)

    @classmethod
    def from_axis_string(cls, perm, source_facet, target_facet):
        """Recover the isometry gluing source_facet to target_facet.

        `perm` gives only the axis permutation (1-based images); the signs
        are forced by requiring the isometry to carry one facet normal to
        the other.
        """
        sigma = tuple(int(c) - 1 for c in perm)
        if sorted(sigma) != list(range(DIM)):
            raise ValueError("bad axis permutation: %r" % perm)
        eps = tuple(source_facet[i] * target_facet[sigma[i]] for i in range(DIM))
        g = cls(sigma, eps)
        assert g.apply_facet(source_facet) == tuple(target_facet)
        return g


def isometry_group():
    """All 1920 signed permutations with an even number of sign flips."""
    group = [
        SignedPermutation(sigma, eps)
        for sigma in permutations(range(DIM))
        for eps in product((-1, 1), repeat=DIM)
        if eps.count(-1) % 2 == 0
    ]
    group.sort()
    return group


def quaternion_maps():
    """The eight isometries given by unit-quaternion left multiplication
    on the first four coordinates."""
    # y = (a*x1 - b*x2 - c*x3 - d*x4, b*x1 + a*x2 - d*x3 + c*x4, ...) for
    # q = a+bi+cj+dk; for unit q each map is a signed permutation.
    def lmul(q):
        a, b, c, d = q
        rows = [
            (a, -b, -c, -d),
            (b, a, -d, c),
            (c, d, a, -b),
            (d, -c, b, a),
        ]
        sigma = [0] * DIM
        eps = [0] * DIM
        for col in range(4):
            nz = [r for r in range(4) if rows[r][col] != 0]
            assert len(nz) == 1
            sigma[col] = nz[0]
            eps[col] = rows[nz[0]][col]
        sigma[4] = 4
        eps[4] = 1
        return SignedPermutation(tuple(sigma), tuple(eps))

    units = {
        "1": (1, 0, 0, 0),
        "-1": (-1, 0, 0, 0),
        "i": (0, 1, 0, 0),
        "-i": (0, -1, 0, 0),
        "j": (0, 0, 1, 0),
        "-j": (0, 0, -1, 0),
        "k": (0, 0, 0, 1),
        "-k": (0, 0, 0, -1),
    }
    return {name: lmul(q) for name, q in units.items()}


def involution_iota():
    """The extra involution (x1, -x2, -x4, -x3, -x5)."""
    # axis images: 1->1, 2->2, 3->4, 4->3, 5->5 with signs +,-,-,-,-
    return SignedPermutation((0, 1, 3, 2, 4), (1, -1, -1, -1, -1))


def r16_subgroup():
    """The order-16 subgroup generated by the quaternion maps and iota."""
    gens = list(quaternion_maps().values()) + [involution_iota()]
    elements = {SignedPermutation.identity()}
    frontier = list(elements)
    while frontier:
        new = []
        for g in frontier:
            for h in gens:
                gh = g.compose(h)
                if gh not in elements:
                    elements.add(gh)
                    new.append(gh)
        frontier = new
    out = sorted(elements)
    assert len(out) == 16
    return out


def facet_permutation(g):
    """Facet index -> facet index action of an isometry."""
    return tuple(FACET_INDEX[g.apply_facet(f)] for f in FACETS)


def vertex_permutation(g):
    return tuple(VERTEX_INDEX[g.apply_vertex(v)] for v in VERTICES)


def face_permutation(g, lattice=None):
    """Face id -> face id action of an isometry on the face lattice."""
    lat = lattice or face_lattice()
    vperm = vertex_permutation(g)
    return tuple(
        lat.face_id(frozenset(vperm[v] for v in face.vertices)) for face in lat.faces
    )


# ---------------------------------------------------------------------------
# ideal vertex links


def ideal_vertex_link(v):
    """The 4-cube link of an ideal vertex.

    Returns (incident facet indices, opposite pairs): two of the eight
    incident facets are opposite in the cube iff they are non-adjacent in
    the polytope, and each facet has exactly one such partner.
    """
    if not v.is_ideal:
        raise ValueError("link structure is only defined at ideal vertices")
    inc = sorted(v.incident_facets())
    assert len(inc) == 8
    opposite = {}
    for i in inc:
        partners = [j for j in inc if j != i and not are_adjacent(FACETS[i], FACETS[j])]
        assert len(partners) == 1, "each cube facet has a unique opposite"
        opposite[i] = partners[0]
    pairs = {frozenset((i, j)) for i, j in opposite.items()}
    assert len(pairs) == 4
    return inc, sorted(tuple(sorted(p)) for p in pairs)


# ---------------------------------------------------------------------------
# serialization


def polytope_json():
    """JSON document with facets, vertices, incidences and the f-vector."""
    lat = face_lattice()
    return {
        "facets": [sign_string(f) for f in FACETS],
        "vertices": [
            {"kind": v.kind, "label": str(v)} for v in VERTICES
        ],
        "incidence": {
            str(i): sorted(v.incident_facets()) for i, v in enumerate(VERTICES)
        },
        "f_vector": list(lat.f_vector()),
        "faces": [
            {
                "rank": f.rank,
                "vertices": sorted(f.vertices),
                "facets": sorted(f.facets),
            }
            for f in lat.faces
        ],
    }
