import random
from itertools import combinations

import pytest

from fiberforge import polytope as P


def test_enumerate_facets():
    facets = P.enumerate_facets()
    assert len(facets) == 16
    assert (1, 1, 1, 1, 1) in facets
    assert (-1, 1, 1, 1, 1) not in facets
    assert facets == sorted(facets)
    assert all(f.count(-1) % 2 == 0 for f in facets)


def test_adjacency_rule():
    plus = (1, 1, 1, 1, 1)
    assert P.are_adjacent(plus, (-1, -1, 1, 1, 1))
    assert not P.are_adjacent(plus, plus)
    assert not P.are_adjacent(plus, (-1, -1, -1, -1, 1))
    adj = P.facet_adjacency()
    assert all(len(nbrs) == 10 for nbrs in adj.values())
    edge_count = sum(len(nbrs) for nbrs in adj.values()) // 2
    assert edge_count == 80


def test_enumerate_vertices():
    verts = P.enumerate_vertices()
    assert len(verts) == 26
    ideal = [v for v in verts if v.is_ideal]
    real = [v for v in verts if not v.is_ideal]
    assert len(ideal) == 10 and len(real) == 16
    assert P.Vertex("real", (-1, 1, 1, 1, 1)) in verts
    assert P.Vertex("real", (1, 1, 1, 1, 1)) not in verts


def test_vertex_facet_incidence_ideal():
    v = P.Vertex("ideal", (4, 1))  # +e5
    inc = v.incident_facets()
    assert len(inc) == 8
    assert all(P.FACETS[i][4] == 1 for i in inc)


def test_vertex_facet_incidence_real_against_halfspace_oracle():
    # oracle: (1/3)*eta lies on facet f iff <f, eta/3> == 1, i.e. <f, eta> == 3
    for v in P.VERTICES:
        if v.is_ideal:
            continue
        eta = v.data
        oracle = {
            i
            for i, f in enumerate(P.FACETS)
            if sum(a * b for a, b in zip(f, eta)) == 3
        }
        assert v.incident_facets() == oracle
        assert len(oracle) == 5


def test_facet_never_incident_to_opposed_real_vertex():
    for i, f in enumerate(P.FACETS):
        opposed = P.Vertex("real", tuple(-x for x in f))
        assert i not in opposed.incident_facets()


def test_face_lattice_f_vector():
    lat = P.face_lattice()
    assert lat.f_vector() == (26, 120, 160, 80, 16)


def test_face_counts_against_clique_oracle():
    # rank-2 faces correspond to triangles of the adjacency graph, rank-1
    # to 4-cliques, real vertices to 5-cliques
    adj = P.facet_adjacency()

    def cliques(k):
        return sum(
            1
            for sub in combinations(range(16), k)
            if all(b in adj[a] for a, b in combinations(sub, 2))
        )

    assert cliques(3) == 160
    assert cliques(4) == 120
    assert cliques(5) == 16


def test_face_vertex_profiles():
    lat = P.face_lattice()
    for i in lat.by_rank[2]:
        f = lat.faces[i]
        assert len(f.ideal_vertices()) == 2 and len(f.real_vertices()) == 1
    for i in lat.by_rank[3]:
        f = lat.faces[i]
        assert len(f.ideal_vertices()) == 3 and len(f.real_vertices()) == 2


def test_facet_multiplicity_of_small_faces():
    lat = P.face_lattice()
    for i in lat.by_rank[3]:
        assert len(lat.faces[i].facets) == 2
    for i in lat.by_rank[2]:
        assert len(lat.faces[i].facets) == 3
    # ridge count equals adjacency edge count
    assert len(lat.by_rank[3]) == 80


def test_diamond_property():
    lat = P.face_lattice()
    for i, face in enumerate(lat.faces):
        if face.rank < 2:
            continue
        for j in lat.subfaces[i]:
            if lat.faces[j].rank != face.rank - 2:
                continue
            middles = [
                k
                for k in lat.coverers[j]
                if lat.faces[k].vertices < face.vertices
            ]
            assert len(middles) == 2


def test_isometry_group():
    G = P.isometry_group()
    assert len(G) == 1920
    assert any(g.is_identity for g in G)
    # transitive on facets
    orbit = {g.apply_facet(P.FACETS[0]) for g in G}
    assert orbit == set(P.FACETS)


def test_isometry_group_closure_and_adjacency_sample():
    rng = random.Random(7)
    G = P.isometry_group()
    Gset = set(G)
    pairs = [(rng.choice(G), rng.choice(G)) for _ in range(50)]
    for g, h in pairs:
        assert g.compose(h) in Gset
        assert g.inverse() in Gset
    f1, f2 = P.FACETS[0], P.FACETS[3]
    if P.are_adjacent(f1, f2):
        for g, _ in pairs[:20]:
            assert P.are_adjacent(g.apply_facet(f1), g.apply_facet(f2))
    for g, _ in pairs[:20]:
        for a, b in [(P.FACETS[1], P.FACETS[2]), (P.FACETS[4], P.FACETS[9])]:
            assert P.are_adjacent(a, b) == P.are_adjacent(
                g.apply_facet(a), g.apply_facet(b)
            )


def test_r16_subgroup():
    r16 = P.r16_subgroup()
    assert len(r16) == 16
    ids = [g for g in r16 if g.is_identity]
    assert len(ids) == 1
    # closed under composition and inverses
    for g in r16:
        assert g.inverse() in r16
        for h in r16[:4]:
            assert g.compose(h) in r16
    # free and transitive on the 16 facets
    for f in P.FACETS:
        images = [g.apply_facet(f) for g in r16]
        assert len(set(images)) == 16


def test_l_minus_one_is_sign_flip_on_first_four():
    lm1 = P.quaternion_maps()["-1"]
    assert lm1.apply_vector((1, 2, 3, 4, 5)) == (-1, -2, -3, -4, 5)


def test_quaternions_act_transitively_on_half_the_facets():
    q8 = list(P.quaternion_maps().values())
    f = P.FACETS[P.FACET_INDEX[(1, 1, 1, 1, 1)]]
    orbit = {g.apply_facet(f) for g in q8}
    assert orbit == {g for g in P.FACETS if g[4] == 1}


def test_ideal_vertex_link():
    inc, pairs = P.ideal_vertex_link(P.Vertex("ideal", (0, 1)))
    assert len(inc) == 8 and len(pairs) == 4
    # oracle: opposite facets differ in all four non-axis coordinates
    for i, j in pairs:
        fi, fj = P.FACETS[i], P.FACETS[j]
        diff = [k for k in range(5) if fi[k] != fj[k]]
        assert len(diff) == 4 and 0 not in diff
    with pytest.raises(ValueError):
        P.ideal_vertex_link(P.VERTICES[12])
    # all ten links have the same shape
    for v in P.VERTICES[:10]:
        inc, pairs = P.ideal_vertex_link(v)
        assert len(inc) == 8 and len(pairs) == 4


def test_signed_permutation_algebra():
    rng = random.Random(3)
    G = P.isometry_group()
    for _ in range(50):
        g, h = rng.choice(G), rng.choice(G)
        x = tuple(rng.randint(-5, 5) for _ in range(5))
        assert g.compose(h).apply_vector(x) == g.apply_vector(h.apply_vector(x))
        assert g.compose(g.inverse()).is_identity


def test_from_axis_string_roundtrip():
    g = P.SignedPermutation.from_axis_string(
        "13245", (-1, -1, -1, -1, 1), (-1, 1, 1, 1, -1)
    )
    assert g.apply_facet((-1, -1, -1, -1, 1)) == (-1, 1, 1, 1, -1)
    assert g.eps.count(-1) % 2 == 0


def test_polytope_json_shape():
    doc = P.polytope_json()
    assert len(doc["facets"]) == 16
    assert doc["facets"][-1] == "+++++"
    assert doc["f_vector"] == [26, 120, 160, 80, 16]
