from fractions import Fraction

import pytest

from weylfan.exactlat import dot, primitive_direction
from weylfan.rootsys import build_root_system
from weylfan.weylpoly import (
    ROOT,
    WEIGHT,
    cube_check,
    face_lattice,
    face_lattice_json,
    get_frame,
    hpolytope_from_halfspaces,
    is_simple,
    quotient_polytope,
    weyl_polytope,
)

A2 = build_root_system("A", 2)
A1 = build_root_system("A", 1)
B2 = build_root_system("B", 2)
A3 = build_root_system("A", 3)
G2 = build_root_system("G", 2)


def test_frame_weight_mode_coweights_a3():
    frame = get_frame(A3, WEIGHT)
    # 4 omega^vee = M alpha^vee with M = [[3,2,1],[2,4,2],[1,2,3]]
    assert frame.coweight_n(1) == (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4))
    assert frame.coweight_n(2) == (Fraction(1, 2), Fraction(1), Fraction(1, 2))
    assert frame.coweight_n(3) == (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def test_frame_pairings_dual():
    for rs in (A2, B2, G2, A3):
        for mode in (ROOT, WEIGHT):
            frame = get_frame(rs, mode)
            for i in range(1, rs.rank + 1):
                for j in range(1, rs.rank + 1):
                    assert dot(frame.root_m(i), frame.coweight_n(j)) == int(i == j)
                    assert dot(frame.root_m(i), frame.coroot_n(j)) == rs.cartan[j - 1][i - 1]


def test_frame_group_orders_match_both_modes():
    for rs, order in [(A2, 6), (B2, 8), (G2, 12)]:
        assert get_frame(rs, ROOT).group().order == order
        assert get_frame(rs, WEIGHT).group().order == order


def test_default_weights():
    assert get_frame(A2, ROOT).default_weight() == (2, 2)
    assert get_frame(B2, ROOT).default_weight() == (3, 4)
    assert get_frame(A2, WEIGHT).default_weight() == (1, 1)


def test_hexagon():
    p = weyl_polytope(A2, (1, 1), ROOT)
    assert len(p.vertices) == 6
    assert len(p.facets) == 6
    ok, witness = is_simple(p)
    assert ok and witness is None


def test_a1_segment():
    p = weyl_polytope(A1, (1,), ROOT)
    assert len(p.vertices) == 2
    assert sorted(p.vertex_points()) == [(-1,), (1,)]


def test_b2_octagon():
    p = weyl_polytope(B2, None, ROOT)
    assert len(p.vertices) == 8
    assert len(p.facets) == 8


def test_non_regular_weight_rejected():
    with pytest.raises(ValueError, match="weight not regular"):
        weyl_polytope(A2, (1, 0), ROOT)  # on a wall
    with pytest.raises(ValueError, match="weight not regular"):
        weyl_polytope(A2, (Fraction(1, 2), Fraction(1, 2)), ROOT)  # not in the lattice


def test_face_lattice_a2():
    p = weyl_polytope(A2, (1, 1), ROOT)
    faces = face_lattice(p)
    by_dim = {}
    for face in faces.values():
        by_dim.setdefault(face.dim, 0)
        by_dim[face.dim] += 1
    assert by_dim == {0: 6, 1: 6}
    # facet split: |W|/|W_{1}| + |W|/|W_{2}| = 3 + 3
    ones = [f for f in faces.values() if f.dim == 1]
    assert sum(1 for f in ones if f.i_set == frozenset({1})) == 3
    assert sum(1 for f in ones if f.i_set == frozenset({2})) == 3


def test_face_lattice_total_counts():
    # total proper faces = sum over I of |W| / |W_I|
    for rs in (A2, B2):
        p = weyl_polytope(rs, None, ROOT)
        faces = face_lattice(p)
        frame = p.frame
        total = 0
        import itertools
        for r in range(rs.rank):
            for i_set in itertools.combinations(range(1, rs.rank + 1), r):
                total += frame.group().order // frame.group(i_set).order
        assert len(faces) == total


def test_vertices_lie_in_two_facets_a2():
    p = weyl_polytope(A2, (1, 1), ROOT)
    for _, v in p.vertices:
        assert len(p.tight_facets(v)) == 2


def test_h_i_avoids_f_i():
    # Lemma: H_i cap F_i = empty; no vertex of F_i pairs to zero with alpha_i^vee
    for rs in (A2, B2, G2):
        p = weyl_polytope(rs, None, ROOT)
        frame = p.frame
        faces = face_lattice(p)
        n = rs.rank
        for i in range(1, n + 1):
            i_set = frozenset(range(1, n + 1)) - {i}
            dominant_facet = faces[(i_set, ())]
            for v in dominant_facet.vertices:
                assert frame.pair_coroot(v, i) > 0


def test_quotient_polytope_k_empty_is_p():
    p = weyl_polytope(A2, (2, 2), ROOT)
    q = quotient_polytope(p, [])
    assert sorted(q.vertices) == sorted(p.vertex_points())


def test_quotient_polytope_a2_full():
    p = weyl_polytope(A2, (2, 2), ROOT)
    q = quotient_polytope(p, [1, 2])
    assert q.vertices == ((0, 0), (1, 2), (2, 1), (2, 2))
    ok, _ = is_simple(q)
    assert ok
    assert cube_check(p)


def test_quotient_polytope_a2_k1_pentagon():
    p = weyl_polytope(A2, (2, 2), ROOT)
    q = quotient_polytope(p, [1])
    assert len(q.vertices) == 5
    assert set(q.vertices) == {(-1, -2), (0, -2), (1, 2), (2, 0), (2, 2)}
    ok, _ = is_simple(q)
    assert ok


def test_quotient_vertices_have_wall_facet_split():
    # every vertex of P cap C-bar is tight on walls I and dominant facets [n] \ I
    p = weyl_polytope(B2, None, ROOT)
    q = quotient_polytope(p, [1, 2])
    n = 2
    seen_patterns = set()
    for vi, v in enumerate(q.vertices):
        walls = {q.halfspaces[i].kind[1] for i in q.tight[vi]
                 if i in q.facet_idx and q.halfspaces[i].kind[0] == "wall"}
        facets = {q.halfspaces[i].kind[1] for i in q.tight[vi]
                  if i in q.facet_idx and q.halfspaces[i].kind[0] == "facet"}
        assert walls | facets == {1, 2} and not walls & facets
        seen_patterns.add(frozenset(walls))
    assert len(seen_patterns) == 2 ** n


def test_cube_check_small_types():
    for rs in (A1, A2, B2):
        p = weyl_polytope(rs, None, ROOT)
        assert cube_check(p)


def test_cube_check_a3_f_vector():
    p = weyl_polytope(A3, None, ROOT)
    q = quotient_polytope(p, [1, 2, 3])
    assert len(q.vertices) == 8
    assert len(q.facet_idx) == 6
    from weylfan.weylpoly import hpolytope_faces
    faces = hpolytope_faces(q)
    edges = [f for f, d in faces if d == 1]
    assert len(edges) == 12
    assert cube_check(p)


def test_is_simple_square():
    square = hpolytope_from_halfspaces(
        [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)], 2)
    ok, witness = is_simple(square)
    assert ok and witness is None
    assert len(square.vertices) == 4


def test_weight_mode_polytope_a2():
    p = weyl_polytope(A2, (1, 1), WEIGHT)
    assert len(p.vertices) == 6
    q = quotient_polytope(p, [1, 2])
    assert len(q.vertices) == 4
    assert cube_check(p)


def test_face_lattice_json_shape():
    p = weyl_polytope(A1, (1,), ROOT)
    data = face_lattice_json(p)
    assert set(data) == {"faces"}
    assert all(set(f) == {"I", "coset_word", "dim", "vertices"} for f in data["faces"])
    assert all(isinstance(x, str) for f in data["faces"] for v in f["vertices"] for x in v)


def test_normal_fan_independent_of_weight():
    # combinatorial type of P does not depend on the regular point chosen
    p1 = weyl_polytope(A2, (2, 2), ROOT)
    p2 = weyl_polytope(A2, (3, 2), ROOT)
    n1 = {primitive_direction(f.normal) for f in p1.facets}
    n2 = {primitive_direction(f.normal) for f in p2.facets}
    assert n1 == n2
