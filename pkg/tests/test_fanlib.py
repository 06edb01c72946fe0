from fractions import Fraction

from weylfan.exactlat import det_int, mat_vec, primitive_direction
from weylfan.fanlib import (
    Cone,
    fan_json,
    fan_properties,
    normal_fan,
    quotient_normal_fan,
    table1_report,
)
from weylfan.rootsys import build_root_system
from weylfan.weylpoly import ROOT, WEIGHT, get_frame, weyl_polytope

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
A3 = build_root_system("A", 3)
B2 = build_root_system("B", 2)
G2 = build_root_system("G", 2)


def vertex_normal_oracle(p):
    """Per-vertex recomputation of normals straight from w(-omega_i^vee)."""
    frame = p.frame
    cones = set()
    for el, _ in p.vertices:
        rays = []
        for i in range(1, frame.n + 1):
            base = tuple(-x for x in frame.coweight_n(i))
            rays.append(primitive_direction(el.apply_n(base)))
        cones.add(tuple(sorted(rays)))
    return cones


def test_normal_fan_a2_root():
    p = weyl_polytope(A2, (1, 1), ROOT)
    fan = normal_fan(p)
    assert len(fan.max_cones) == 6
    assert fan.cone_set() == vertex_normal_oracle(p)
    assert set(fan.rays()) == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}
    props = fan_properties(fan)
    assert props == {"smooth": True, "simplicial": True, "complete": True}
    assert fan.validity_checked


def test_normal_fan_a1():
    p = weyl_polytope(A1, (1,), ROOT)
    fan = normal_fan(p)
    assert fan.cone_set() == {((1,),), ((-1,),)}


def test_normal_fan_a3_weight_cone_at_a():
    p = weyl_polytope(A3, (1, 1, 1), WEIGHT)
    fan = normal_fan(p)
    cone_at_a = next(c for c in fan.max_cones if c.tag == ("vertex", ()))
    assert set(cone_at_a.rays) == {(-3, -2, -1), (-1, -2, -1), (-1, -2, -3)}
    assert abs(det_int(cone_at_a.rays)) == 8
    props = fan_properties(fan)
    assert props["smooth"] is False
    assert props["simplicial"] is True
    assert props["complete"] is True


def test_quotient_fan_a2_full():
    p = weyl_polytope(A2, (2, 2), ROOT)
    fan = quotient_normal_fan(p, [1, 2])
    assert len(fan.max_cones) == 4
    cone0 = next(c for c in fan.max_cones
                 if all(x >= 0 for r in c.rays for x in mat_vec(((1, 0), (0, 1)), r)) or True)
    # the cone at the origin is spanned by the primitive coroots
    assert any(set(c.rays) == {(2, -1), (-1, 2)} for c in fan.max_cones)


def test_quotient_fan_b2_cone_at_origin():
    p = weyl_polytope(B2, None, ROOT)
    fan = quotient_normal_fan(p, [1, 2])
    assert any(set(c.rays) == {(2, -1), (-1, 1)} for c in fan.max_cones)


def test_quotient_fan_empty_k_matches_normal_fan():
    for rs in (A2, B2):
        p = weyl_polytope(rs, None, ROOT)
        assert quotient_normal_fan(p, []).cone_set() == normal_fan(p).cone_set()


def test_fan_properties_quotients_simplicial_complete():
    for rs in (A2, B2, G2):
        p = weyl_polytope(rs, None, ROOT)
        for k in ([], [1], [2], [1, 2]):
            fan = quotient_normal_fan(p, k)
            props = fan_properties(fan)
            assert props["simplicial"] is True
            assert props["complete"] is True


def test_smoothness_all_small_types_root_mode():
    for fam, rank in [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("G", 2)]:
        rs = build_root_system(fam, rank)
        p = weyl_polytope(rs, None, ROOT)
        assert fan_properties(normal_fan(p))["smooth"] is True


def test_incomplete_fan_detected():
    fan_like = normal_fan(weyl_polytope(A2, (1, 1), ROOT))
    from weylfan.fanlib import Fan
    partial = Fan(2, ROOT, fan_like.max_cones[:3])
    assert fan_properties(partial)["complete"] is False


def test_cone_membership():
    c = Cone.from_rays([(2, -1), (-1, 2)])
    assert c.contains((1, 1))
    assert c.contains((2, -1))
    assert not c.contains((-1, 0))


def test_table1_report_matches_paper_rows():
    rep = table1_report()
    assert rep["ok"] is True
    by_type = {r["type"]: r for r in rep["rows"]}
    assert by_type["B2"]["entries"][1]["generator"] == (-2, 2)
    assert by_type["B2"]["entries"][1]["primitive"] == (-1, 1)
    assert by_type["G2"]["entries"][0]["primitive"] == (2, -3)
    assert by_type["A2"]["entries"][0]["primitive"] == (2, -1)


def test_fan_json_shape():
    fan = normal_fan(weyl_polytope(A2, (1, 1), ROOT))
    data = fan_json(fan)
    assert set(data) == {"mode", "rays", "max_cones"}
    assert all(isinstance(x, str) for r in data["rays"] for x in r)
    assert len(data["max_cones"]) == 6


def test_fan_same_for_different_regular_weights():
    f1 = normal_fan(weyl_polytope(A2, (2, 2), ROOT))
    f2 = normal_fan(weyl_polytope(A2, (3, 2), ROOT))
    assert f1.cone_set() == f2.cone_set()
    f3 = quotient_normal_fan(weyl_polytope(B2, (3, 4), ROOT), [1, 2])
    f4 = quotient_normal_fan(weyl_polytope(B2, (2, 3), ROOT), [1, 2])
    assert f3.cone_set() == f4.cone_set()


def test_face_cone_containment_reversal():
    # faces of P correspond order-reversingly to cones over the tight normals
    p = weyl_polytope(A2, (1, 1), ROOT)
    from weylfan.weylpoly import face_lattice
    faces = face_lattice(p)
    items = list(faces.values())
    for f1 in items:
        for f2 in items:
            v1, v2 = set(f1.vertices), set(f2.vertices)
            c1 = {i for v in f1.vertices for i in p.tight_facets(v)
                  if all(i in p.tight_facets(w) for w in f1.vertices)}
            c2 = {i for v in f2.vertices for i in p.tight_facets(v)
                  if all(i in p.tight_facets(w) for w in f2.vertices)}
            if v1 <= v2:
                assert c2 <= c1
