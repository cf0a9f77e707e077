import json
import random

import pytest

from ihfan import fans
from ihfan.exactlin import ScalarField, sc


def quadrant_fan():
    return fans.build_fan(2, [[(1, 0), (0, 1)], [(0, 1), (-1, 0)],
                              [(-1, 0), (0, -1)], [(0, -1), (1, 0)]])


def one_dim_fan():
    return fans.build_fan(1, [[(1,)], [(-1,)]])


def orthant_fan():
    sets = [[(sc(a), 0, 0), (0, sc(b), 0), (0, 0, sc(c))]
            for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    return fans.build_fan(3, sets)


def cube_vertices():
    return [(x, y, z) for x in (1, -1) for y in (1, -1) for z in (1, -1)]


def test_build_fan_quadrants():
    f = quadrant_fan()
    assert len(f.cones) == 9
    assert len(f.maximal_ids) == 4
    assert fans.is_complete(f)


def test_build_fan_single_orthant():
    f = fans.build_fan(3, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)]])
    assert len(f.cones) == 8
    assert not fans.is_complete(f)


def test_build_fan_rejects_listed_face():
    with pytest.raises(ValueError):
        fans.build_fan(2, [[(1, 0)], [(1, 1), (1, 0)]])


def test_build_fan_rejects_overlap():
    with pytest.raises(ValueError):
        fans.build_fan(2, [[(1, 0), (0, 1)], [(1, 1), (-1, 1)]])


def test_build_fan_rejects_nonpointed():
    with pytest.raises(ValueError):
        fans.build_fan(2, [[(1, 0), (-1, 0), (0, 1)]])


def test_build_fan_rejects_redundant_generator():
    with pytest.raises(ValueError):
        fans.build_fan(2, [[(1, 0), (1, 1), (0, 1)]])


def test_cone_faces_counts():
    c = fans.Cone.from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert len(fans.cone_faces(c)) == 8
    sq = fans.Cone.from_generators([(1, 1, 1), (-1, 1, 1), (-1, -1, 1),
                                    (1, -1, 1)], 3)
    assert len(fans.cone_faces(sq)) == 10
    assert not sq.is_simplicial()
    r = fans.Cone.from_generators([(1, 0)], 2)
    assert len(fans.cone_faces(r)) == 2


def test_star_link_on_ray():
    f = quadrant_fan()
    e1 = next(i for i in f.ray_ids() if f.cones[i].rays[0] == (sc(1), sc(0)))
    star, closed, link = fans.star_link(f, e1)
    assert len(star) == 3
    assert len(closed.cones) == 6
    link_rays = sorted(tuple(fans.format_scalar(x) for x in r)
                       for r in link.rays())
    assert link_rays == [("0", "-1"), ("0", "1")]


def test_star_link_of_zero_and_maximal():
    f = quadrant_fan()
    _, closed, _ = fans.star_link(f, f.zero_id())
    assert closed == f
    m = f.maximal_ids[0]
    star, _, link = fans.star_link(f, m)
    assert star == (m,)
    assert len(link.cones) == 1  # just the zero cone


def test_is_complete():
    assert fans.is_complete(quadrant_fan())
    assert not fans.is_complete(fans.build_fan(3, [[(1, 0, 0), (0, 1, 0),
                                                    (0, 0, 1)]]))
    ff = fans.face_fan(cube_vertices())
    assert fans.is_complete(ff)


def test_star_subdivision_cone_over_square():
    cs = fans.build_fan(3, [[(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)]])
    sub, cmap = fans.star_subdivision(cs, (0, 0, 1))
    assert len(sub.maximal_ids) == 4
    assert sub.is_simplicial()
    old_max = cs.maximal_ids[0]
    assert len(cmap[old_max]) == 4
    # every piece is contained in the original cone
    big = cs.cones[old_max]
    for nid in cmap[old_max]:
        for r in sub.cones[nid].rays:
            assert big.contains(r)


def test_star_subdivision_on_existing_ray_unchanged():
    cs = fans.build_fan(3, [[(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)]])
    sub, cmap = fans.star_subdivision(cs, (2, 2, 2))
    assert sub == cs
    assert all(len(v) == 1 for v in cmap.values())


def test_star_subdivision_orthant_interior():
    o = fans.build_fan(3, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)]])
    sub, _ = fans.star_subdivision(o, (1, 1, 1))
    assert len(sub.maximal_ids) == 3


def test_star_subdivision_errors():
    o = fans.build_fan(3, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)]])
    with pytest.raises(ValueError):
        fans.star_subdivision(o, (0, 0, 0))
    with pytest.raises(ValueError):
        fans.star_subdivision(o, (-1, -1, -7))


def test_barycentric_counts():
    b, steps = fans.barycentric_subdivision(quadrant_fan())
    assert len(b.maximal_ids) == 8
    assert len(steps) == 4
    assert b.is_simplicial()
    one = one_dim_fan()
    b1, st1 = fans.barycentric_subdivision(one)
    assert b1 == one and st1 == ()


def test_barycentric_cube_face_fan_48():
    ff = fans.face_fan(cube_vertices())
    b, steps = fans.barycentric_subdivision(ff)
    assert len(b.maximal_ids) == 48
    assert len(steps) == 18
    assert b.is_simplicial()
    alt, _ = fans.barycentric_subdivision(ff, fans.barycenter_alt)
    assert len(alt.maximal_ids) == 48
    assert alt != b  # geometrically distinct centers


def test_subdivision_preserves_support():
    ff = fans.face_fan(cube_vertices())
    b, _ = fans.barycentric_subdivision(ff)
    assert fans.is_complete(b)
    rng = random.Random(5)
    for _ in range(20):
        x = tuple(sc(rng.randint(-9, 9)) for _ in range(3))
        inside_old = ff.locate(x) is not None
        inside_new = b.locate(x) is not None
        assert inside_old == inside_new


def test_face_fan_of_cube():
    ff, l = fans.face_fan_with_support(cube_vertices())
    assert len(ff.maximal_ids) == 6
    assert all(not ff.cones[m].is_simplicial() for m in ff.maximal_ids)
    assert fans.is_strictly_convex(ff, l)


def test_face_fan_cross_polytope_is_orthants():
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1),
            (0, 0, -1)]
    assert fans.face_fan(octa) == orthant_fan()


def test_face_fan_segment():
    seg = fans.face_fan([(-1,), (2,)])
    assert len(seg.maximal_ids) == 2
    keys = sorted(fans.format_scalar(r[0]) for r in seg.rays())
    assert keys == ["-1", "1"]


def test_face_fan_requires_interior_origin():
    with pytest.raises(ValueError):
        fans.face_fan([(0, 0), (1, 0), (0, 1)])


def test_normal_fan_square():
    nf, l = fans.normal_fan([(1, 1), (-1, 1), (-1, -1), (1, -1)])
    assert nf == quadrant_fan()
    assert fans.format_scalar(l.value((sc(3), sc(-2)))) == "5"
    assert fans.is_strictly_convex(nf, l)


def test_normal_fan_interval():
    nf, l = fans.normal_fan([(-1,), (1,)])
    assert len(nf.maximal_ids) == 2
    assert fans.format_scalar(l.value((sc(-5),))) == "5"


def test_normal_fan_octahedron_is_cube_face_fan():
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1),
            (0, 0, -1)]
    nf, l = fans.normal_fan(octa)
    assert nf == fans.face_fan(cube_vertices())
    assert fans.is_strictly_convex(nf, l)


def test_strict_convexity_judgments():
    one = one_dim_fan()
    plus = next(m for m in one.maximal_ids
                if one.cones[m].rays[0] == (sc(1),))
    minus = next(m for m in one.maximal_ids
                 if one.cones[m].rays[0] == (sc(-1),))
    absx = fans.PLFunction(one, {plus: (1,), minus: (-1,)})
    assert fans.is_strictly_convex(one, absx)
    ident = fans.PLFunction(one, {plus: (1,), minus: (1,)})
    assert not fans.is_strictly_convex(one, ident)
    with pytest.raises(ValueError):
        fans.is_strictly_convex(
            fans.build_fan(2, [[(1, 0), (0, 1)]]),
            fans.PLFunction(fans.build_fan(2, [[(1, 0), (0, 1)]]),
                            {7: (0, 0)}, check=False))


def test_plfunction_compatibility_enforced():
    f = quadrant_fan()
    forms = {}
    for m in f.maximal_ids:
        rays = f.cones[m].rays
        forms[m] = (1, 1) if (sc(1), sc(0)) in rays or (sc(0), sc(1)) in rays \
            else (0, 0)
    with pytest.raises(ValueError):
        fans.PLFunction(f, forms)


def test_product_fans():
    one = one_dim_fan()
    quad = quadrant_fan()
    assert fans.product_fan(one, one) == quad
    pt = fans.build_fan(0, [[]])
    assert fans.product_fan(one, pt) == one
    assert fans.product_fan(one, quad) == orthant_fan()


def test_skew_product_hat():
    one = one_dim_fan()
    plus = next(m for m in one.maximal_ids if one.cones[m].rays[0] == (sc(1),))
    minus = next(m for m in one.maximal_ids
                 if one.cones[m].rays[0] == (sc(-1),))
    sk = fans.skew_product(one, one, {plus: ((1,),), minus: ((-1,),)})
    got = sorted(sorted(tuple(fans.format_scalar(x) for x in r)
                        for r in sk.cones[m].rays)
                 for m in sk.maximal_ids)
    assert got == [
        [("-1", "1"), ("0", "-1")],
        [("-1", "1"), ("0", "1")],
        [("0", "-1"), ("1", "1")],
        [("0", "1"), ("1", "1")],
    ]
    assert fans.is_complete(sk)


def test_skew_product_incompatible_phi_rejected():
    one = one_dim_fan()
    quad = quadrant_fan()
    phi = {m: ((1, 1),) for m in quad.maximal_ids}
    m0 = quad.maximal_ids[0]
    phi[m0] = ((1, 2),)
    with pytest.raises(ValueError):
        fans.skew_product(quad, one, phi)


def sqrt2_prism_vertices():
    F = ScalarField(2)
    r2 = F.sqrt_gen()
    Q = [(sc(0), sc(0)), (sc(1), sc(0)), (sc(1) + r2, sc(1)),
         (sc(0), sc(1))]
    cx = (sc(2) + r2) / sc(4)
    cy = sc(1) / sc(2)
    return [(x - cx, y - cy, sc(z)) for (x, y) in Q for z in (1, -1)]


def test_sqrt2_prism_face_fan():
    pf, l = fans.face_fan_with_support(sqrt2_prism_vertices(),
                                       field=ScalarField(2))
    assert len(pf.maximal_ids) == 6
    assert fans.is_complete(pf)
    assert fans.is_strictly_convex(pf, l)
    b, steps = fans.barycentric_subdivision(pf)
    assert len(b.maximal_ids) == 48 and len(steps) == 18


def test_fan_json_round_trip():
    pf = fans.face_fan(sqrt2_prism_vertices(), field=ScalarField(2))
    j = pf.canonical_json()
    pf2 = fans.fan_from_json_dict(json.loads(j))
    assert pf2 == pf
    assert pf2.canonical_json() == j


def test_polytope_json():
    pv = sqrt2_prism_vertices()
    obj = {"field": {"sqrt": 2},
           "vertices": [[fans.format_scalar(x) for x in v] for v in pv],
           "fan": "face"}
    pf3, _ = fans.polytope_from_json_dict(obj)
    assert pf3 == fans.face_fan(pv, field=ScalarField(2))
    obj2 = {"field": "Q",
            "vertices": [["1", "1"], ["-1", "1"], ["-1", "-1"], ["1", "-1"]],
            "fan": "normal"}
    nf, l = fans.polytope_from_json_dict(obj2)
    assert nf == quadrant_fan()


def test_meet_and_locate():
    f = quadrant_fan()
    a, b = f.maximal_ids[0], f.maximal_ids[1]
    meet = f.meet_id(a, b)
    assert f.cones[meet].dim in (0, 1)
    assert f.locate((sc(2), sc(3))) in f.maximal_ids
    assert f.locate((sc(1), sc(0))) in f.ray_ids()
    assert f.locate((sc(0), sc(0))) == f.zero_id()


def test_subdivision_lattice_still_valid():
    # re-verify the fan axioms on a subdivided fan with the checker on
    ff = fans.face_fan(cube_vertices())
    b, _ = fans.barycentric_subdivision(ff)
    rebuilt = fans.build_fan(3, [[list(r) for r in b.cones[m].rays]
                                 for m in b.maximal_ids], check=True)
    assert rebuilt == b
