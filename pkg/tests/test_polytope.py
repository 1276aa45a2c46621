import json
import math
from fractions import Fraction

import pytest

from realtoric.polytope import (
    PRESET_HALFSPACES,
    EmptyInterior,
    HalfSpace,
    NonPrimitiveNormal,
    PointOutsidePolytope,
    RedundantFacet,
    UnboundedPolytope,
    UnknownPreset,
    build_polytope,
    carrier,
    halfspaces_from_json,
    load_polytope,
    PolytopeError,
    preset,
    validate_delzant,
)

F = Fraction


def shoelace_centroid(points):
    """Centroid of a convex polygon with vertices sorted by angle."""
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    pts = sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    area = gx = gy = F(0)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        cross = x0 * y1 - x1 * y0
        area += cross
        gx += (x0 + x1) * cross
        gy += (y0 + y1) * cross
    return gx / (3 * area), gy / (3 * area)


@pytest.mark.parametrize("name,nv,nf", [
    ("CP1", 2, 2), ("CP2", 3, 3), ("CP3", 4, 4), ("S2xS2", 4, 4),
    ("X1", 4, 4), ("X2", 5, 5), ("X3", 6, 6), ("Q", 4, 4), ("X0", 3, 3),
])
def test_preset_counts(name, nv, nf):
    p = preset(name)
    assert len(p.vertices) == nv
    assert p.facet_count == nf
    assert len(p.faces_of_dim(p.dim)) == 1
    assert len(p.faces_of_dim(p.dim - 1)) == nf
    assert validate_delzant(p).valid


def test_preset_inputs_have_unit_offsets():
    assert all(k == 1 for hs in PRESET_HALFSPACES.values() for _, k in hs)


@pytest.mark.parametrize("name", ["CP2", "S2xS2", "X1", "X2", "X3"])
def test_centroid_is_origin(name):
    p = preset(name)
    assert shoelace_centroid(list(p.vertices)) == (0, 0)


def test_centering_shifts_offsets():
    assert preset("X1").offsets == (F(13, 12), F(13, 12), F(5, 6), F(7, 6))
    assert preset("S2xS2").offsets == (1, 1, 1, 1)
    assert preset("CP3").offsets == (1, 1, 1, 1)


def test_cp3_vertices():
    p = preset("CP3")
    assert sorted(p.vertices) == sorted([(-1, -1, -1), (-1, -1, 3), (-1, 3, -1), (3, -1, -1)])


def test_faces_of_square():
    p = preset("S2xS2")
    assert [len(p.faces_of_dim(d)) for d in range(3)] == [4, 4, 1]
    for f in p.faces:
        assert len(f.active) == 2 - f.dim


def test_errors():
    with pytest.raises(UnboundedPolytope):
        build_polytope([HalfSpace((1, 0), 1), HalfSpace((0, 1), 1)])
    with pytest.raises(UnboundedPolytope):
        build_polytope([HalfSpace((1, 0), 1), HalfSpace((-1, 0), 1), HalfSpace((0, 1), 1)])
    with pytest.raises(EmptyInterior):
        build_polytope([HalfSpace((1,), -1), HalfSpace((-1,), -1)])
    with pytest.raises(EmptyInterior):
        build_polytope([HalfSpace((1,), 0), HalfSpace((-1,), 0)])
    with pytest.raises(NonPrimitiveNormal):
        build_polytope([HalfSpace((2,), 1), HalfSpace((-1,), 1)])
    with pytest.raises(RedundantFacet) as exc:
        build_polytope([HalfSpace(v, k) for v, k in PRESET_HALFSPACES["S2xS2"]] + [HalfSpace((1, 1), 5)])
    assert exc.value.index == 4
    with pytest.raises(RedundantFacet):
        build_polytope([HalfSpace(v, k) for v, k in PRESET_HALFSPACES["S2xS2"]] + [HalfSpace((1, 0), 1)])
    with pytest.raises(UnknownPreset):
        preset("X9")


def test_not_delzant_detected():
    # triangle with a vertex of index 2
    p = build_polytope([HalfSpace((-1, 0), 1), HalfSpace((0, -1), 1), HalfSpace((1, 2), 1)])
    report = validate_delzant(p)
    assert not report.valid
    assert [c.abs_det for c in report.failures] == [2]


def test_non_simple_vertex_is_reported():
    # square pyramid: the apex lies on four facets
    hs = [HalfSpace(v, 1) for v in [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]] + [HalfSpace((0, 0, -1), 1)]
    report = validate_delzant(build_polytope(hs))
    assert not report.valid
    assert any(c.abs_det is None for c in report.failures)


def test_carrier():
    p = preset("S2xS2")
    assert carrier(p, (0, 0)).dim == 2
    assert carrier(p, (1, 0)).active == {0}
    assert carrier(p, (1, 1)).active == {0, 1}
    with pytest.raises(PointOutsidePolytope):
        carrier(p, (2, 0))


def test_json_roundtrip(tmp_path):
    p = preset("X2")
    path = tmp_path / "x2.json"
    path.write_text(json.dumps(p.to_json()))
    assert load_polytope(str(path)) == p


def test_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(PolytopeError):
        load_polytope(str(bad))
    with pytest.raises(PolytopeError):
        halfspaces_from_json({"dim": 1, "facets": [{"normal": [1], "offset": "0.5"}]})
    with pytest.raises(PolytopeError):
        halfspaces_from_json({"dim": 2, "facets": [{"normal": [1], "offset": "1"}]})
    with pytest.raises(PolytopeError):
        halfspaces_from_json({"facets": []})
    hs = halfspaces_from_json({"dim": 1, "facets": [{"normal": [1], "offset": "3/2"}, {"normal": [-1], "offset": 2}]})
    assert [h.offset for h in hs] == [F(3, 2), 2]
