import json
import random

import pytest

from realtoric.invariants import (
    CarrierNotInvariant,
    DimensionUnsupported,
    SurfaceType,
    classify_surface,
    component_count,
    endpoint_gluings,
    euler_characteristic,
    fiber_group,
    generic_xi,
    real_lagrangian_report,
    stratify,
    z2_betti_total,
)
from realtoric.linalg import IntegerMatrix, unimodular_inverse
from realtoric.polytope import HalfSpace, build_polytope, preset
from realtoric.symmetry import involutions, symmetry_group

M = IntegerMatrix
SWAP = M([[0, 1], [1, 0]])
ALL = ["CP1", "CP2", "CP3", "S2xS2", "X1", "X2", "X3"]
SURFACES = ["CP2", "S2xS2", "X1", "X2", "X3"]


def all_involutions(names=ALL):
    for name in names:
        p = preset(name)
        for i, s in enumerate(involutions(symmetry_group(p))):
            yield name, i, s, p


def test_fiber_group_examples():
    sq = preset("S2xS2")
    interior = sq.faces_of_dim(2)[0]
    a, g = fiber_group(-IntegerMatrix.identity(2), interior, sq)
    assert a == IntegerMatrix.identity(2) and g.torus_rank == 2
    a, g = fiber_group(M([[-1, 0], [0, 1]]), interior, sq)
    assert (g.torus_rank, g.invariant_factors) == (1, (2,))
    cp2 = preset("CP2")
    hyp = cp2.face_with_active({2})
    a, g = fiber_group(SWAP, hyp, cp2)
    assert a == M([[1]]) and (g.torus_rank, g.component_count) == (1, 1)
    with pytest.raises(CarrierNotInvariant):
        fiber_group(SWAP, cp2.face_with_active({0}), cp2)


def test_stratify_examples():
    model = stratify(SWAP, preset("CP2"))
    assert [(s.dim, s.carrier.dim, s.fiber.torus_rank, s.fiber.component_count) for s in model.strata] == [
        (0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1),
    ]
    model = stratify(-IntegerMatrix.identity(2), preset("S2xS2"))
    assert len(model.strata) == 1 and model.top.fiber.torus_rank == 2
    model = stratify(M([[-1, -1, -1], [0, 0, 1], [0, 1, 0]]), preset("CP3"))
    assert [(s.dim, s.carrier.dim, s.fiber.torus_rank, s.fiber.component_count) for s in model.strata] == [
        (0, 1, 1, 1), (0, 1, 1, 1), (1, 3, 2, 1),
    ]
    assert sorted(sorted(s.face.carrier.active) for s in model.vertex_strata()) == [[0, 1], [2, 3]]


def test_euler_examples():
    assert euler_characteristic(stratify(SWAP, preset("CP2"))) == 1
    assert euler_characteristic(stratify(SWAP, preset("X1"))) == 0
    assert euler_characteristic(stratify(IntegerMatrix.identity(2), preset("X3"))) == -2


def test_betti_examples():
    assert z2_betti_total(SWAP, preset("CP2")) == 3
    assert z2_betti_total(IntegerMatrix.identity(2), preset("S2xS2")) == 4
    assert z2_betti_total(M([[-1, -1, -1], [0, 0, 1], [0, 1, 0]]), preset("CP3")) == 4


def test_generic_xi():
    assert generic_xi(IntegerMatrix.identity(2), preset("S2xS2")) == (1, 2)
    assert generic_xi(-IntegerMatrix.identity(2), preset("S2xS2")) == (0, 0)
    assert generic_xi(SWAP, preset("CP2")) == (1, 1)


def test_component_examples():
    assert component_count(stratify(M([[-1, -1, -1], [0, 0, 1], [0, 1, 0]]), preset("CP3"))) == 1
    assert component_count(stratify(M([[-1, 0], [0, 1]]), preset("S2xS2"))) == 1


def test_classify_examples():
    assert classify_surface(SWAP, preset("CP2")).label == "RP2"
    assert classify_surface(SWAP, preset("X1")).label == "Klein"
    sq = preset("S2xS2")
    named_sigmas = [M([[1, 0], [0, 1]]), M([[-1, 0], [0, -1]]), M([[0, -1], [-1, 0]]), M([[-1, 0], [0, 1]])]
    assert [classify_surface(s, sq).label for s in named_sigmas] == ["T2", "T2", "S2", "T2"]
    x3 = preset("X3")
    x3_sigmas = [M([[1, 0], [0, 1]]), M([[-1, 0], [0, -1]]), M([[0, -1], [-1, 0]]), SWAP]
    assert [classify_surface(s, x3).label for s in x3_sigmas] == ["N4", "T2", "S2", "Klein"]
    assert classify_surface(SWAP, preset("X2")).label == "RP2"
    with pytest.raises(DimensionUnsupported):
        classify_surface(IntegerMatrix.identity(3), preset("CP3"))


def test_cp2_gluings():
    kinds = sorted(g.kind for g in endpoint_gluings(stratify(SWAP, preset("CP2"))))
    assert kinds == ["crosscap", "disk"]
    kinds = sorted(g.kind for g in endpoint_gluings(stratify(SWAP, preset("X1"))))
    assert kinds == ["crosscap", "crosscap"]


def test_surface_labels():
    assert SurfaceType(False, -2).label == "N4"
    assert SurfaceType(False, -2).display == "#4RP2"
    assert SurfaceType(True, -2).label == "Sigma2"
    for lab in ["S2", "T2", "RP2", "Klein", "N3", "Sigma3"]:
        assert SurfaceType.from_label(lab).label == lab
    with pytest.raises(ValueError):
        SurfaceType(True, 1).label


def test_report_cp3():
    r = real_lagrangian_report(M([[-1, -1, -1], [0, 0, 1], [0, 1, 0]]), preset("CP3"))
    assert (r.dim, r.components, r.euler, r.z2_betti_total, r.surface_type) == (3, 1, 0, 4, None)
    data = json.loads(json.dumps(r.to_json()))
    assert set(data) == {"dim", "components", "euler", "z2_betti", "moment_image_vertices", "surface"}
    assert data["surface"] == "unclassified"
    assert sorted(data["moment_image_vertices"]) == [["-1", "1", "1"], ["1", "-1", "-1"]]


def small_cover_euler(p):
    # each open d-face carries 2^d points over it in the real locus
    return sum((-1) ** f.dim * 2 ** f.dim for f in p.faces)


@pytest.mark.parametrize("name", ALL)
def test_real_locus_euler_against_face_count(name):
    p = preset(name)
    assert euler_characteristic(stratify(IntegerMatrix.identity(p.dim), p)) == small_cover_euler(p)


@pytest.mark.parametrize("name,i,sigma,p", list(all_involutions()))
def test_properties_every_involution(name, i, sigma, p):
    model = stratify(sigma, p)
    n, nv = p.dim, len(p.vertices)
    assert model.fixed.dim + model.top.fiber.torus_rank == n
    chi = euler_characteristic(model)
    betti = z2_betti_total(sigma, p, model)
    assert (chi - nv) % 2 == 0
    assert betti <= nv
    assert component_count(model) >= 1
    assert model.polytope.contains([0] * n)
    assert any(s.face.dim == model.fixed.dim for s in model.strata)
    if n == 2 and component_count(model) == 1:
        assert betti == 4 - chi
        st = classify_surface(sigma, p, model)
        assert st.euler == chi
        if st.orientable:
            assert chi % 2 == 0
    if n == 2 and model.fixed.dim == 1:
        for g in endpoint_gluings(model):
            if g.kind != "disk":
                assert sum(d for _, d in g.incident) == 2
    if sigma == IntegerMatrix.identity(n):
        assert component_count(model) == 1
        if n == 2:
            assert chi == 4 - p.facet_count


def transform(p, g):
    """Image of ``p`` under ``x -> g x`` for ``g`` in GL(n, Z)."""
    g_inv_t = unimodular_inverse(g).T
    return build_polytope([HalfSpace(g_inv_t @ h.normal, h.offset) for h in p.facets])


def random_unimodular(rng, n, steps=6):
    g = IntegerMatrix.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        e = [[int(a == b) for b in range(n)] for a in range(n)]
        if i != j:
            e[i][j] = rng.choice([-1, 1])
        else:
            e[0][0] = -1
        g = IntegerMatrix(e) @ g
    return g


@pytest.mark.parametrize("name", SURFACES + ["CP3"])
def test_invariants_are_conjugation_invariant(name):
    rng = random.Random(name)
    p = preset(name)
    g = random_unimodular(rng, p.dim)
    q = transform(p, g)
    g_inv = unimodular_inverse(g)
    for s in involutions(symmetry_group(p)):
        a, b = real_lagrangian_report(s, p), real_lagrangian_report(g @ s @ g_inv, q)
        assert (a.components, a.euler, a.z2_betti_total, a.surface_label) == (
            b.components, b.euler, b.z2_betti_total, b.surface_label,
        )
        assert a.real_kernel.group.invariant_factors == b.real_kernel.group.invariant_factors


def test_hirzebruch_surface():
    # trapezoids outside the preset list; the real locus of F_a is T2 for even a, Klein for odd a
    for a, label in [(2, "T2"), (3, "Klein")]:
        p = build_polytope([HalfSpace(v, k) for v, k in [((-1, 0), 1), ((0, -1), 1), ((1, a), 2 * a), ((0, 1), 1)]])
        for s in involutions(symmetry_group(p)):
            assert real_lagrangian_report(s, p).components == 1
        assert real_lagrangian_report(IntegerMatrix.identity(2), p).surface_label == label
