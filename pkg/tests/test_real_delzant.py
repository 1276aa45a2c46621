import itertools
from fractions import Fraction

import pytest

from realtoric.linalg import IntegerMatrix, same_lattice
from realtoric.polytope import HalfSpace, build_polytope, preset
from realtoric.real_delzant import (
    NotDelzant,
    ambient_involution,
    characteristic_map,
    fixed_rho_torus,
    kernel_is_preserved,
    kernel_torus,
    real_kernel,
    real_structure,
)
from realtoric.symmetry import involutions, symmetry_group

PRESETS = ["CP1", "CP2", "CP3", "S2xS2", "X1", "X2", "X3"]


def test_characteristic_maps():
    assert characteristic_map(preset("CP1")).matrix == IntegerMatrix([[1, -1]])
    assert characteristic_map(preset("CP3")).matrix == IntegerMatrix(
        [[0, 0, -1, 1], [-1, 0, 0, 1], [0, -1, 0, 1]]
    )
    assert characteristic_map(preset("X1")).matrix == IntegerMatrix([[-1, 0, 1, -1], [0, -1, 1, -1]])


def test_not_delzant():
    # primitive normals spanning a sublattice of index 2
    p = build_polytope([HalfSpace((1, 2), 1), HalfSpace((1, -2), 1), HalfSpace((-1, 0), 1)])
    with pytest.raises(NotDelzant):
        characteristic_map(p)


def test_kernel_examples():
    assert kernel_torus(characteristic_map(preset("CP1"))).basis == IntegerMatrix([[1], [1]])
    assert kernel_torus(characteristic_map(preset("CP3"))).basis.columns() == ((1, 1, 1, 1),)
    square = kernel_torus(characteristic_map(preset("S2xS2"))).basis
    assert same_lattice(square, IntegerMatrix([[1, 0], [0, 1], [1, 0], [0, 1]]))


@pytest.mark.parametrize("name", PRESETS)
def test_kernel_invariants(name):
    pi = characteristic_map(preset(name))
    kt = kernel_torus(pi)
    assert kt.dim == pi.matrix.ncols - pi.matrix.nrows
    assert pi.matrix @ kt.basis == IntegerMatrix.zeros(pi.matrix.nrows, kt.dim)


def test_fixed_rho_examples():
    cp3 = preset("CP3")
    rs = real_structure(IntegerMatrix([[-1, -1, -1], [0, 0, 1], [0, 1, 0]]), cp3)
    assert rs.two_cycles == ((0, 1), (2, 3))
    g = fixed_rho_torus(rs)
    assert (g.torus_rank, g.invariant_factors) == (2, ())
    cp2 = real_structure(IntegerMatrix([[0, 1], [1, 0]]), preset("CP2"))
    g = fixed_rho_torus(cp2)
    assert (g.torus_rank, g.invariant_factors) == (1, (2,))
    ident = real_structure(IntegerMatrix.identity(2), preset("CP2"))
    g = fixed_rho_torus(ident)
    assert (g.torus_rank, g.invariant_factors) == (0, (2, 2, 2))


def _kr(name, sigma):
    p = preset(name)
    rs = real_structure(IntegerMatrix(sigma), p)
    return real_kernel(kernel_torus(characteristic_map(p)), rs)


def test_real_kernel_examples():
    r = _kr("CP3", [[-1, -1, -1], [0, 0, 1], [0, 1, 0]])
    # the real level set is a 3-sphere: n + dim K_R = 3 + 0
    assert (r.group.torus_rank, r.group.invariant_factors, r.real_level_dim) == (0, (2,), 3)
    r = _kr("X1", [[0, 1], [1, 0]])
    assert (r.group.torus_rank, r.group.invariant_factors) == (0, (2, 2))
    r = _kr("S2xS2", [[0, -1], [-1, 0]])
    assert (r.group.torus_rank, r.group.component_count) == (1, 1)
    r = _kr("S2xS2", [[-1, 0], [0, 1]])
    assert (r.group.torus_rank, r.group.invariant_factors) == (0, (2, 2))


def brute_force_real_kernel_size(p, rs, denom=4):
    """Count t = exp(2 pi i x) with x in (1/denom) Z^k, pi x integral, t_i t_tau(i) = 1."""
    pi = characteristic_map(p).matrix
    count = 0
    for num in itertools.product(range(denom), repeat=pi.ncols):
        x = [Fraction(c, denom) for c in num]
        if any(v.denominator != 1 for v in pi @ x):
            continue
        if all((x[i] + x[rs.tau(i)]).denominator == 1 for i in range(len(x))):
            count += 1
    return count


@pytest.mark.parametrize("name", PRESETS)
def test_real_kernel_properties(name):
    p = preset(name)
    kt = kernel_torus(characteristic_map(p))
    n, k = p.dim, p.facet_count
    for s in involutions(symmetry_group(p)):
        rs = real_structure(s, p)
        assert sorted(itertools.chain(rs.fixed_indices, *rs.two_cycles)) == list(range(k))
        assert kernel_is_preserved(kt, rs)
        r = real_kernel(kt, rs)
        assert r.real_level_dim == n + r.group.torus_rank
        assert (2 ** (k - n)) % r.group.component_count == 0
        if r.group.torus_rank == 0:
            assert brute_force_real_kernel_size(p, rs) == r.group.component_count
        if s == IntegerMatrix.identity(n):
            assert r.group.invariant_factors == (2,) * (k - n)


def test_ambient_involution():
    s = IntegerMatrix([[-1, -1, -1], [0, 0, 1], [0, 1, 0]])
    assert ambient_involution(s) == IntegerMatrix([[1, 0, 0], [1, 0, -1], [1, -1, 0]])
    assert ambient_involution(s) @ ambient_involution(s) == IntegerMatrix.identity(3)
