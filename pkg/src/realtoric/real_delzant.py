"""Lattice data of the Delzant construction and of its real counterpart.

The characteristic map sends the i-th basis vector of ``Z^k`` to the facet
normal ``v_i``; its kernel spans the torus ``K``.  An involution ``sigma``
permutes the facets by ``tau``, and the real structure on ``T^k`` is
``t -> (t_tau(1)^-1, ..., t_tau(k)^-1)``.  Everything is kept at the level of
integer matrices; no point sets are built.
"""
from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    AbelianGroupType,
    IntegerMatrix,
    integer_kernel_basis,
    same_lattice,
    smith_normal_form,
    torus_hom_kernel,
)
from .polytope import DelzantPolytope
from .symmetry import FacetPermutation, facet_permutation


class NotDelzant(ValueError):
    pass


@dataclass(frozen=True)
class CharacteristicMap:
    matrix: IntegerMatrix  # n x k, column i is v_i


@dataclass(frozen=True)
class KernelTorus:
    basis: IntegerMatrix  # k x (k - n)

    @property
    def dim(self) -> int:
        return self.basis.ncols


@dataclass(frozen=True)
class RealStructure:
    tau: FacetPermutation
    two_cycles: tuple[tuple[int, int], ...]
    fixed_indices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.tau.perm)

    def permutation_matrix(self) -> IntegerMatrix:
        """``P`` with ``(P x)_i = x_tau(i)``."""
        k = self.k
        return IntegerMatrix(([int(j == self.tau(i)) for j in range(k)] for i in range(k)), ncols=k)


@dataclass(frozen=True)
class RealKernelReport:
    group: AbelianGroupType
    fixed_rho_group: AbelianGroupType
    real_level_dim: int


def characteristic_map(p: DelzantPolytope) -> CharacteristicMap:
    m = IntegerMatrix.from_columns(p.normals, p.dim)
    if any(d != 1 for d in smith_normal_form(m).divisors):
        raise NotDelzant("facet normals do not generate the lattice")
    return CharacteristicMap(m)


def kernel_torus(pi: CharacteristicMap) -> KernelTorus:
    return KernelTorus(integer_kernel_basis(pi.matrix))


def real_structure(sigma: IntegerMatrix, p: DelzantPolytope) -> RealStructure:
    tau = facet_permutation(sigma, p)
    if not tau.is_involution():
        raise ValueError("sigma is not an involution")
    cycles = tau.cycles()
    return RealStructure(
        tau=tau,
        two_cycles=tuple(c for c in cycles if len(c) == 2),
        fixed_indices=tuple(c[0] for c in cycles if len(c) == 1),
    )


def ambient_involution(sigma: IntegerMatrix) -> IntegerMatrix:
    """The involution induced on the lattice of ``T^n`` by the antisymplectic lift.

    For an involution this is ``-sigma^T`` (the sign comes from the lift being
    antisymplectic).
    """
    return -sigma.T


def fixed_rho_torus(rs: RealStructure) -> AbelianGroupType:
    """``{t in T^k : t_i t_tau(i) = 1}``: one circle per 2-cycle, one Z2 per fixed index."""
    m = IntegerMatrix.identity(rs.k) + rs.permutation_matrix()
    group = torus_hom_kernel(m)
    expected = (len(rs.two_cycles), (2,) * len(rs.fixed_indices))
    if (group.torus_rank, group.invariant_factors) != expected:
        raise AssertionError(f"unexpected structure {group.describe()} for {rs.tau.cycle_notation()}")
    return group


def kernel_is_preserved(kt: KernelTorus, rs: RealStructure) -> bool:
    """Whether the coordinate permutation maps the kernel lattice onto itself."""
    return same_lattice(kt.basis, rs.permutation_matrix() @ kt.basis)


def real_kernel(kt: KernelTorus, rs: RealStructure) -> RealKernelReport:
    """Structure of ``K_R = K ∩ Fix(rho)``.

    In kernel coordinates ``alpha`` (so ``t = exp(2 pi i B alpha)``) the
    condition ``t_i t_tau(i) = 1`` reads ``(I + P_tau) B alpha in Z^k``.
    """
    n = kt.basis.nrows - kt.basis.ncols
    m = (IntegerMatrix.identity(rs.k) + rs.permutation_matrix()) @ kt.basis
    group = torus_hom_kernel(m)
    return RealKernelReport(
        group=group,
        fixed_rho_group=fixed_rho_torus(rs),
        real_level_dim=n + group.torus_rank,
    )
