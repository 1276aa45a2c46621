"""Lattice symmetries of a polytope, their facet permutations, and fixed loci."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import IntegerMatrix, integer_kernel_basis, unimodular_inverse
from .polytope import DelzantPolytope, Face, carrier, h_polytope


class NotASymmetry(ValueError):
    pass


@dataclass(frozen=True)
class FacetPermutation:
    """0-based permutation of facet indices: facet ``i`` goes to ``perm[i]``."""

    perm: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def is_involution(self) -> bool:
        return all(self.perm[self.perm[i]] == i for i in range(len(self.perm)))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.perm[j]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        """1-based cycle notation, e.g. ``(1 2)(3 4)``; ``id`` for the identity."""
        parts = [c for c in self.cycles() if len(c) > 1]
        if not parts:
            return "id"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in parts)


def _dual_action(sigma: IntegerMatrix) -> IntegerMatrix:
    # sigma acts on points; normals transform by the inverse transpose
    return unimodular_inverse(sigma).T


def facet_permutation(sigma: IntegerMatrix, p: DelzantPolytope) -> FacetPermutation:
    """The permutation ``tau`` with ``sigma^{-T} v_i = v_tau(i)`` and equal offsets."""
    if sigma.shape != (p.dim, p.dim) or abs(sigma.det()) != 1:
        raise NotASymmetry("not an element of GL(n, Z)")
    dual = _dual_action(sigma)
    index = {h.normal: i for i, h in enumerate(p.facets)}
    perm = []
    for h in p.facets:
        j = index.get(dual @ h.normal)
        if j is None or p.facets[j].offset != h.offset:
            raise NotASymmetry(f"{sigma!r} does not preserve the polytope")
        perm.append(j)
    return FacetPermutation(tuple(perm))


def symmetry_group(p: DelzantPolytope) -> list[IntegerMatrix]:
    """All ``sigma`` in GL(n, Z) with ``sigma(P) = P``, sorted by entries.

    The normals at a base vertex form a Z-basis, so a symmetry is fixed by
    where it sends them: some vertex's normals in some order.
    """
    vertex_faces = p.faces_of_dim(0)
    base = sorted(vertex_faces[0].active)
    base_m = IntegerMatrix.from_columns([p.facets[i].normal for i in base], p.dim)
    base_inv = unimodular_inverse(base_m)
    found = set()
    for f in vertex_faces:
        for order in itertools.permutations(sorted(f.active)):
            target = IntegerMatrix.from_columns([p.facets[i].normal for i in order], p.dim)
            dual = target @ base_inv
            if abs(dual.det()) != 1:
                continue
            sigma = unimodular_inverse(dual).T
            try:
                facet_permutation(sigma, p)
            except NotASymmetry:
                continue
            found.add(sigma)
    group = sorted(found, key=IntegerMatrix.key)
    members = set(group)
    if any(a @ b not in members for a in group for b in group):
        raise AssertionError("symmetry search returned a set not closed under composition")
    return group


def involutions(group: Sequence[IntegerMatrix]) -> list[IntegerMatrix]:
    """Elements squaring to the identity; identity first, then by entries."""
    if not group:
        return []
    n = group[0].nrows
    eye = IntegerMatrix.identity(n)
    invs = [s for s in group if s @ s == eye]
    return sorted(invs, key=lambda s: (s != eye, s.key()))


@dataclass(frozen=True)
class FixedFace:
    """A face of ``Fix(sigma) ∩ P`` with the face of ``P`` carrying its interior."""

    vertex_ids: frozenset[int]
    dim: int
    barycenter: tuple[Fraction, ...]
    carrier: Face


@dataclass(frozen=True)
class FixedPolytope:
    subspace_basis: IntegerMatrix  # n x d, saturated basis of ker(sigma - I)
    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    faces: tuple[FixedFace, ...]

    def vertex_faces(self) -> list[FixedFace]:
        return [f for f in self.faces if f.dim == 0]

    @property
    def top(self) -> FixedFace:
        return self.faces[-1]

    def boundary_of(self, face: FixedFace) -> list[FixedFace]:
        return [g for g in self.faces if g.vertex_ids < face.vertex_ids]


def fixed_polytope(sigma: IntegerMatrix, p: DelzantPolytope) -> FixedPolytope:
    """``Fix(sigma) ∩ P`` as a polytope in the fixed subspace, with carriers."""
    n = p.dim
    basis = integer_kernel_basis(sigma - IntegerMatrix.identity(n))
    d = basis.ncols
    restricted = [(basis.T @ h.normal, h.offset) for h in p.facets]
    restricted = [(a, b) for a, b in restricted if any(a)]
    hp = h_polytope([a for a, _ in restricted], [b for _, b in restricted], d)
    vertices = tuple(basis @ y for y in hp.vertices)
    if d == 0:
        vertices = (tuple(Fraction(0) for _ in range(n)),)
    faces = []
    for vs in hp.face_sets:
        pts = [vertices[i] for i in sorted(vs)]
        bary = tuple(sum(c) / len(pts) for c in zip(*pts))
        faces.append(FixedFace(vs, hp.face_dim(vs), bary, carrier(p, bary)))
    faces.sort(key=lambda f: (f.dim, sorted(f.vertex_ids)))
    return FixedPolytope(basis, d, vertices, tuple(faces))
