"""Topology of the fixed locus of a lifted polytope involution.

The fixed locus ``L`` maps onto ``P = Fix(sigma) ∩ Δ``.  Over a point whose
carrier in Δ is the face ``G`` the fiber is the fixed subgroup of the
involution ``A = -sigma^T`` acting on the quotient torus ``T^n / T_G``, where
``T_G`` is spanned by the normals of the facets containing ``G``.  The model
below records one stratum per face of ``P`` (open face times fiber group) and
how fiber components over a face limit onto components over its boundary.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import (
    AbelianGroupType,
    IntegerMatrix,
    dot,
    integer_kernel_basis,
    smith_normal_form,
    torus_endo_fixed,
    unimodular_inverse,
)
from .polytope import DelzantPolytope, Face
from .real_delzant import (
    ambient_involution,
    characteristic_map,
    kernel_torus,
    real_kernel,
    real_structure,
    RealKernelReport,
)
from .symmetry import FixedFace, FixedPolytope, facet_permutation, fixed_polytope


class CarrierNotInvariant(ValueError):
    pass


class DimensionUnsupported(ValueError):
    pass


class InconsistentModel(RuntimeError):
    """Two independent computations of the same invariant disagree."""


@dataclass(frozen=True)
class Stratum:
    face: FixedFace
    carrier: Face
    fiber: AbelianGroupType
    A_G: IntegerMatrix
    # quotient N -> N/N_G and a section N/N_G -> N
    quotient: IntegerMatrix = field(repr=False, compare=False)
    lift: IntegerMatrix = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.face.dim


@dataclass(frozen=True)
class AttachmentEdge:
    """Face ``source`` limits onto its boundary face ``target``.

    ``component_map[c]`` is the target fiber component that source component
    ``c`` lands in; ``degree`` is the covering degree when both fibers are
    one-dimensional.
    """

    source: int
    target: int
    component_map: tuple[int, ...]
    degree: int | None


@dataclass(frozen=True)
class AttachmentGraph:
    nodes: tuple[tuple[int, int], ...]
    edges: tuple[AttachmentEdge, ...]

    def components(self) -> list[list[tuple[int, int]]]:
        parent = {v: v for v in self.nodes}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            for c, t in enumerate(e.component_map):
                a, b = find((e.source, c)), find((e.target, t))
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[tuple[int, int], list] = {}
        for v in self.nodes:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())


@dataclass(frozen=True)
class StratifiedModel:
    sigma: IntegerMatrix
    polytope: DelzantPolytope
    fixed: FixedPolytope
    strata: tuple[Stratum, ...]
    graph: AttachmentGraph

    @property
    def n(self) -> int:
        return self.polytope.dim

    @property
    def top(self) -> Stratum:
        return self.strata[-1]

    def vertex_strata(self) -> list[Stratum]:
        return [s for s in self.strata if s.dim == 0]


@dataclass(frozen=True)
class SurfaceType:
    orientable: bool
    euler: int

    @property
    def label(self) -> str:
        """Short label: S2, T2, RP2, Klein, N<m> or Sigma<g>."""
        if self.orientable:
            if self.euler % 2:
                raise ValueError("orientable surface with odd Euler characteristic")
            g = (2 - self.euler) // 2
            return {0: "S2", 1: "T2"}.get(g, f"Sigma{g}")
        m = 2 - self.euler
        return {1: "RP2", 2: "Klein"}.get(m, f"N{m}")

    @property
    def display(self) -> str:
        lab = self.label
        if lab.startswith("N"):
            return f"#{lab[1:]}RP2"
        if lab.startswith("Sigma"):
            return f"#{lab[5:]}T2"
        return lab

    @classmethod
    def from_label(cls, label: str) -> SurfaceType:
        fixed = {"S2": (True, 2), "T2": (True, 0), "RP2": (False, 1), "Klein": (False, 0)}
        if label in fixed:
            return cls(*fixed[label])
        if label.startswith("Sigma"):
            return cls(True, 2 - 2 * int(label[5:]))
        if label.startswith("N"):
            return cls(False, 2 - int(label[1:]))
        raise ValueError(f"unknown surface label {label!r}")


# --------------------------------------------------------------------------
# fibers and strata


def _quotient_data(p: DelzantPolytope, active: frozenset[int]):
    n = p.dim
    if not active:
        eye = IntegerMatrix.identity(n)
        return eye, eye
    gens = IntegerMatrix.from_columns([p.facets[i].normal for i in sorted(active)], n)
    snf = smith_normal_form(gens)
    r = snf.rank
    if any(d != 1 for d in snf.divisors[:r]):
        raise ValueError("facet normals of a face do not span a saturated sublattice")
    q = IntegerMatrix(snf.U.rows[r:], ncols=n)
    u_inv = unimodular_inverse(snf.U)
    lift = IntegerMatrix.from_columns(u_inv.columns()[r:], n)
    return q, lift


def _fiber(sigma: IntegerMatrix, G: Face, p: DelzantPolytope):
    tau = facet_permutation(sigma, p)
    if frozenset(tau(i) for i in G.active) != G.active:
        raise CarrierNotInvariant(f"facet set {sorted(G.active)} is not preserved")
    q, lift = _quotient_data(p, G.active)
    a_g = q @ ambient_involution(sigma) @ lift
    return a_g, torus_endo_fixed(a_g), q, lift


def fiber_group(sigma: IntegerMatrix, G: Face, p: DelzantPolytope) -> tuple[IntegerMatrix, AbelianGroupType]:
    """The involution on ``T^n / T_G`` and its fixed subgroup."""
    a_g, group, _, _ = _fiber(sigma, G, p)
    return a_g, group


def _mod1(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) % 1 for x in v)


def _circle_generator(a: IntegerMatrix) -> tuple[int, ...]:
    (w,) = integer_kernel_basis(a - IntegerMatrix.identity(a.nrows)).columns()
    return w


def _covering_degree(proj: IntegerMatrix, src: Stratum, tgt: Stratum) -> int:
    ws, wt = _circle_generator(src.A_G), _circle_generator(tgt.A_G)
    image = proj @ ws
    j = next(i for i, x in enumerate(wt) if x)
    d = image[j] // wt[j]
    if tuple(d * x for x in wt) != image:
        raise InconsistentModel("circle generator does not map into the target circle")
    return abs(d)


def _attach(src: Stratum, tgt: Stratum, si: int, ti: int) -> AttachmentEdge:
    proj = tgt.quotient @ src.lift
    cmap = tuple(
        tgt.fiber.component_of(_mod1(proj @ rep)) for rep in src.fiber.component_representatives
    )
    degree = None
    if src.fiber.torus_rank == 1 and tgt.fiber.torus_rank == 1:
        degree = _covering_degree(proj, src, tgt)
    return AttachmentEdge(si, ti, cmap, degree)


def stratify(sigma: IntegerMatrix, p: DelzantPolytope) -> StratifiedModel:
    fixed = fixed_polytope(sigma, p)
    strata = []
    for face in fixed.faces:
        a_g, group, q, lift = _fiber(sigma, face.carrier, p)
        strata.append(Stratum(face, face.carrier, group, a_g, q, lift))
    nodes = tuple((i, c) for i, s in enumerate(strata) for c in range(s.fiber.component_count))
    edges = []
    for i, s in enumerate(strata):
        for j, t in enumerate(strata):
            if t.face.vertex_ids < s.face.vertex_ids:
                edges.append(_attach(s, t, i, j))
    return StratifiedModel(sigma, p, fixed, tuple(strata), AttachmentGraph(nodes, tuple(edges)))


# --------------------------------------------------------------------------
# invariants


def euler_characteristic(model: StratifiedModel) -> int:
    return sum(
        (-1) ** s.dim * (s.fiber.component_count if s.fiber.torus_rank == 0 else 0)
        for s in model.strata
    )


def component_count(model: StratifiedModel) -> int:
    return len(model.graph.components())


def _fiber_betti(g: AbelianGroupType) -> int:
    return g.component_count * 2**g.torus_rank


def _candidate_coefficients(d: int):
    s = 1
    while True:
        block = [c for c in itertools.product(range(-s, s + 1), repeat=d) if sum(map(abs, c)) == s]
        block.sort(key=lambda c: tuple((abs(x), x < 0) for x in c))
        yield from block
        s += 1


def generic_xi(sigma: IntegerMatrix, p: DelzantPolytope, fixed: FixedPolytope | None = None) -> tuple[int, ...]:
    """A small ``sigma^T``-fixed lattice vector separating the vertices of ``P``."""
    fixed = fixed or fixed_polytope(sigma, p)
    n = p.dim
    if fixed.dim == 0:
        return (0,) * n
    basis = integer_kernel_basis(sigma.T - IntegerMatrix.identity(n))
    points = fixed.vertices
    for c in _candidate_coefficients(basis.ncols):
        xi = basis @ c
        if len({dot(xi, x) for x in points}) == len(points):
            return xi
    raise AssertionError("unreachable")


def critical_faces(model: StratifiedModel, xi) -> list[int]:
    """Indices of faces of ``P`` on which ``<., xi>`` is constant."""
    out = []
    for i, s in enumerate(model.strata):
        values = {dot(xi, model.fixed.vertices[v]) for v in s.face.vertex_ids}
        if len(values) == 1:
            out.append(i)
    return out


def z2_betti_total(sigma: IntegerMatrix, p: DelzantPolytope, model: StratifiedModel | None = None) -> int:
    """Total mod 2 Betti number as the homology of the critical set of a generic ``H_xi``."""
    model = model or stratify(sigma, p)
    xi = generic_xi(sigma, p, model.fixed)
    crit = critical_faces(model, xi)
    vertices = [i for i, s in enumerate(model.strata) if s.dim == 0]
    if crit != vertices:
        raise InconsistentModel(f"critical faces {crit} are not the vertices {vertices} of P")
    return sum(_fiber_betti(model.strata[i].fiber) for i in crit)


# --------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True)
class EndpointGluing:
    """How interior circles close up at one fiber component over an endpoint of ``P``."""

    stratum: int
    component: int
    kind: str  # "disk", "crosscap" or "tube"
    incident: tuple[tuple[int, int | None], ...]  # (interior component, degree)


def endpoint_gluings(model: StratifiedModel) -> list[EndpointGluing]:
    """Local models at the endpoints of a one-dimensional ``P`` in a surface."""
    if model.n != 2 or model.fixed.dim != 1:
        raise DimensionUnsupported("endpoint gluings need n = 2 and dim P = 1")
    top = len(model.strata) - 1
    out = []
    for e in model.graph.edges:
        if e.source != top:
            continue
        tgt = model.strata[e.target]
        for comp in range(tgt.fiber.component_count):
            incident = tuple(
                (c, e.degree) for c, t in enumerate(e.component_map) if t == comp
            )
            if tgt.fiber.torus_rank == 0:
                if len(incident) != 1:
                    raise InconsistentModel("a fixed point at a vertex meets several circles")
                kind = "disk"
            else:
                degrees = sorted(d for _, d in incident)
                if degrees == [2]:
                    kind = "crosscap"
                elif degrees == [1, 1]:
                    kind = "tube"
                else:
                    raise InconsistentModel(f"unexpected endpoint degrees {degrees}")
            out.append(EndpointGluing(e.target, comp, kind, incident))
    return out


def _small_cover_orientable(p: DelzantPolytope) -> bool:
    classes = [tuple(c % 2 for c in h.normal) for h in p.facets]
    for phi in itertools.product((0, 1), repeat=p.dim):
        if all(dot(phi, v) % 2 == 1 for v in classes):
            return True
    return False


def classify_surface(sigma: IntegerMatrix, p: DelzantPolytope, model: StratifiedModel | None = None) -> SurfaceType:
    """Diffeomorphism type of a connected fixed surface."""
    if p.dim != 2:
        raise DimensionUnsupported(f"surface classification needs n = 2, got {p.dim}")
    model = model or stratify(sigma, p)
    if component_count(model) != 1:
        raise DimensionUnsupported("fixed locus is disconnected; classify components separately")
    d = model.fixed.dim
    if d == 0:
        g = model.top.fiber
        if g.torus_rank != 2:
            raise InconsistentModel("a point image must carry a full torus fiber")
        return SurfaceType(True, 0)
    if d == 2:
        return SurfaceType(_small_cover_orientable(p), euler_characteristic(model))
    gluings = endpoint_gluings(model)
    disks = sum(1 for g in gluings if g.kind == "disk")
    crosscap = any(g.kind == "crosscap" for g in gluings)
    return SurfaceType(not crosscap, disks)


# --------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class InvariantReport:
    dim: int
    components: int
    euler: int
    z2_betti_total: int
    moment_image: FixedPolytope
    surface_type: SurfaceType | None
    real_kernel: RealKernelReport

    @property
    def surface_label(self) -> str:
        return self.surface_type.label if self.surface_type else "unclassified"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "components": self.components,
            "euler": self.euler,
            "z2_betti": self.z2_betti_total,
            "moment_image_vertices": [[str(c) for c in v] for v in self.moment_image.vertices],
            "surface": self.surface_label,
        }


def real_lagrangian_report(sigma: IntegerMatrix, p: DelzantPolytope) -> InvariantReport:
    rs = real_structure(sigma, p)
    kr = real_kernel(kernel_torus(characteristic_map(p)), rs)
    model = stratify(sigma, p)
    n = p.dim
    if model.fixed.dim + model.top.fiber.torus_rank != n:
        raise InconsistentModel("top stratum dimension does not add up to n")
    comps = component_count(model)
    chi = euler_characteristic(model)
    betti = z2_betti_total(sigma, p, model)
    nv = len(p.vertices)
    if (chi - nv) % 2 or betti > nv or comps < 1:
        raise InconsistentModel(f"Smith bounds fail: chi={chi}, betti={betti}, vertices={nv}")
    surface = None
    if n == 2 and comps == 1:
        surface = classify_surface(sigma, p, model)
        if surface.euler != chi or betti != 4 - chi:
            raise InconsistentModel(f"surface {surface} disagrees with chi={chi}, betti={betti}")
    return InvariantReport(n, comps, chi, betti, model.fixed, surface, kr)
