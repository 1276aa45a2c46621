"""Delzant polytopes in half-space form.

A polytope is ``{x : <x, v_i> <= kappa_i}`` with primitive integer normals
``v_i`` and rational offsets ``kappa_i``.  Vertices are found by solving every
``n``-subset of facet equations, faces are the distinct vertex sets cut out by
sets of tight inequalities, and the polytope is translated so its (solid)
centroid is the origin.  Facet order is significant: facet indices are used as
stable identifiers everywhere downstream.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .linalg import IntegerMatrix, dot, rational_nullspace, rational_rank, solve_square

Vector = tuple[Fraction, ...]


class PolytopeError(ValueError):
    pass


class UnboundedPolytope(PolytopeError):
    pass


class EmptyInterior(PolytopeError):
    pass


class RedundantFacet(PolytopeError):
    def __init__(self, index: int):
        super().__init__(f"facet {index} is redundant")
        self.index = index


class NonPrimitiveNormal(PolytopeError):
    pass


class PointOutsidePolytope(PolytopeError):
    pass


class UnknownPreset(KeyError):
    pass


@dataclass(frozen=True)
class HalfSpace:
    """The inequality ``<x, normal> <= offset``."""

    normal: tuple[int, ...]
    offset: Fraction

    def __init__(self, normal: Sequence[int], offset):
        object.__setattr__(self, "normal", tuple(int(c) for c in normal))
        object.__setattr__(self, "offset", Fraction(offset))

    def is_primitive(self) -> bool:
        g = 0
        for c in self.normal:
            g = gcd(g, c)
        return g == 1


@dataclass(frozen=True)
class Face:
    """A face, identified by the set of facets that contain it."""

    active: frozenset[int]
    dim: int
    vertex_ids: frozenset[int]


@dataclass(frozen=True)
class DelzantPolytope:
    dim: int
    facets: tuple[HalfSpace, ...]
    vertices: tuple[Vector, ...]
    faces: tuple[Face, ...]

    @property
    def normals(self) -> tuple[tuple[int, ...], ...]:
        return tuple(h.normal for h in self.facets)

    @property
    def offsets(self) -> tuple[Fraction, ...]:
        return tuple(h.offset for h in self.facets)

    @property
    def facet_count(self) -> int:
        return len(self.facets)

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]

    def face_with_active(self, active: Iterable[int]) -> Face | None:
        active = frozenset(active)
        for f in self.faces:
            if f.active == active:
                return f
        return None

    def active_at(self, x: Sequence) -> frozenset[int]:
        return frozenset(i for i, h in enumerate(self.facets) if dot(x, h.normal) == h.offset)

    def contains(self, x: Sequence) -> bool:
        return all(dot(x, h.normal) <= h.offset for h in self.facets)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [
                {"normal": list(h.normal), "offset": str(h.offset)} for h in self.facets
            ],
        }


# --------------------------------------------------------------------------
# generic H-polytope machinery (normals need not be primitive or irredundant)


def _check_bounded(normals: Sequence[Sequence], dim: int) -> None:
    # Bounded iff the recession cone {d : <d, v_i> <= 0} is {0}.  If the
    # normals have full rank that cone is pointed, so a nonzero cone has an
    # extreme ray cut out by dim - 1 independent tight constraints.
    if rational_rank(normals) < dim:
        raise UnboundedPolytope("normals do not span; the region contains a line")
    for subset in itertools.combinations(range(len(normals)), dim - 1):
        rows = [normals[i] for i in subset]
        null = rational_nullspace(rows, dim)
        if len(null) != 1:
            continue
        d = null[0]
        for sign in (1, -1):
            if all(sign * dot(d, v) <= 0 for v in normals):
                raise UnboundedPolytope(f"recession direction {tuple(sign * c for c in d)}")


def _enumerate_vertices(normals, offsets, dim) -> list[tuple[Vector, frozenset[int]]]:
    found: dict[Vector, set[int]] = {}
    for subset in itertools.combinations(range(len(normals)), dim):
        x = solve_square([normals[i] for i in subset], [offsets[i] for i in subset])
        if x is None or x in found:
            continue
        if all(dot(x, v) <= b for v, b in zip(normals, offsets)):
            found[x] = {i for i, (v, b) in enumerate(zip(normals, offsets)) if dot(x, v) == b}
    return [(x, frozenset(found[x])) for x in sorted(found)]


def affine_dim(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    base = points[0]
    return rational_rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


def _face_vertex_sets(tight: Sequence[frozenset[int]], ncons: int) -> list[frozenset[int]]:
    """All nonempty vertex sets cut out by sets of tight constraints."""
    nv = len(tight)
    by_constraint = [frozenset(v for v in range(nv) if i in tight[v]) for i in range(ncons)]
    family = {frozenset(range(nv))}
    for vs in by_constraint:
        family |= {f & vs for f in family if f & vs}
    return sorted(family, key=lambda f: (len(f), sorted(f)))


def _fan_simplices(vertex_set: frozenset[int], points, faces_by_set, dim_of) -> list[list[int]]:
    """Triangulate a face by coning from its lowest vertex over opposite facets."""
    d = dim_of[vertex_set]
    if d == 0:
        return [[min(vertex_set)]]
    apex = min(vertex_set)
    out = []
    for sub in faces_by_set:
        if dim_of[sub] == d - 1 and sub < vertex_set and apex not in sub:
            for s in _fan_simplices(sub, points, faces_by_set, dim_of):
                out.append([apex] + s)
    return out


def solid_centroid(points: Sequence[Vector], face_sets: Sequence[frozenset[int]], dim: int) -> Vector:
    """Exact volume-weighted centroid via a fan triangulation from vertex 0."""
    dim_of = {f: affine_dim([points[i] for i in f]) for f in face_sets}
    full = frozenset(range(len(points)))
    total = Fraction(0)
    acc = [Fraction(0)] * dim
    for simplex in _fan_simplices(full, points, face_sets, dim_of):
        p0 = points[simplex[0]]
        rows = [[a - b for a, b in zip(points[i], p0)] for i in simplex[1:]]
        vol = abs(_frac_det(rows))
        total += vol
        for k in range(dim):
            acc[k] += vol * sum(points[i][k] for i in simplex) / (dim + 1)
    return tuple(c / total for c in acc)


def _frac_det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class HPolytope:
    """Vertex/face data of a bounded full-dimensional H-polytope."""

    dim: int
    vertices: tuple[Vector, ...]
    tight: tuple[frozenset[int], ...]
    face_sets: tuple[frozenset[int], ...]

    def face_dim(self, vertex_set: frozenset[int]) -> int:
        return affine_dim([self.vertices[i] for i in vertex_set])


def h_polytope(normals: Sequence[Sequence], offsets: Sequence, dim: int) -> HPolytope:
    normals = [tuple(Fraction(c) for c in v) for v in normals]
    offsets = [Fraction(b) for b in offsets]
    if dim == 0:
        return HPolytope(0, ((),), (frozenset(),), (frozenset({0}),))
    _check_bounded(normals, dim)
    found = _enumerate_vertices(normals, offsets, dim)
    if not found:
        raise EmptyInterior("no feasible point")
    points = [x for x, _ in found]
    if affine_dim(points) < dim:
        raise EmptyInterior(f"polytope has dimension {affine_dim(points)} < {dim}")
    tight = tuple(t for _, t in found)
    return HPolytope(dim, tuple(points), tight, tuple(_face_vertex_sets(tight, len(normals))))


# --------------------------------------------------------------------------
# Delzant polytopes


def build_polytope(halfspaces: Sequence[HalfSpace]) -> DelzantPolytope:
    """Build, validate and centre a polytope from its facet inequalities.

    Raises:
        NonPrimitiveNormal: a normal vector is not primitive.
        UnboundedPolytope: the region is unbounded (includes ``k < n + 1``).
        EmptyInterior: the region is empty or lower dimensional.
        RedundantFacet: an inequality does not support a facet.
    """
    halfspaces = list(halfspaces)
    if not halfspaces:
        raise UnboundedPolytope("no half-spaces")
    n = len(halfspaces[0].normal)
    if n < 1 or any(len(h.normal) != n for h in halfspaces):
        raise PolytopeError("normals must all have the same positive length")
    for i, h in enumerate(halfspaces):
        if not h.is_primitive():
            raise NonPrimitiveNormal(f"normal {h.normal} of facet {i} is not primitive")
    normals = [h.normal for h in halfspaces]
    hp = h_polytope(normals, [h.offset for h in halfspaces], n)

    seen: dict[frozenset[int], int] = {}
    for i in range(len(halfspaces)):
        vs = frozenset(v for v, t in enumerate(hp.tight) if i in t)
        if not vs or hp.face_dim(vs) != n - 1 or vs in seen:
            raise RedundantFacet(i)
        seen[vs] = i

    c = solid_centroid(hp.vertices, hp.face_sets, n)
    vertices = tuple(tuple(a - b for a, b in zip(x, c)) for x in hp.vertices)
    facets = tuple(HalfSpace(h.normal, h.offset - dot(c, h.normal)) for h in halfspaces)

    faces = []
    for vs in hp.face_sets:
        active = frozenset.intersection(*(hp.tight[v] for v in vs))
        d = n - rational_rank([normals[i] for i in active]) if active else n
        faces.append(Face(active=active, dim=d, vertex_ids=vs))
    faces.sort(key=lambda f: (f.dim, sorted(f.vertex_ids)))
    return DelzantPolytope(dim=n, facets=facets, vertices=vertices, faces=tuple(faces))


@dataclass(frozen=True)
class VertexCheck:
    vertex_id: int
    active: tuple[int, ...]
    abs_det: int | None  # None when the vertex is not on exactly n facets


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    checks: tuple[VertexCheck, ...]

    @property
    def failures(self) -> tuple[VertexCheck, ...]:
        return tuple(c for c in self.checks if c.abs_det != 1)


def validate_delzant(p: DelzantPolytope) -> ValidationReport:
    """Check that the normals at every vertex form a Z-basis."""
    checks = []
    for f in p.faces_of_dim(0):
        (vid,) = f.vertex_ids
        active = tuple(sorted(f.active))
        if len(active) != p.dim:
            checks.append(VertexCheck(vid, active, None))
            continue
        m = IntegerMatrix([p.facets[i].normal for i in active])
        checks.append(VertexCheck(vid, active, abs(m.det())))
    checks.sort(key=lambda c: c.vertex_id)
    return ValidationReport(valid=all(c.abs_det == 1 for c in checks), checks=tuple(checks))


def carrier(p: DelzantPolytope, x: Sequence) -> Face:
    """The face whose relative interior contains ``x``."""
    x = tuple(Fraction(c) for c in x)
    if not p.contains(x):
        raise PointOutsidePolytope(f"{x} is not in the polytope")
    face = p.face_with_active(p.active_at(x))
    if face is None:  # only possible for non-simple input
        raise PointOutsidePolytope(f"no face with active set {sorted(p.active_at(x))}")
    return face


# --------------------------------------------------------------------------
# presets and JSON

_ONE = Fraction(1)

PRESET_HALFSPACES: dict[str, list[tuple[tuple[int, ...], Fraction]]] = {
    "CP1": [((1,), _ONE), ((-1,), _ONE)],
    "CP2": [((-1, 0), _ONE), ((0, -1), _ONE), ((1, 1), _ONE)],
    "CP3": [((0, -1, 0), _ONE), ((0, 0, -1), _ONE), ((-1, 0, 0), _ONE), ((1, 1, 1), _ONE)],
    "S2xS2": [((1, 0), _ONE), ((0, 1), _ONE), ((-1, 0), _ONE), ((0, -1), _ONE)],
    "X1": [((-1, 0), _ONE), ((0, -1), _ONE), ((1, 1), _ONE), ((-1, -1), _ONE)],
    "X2": [((1, 0), _ONE), ((0, 1), _ONE), ((-1, 0), _ONE), ((0, -1), _ONE), ((1, 1), _ONE)],
    "X3": [
        ((1, 0), _ONE), ((0, 1), _ONE), ((-1, 0), _ONE),
        ((0, -1), _ONE), ((1, 1), _ONE), ((-1, -1), _ONE),
    ],
}
PRESET_ALIASES = {"X0": "CP2", "Q": "S2xS2"}
PRESET_NAMES = tuple(PRESET_HALFSPACES)


def preset(name: str) -> DelzantPolytope:
    key = PRESET_ALIASES.get(name, name)
    if key not in PRESET_HALFSPACES:
        raise UnknownPreset(name)
    return build_polytope([HalfSpace(v, k) for v, k in PRESET_HALFSPACES[key]])


def halfspaces_from_json(data: dict) -> list[HalfSpace]:
    """Parse ``{"dim": n, "facets": [{"normal": [...], "offset": "p/q"}]}``."""
    if not isinstance(data, dict) or "facets" not in data or "dim" not in data:
        raise PolytopeError("polytope JSON needs 'dim' and 'facets'")
    n = data["dim"]
    if not isinstance(n, int) or n < 1:
        raise PolytopeError("'dim' must be a positive integer")
    out = []
    for i, f in enumerate(data["facets"]):
        normal, offset = f.get("normal"), f.get("offset")
        if (
            not isinstance(normal, list)
            or len(normal) != n
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in normal)
        ):
            raise PolytopeError(f"facet {i}: normal must be {n} integers")
        if isinstance(offset, bool) or not isinstance(offset, (str, int)):
            raise PolytopeError(f"facet {i}: offset must be a rational string")
        if isinstance(offset, str) and "." in offset:
            raise PolytopeError(f"facet {i}: offset must be decimal-free")
        try:
            out.append(HalfSpace(normal, Fraction(offset)))
        except (ValueError, ZeroDivisionError) as exc:
            raise PolytopeError(f"facet {i}: bad offset {offset!r}") from exc
    return out


def load_polytope(path: str) -> DelzantPolytope:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PolytopeError(f"invalid JSON: {exc}") from exc
    return build_polytope(halfspaces_from_json(data))
