"""Homological restrictions on real Lagrangian surfaces in del Pezzo surfaces.

Classes in ``H_2`` are written in a basis: ``(alpha, beta)`` for ``Q = S2 x S2``
and ``(H, E_1, ..., E_k)`` for ``X_k``.  An :class:`H2Class` stores the usual
coefficients: ``a alpha + b beta`` for Q and ``a H - sum b_j E_j`` for ``X_k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import isqrt

from .linalg import IntegerMatrix, dot
from .invariants import InvariantReport, SurfaceType


class NonToricTarget(ValueError):
    pass


class DegenerateForm(ValueError):
    pass


@dataclass(frozen=True)
class DelPezzoTarget:
    kind: str  # "Q" or "X"
    k: int = 0

    def __post_init__(self):
        if self.kind == "Q" and self.k != 0:
            raise ValueError("Q has no blow-up count")
        if self.kind not in ("Q", "X") or not 0 <= self.k <= 8:
            raise ValueError(f"no del Pezzo surface {self.kind}{self.k}")

    @classmethod
    def parse(cls, name: str) -> DelPezzoTarget:
        if name in ("Q", "S2xS2"):
            return cls("Q")
        if name.startswith("X") and name[1:].isdigit():
            return cls("X", int(name[1:]))
        raise ValueError(f"unknown del Pezzo target {name!r}")

    @property
    def name(self) -> str:
        return "Q" if self.kind == "Q" else f"X{self.k}"

    @property
    def toric(self) -> bool:
        return self.kind == "Q" or self.k <= 3

    @property
    def preset_name(self) -> str:
        return "S2xS2" if self.kind == "Q" else f"X{self.k}"

    @property
    def vertex_count(self) -> int | None:
        """Vertices of the moment polygon, which is also ``dim H_*(M; Z2)``."""
        if not self.toric:
            return None
        return 4 if self.kind == "Q" else 3 + self.k

    @property
    def rank(self) -> int:
        return 2 if self.kind == "Q" else 1 + self.k

    def intersection_form(self) -> IntegerMatrix:
        if self.kind == "Q":
            return IntegerMatrix([[0, 1], [1, 0]])
        r = self.rank
        return IntegerMatrix([[(1 if i == 0 else -1) if i == j else 0 for j in range(r)] for i in range(r)])

    def c1(self) -> tuple[int, ...]:
        """Poincare dual of the first Chern class in basis coordinates."""
        return (2, 2) if self.kind == "Q" else (3,) + (-1,) * self.k

    def basis_coordinates(self, c: H2Class) -> tuple[int, ...]:
        if self.kind == "Q":
            return c.coeffs
        return (c.coeffs[0],) + tuple(-b for b in c.coeffs[1:])

    def pairing(self, x, y) -> int:
        return dot(x, self.intersection_form() @ y)


@dataclass(frozen=True)
class H2Class:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))


def _check_class(t: DelPezzoTarget, c: H2Class) -> None:
    if len(c.coeffs) != t.rank:
        raise ValueError(f"{t.name} classes have {t.rank} coefficients")


def chi_from_class(t: DelPezzoTarget, c: H2Class) -> int | None:
    """Euler characteristic forced on an orientable Lagrangian in class ``c``.

    ``None`` when ``c`` pairs nontrivially with ``c_1``.
    """
    _check_class(t, c)
    x = t.basis_coordinates(c)
    if t.pairing(t.c1(), x) != 0:
        return None
    chi = -t.pairing(x, x)
    if t.kind == "Q":
        a, b = c.coeffs
        if chi != 2 * b * b:
            raise AssertionError("Q identity chi = 2 b^2 fails")
    else:
        b = c.coeffs[1:]
        rhs = (9 - t.k) * sum(x * x for x in b) + sum((p - q) ** 2 for p, q in itertools.combinations(b, 2))
        if 9 * chi != rhs:
            raise AssertionError("X_k identity 9 chi = (9-k) sum b^2 + sum (b_i - b_j)^2 fails")
    return chi


def classes_with_chi(t: DelPezzoTarget, chi: int) -> list[H2Class]:
    """Every class with ``c_1 . c = 0`` and ``c . c = -chi`` (a finite set)."""
    if chi < 0:
        return []
    if t.kind == "Q":
        if chi % 2:
            return []
        b = isqrt(chi // 2)
        if 2 * b * b != chi:
            return []
        return sorted({H2Class((-s, s)) for s in (b, -b)}, key=lambda c: c.coeffs)
    if t.k == 0:
        return [H2Class((0,))] if chi == 0 else []
    # 9 chi >= (9 - k) sum b^2 bounds every b_j
    bound = isqrt(9 * chi // (9 - t.k))
    out = []
    for b in itertools.product(range(-bound, bound + 1), repeat=t.k):
        s = sum(b)
        if s % 3:
            continue
        c = H2Class((s // 3,) + b)
        if chi_from_class(t, c) == chi:
            out.append(c)
    return out


# --------------------------------------------------------------------------
# mod 2 forms


@dataclass(frozen=True)
class Z2Form:
    """Twisted form ``Phi(x, y) = x . action(y) mod 2``."""

    form: tuple[tuple[int, ...], ...]
    action: tuple[tuple[int, ...], ...]

    def __init__(self, form, action=None):
        form = tuple(tuple(int(x) % 2 for x in r) for r in _rows(form))
        n = len(form)
        if action is None:
            action = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        action = tuple(tuple(int(x) % 2 for x in r) for r in _rows(action))
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "action", action)

    @property
    def dim(self) -> int:
        return len(self.form)

    def gram(self) -> list[list[int]]:
        n = self.dim
        return [[sum(self.form[i][k] * self.action[k][j] for k in range(n)) % 2 for j in range(n)] for i in range(n)]

    def __call__(self, x, y) -> int:
        g = self.gram()
        return sum(x[i] * g[i][j] * y[j] for i in range(self.dim) for j in range(self.dim)) % 2


def _rows(m):
    return m.rows if isinstance(m, IntegerMatrix) else m


def _solve_gf2(a: list[list[int]], b: list[int]) -> list[int] | None:
    """Unique solution of ``a x = b`` over GF(2), ``None`` if ``a`` is singular."""
    n = len(a)
    aug = [[x % 2 for x in row] + [y % 2] for row, y in zip(a, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        for i in range(n):
            if i != c and aug[i][c]:
                aug[i] = [x ^ y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def arnold_characteristic_class(f: Z2Form) -> tuple[int, ...]:
    """The ``w`` with ``Phi(w, a) = Phi(a, a)`` for every ``a``."""
    g = f.gram()
    n = f.dim
    # Phi(w, e_i) = sum_j w_j g[j][i], so solve g^T w = diag(g)
    w = _solve_gf2([[g[j][i] for j in range(n)] for i in range(n)], [g[i][i] for i in range(n)])
    if w is None:
        raise DegenerateForm("twisted form is degenerate over Z2")
    return tuple(w)


def anti_symplectic_actions(t: DelPezzoTarget) -> list[IntegerMatrix] | None:
    """All possible actions on ``H_2`` of an antisymplectic involution.

    Such an action preserves the intersection form, squares to the identity
    and negates ``c_1`` (which is proportional to the symplectic class).  For
    rank at most 2 the orthogonal complement of ``c_1`` is a line, so the
    action is ``-id`` or the reflection in ``c_1``, and the latter only counts
    if it is integral.  ``None`` for larger rank, where no claim is made.
    """
    r = t.rank
    if r > 2:
        return None
    neg = -IntegerMatrix.identity(r)
    out = [neg]
    c1 = t.c1()
    c1sq = t.pairing(c1, c1)
    if r == 2:
        cols = []
        for j in range(r):
            e = [int(i == j) for i in range(r)]
            num = 2 * t.pairing(e, c1)
            if any(num * x % c1sq for x in c1):
                break
            cols.append([e[i] - num * c1[i] // c1sq for i in range(r)])
        else:
            out.append(IntegerMatrix.from_columns(cols, r))
    return out


def arnold_excludes_orientable(t: DelPezzoTarget) -> bool:
    """Whether the Arnold lemma rules out orientable real Lagrangians in ``t``.

    If every admissible action is ``-id`` then an orientable fixed surface has
    ``[L] = 0``, so the characteristic class of the twisted form must vanish.
    """
    actions = anti_symplectic_actions(t)
    if actions is None:
        return False
    form = t.intersection_form()
    for act in actions:
        if act != -IntegerMatrix.identity(t.rank):
            return False
        if not any(arnold_characteristic_class(Z2Form(form, act))):
            return False
    return True


# --------------------------------------------------------------------------
# candidate surfaces


@dataclass(frozen=True)
class Rule:
    name: str
    provenance: str
    computed: bool


RULES = (
    Rule("smith", "Smith inequality and Euler parity against dim H_*(M; Z2)", True),
    Rule("class", "orientable L needs a class with c1.[L] = 0 and [L].[L] = -chi(L)", True),
    Rule("arnold", "forced action -id kills [L]; twisted mod 2 form has nonzero characteristic class", True),
    Rule("cited-klein-in-Q", "external result (cited, not computed): no Lagrangian Klein bottle in S2xS2", False),
)


@dataclass(frozen=True)
class CandidateReport:
    target: DelPezzoTarget
    candidates: tuple[SurfaceType, ...]
    excluded: tuple[tuple[SurfaceType, tuple[str, ...]], ...]
    rules: tuple[Rule, ...] = field(default=RULES)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.candidates]


def surface_order(s: SurfaceType) -> tuple:
    return (not s.orientable, -s.euler)


def _surfaces_in_window(min_chi: int) -> list[SurfaceType]:
    out = []
    for chi in range(2, min_chi - 1, -1):
        if chi % 2 == 0:
            out.append(SurfaceType(True, chi))
        if chi <= 1:
            out.append(SurfaceType(False, chi))
    return sorted(out, key=surface_order)


def enumerate_candidates(t: DelPezzoTarget, use_cited: bool = True) -> CandidateReport:
    """Connected closed surfaces not ruled out as real Lagrangians in ``t``."""
    if not t.toric:
        raise NonToricTarget(f"{t.name} is not toric")
    v = t.vertex_count
    arnold = arnold_excludes_orientable(t)
    kept, excluded = [], []
    # the Betti bound 4 - chi <= v gives the window chi >= 4 - v
    for s in _surfaces_in_window(4 - v):
        reasons = []
        if (s.euler - v) % 2:
            reasons.append("smith")
        if s.orientable and not classes_with_chi(t, s.euler):
            reasons.append("class")
        if s.orientable and arnold:
            reasons.append("arnold")
        if use_cited and t.kind == "Q" and s == SurfaceType(False, 0):
            reasons.append("cited-klein-in-Q")
        if reasons:
            excluded.append((s, tuple(reasons)))
        else:
            kept.append(s)
    return CandidateReport(t, tuple(kept), tuple(excluded))


def smith_bound_check(vertex_count_m: int, report: InvariantReport) -> bool:
    return report.z2_betti_total <= vertex_count_m and (report.euler - vertex_count_m) % 2 == 0
