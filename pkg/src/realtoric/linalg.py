"""Exact integer and rational linear algebra.

Everything here works over Python ``int`` and :class:`fractions.Fraction`;
there is no floating point anywhere.  The central routine is
:func:`smith_normal_form`, from which integer kernels, integral solvability
and the structure of kernels of torus homomorphisms are all derived.

A torus homomorphism ``T^a -> T^b`` is given by an integer ``b x a`` matrix
``M`` acting on angle coordinates ``x in R^a / Z^a``.  Its kernel
``{x : Mx in Z^b}`` is a compact abelian group, isomorphic to
``T^(a - rank M) x Z/d_1 x ... x Z/d_r`` where the ``d_i`` are the nontrivial
Smith divisors of ``M``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class IntegerMatrix:
    """Immutable integer matrix with arbitrary precision entries.

    Shapes with zero rows or zero columns are allowed (``ncols`` must then be
    passed explicitly for a matrix without rows).
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = []
        for row in rows:
            entries = []
            for x in row:
                if isinstance(x, Fraction):
                    if x.denominator != 1:
                        raise ValueError(f"non-integer entry {x}")
                    x = x.numerator
                entries.append(int(x))
            data.append(tuple(entries))
        self._rows = tuple(data)
        self.nrows = len(self._rows)
        if self.nrows:
            widths = {len(r) for r in self._rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols does not match row width")
        else:
            self.ncols = 0 if ncols is None else ncols

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), ncols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> IntegerMatrix:
        return cls(([0] * n for _ in range(m)), ncols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntegerMatrix:
        columns = [tuple(c) for c in columns]
        return cls(([c[i] for c in columns] for i in range(nrows)), ncols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.col(j) for j in range(self.ncols))

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"index {ij} out of range for shape {self.shape}")
        return self._rows[i][j]

    @property
    def T(self) -> IntegerMatrix:
        return IntegerMatrix((self.col(j) for j in range(self.ncols)), ncols=self.nrows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix(([self._rows[i][j] for j in cols] for i in rows), ncols=len(cols))

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntegerMatrix(
                ([sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._rows),
                ncols=other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return tuple(sum((a * b for a, b in zip(r, vec)), 0) for r in self._rows)

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            ([a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)),
            ncols=self.ncols,
        )

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        return self + (-other)

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix(([-a for a in r] for r in self._rows), ncols=self.ncols)

    def __mul__(self, k: int) -> IntegerMatrix:
        return IntegerMatrix(([k * a for a in r] for r in self._rows), ncols=self.ncols)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.tolist()!r})"

    def key(self) -> tuple[int, ...]:
        """Row-major entries, used for deterministic sorting."""
        return tuple(itertools.chain.from_iterable(self._rows))

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def det(self) -> int:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    def rank(self) -> int:
        return rational_rank(self._rows)


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination determinant of an integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    a = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _row_echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return a[:r]


def rational_rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q of a matrix given as a sequence of rows."""
    return len(_row_echelon(rows))


def solve_square(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``a x = b`` exactly for square ``a``; ``None`` if ``a`` is singular."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(aug[i][n] for i in range(n))


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """A basis over Q of ``{x : A x = 0}``."""
    ech = _row_echelon(rows) if rows else []
    pivots = []
    for r in ech:
        pivots.append(next(j for j, x in enumerate(r) if x != 0))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(ech, pivots):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def unimodular_inverse(m: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular integer matrix."""
    n = m.nrows
    inv_cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_square(m.rows, e)
        if x is None:
            raise ValueError("matrix is singular")
        inv_cols.append(x)
    return IntegerMatrix.from_columns(inv_cols, n)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def _sign_normalized(v: Sequence[int]) -> tuple[int, ...]:
    first = next((x for x in v if x != 0), 0)
    return tuple(-x for x in v) if first < 0 else tuple(v)


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``divisors`` is the diagonal of ``D``; each divides the next and the
    zeros come last.
    """

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)


def smith_normal_form(m: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting picks the nonzero entry of smallest absolute value in the
    remaining block (ties go to the lowest row, then lowest column), which
    makes ``U`` and ``V`` reproducible.
    """
    nr, nc = m.shape
    a = m.tolist()
    u = IntegerMatrix.identity(nr).tolist()
    v = IntegerMatrix.identity(nc).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (a, v):
            for r in mat:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        for mat in (a, u):
            rs, rd = mat[src], mat[dst]
            for k in range(len(rd)):
                rd[k] += c * rs[k]

    def add_col(dst, src, c):
        for mat in (a, v):
            for r in mat:
                r[dst] += c * r[src]

    for t in range(min(nr, nc)):
        while True:
            pivot = min(
                ((abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]),
                default=None,
            )
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            # divisibility chain: pull an offending row into the pivot row
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    divisors = tuple(a[i][i] for i in range(min(nr, nc)))
    return SmithDecomposition(
        U=IntegerMatrix(u, ncols=nr),
        D=IntegerMatrix(a, ncols=nc),
        V=IntegerMatrix(v, ncols=nc),
        divisors=divisors,
    )


def integer_kernel_basis(m: IntegerMatrix) -> IntegerMatrix:
    """Columns form a saturated Z-basis of ``{x in Z^cols : m x = 0}``.

    Each column is sign-normalized so its first nonzero entry is positive.
    The result has shape ``(cols, cols - rank)``, possibly with zero columns.
    """
    snf = smith_normal_form(m)
    r = snf.rank
    cols = [_sign_normalized(snf.V.col(j)) for j in range(r, m.ncols)]
    return IntegerMatrix.from_columns(cols, m.ncols)


def solve_integer(m: IntegerMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution of ``m x = b``, or ``None`` if there is none."""
    snf = smith_normal_form(m)
    ub = snf.U @ b
    y = [0] * m.ncols
    for i, c in enumerate(ub):
        d = snf.divisors[i] if i < len(snf.divisors) else 0
        if d == 0:
            if c != 0:
                return None
        else:
            if c % d:
                return None
            y[i] = c // d
    return snf.V @ y


def same_lattice(a: IntegerMatrix, b: IntegerMatrix) -> bool:
    """Whether the column spans of ``a`` and ``b`` are the same sublattice."""
    if a.nrows != b.nrows:
        return False
    return all(solve_integer(a, c) is not None for c in b.columns()) and all(
        solve_integer(b, c) is not None for c in a.columns()
    )


# --------------------------------------------------------------------------
# compact abelian groups


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class AbelianGroupType:
    """Structure of a closed subgroup of a torus ``T^a``.

    The group is ``T^torus_rank x Z/f_1 x ... x Z/f_s``.  One representative
    per connected component is kept (coordinates in ``[0, 1)``, sorted
    lexicographically); together they form a subgroup of ``R^a / Z^a``.
    """

    torus_rank: int
    invariant_factors: tuple[int, ...]
    component_representatives: tuple[tuple[Fraction, ...], ...]
    # y = basis_inverse @ x are coordinates in which the group splits
    basis_inverse: IntegerMatrix | None = field(default=None, repr=False, compare=False)
    finite_positions: tuple[tuple[int, int], ...] = field(default=(), repr=False, compare=False)
    _component_keys: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    @property
    def component_count(self) -> int:
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    @property
    def ambient_dim(self) -> int:
        if self.basis_inverse is not None:
            return self.basis_inverse.ncols
        return len(self.component_representatives[0])

    def component_of(self, x: Sequence) -> int:
        """Index of the component containing the group element ``x``."""
        if self.basis_inverse is None:
            raise ValueError("group carries no coordinate data")
        y = self.basis_inverse @ [Fraction(c) for c in x]
        key = []
        for pos, d in self.finite_positions:
            t = y[pos] * d
            if t.denominator != 1:
                raise ValueError(f"{tuple(x)} is not an element of the group")
            key.append(t.numerator % d)
        return self._component_keys.index(tuple(key))

    def describe(self) -> str:
        parts = []
        if self.torus_rank:
            parts.append("T^%d" % self.torus_rank if self.torus_rank > 1 else "S^1")
        parts.extend(f"Z{f}" for f in self.invariant_factors)
        return " + ".join(parts) if parts else "trivial"


def torus_hom_kernel(m: IntegerMatrix) -> AbelianGroupType:
    """Structure of ``{x in R^a/Z^a : m x in Z^b}`` for a ``b x a`` matrix."""
    a = m.ncols
    snf = smith_normal_form(m)
    r = snf.rank
    finite = tuple((i, d) for i, d in enumerate(snf.divisors[:r]) if d >= 2)
    keys, reps = [], []
    for combo in itertools.product(*(range(d) for _, d in finite)):
        y = [Fraction(0)] * a
        for (pos, d), j in zip(finite, combo):
            y[pos] = Fraction(j, d)
        x = tuple(_frac_mod1(c) for c in snf.V @ y)
        keys.append(combo)
        reps.append(x)
    order = sorted(range(len(reps)), key=lambda i: reps[i])
    return AbelianGroupType(
        torus_rank=a - r,
        invariant_factors=tuple(d for _, d in finite),
        component_representatives=tuple(reps[i] for i in order),
        basis_inverse=unimodular_inverse(snf.V) if a else IntegerMatrix.zeros(0, 0),
        finite_positions=finite,
        _component_keys=tuple(keys[i] for i in order),
    )


def torus_endo_fixed(a: IntegerMatrix) -> AbelianGroupType:
    """Fixed subgroup of the endomorphism ``x -> a x`` of ``T^n``."""
    if not a.is_square():
        raise ValueError("endomorphism matrix must be square")
    return torus_hom_kernel(a - IntegerMatrix.identity(a.nrows))
