"""Small dense exact linear algebra over Q(i).

Matrices in this package are at most a few dozen rows and columns, so plain
Gauss-Jordan elimination on tuples of :class:`GaussianRational` is enough.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .scalars import GaussianRational, ONE, ZERO, gr

Vector = Tuple[GaussianRational, ...]


class Matrix:
    """Immutable ``nrows x ncols`` matrix stored row-major."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: Optional[int] = None):
        rows = tuple(tuple(gr(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows, nrows, ncols) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(tuple((ZERO,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def scalar(cls, n: int, s) -> "Matrix":
        s = gr(s)
        return cls._raw(tuple(tuple(s if i == j else ZERO for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        cols = [tuple(gr(x) for x in c) for c in cols]
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), nrows, len(cols))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def T(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.ncols, self.nrows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return Matrix._raw(
                tuple(tuple(_dot(r, c) for c in cols) for r in self.rows), self.nrows, other.ncols
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(_dot(r, v) for r in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.nrows, self.ncols
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.nrows, self.ncols
        )

    def scale(self, s) -> "Matrix":
        s = gr(s)
        return Matrix._raw(tuple(tuple(a * s for a in r) for r in self.rows), self.nrows, self.ncols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def nonzero_entries(self):
        return [(i, j) for i, r in enumerate(self.rows) for j, x in enumerate(r) if x]

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = gr(value)
        return Matrix._raw(tuple(tuple(r) for r in rows), self.nrows, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.rows]}, ncols={self.ncols})"


def _dot(a, b) -> GaussianRational:
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s = s + x * y
    return s


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    nrows = sum(b.nrows for b in blocks)
    ncols = sum(b.ncols for b in blocks)
    rows = []
    col0 = 0
    for b in blocks:
        left = (ZERO,) * col0
        right = (ZERO,) * (ncols - col0 - b.ncols)
        rows.extend(left + r + right for r in b.rows)
        col0 += b.ncols
    return Matrix._raw(tuple(rows), nrows, ncols)


def vstack(blocks: Sequence[Matrix], ncols: int) -> Matrix:
    rows = []
    for b in blocks:
        if b.ncols != ncols:
            raise ValueError("column mismatch in vstack")
        rows.extend(b.rows)
    return Matrix._raw(tuple(rows), len(rows), ncols)


def rref(m: Matrix) -> Tuple[List[List[GaussianRational]], List[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    rows = [list(r) for r in m.rows]
    pivots: List[int] = []
    r = 0
    for c in range(m.ncols):
        piv = next((t for t in range(r, len(rows)) if rows[t][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        pr = rows[r]
        for t in range(len(rows)):
            if t != r and rows[t][c]:
                f = rows[t][c]
                rows[t] = [x - f * y if y else x for x, y in zip(rows[t], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> List[Vector]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    rows, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * m.ncols
        v[f] = ONE
        for row, p in zip(rows, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def is_zero_vector(v) -> bool:
    return not any(v)


class Subspace:
    """Incrementally grown subspace of ``Q(i)^n`` kept in reduced echelon form."""

    __slots__ = ("n", "_rows", "_pivots")

    def __init__(self, n: int, vectors=()):
        self.n = n
        self._rows: List[List[GaussianRational]] = []
        self._pivots: List[int] = []
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, v) -> List[GaussianRational]:
        w = list(v)
        if len(w) != self.n:
            raise ValueError(f"vector of length {len(w)} in a space of dimension {self.n}")
        for row, p in zip(self._rows, self._pivots):
            f = w[p]
            if f:
                w = [x - f * y if y else x for x, y in zip(w, row)]
        return w

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def add(self, v) -> bool:
        """Add ``v``; return True when it enlarged the space."""
        w = self.reduce(v)
        p = next((c for c, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = w[p].inverse()
        w = [x * inv if x else x for x in w]
        for t, row in enumerate(self._rows):
            f = row[p]
            if f:
                self._rows[t] = [x - f * y if y else x for x, y in zip(row, w)]
        idx = next((t for t, q in enumerate(self._pivots) if q > p), len(self._pivots))
        self._rows.insert(idx, w)
        self._pivots.insert(idx, p)
        return True

    def basis(self) -> List[Vector]:
        return [tuple(r) for r in self._rows]

    def pivots(self) -> List[int]:
        return list(self._pivots)

    def as_matrix(self) -> Matrix:
        """Basis vectors as the columns of an ``n x dim`` matrix."""
        return Matrix.from_columns(self.basis(), self.n)

    def coordinates(self, v) -> Optional[Vector]:
        """Coordinates of ``v`` against :meth:`basis`, or None when ``v`` is outside."""
        if not self.contains(v):
            return None
        return tuple(v[p] for p in self._pivots)

    def complement_coordinates(self, v) -> Vector:
        """Image of ``v`` in the quotient, in coordinates indexed by non-pivot columns."""
        w = self.reduce(v)
        piv = set(self._pivots)
        return tuple(w[c] for c in range(self.n) if c not in piv)

    def complement_columns(self) -> List[int]:
        piv = set(self._pivots)
        return [c for c in range(self.n) if c not in piv]


def solve_in_columns(basis_cols: Sequence[Vector], v, n: int) -> Optional[Vector]:
    """Coefficients ``x`` with ``sum x_j basis_cols[j] = v``, None when no solution.

    ``basis_cols`` must be linearly independent.
    """
    if not basis_cols:
        return () if is_zero_vector(v) else None
    aug = Matrix.from_columns(list(basis_cols) + [tuple(v)], n)
    rows, pivots = rref(aug)
    k = len(basis_cols)
    if k in pivots:
        return None
    x = [ZERO] * k
    for row, p in zip(rows, pivots):
        x[p] = row[k]
    return tuple(x)
