"""Small immutable dense matrices over one realization (exact or float)."""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalar import EXACT, FIELDS, GaussQ, one, to_field, zero


class MixedRealizationError(TypeError):
    pass


def _coerce_entry(x, field):
    if field == EXACT and isinstance(x, (float, complex)):
        raise MixedRealizationError(f"float entry {x!r} in an exact matrix")
    if field != EXACT and isinstance(x, GaussQ):
        raise MixedRealizationError(f"exact entry {x} in a float matrix")
    return to_field(x, field)


class Matrix:
    """Row-major dense matrix with entries of a single realization.

    Entries are stored as a flat tuple.  All arithmetic returns new
    instances; nothing mutates in place.
    """

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows: int, cols: int, entries: Iterable, field: str = EXACT):
        if field not in FIELDS:
            raise ValueError(f"unknown realization {field!r}")
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        ent = tuple(_coerce_entry(x, field) for x in entries)
        if len(ent) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "field", field)

    @classmethod
    def _raw(cls, rows, cols, entries, field):
        # entries already coerced; internal fast path
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "entries", tuple(entries))
        object.__setattr__(obj, "field", field)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix, (self.rows, self.cols, self.entries, self.field))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: str = EXACT) -> Matrix:
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [x for r in rows for x in r], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: str = EXACT) -> Matrix:
        z = zero(field)
        return cls._raw(rows, cols, [z] * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: str = EXACT) -> Matrix:
        z, o = zero(field), one(field)
        return cls._raw(n, n, [o if i == j else z for i in range(n) for j in range(n)], field)

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int, field: str = EXACT) -> Matrix:
        """Matrix unit with a single 1 at ``(i, j)``."""
        z = zero(field)
        e = [z] * (rows * cols)
        e[i * cols + j] = one(field)
        return cls._raw(rows, cols, e, field)

    @classmethod
    def column(cls, values: Sequence, field: str = EXACT) -> Matrix:
        return cls(len(values), 1, values, field)

    @classmethod
    def diag(cls, values: Sequence, field: str = EXACT) -> Matrix:
        n = len(values)
        z = zero(field)
        e = [z] * (n * n)
        for k, v in enumerate(values):
            e[k * n + k] = v
        return cls(n, n, e, field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None,
                     field: str = EXACT) -> Matrix:
        ncols = len(columns)
        if nrows is None:
            if not ncols:
                raise ValueError("cannot infer row count from zero columns")
            nrows = len(columns[0])
        if any(len(c) != nrows for c in columns):
            raise ValueError("columns of unequal length")
        return cls(nrows, ncols, [columns[j][i] for i in range(nrows) for j in range(ncols)], field)

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    # -- arithmetic --------------------------------------------------------

    def _check_same(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise MixedRealizationError(f"mixed realizations: {self.field} and {other.field}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._raw(self.rows, self.cols,
                           [x + y for x, y in zip(self.entries, other.entries)], self.field)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._raw(self.rows, self.cols,
                           [x - y for x, y in zip(self.entries, other.entries)], self.field)

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.rows, self.cols, [-x for x in self.entries], self.field)

    def scale(self, s) -> Matrix:
        s = to_field(s, self.field)
        return Matrix._raw(self.rows, self.cols, [s * x for x in self.entries], self.field)

    def __mul__(self, s):
        if isinstance(s, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.field != self.field:
            raise MixedRealizationError(f"mixed realizations: {self.field} and {other.field}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch for product: {self.shape} @ {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        z = zero(self.field)
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            acc = [z] * m
            for t, x in enumerate(arow):
                if not x:
                    continue
                brow = b[t * m:(t + 1) * m]
                for j, y in enumerate(brow):
                    if y:
                        acc[j] = acc[j] + x * y
            out.extend(acc)
        return Matrix._raw(n, m, out, self.field)

    def commutator(self, other: Matrix) -> Matrix:
        return self @ other - other @ self

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        s = zero(self.field)
        for k in range(self.rows):
            s = s + self.entries[k * self.cols + k]
        return s

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.cols, self.rows,
                           [self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)], self.field)

    def power(self, k: int) -> Matrix:
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        out = Matrix.identity(self.rows, self.field)
        for _ in range(k):
            out = out @ self
        return out

    def to_field(self, field: str) -> Matrix:
        if field == self.field:
            return self
        return Matrix._raw(self.rows, self.cols,
                           [to_field(x, field) for x in self.entries], field)

    @staticmethod
    def hstack(*blocks: Matrix) -> Matrix:
        rows = blocks[0].rows
        field = blocks[0].field
        if any(b.rows != rows or b.field != field for b in blocks):
            raise ValueError("hstack needs equal row counts and one realization")
        ent = []
        for i in range(rows):
            for b in blocks:
                ent.extend(b.row(i))
        return Matrix._raw(rows, sum(b.cols for b in blocks), ent, field)

    @staticmethod
    def vstack(*blocks: Matrix) -> Matrix:
        cols = blocks[0].cols
        field = blocks[0].field
        if any(b.cols != cols or b.field != field for b in blocks):
            raise ValueError("vstack needs equal column counts and one realization")
        ent = []
        for b in blocks:
            ent.extend(b.entries)
        return Matrix._raw(sum(b.rows for b in blocks), cols, ent, field)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.entries)

    def max_abs(self) -> float:
        return max((abs(x) for x in self.entries), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.field, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix[{self.rows}x{self.cols},{self.field}]([{body}])"
