"""Dense exact matrices over a :class:`~confmat.fields.Field`.

Entries are stored as raw field values.  Over Q, determinants use
fraction-free Bareiss elimination on an integer-scaled copy; over F_p plain
Gaussian elimination is used.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from gmpy2 import mpz

from .errors import NotSquare
from .fields import Field, Rationals, Scalar


class Matrix:
    """Immutable rectangular matrix; ``rows`` is a tuple of tuples of raw values."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Iterable[Iterable[Any]], ncols: int | None = None):
        conv = field.convert
        rows = tuple(tuple(conv(x) for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def _raw(cls, field: Field, rows, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return cls._raw(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero()
        return cls._raw(field, [[z] * ncols for _ in range(nrows)], ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar(self.field, self.rows[i][j])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.to_lists()})"

    def to_lists(self) -> list[list[str]]:
        ts = self.field.to_str
        return [[ts(x) for x in row] for row in self.rows]

    def to_json(self) -> dict:
        def enc(x):
            s = self.field.to_str(x)
            return int(s) if "/" not in s else s

        return {"matrix": [[enc(x) for x in row] for row in self.rows]}

    def transpose(self) -> "Matrix":
        if not self.nrows:
            return Matrix._raw(self.field, [[] for _ in range(self.ncols)], 0)
        return Matrix._raw(self.field, zip(*self.rows), self.nrows)

    def columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [[r[j] for j in idx] for r in self.rows], len(idx))

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [self.rows[i] for i in idx], self.ncols)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        f = self.field
        add, mul, z = f.add, f.mul, f.zero()
        cols = list(zip(*other.rows)) if other.nrows else [() for _ in range(other.ncols)]
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = z
                for a, b in zip(r, c):
                    if a and b:
                        s = add(s, mul(a, b))
                row.append(s)
            out.append(row)
        return Matrix._raw(f, out, other.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)


def _rref_rows(field: Field, rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form of a list of mutable raw rows."""
    sub, mul, inv = field.sub, field.mul, field.inv
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        s = inv(prow[c])
        if not field.is_one(s):
            prow = rows[r] = [mul(s, x) for x in prow]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f != 0:
                    rows[i] = [sub(a, mul(f, b)) if b != 0 else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank and strictly increasing pivot columns."""
    rows, pivots = _rref_rows(m.field, [list(r) for r in m.rows], m.ncols)
    return Matrix._raw(m.field, rows, m.ncols), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def row_basis(m: Matrix) -> Matrix:
    """The nonzero rows of the rref: a full-row-rank matrix with the same row span."""
    red, r, _ = rref(m)
    return Matrix._raw(m.field, red.rows[:r], m.ncols)


def kernel_basis(m: Matrix) -> Matrix:
    """Rows spanning ``{v : m v^T = 0}``, one per free column of the rref."""
    f = m.field
    red, r, pivots = rref(m)
    free = [j for j in range(m.ncols) if j not in set(pivots)]
    out = []
    for j in free:
        v = [f.zero()] * m.ncols
        v[j] = f.one()
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red.rows[i][j])
        out.append(v)
    return Matrix._raw(f, out, m.ncols)


def det(m: Matrix) -> Scalar:
    if m.nrows != m.ncols:
        raise NotSquare(f"determinant of a {m.nrows}x{m.ncols} matrix")
    return Scalar(m.field, det_raw(m.field, m.rows))


def det_raw(field: Field, rows: Sequence[Sequence[Any]]):
    n = len(rows)
    if n == 0:
        return field.one()
    if isinstance(field, Rationals):
        return _bareiss_rational(rows)
    p = field.p
    a = [list(r) for r in rows]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        pc = a[c][c]
        d = d * pc % p
        ipc = pow(pc, p - 2, p)
        prow = a[c]
        for i in range(c + 1, n):
            fct = a[i][c]
            if fct:
                fct = fct * ipc % p
                row = a[i]
                for j in range(c + 1, n):
                    if prow[j]:
                        row[j] = (row[j] - fct * prow[j]) % p
    return d % p


def _bareiss_rational(rows):
    from gmpy2 import lcm, mpq

    scale = mpz(1)
    a = []
    for r in rows:
        den = mpz(1)
        for x in r:
            den = lcm(den, x.denominator)
        scale *= den
        a.append([mpz(x * den) for x in r])
    n = len(a)
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return mpq(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return mpq(sign * a[n - 1][n - 1], scale)


def cofactor_det(m: Matrix) -> Scalar:
    """Naive Laplace expansion along the first row; an independent oracle."""
    f = m.field

    def rec(rows):
        if not rows:
            return f.one()
        total = f.zero()
        for j, a in enumerate(rows[0]):
            if a == 0:
                continue
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = f.mul(a, rec(minor))
            total = f.add(total, term) if j % 2 == 0 else f.sub(total, term)
        return total

    if m.nrows != m.ncols:
        raise NotSquare("cofactor_det needs a square matrix")
    return Scalar(f, rec([tuple(r) for r in m.rows]))


def solve(m: Matrix, rhs: Sequence[Any]) -> list | None:
    """One solution ``x`` (raw values) of ``m x = rhs`` or None if inconsistent."""
    f = m.field
    aug = [list(r) + [b] for r, b in zip(m.rows, rhs)]
    rows, pivots = _rref_rows(f, aug, m.ncols + 1)
    if m.ncols in pivots:
        return None
    x = [f.zero()] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][m.ncols]
    return x


def same_row_span(a: Matrix, b: Matrix) -> bool:
    """Row-span equality via comparison of the unique rref."""
    if a.ncols != b.ncols or a.field != b.field:
        return False
    return row_basis(a) == row_basis(b)
