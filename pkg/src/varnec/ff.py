"""Exact arithmetic and dense linear algebra over prime fields GF(p).

Matrices are immutable and store plain Python ints in ``[0, p)``.  All
elimination uses first-nonzero pivoting; there is no numeric tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, UsageError

Row = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise UsageError(f"field modulus must be a prime >= 2, got {self.p!r}")

    @property
    def size(self) -> int:
        return self.p

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DomainError("zero has no multiplicative inverse")
        return pow(a, -1, self.p)

    def __repr__(self) -> str:
        return f"GF({self.p})"


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise UsageError(f"{self.value} is not a canonical element of {self.field!r}")

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise UsageError(f"mismatched fields {self.field!r} and {other.field!r}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value + other.value) % self.field.p, self.field)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value - other.value) % self.field.p, self.field)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.field.p, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value * other.value % self.field.p, self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# -- row-list kernels -------------------------------------------------------
# These work on mutable lists of int rows and are shared by FieldMatrix and
# by hot loops elsewhere that would pay too much for wrapping.


def rref_rows(rows: Sequence[Sequence[int]], p: int, ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(nonzero_rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n = len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][c] % p
                if f:
                    mi = m[i]
                    m[i] = [(x - f * y) % p for x, y in zip(mi, pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_rows(rows: Sequence[Sequence[int]], p: int) -> int:
    """Row rank by forward elimination only (cheaper than a full RREF)."""
    m = [list(r) for r in rows if any(x % p for x in r)]
    if not m:
        return 0
    n = len(m[0])
    rank = 0
    for c in range(n):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        inv = pow(pr[c], -1, p)
        for i in range(rank + 1, len(m)):
            f = m[i][c] % p
            if f:
                f = f * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        rank += 1
        if rank == len(m):
            break
    return rank


def in_row_space(basis_rref: Sequence[Sequence[int]], pivots: Sequence[int], v: Sequence[int], p: int) -> bool:
    """Membership test against an RREF basis (as returned by :func:`rref_rows`)."""
    w = [x % p for x in v]
    for row, c in zip(basis_rref, pivots):
        f = w[c]
        if f:
            w = [(x - f * y) % p for x, y in zip(w, row)]
    return not any(w)


def vec_mat(v: Sequence[int], rows: Sequence[Sequence[int]], p: int, ncols: int) -> Row:
    """Row vector times matrix."""
    out = [0] * ncols
    for a, r in zip(v, rows):
        if a:
            for j, x in enumerate(r):
                if x:
                    out[j] += a * x
    return tuple(x % p for x in out)


@dataclass(frozen=True)
class FieldMatrix:
    """Dense immutable matrix over GF(p)."""

    field: FieldSpec
    rows: tuple[Row, ...]
    ncols: int

    def __post_init__(self) -> None:
        p = self.field.p
        for r in self.rows:
            if len(r) != self.ncols:
                raise UsageError("ragged matrix rows")
            for x in r:
                if not 0 <= x < p:
                    raise UsageError(f"entry {x} is not reduced mod {p}")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "FieldMatrix":
        p = field.p
        rr = tuple(tuple(int(x) % p for x in r) for r in rows)
        if ncols is None:
            if not rr:
                raise UsageError("ncols is required for a matrix with no rows")
            ncols = len(rr[0])
        return cls(field, rr, ncols)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "FieldMatrix":
        return cls(field, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "FieldMatrix":
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self.rows[i][j]
        return self.rows[idx]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def _same_field(self, other: "FieldMatrix") -> None:
        if self.field != other.field:
            raise UsageError(f"mismatched fields {self.field!r} and {other.field!r}")

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.ncols != other.ncols:
            raise UsageError(f"cannot stack {self.shape} on {other.shape}")
        return FieldMatrix(self.field, self.rows + other.rows, self.ncols)

    def select_rows(self, indices: Iterable[int]) -> "FieldMatrix":
        return FieldMatrix(self.field, tuple(self.rows[i] for i in indices), self.ncols)

    def transpose(self) -> "FieldMatrix":
        cols = tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols))
        return FieldMatrix(self.field, cols, self.nrows)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.ncols != other.nrows:
            raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        rows = tuple(vec_mat(r, other.rows, p, other.ncols) for r in self.rows)
        return FieldMatrix(self.field, rows, other.ncols)

    def left_mul(self, v: Sequence[int]) -> Row:
        """``v @ self`` for a plain row vector ``v``."""
        if len(v) != self.nrows:
            raise UsageError(f"row vector of length {len(v)} does not match {self.shape}")
        return vec_mat([x % self.field.p for x in v], self.rows, self.field.p, self.ncols)

    def rank(self) -> int:
        return rank_rows(self.rows, self.field.p)

    def rref(self) -> tuple["FieldMatrix", list[int]]:
        rows, piv = rref_rows(self.rows, self.field.p, self.ncols)
        return FieldMatrix(self.field, tuple(tuple(r) for r in rows), self.ncols), piv

    def nullspace(self) -> "FieldMatrix":
        """Basis of ``{x : self @ x^T = 0}`` as rows."""
        p = self.field.p
        rows, piv = rref_rows(self.rows, p, self.ncols)
        free = [c for c in range(self.ncols) if c not in set(piv)]
        basis = []
        for f in free:
            x = [0] * self.ncols
            x[f] = 1
            for row, c in zip(rows, piv):
                x[c] = -row[f] % p
            basis.append(tuple(x))
        return FieldMatrix(self.field, tuple(basis), self.ncols)

    def left_nullspace(self) -> "FieldMatrix":
        """Basis of ``{c : c @ self = 0}`` as rows."""
        return self.transpose().nullspace()

    def solve_row(self, target: Sequence[int]) -> Row | None:
        """Coefficients ``c`` with ``c @ self == target``, or ``None``.

        Free coordinates are set to zero, so the answer is unique exactly
        when the rows are independent.
        """
        if len(target) != self.ncols:
            raise UsageError(f"target of length {len(target)} does not match {self.shape}")
        p = self.field.p
        # columns of the augmented system [self^T | target^T]
        aug = [[self.rows[i][j] for i in range(self.nrows)] + [target[j] % p] for j in range(self.ncols)]
        rows, piv = rref_rows(aug, p, self.nrows + 1)
        if piv and piv[-1] == self.nrows:
            return None
        c = [0] * self.nrows
        for row, col in zip(rows, piv):
            c[col] = row[-1]
        return tuple(c)

    def row_space_contains(self, v: Sequence[int]) -> bool:
        rows, piv = rref_rows(self.rows, self.field.p, self.ncols)
        return in_row_space(rows, piv, v, self.field.p)

    def __str__(self) -> str:
        if not self.rows:
            return f"[] (0x{self.ncols})"
        width = len(str(self.field.p - 1))
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in self.rows)


def mat_rank(m: FieldMatrix) -> int:
    return m.rank()


def mat_intersection_dim(a: FieldMatrix, b: FieldMatrix) -> int:
    """dim(rowspace(a) ∩ rowspace(b)) by the rank identity."""
    if a.ncols != b.ncols:
        raise UsageError(f"row spaces live in different ambient spaces ({a.ncols} vs {b.ncols} columns)")
    return a.rank() + b.rank() - a.vstack(b).rank()


def intersection_basis(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """RREF basis of rowspace(a) ∩ rowspace(b)."""
    if a.ncols != b.ncols:
        raise UsageError(f"row spaces live in different ambient spaces ({a.ncols} vs {b.ncols} columns)")
    null = a.vstack(b).left_nullspace()
    vecs = [a.left_mul(n[: a.nrows]) for n in null.rows]
    if not vecs:
        return FieldMatrix(a.field, (), a.ncols)
    return FieldMatrix.from_rows(a.field, vecs, a.ncols).rref()[0]


def mat_solve_row(m: FieldMatrix, target: Sequence[int]) -> Row | None:
    return m.solve_row(target)
