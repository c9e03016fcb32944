# src/backend/exact/matrix.py

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from src.backend.exact.rational import RationalLike, as_rational, format_rational
from src.shared.errors import SizeMismatch


Row = Tuple[Fraction, ...]


@dataclass(frozen=True)
class MatrixR:
    """
    Dense immutable matrix of exact rationals, stored row-major.

    Blocks of the operators (alpha_n, beta_n, A_n, B_n), weight masses and
    eigenvalues are all MatrixR values. Equality is structural.
    """

    rows: Tuple[Row, ...]

    def __post_init__(self) -> None:
        if not self.rows or not self.rows[0]:
            raise SizeMismatch("a matrix needs at least one row and one column")
        width = len(self.rows[0])
        for row in self.rows:
            if len(row) != width:
                raise SizeMismatch("ragged rows: every row must have the same length")

    # =========================
    # Constructors
    # =========================

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> "MatrixR":
        return cls(tuple(tuple(as_rational(v) for v in row) for row in rows))

    @classmethod
    def zero(cls, n_rows: int, n_cols: int | None = None) -> "MatrixR":
        n_cols = n_rows if n_cols is None else n_cols
        return cls(tuple((Fraction(0),) * n_cols for _ in range(n_rows)))

    @classmethod
    def identity(cls, size: int) -> "MatrixR":
        return cls.scalar(size, 1)

    @classmethod
    def scalar(cls, size: int, value: RationalLike) -> "MatrixR":
        c = as_rational(value)
        zero = Fraction(0)
        return cls(tuple(tuple(c if i == j else zero for j in range(size)) for i in range(size)))

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> "MatrixR":
        size = len(values)
        zero = Fraction(0)
        return cls(
            tuple(tuple(as_rational(values[i]) if i == j else zero for j in range(size)) for i in range(size))
        )

    # =========================
    # Shape and predicates
    # =========================

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.transpose()

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.rows[i][j]

    def entries(self) -> List[Fraction]:
        return [v for row in self.rows for v in row]

    def first_nonzero(self) -> Tuple[int, int] | None:
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if v != 0:
                    return i, j
        return None

    # =========================
    # Arithmetic
    # =========================

    def _check_same_shape(self, other: "MatrixR") -> None:
        if self.shape != other.shape:
            raise SizeMismatch(f"shape {self.shape} does not match {other.shape}")

    def __add__(self, other: object) -> "MatrixR":
        if not isinstance(other, MatrixR):
            return NotImplemented
        self._check_same_shape(other)
        return MatrixR(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: object) -> "MatrixR":
        if not isinstance(other, MatrixR):
            return NotImplemented
        self._check_same_shape(other)
        return MatrixR(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "MatrixR":
        return MatrixR(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, value: RationalLike) -> "MatrixR":
        c = as_rational(value)
        return MatrixR(tuple(tuple(c * a for a in r) for r in self.rows))

    def matmul(self, other: "MatrixR") -> "MatrixR":
        if self.n_cols != other.n_rows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        return MatrixR(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))

    def __mul__(self, other: object) -> "MatrixR":
        if isinstance(other, MatrixR):
            return self.matmul(other)
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> "MatrixR":
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def transpose(self) -> "MatrixR":
        return MatrixR(tuple(zip(*self.rows)))

    def inverse(self) -> "MatrixR":
        from src.backend.exact.linalg import mat_inverse

        return mat_inverse(self)

    # =========================
    # Serialization
    # =========================

    def to_json(self) -> List[List[str]]:
        return [[format_rational(v) for v in row] for row in self.rows]

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(v) for v in row) + "]" for row in self.rows)
        return f"MatrixR([{body}])"


def block_size_of(blocks: Iterable[MatrixR]) -> int:
    """Common size N of a family of N x N blocks (SizeMismatch otherwise)."""
    sizes = set()
    for block in blocks:
        if not block.is_square():
            raise SizeMismatch(f"block of shape {block.shape} is not square")
        sizes.add(block.n_rows)
    if len(sizes) != 1:
        raise SizeMismatch(f"blocks of different sizes: {sorted(sizes)}")
    return sizes.pop()
