"""Exact scalars and linear algebra over GF(p) and the rationals.

Fields are small immutable objects exposing zero/one/add/sub/mul/neg/inv/
is_zero/canon.  Matrix and the row-reduction routines only talk to that
protocol, so any exact field object (e.g. a field given by tables) works.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

from .errors import DimensionError, InvalidInputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidInputError(f"GF(p) needs a prime p, got {self.p!r}")

    kind = "prime"
    zero = 0
    one = 1

    @property
    def characteristic(self) -> int:
        return self.p

    def canon(self, v) -> int:
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise InvalidInputError(f"{v} has no image in GF({self.p})")
            return v.numerator * pow(v.denominator, -1, self.p) % self.p
        return int(v) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def elements(self):
        return range(self.p)

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class RationalField:
    kind = "rational"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def canon(self, v) -> Fraction:
        if isinstance(v, float):
            raise InvalidInputError("floats are not exact; pass int, Fraction or 'p/q'")
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def __str__(self):
        return "QQ"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class Matrix:
    field: Any
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def of(cls, field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(field.canon(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls.of(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field, r: int, c: int) -> "Matrix":
        return cls.of(field, [[0] * c for _ in range(r)], c)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        F = self.field
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = F.zero
                for k, x in enumerate(r):
                    if not F.is_zero(x):
                        acc = F.add(acc, F.mul(x, other.rows[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(F, self.nrows, other.ncols, tuple(out))

    def apply(self, v: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(v) != self.ncols:
            raise DimensionError("vector length does not match column count")
        F = self.field
        v = [F.canon(x) for x in v]
        out = []
        for r in self.rows:
            acc = F.zero
            for a, b in zip(r, v):
                acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def scale(self, c) -> "Matrix":
        F = self.field
        c = F.canon(c)
        return Matrix(F, self.nrows, self.ncols, tuple(tuple(F.mul(c, x) for x in r) for r in self.rows))

    def is_zero(self) -> bool:
        return all(self.field.is_zero(x) for r in self.rows for x in r)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    F = m.field
    a = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        if r == m.nrows:
            break
        piv = next((i for i in range(r, m.nrows) if not F.is_zero(a[i][c])), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(inv, x) for x in a[r]]
        for i in range(m.nrows):
            if i != r and not F.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Matrix(F, m.nrows, m.ncols, tuple(tuple(row) for row in a)), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Rows of the result span {x : m x = 0}."""
    F = m.field
    red, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * m.ncols
        v[f] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(red.rows[i][f])
        basis.append(tuple(v))
    return Matrix(F, len(basis), m.ncols, tuple(basis))


def solve(m: Matrix, b: Sequence) -> tuple | None:
    """One solution of m x = b, or None when the system is inconsistent."""
    if len(b) != m.nrows:
        raise DimensionError(f"right-hand side has {len(b)} entries, matrix has {m.nrows} rows")
    F = m.field
    aug = Matrix.of(F, [list(r) + [F.canon(x)] for r, x in zip(m.rows, b)], m.ncols + 1)
    red, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    x = [F.zero] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = red.rows[i][m.ncols]
    return tuple(x)


def row_space_basis(m: Matrix) -> Matrix:
    red, pivots = rref(m)
    return Matrix(m.field, len(pivots), m.ncols, red.rows[:len(pivots)])


def projective_normalize(field, v: Sequence) -> tuple:
    """Scale v so its first nonzero entry is one (left scalar multiplication)."""
    v = tuple(field.canon(x) for x in v)
    for x in v:
        if not field.is_zero(x):
            inv = field.inv(x)
            return tuple(field.mul(inv, y) for y in v)
    raise InvalidInputError("zero vector has no projective point")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInputError(f"bad rational {text!r}") from e
