"""Finite-dimensional Hermitian spaces over the rationals (identity involution).

Covers the form axioms, the lattice of subspaces with its orthocomplement,
and rebuilding a form from nothing but an orthogonality predicate.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (DimensionError, InvalidInputError, IsotropyError,
                     OracleInconsistentError, PreconditionError)
from .exactmath import QQ, Matrix, kernel_basis, rank, rref

Vec = tuple


def _q(v) -> Fraction:
    return QQ.canon(v)


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((_q(a) * _q(b) for a, b in zip(x, y)), Fraction(0))


@dataclass(frozen=True)
class HermitianSpace:
    dim: int
    gram: Matrix
    involution: str = "identity"

    def __post_init__(self):
        g = self.gram
        if self.dim < 1 or g.nrows != self.dim or g.ncols != self.dim:
            raise DimensionError(f"gram must be {self.dim}x{self.dim}")
        for i in range(self.dim):
            for j in range(i):
                if g[i, j] != g[j, i]:
                    raise InvalidInputError("gram matrix is not symmetric", witness=(i, j))

    @classmethod
    def of(cls, rows) -> "HermitianSpace":
        m = Matrix.of(QQ, rows)
        return cls(m.nrows, m)

    @classmethod
    def diagonal(cls, entries) -> "HermitianSpace":
        n = len(entries)
        return cls.of([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def form(self, x: Sequence, y: Sequence) -> Fraction:
        return dot(x, self.gram.apply(y))

    def orthogonal(self, x, y) -> bool:
        return self.form(x, y) == 0


def form_of(gram: Matrix, x, y) -> Fraction:
    return dot(x, gram.apply(y))


def congruence_diagonalize(gram: Matrix) -> tuple[list, list]:
    """Return (d, P) with P gram P^T = diag(d); rows of P are the new basis."""
    n = gram.nrows
    a = [[_q(gram[i, j]) for j in range(n)] for i in range(n)]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for r in a:
            r[i], r[j] = r[j], r[i]
        p[i], p[j] = p[j], p[i]

    def add_to(k, j, f):  # basis_k += f * basis_j
        a[k] = [x + f * y for x, y in zip(a[k], a[j])]
        for r in a:
            r[k] += f * r[j]
        p[k] = [x + f * y for x, y in zip(p[k], p[j])]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    continue
                add_to(k, j, Fraction(1))
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add_to(i, k, -a[i][k] / a[k][k])
    return [a[i][i] for i in range(n)], [tuple(r) for r in p]


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass
class FormCheck:
    S1: bool
    S2: bool
    S3: bool
    S4: bool
    diagonal: list
    witness: Vec | None = None
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"S1": self.S1, "S2": self.S2, "S3": self.S3, "S4": self.S4}


def check_form(h: HermitianSpace, samples: int = 20, seed: int = 0) -> FormCheck:
    notes = ["S1/S2 hold structurally for a symmetric Gram matrix with identity involution"]
    d, P = congruence_diagonalize(h.gram)
    witness = None
    zero = [i for i, x in enumerate(d) if x == 0]
    pos = [i for i, x in enumerate(d) if x > 0]
    neg = [i for i, x in enumerate(d) if x < 0]
    if zero:
        witness = P[zero[0]]
    elif pos and neg:
        # a^2 d_i + b^2 d_j = 0 has a rational solution iff -d_j/d_i is a square
        for i, j in itertools.product(pos, neg):
            t = _rational_sqrt(-d[j] / d[i])
            if t is not None:
                witness = tuple(t * x + y for x, y in zip(P[i], P[j]))
                break
        if witness is None:
            notes.append("form is indefinite; no isotropic vector found in a diagonal plane, "
                         "S4 is reported false by the definiteness criterion")
    s4 = not zero and not (pos and neg)
    if witness is not None:
        witness = _integral(witness)
        assert h.form(witness, witness) == 0
    s3 = s4 and _spot_check_splitting(h, samples, seed)
    notes.append("S3 follows from S4 in finite dimension; spot-checked on sampled subspaces")
    return FormCheck(True, True, s3, s4, d, witness, notes)


def _integral(v: Sequence) -> Vec:
    v = [_q(x) for x in v]
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    return tuple(x // g for x in ints)


def _spot_check_splitting(h: HermitianSpace, samples: int, seed: int) -> bool:
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.randint(0, h.dim)
        vecs = [[rng.randint(-3, 3) for _ in range(h.dim)] for _ in range(k)]
        w = span(h.dim, vecs)
        wp = perp(h, w)
        if not meet(w, wp).is_zero() or join(w, wp).dim != h.dim:
            return False
    return True


# ---- subspaces ----

@dataclass(frozen=True)
class LinSubspace:
    ambient: int
    basis: Matrix     # RREF, independent rows

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def is_zero(self) -> bool:
        return self.basis.nrows == 0

    def vectors(self) -> list:
        return list(self.basis.rows)

    def contains(self, v: Sequence) -> bool:
        return span(self.ambient, self.vectors() + [list(v)]).dim == self.dim

    def __le__(self, other: "LinSubspace") -> bool:
        return join(self, other) == other


def span(ambient: int, vectors) -> LinSubspace:
    vectors = [list(v) for v in vectors]
    if any(len(v) != ambient for v in vectors):
        raise DimensionError("vector length does not match the ambient dimension")
    if not vectors:
        return LinSubspace(ambient, Matrix(QQ, 0, ambient, ()))
    red, piv = rref(Matrix.of(QQ, vectors, ambient))
    return LinSubspace(ambient, Matrix(QQ, len(piv), ambient, red.rows[:len(piv)]))


def whole(ambient: int) -> LinSubspace:
    return span(ambient, Matrix.identity(QQ, ambient).rows)


def _annihilator(w: LinSubspace) -> list:
    if w.is_zero():
        return list(Matrix.identity(QQ, w.ambient).rows)
    return list(kernel_basis(w.basis).rows)


def _solutions(ambient: int, constraints) -> LinSubspace:
    if not constraints:
        return whole(ambient)
    return span(ambient, kernel_basis(Matrix.of(QQ, constraints, ambient)).rows)


def perp(h: HermitianSpace, w: LinSubspace) -> LinSubspace:
    if w.ambient != h.dim:
        raise DimensionError("subspace lives in a different space")
    return _solutions(h.dim, [h.gram.apply(v) for v in w.vectors()])


def meet(a: LinSubspace, b: LinSubspace) -> LinSubspace:
    return _solutions(a.ambient, _annihilator(a) + _annihilator(b))


def join(a: LinSubspace, b: LinSubspace) -> LinSubspace:
    return span(a.ambient, a.vectors() + b.vectors())


def complement_check(h: HermitianSpace, w: LinSubspace) -> bool:
    """w = w-perp-perp and w + w-perp is a direct sum filling the space."""
    wp = perp(h, w)
    return perp(h, wp) == w and meet(w, wp).is_zero() and join(w, wp).dim == h.dim


def orthomodular_check(h: HermitianSpace, family: Sequence[LinSubspace]):
    """x <= y implies x v (x' ^ y) = y over all pairs of the family; (ok, witness)."""
    for x, y in itertools.product(family, family):
        if x <= y and join(x, meet(perp(h, x), y)) != y:
            return False, (x, y)
    return True, None


def subspace_family(ambient: int, vectors) -> list[LinSubspace]:
    """Spans of all subsets of the given vectors, deduplicated."""
    seen = {}
    for k in range(len(vectors) + 1):
        for sub in itertools.combinations(vectors, k):
            w = span(ambient, sub)
            seen.setdefault(w.basis.rows, w)
    return list(seen.values())


def subspace_ops(h: HermitianSpace) -> dict:
    return {
        "meet": meet,
        "join": join,
        "perp": lambda w: perp(h, w),
        "complement_check": lambda w: complement_check(h, w),
    }


def induced_ortho_check(h: HermitianSpace, points) -> dict:
    """O1-O4 of the induced orthogonality, restricted to a finite sample of points.

    O5 concerns closed subspaces and is covered by complement_check instead.
    """
    pts = [tuple(_q(x) for x in p) for p in points]
    for p in pts:
        if len(p) != h.dim:
            raise DimensionError("point has the wrong length")
        if not any(p):
            raise InvalidInputError("zero vector is not a point")
    for i, j in itertools.combinations(range(len(pts)), 2):
        if rank(Matrix.of(QQ, [pts[i], pts[j]])) < 2:
            raise InvalidInputError("sample contains proportional vectors", witness=(i, j))
    n = len(pts)
    orth = [[h.form(pts[a], pts[b]) == 0 for b in range(n)] for a in range(n)]
    w = {}
    o1 = all(not orth[a][a] for a in range(n))
    if not o1:
        w["O1"] = next(a for a in range(n) if orth[a][a])
    o2 = all(orth[a][b] == orth[b][a] for a in range(n) for b in range(n))
    o3 = True
    for p, a, b in itertools.permutations(range(n), 3):
        if a < b and orth[p][a] and orth[p][b]:
            ln = span(h.dim, [pts[a], pts[b]])
            for c in range(n):
                if c != p and ln.contains(pts[c]) and not orth[p][c]:
                    o3 = False
                    w.setdefault("O3", (a, b, c, p))
    o4 = True
    q_witness = {}
    for a, b in itertools.permutations(range(n), 2):
        # q = x a + y b with <q, a> = 0, found by an exact kernel solve
        A, B = pts[a], pts[b]
        ker = kernel_basis(Matrix.of(QQ, [[h.form(A, A), h.form(B, A)]]))
        ok = False
        for row in ker.rows:
            q = tuple(row[0] * s + row[1] * t for s, t in zip(A, B))
            if any(q) and h.form(q, A) == 0:
                ok = True
                q_witness[(a, b)] = _integral(q)
        if not ok:
            o4 = False
            w.setdefault("O4", (a, b))
    return {"O1": o1, "O2": o2, "O3": o3, "O4": o4, "witnesses": w,
            "o4_points": q_witness,
            "note": "sample-level check; O5 is covered by complement_check on subspaces"}


# ---- reconstruction from an orthogonality oracle ----

@dataclass
class FormReport:
    form: Matrix
    involution: str
    scale: Fraction
    queries: int = 0
    notes: list = field(default_factory=list)


def _by_height(bound: int):
    """Nonzero rationals ordered by height max(|p|, q)."""
    for hgt in range(1, bound + 1):
        for q in range(1, hgt + 1):
            for p in range(1, hgt + 1):
                if max(p, q) == hgt and math.gcd(p, q) == 1:
                    yield Fraction(p, q)
                    yield Fraction(-p, q)


class _Oracle:
    def __init__(self, fn, height_bound):
        self.fn = fn
        self.bound = height_bound
        self.calls = 0

    def __call__(self, x, y) -> bool:
        x, y = _integral(x), _integral(y)
        if max(map(abs, x + y)) > self.bound:
            raise OracleInconsistentError("query would exceed the height bound", witness=(x, y))
        self.calls += 1
        return bool(self.fn(x, y))


def _functional(dim: int, y: Vec, oracle: _Oracle, search_height: int) -> Vec:
    """A row vector f with ker f = y-perp, found from coordinate-plane sections."""
    found = []

    def add(v):
        if rank(Matrix.of(QQ, found + [v])) > len(found):
            found.append(v)

    e = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    for i in range(dim):
        if oracle(e[i], y):
            add(e[i])
    for i, j in itertools.combinations(range(dim), 2):
        if len(found) == dim - 1:
            break
        if oracle(e[i], y) or oracle(e[j], y):
            continue  # the section is already spanned by a found basis vector
        for t in _by_height(search_height):
            v = tuple(a + t * b for a, b in zip(e[i], e[j]))
            if oracle(v, y):
                add(v)
                break
    if len(found) != dim - 1:
        raise OracleInconsistentError(
            f"found {len(found)} independent directions orthogonal to {_integral(y)}, need {dim - 1}",
            witness=_integral(y))
    k = kernel_basis(Matrix.of(QQ, found, dim))
    if k.nrows != 1:
        raise OracleInconsistentError("orthogonal directions do not pin down a hyperplane")
    return k.rows[0]


def piron_reconstruct(dim: int, ortho_oracle: Callable, height_bound: int = 10 ** 6,
                      search_height: int = 64, grid_size: int = 24, seed: int = 0) -> FormReport:
    if dim < 3:
        raise PreconditionError("reconstruction needs dimension at least 3")
    oracle = _Oracle(ortho_oracle, height_bound)
    e = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    u = tuple(Fraction(1) for _ in range(dim))
    fe = [_functional(dim, y, oracle, search_height) for y in e]
    fu = _functional(dim, u, oracle, search_height)
    # pin the free scalars by linearity on the frame: sum c_i f_{e_i} = f_u
    c_sys = Matrix.of(QQ, [[fe[i][r] for i in range(dim)] + [-fu[r]] for r in range(dim)], dim + 1)
    ker = kernel_basis(c_sys)
    if ker.nrows != 1 or ker.rows[0][dim] == 0:
        raise OracleInconsistentError("frame functionals are not linearly compatible")
    sol = ker.rows[0]
    c = [sol[i] / sol[dim] for i in range(dim)]
    if any(x == 0 for x in c):
        raise OracleInconsistentError("frame functional scaled to zero", witness=c)
    # [x, y] = A(y)(x); column i of B is A(e_i)
    B = [[c[i] * fe[i][r] for i in range(dim)] for r in range(dim)]
    eps = next((B[i][i] for i in range(dim) if B[i][i] != 0), None)
    if eps is None:
        raise IsotropyError("every frame vector is isotropic under the rebuilt form")
    raw = Matrix.of(QQ, B, dim)
    # normalise so the first nonzero entry is 1
    lead = next(x for r in raw.rows for x in r if x != 0)
    form = raw.scale(1 / lead)
    notes = [f"rescaled by the frame value eps = {eps}",
             "projective isomorphism checked through frame consistency and oracle agreement"]
    _verify(form, dim, oracle, grid_size, seed)
    return FormReport(form, "identity", lead, oracle.calls, notes)


def _grid(dim: int, size: int, rng: random.Random) -> list:
    e = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    pts = e + [tuple(1 for _ in range(dim))]
    while len(pts) < size:
        v = tuple(rng.randint(-4, 4) for _ in range(dim))
        if any(v):
            pts.append(v)
    return pts


def _verify(form: Matrix, dim: int, oracle: _Oracle, grid_size: int, seed: int):
    rng = random.Random(seed)
    grid = _grid(dim, grid_size, rng)
    for x, y in itertools.product(grid, grid):
        if form_of(form, x, y) != form_of(form, y, x):
            raise OracleInconsistentError("rebuilt form is not symmetric", witness=(x, y))
    for x, y in itertools.combinations(grid, 2):
        if (form_of(form, x, y) == 0) != oracle(x, y):
            raise OracleInconsistentError("rebuilt orthogonality disagrees with the oracle", witness=(x, y))
    # orthogonal pairs are rare among random ones, so also test pairs built to be orthogonal
    for x in grid:
        gx = form.apply(x)
        for row in kernel_basis(Matrix.of(QQ, [gx])).rows:
            if not oracle(x, row):
                raise OracleInconsistentError("oracle rejects a pair orthogonal under the rebuilt form",
                                              witness=(x, _integral(row)))
    # purity: the oracle must only see directions
    for x, y in itertools.islice(itertools.combinations(grid, 2), 10):
        if oracle(x, y) != oracle(tuple(2 * a for a in x), tuple(-3 * b for b in y)):
            raise OracleInconsistentError("oracle depends on more than the directions", witness=(x, y))


def oracle_from_gram(gram) -> Callable:
    g = gram if isinstance(gram, Matrix) else Matrix.of(QQ, gram)
    return lambda x, y: form_of(g, x, y) == 0


def form_uniqueness(f1: Matrix, f2: Matrix) -> Fraction | None:
    """lambda with f2 = lambda * f1, or None when no such scalar exists."""
    if (f1.nrows, f1.ncols) != (f2.nrows, f2.ncols):
        raise DimensionError("forms have different sizes")
    lam = None
    for r1, r2 in zip(f1.rows, f2.rows):
        for a, b in zip(r1, r2):
            a, b = _q(a), _q(b)
            if a == 0:
                if b != 0:
                    return None
                continue
            if lam is None:
                lam = b / a
            elif b != lam * a:
                return None
    if lam is None or lam == 0:
        return None
    return lam


@dataclass
class SemiunitaryResult:
    scale: Fraction
    unitary: bool


def pullback_gram(m: Matrix, h2: HermitianSpace) -> Matrix:
    """M^T G2 M, the form x, y -> <Mx, My>_2."""
    return Matrix.of(QQ, (m.transpose() @ h2.gram @ m).rows)


def semiunitary_check(m: Matrix, h1: HermitianSpace, h2: HermitianSpace) -> SemiunitaryResult | None:
    if m.nrows != h2.dim or m.ncols != h1.dim:
        raise DimensionError("map shape does not match the spaces")
    if rank(m) != min(m.nrows, m.ncols) or m.nrows != m.ncols:
        raise PreconditionError("map is not invertible")
    m = Matrix.of(QQ, m.rows)
    lam = form_uniqueness(h1.gram, pullback_gram(m, h2))
    if lam is None:
        return None
    return SemiunitaryResult(lam, lam == 1)
