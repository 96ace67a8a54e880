import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plg.errors import DimensionError, InvalidInputError
from plg.exactmath import (GF, QQ, Matrix, kernel_basis, parse_rational, projective_normalize,
                           rank, rref, row_space_basis, solve)

primes = st.sampled_from([2, 3, 5, 7, 11, 13])
fracs = st.fractions(max_denominator=50).filter(lambda f: abs(f.numerator) < 10 ** 6)


def matrices(field, max_rows=4, max_cols=4):
    if field is QQ:
        elem = st.integers(-6, 6)
    else:
        elem = st.integers(0, field.p - 1)
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(elem, min_size=c, max_size=c), min_size=r, max_size=r)
        )).map(lambda rows: Matrix.of(field, rows))


# ---- scalars ----

@given(primes, st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(p, a, b, c):
    F = GF(p)
    a, b, c = F.canon(a), F.canon(b), F.canon(c)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    assert 0 <= F.add(a, b) < p


@given(fracs, fracs, fracs)
def test_rational_field_axioms(a, b, c):
    F = QQ
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1
    x = F.canon(Fraction(6, -4))
    assert x.denominator > 0 and (x.numerator, x.denominator) == (-3, 2)


def test_bad_fields_and_scalars():
    with pytest.raises(InvalidInputError):
        GF(4)
    with pytest.raises(InvalidInputError):
        QQ.canon(0.5)
    with pytest.raises(ZeroDivisionError):
        GF(5).inv(0)
    with pytest.raises(InvalidInputError):
        GF(3).canon(Fraction(1, 3))
    assert GF(5).canon(Fraction(1, 2)) == 3
    assert parse_rational(" -3/6 ") == Fraction(-1, 2)
    with pytest.raises(InvalidInputError):
        parse_rational("1/0")


# ---- rref / kernel / solve ----

def test_rref_examples():
    F2 = GF(2)
    r, piv = rref(Matrix.identity(F2, 3))
    assert r == Matrix.identity(F2, 3) and piv == [0, 1, 2]
    r, piv = rref(Matrix.of(F2, [[1, 1], [1, 1]]))
    assert r.rows == ((1, 1), (0, 0)) and piv == [0]
    r, piv = rref(Matrix.of(QQ, [[2, 4]]))
    assert r.rows == ((1, 2),) and piv == [0]


def test_kernel_examples():
    assert kernel_basis(Matrix.zeros(QQ, 2, 3)).nrows == 3
    assert kernel_basis(Matrix.of(GF(2), [[1, 1]])).rows == ((1, 1),)
    assert kernel_basis(Matrix.of(QQ, [[1, 2, 0], [0, 1, 1], [1, 0, 3]])).nrows == 0


def test_solve_examples():
    F3 = GF(3)
    assert solve(Matrix.identity(QQ, 2), [5, Fraction(1, 3)]) == (5, Fraction(1, 3))
    x = solve(Matrix.of(F3, [[1, 1]]), [2])
    assert F3.add(x[0], x[1]) == 2
    assert solve(Matrix.of(QQ, [[1], [1]]), [1, 2]) is None
    with pytest.raises(DimensionError):
        solve(Matrix.of(QQ, [[1, 1]]), [1, 2])


@settings(max_examples=60)
@given(st.sampled_from([GF(2), GF(3), GF(5), QQ]).flatmap(lambda F: matrices(F)))
def test_rref_kernel_properties(m):
    r, piv = rref(m)
    assert rref(r)[0] == r
    assert rank(m) + kernel_basis(m).nrows == m.ncols
    for v in kernel_basis(m).rows:
        assert not any(m.apply(v))
    # row space is preserved
    assert rank(Matrix.of(m.field, list(m.rows) + list(r.rows), m.ncols)) == len(piv)
    assert row_space_basis(m).nrows == len(piv)


@settings(max_examples=60)
@given(st.sampled_from([GF(2), GF(3), QQ]).flatmap(
    lambda F: st.tuples(matrices(F, 3, 3), st.lists(st.integers(0, 2), min_size=3, max_size=3))))
def test_solve_substitution(args):
    m, b = args
    b = b[:m.nrows]
    x = solve(m, b)
    if x is not None:
        assert m.apply(x) == tuple(m.field.canon(v) for v in b)
    else:
        aug = Matrix.of(m.field, [list(r) + [v] for r, v in zip(m.rows, b)])
        assert rank(aug) > rank(m)


def test_kernel_matches_brute_force_over_small_fields():
    # every vector of GF(p)^n with m v = 0 lies in the span of the kernel basis, and vice versa
    import random
    rng = random.Random(3)
    for p in (2, 3):
        F = GF(p)
        for _ in range(25):
            r, c = rng.randint(1, 3), rng.randint(1, 4)
            m = Matrix.of(F, [[rng.randrange(p) for _ in range(c)] for _ in range(r)])
            brute = {v for v in itertools.product(range(p), repeat=c) if not any(m.apply(v))}
            k = kernel_basis(m)
            spanned = set()
            for coeffs in itertools.product(range(p), repeat=k.nrows):
                v = [0] * c
                for a, row in zip(coeffs, k.rows):
                    v = [F.add(x, F.mul(a, y)) for x, y in zip(v, row)]
                spanned.add(tuple(v))
            assert spanned == brute


@given(primes, st.lists(st.integers(0, 100), min_size=1, max_size=4), st.integers(1, 100))
def test_projective_normalize_is_scale_invariant(p, v, s):
    F = GF(p)
    if not any(F.canon(x) for x in v) or s % p == 0:
        with pytest.raises(InvalidInputError):
            projective_normalize(F, [0] * len(v))
        return
    a = projective_normalize(F, v)
    assert a == projective_normalize(F, [s * x for x in v])
    assert next(x for x in a if x) == 1


def test_matrix_shape_errors():
    with pytest.raises(DimensionError):
        Matrix.of(QQ, [[1, 2], [3]])
    with pytest.raises(DimensionError):
        Matrix.identity(QQ, 2) @ Matrix.identity(QQ, 3)
    m = Matrix.of(QQ, [[1, 2], [3, 4]])
    assert (m @ Matrix.identity(QQ, 2)) == m
    assert m.transpose().rows == ((1, 3), (2, 4))
    assert m.scale(2).rows == ((2, 4), (6, 8))
