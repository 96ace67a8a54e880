import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plg.errors import (DimensionError, InvalidInputError, IsotropyError,
                        OracleInconsistentError, PreconditionError)
from plg.exactmath import QQ, Matrix, rank
from plg.hermitian import (HermitianSpace, check_form, complement_check, congruence_diagonalize,
                           form_of, form_uniqueness, induced_ortho_check, join, meet,
                           oracle_from_gram, orthomodular_check, perp, piron_reconstruct,
                           pullback_gram, semiunitary_check, span, subspace_family, whole)

I3 = HermitianSpace.diagonal([1, 1, 1])
SIX = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, -1), (1, 2, 3)]
SIX4 = [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 1), (1, -1, 2, 0), (2, 0, 1, -3)]


def e(i, n=3):
    return tuple(int(i == j) for j in range(n))


def spd_grams():
    """Symmetric positive-definite integer matrices A A^T + I."""
    return st.integers(3, 4).flatmap(lambda n: st.lists(
        st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)).map(
        lambda A: [[sum(A[i][k] * A[j][k] for k in range(len(A))) + (i == j)
                    for j in range(len(A))] for i in range(len(A))])


# ---- the form itself ----

@pytest.mark.parametrize("diag", [[1, 1, 1], [1, 2, 3], [5, Fraction(1, 2), 7, 1]])
def test_positive_forms_pass(diag):
    r = check_form(HermitianSpace.diagonal(diag))
    assert all(r.as_dict().values()) and r.witness is None


def test_indefinite_form_has_isotropic_witness():
    h = HermitianSpace.diagonal([1, -1, 1])
    r = check_form(h)
    assert not r.S4 and not r.S3
    assert r.witness == (1, 1, 0) and h.form(r.witness, r.witness) == 0


def test_degenerate_and_hyperbolic_forms():
    h = HermitianSpace.of([[0, 1], [1, 0]])
    r = check_form(h)
    assert not r.S4 and h.form(r.witness, r.witness) == 0
    h = HermitianSpace.of([[1, 1], [1, 1]])
    r = check_form(h)
    assert not r.S4 and h.form(r.witness, r.witness) == 0 and any(r.witness)


def test_bad_gram_matrices():
    with pytest.raises(InvalidInputError):
        HermitianSpace.of([[1, 2], [3, 1]])
    with pytest.raises(DimensionError):
        HermitianSpace(3, Matrix.identity(QQ, 2))


@settings(max_examples=30, deadline=None)
@given(spd_grams())
def test_congruence_diagonalization(gram):
    G = Matrix.of(QQ, gram)
    d, P = congruence_diagonalize(G)
    n = len(gram)
    for i, j in itertools.product(range(n), repeat=2):
        assert form_of(G, P[i], P[j]) == (d[i] if i == j else 0)
    assert all(x > 0 for x in d)
    assert check_form(HermitianSpace.of(gram)).S4


# ---- subspaces ----

def test_perp_examples():
    assert perp(I3, span(3, [e(0)])) == span(3, [e(1), e(2)])
    h = HermitianSpace.diagonal([1, 1, 2])
    w = perp(h, span(3, [(1, 1, 1)]))
    assert w.dim == 2 and all(sum(a * b for a, b in zip((1, 1, 2), v)) == 0 for v in w.vectors())
    assert perp(I3, whole(3)).is_zero()
    assert perp(I3, span(3, [])) == whole(3)


def test_meet_join_examples():
    assert meet(span(3, [e(0)]), span(3, [e(1)])).is_zero()
    assert join(span(3, [e(0)]), span(3, [e(1)])) == span(3, [e(0), e(1)])
    a, b = span(3, [(1, 1, 0), (0, 0, 1)]), span(3, [(1, 0, 0), (0, 1, 1)])
    m = meet(a, b)
    assert m.dim == 1 and a.contains(m.vectors()[0]) and b.contains(m.vectors()[0])


@pytest.mark.parametrize("h,vecs", [(I3, SIX), (HermitianSpace.diagonal([1, 2, 3, 4]), SIX4)])
def test_perp_laws_on_a_family(h, vecs):
    fam = subspace_family(h.dim, vecs)
    for w in fam:
        wp = perp(h, w)
        assert w.dim + wp.dim == h.dim
        assert perp(h, wp) == w
        assert complement_check(h, w)
    for a, b in itertools.product(fam, fam):
        if a <= b:
            assert perp(h, b) <= perp(h, a)


@pytest.mark.parametrize("h,vecs", [(I3, SIX), (HermitianSpace.diagonal([1, 2, 3, 4]), SIX4)])
def test_orthomodular_law_on_a_family(h, vecs):
    ok, w = orthomodular_check(h, subspace_family(h.dim, vecs))
    assert ok and w is None


def test_orthomodular_law_fails_for_isotropic_space():
    h = HermitianSpace.diagonal([1, -1, 1])
    fam = subspace_family(3, [(1, 1, 0), (1, 0, 0), (0, 0, 1)])
    assert not complement_check(h, span(3, [(1, 1, 0)]))
    ok, w = orthomodular_check(h, fam)
    assert not ok and w is not None


# ---- induced orthogonality on a sample ----

def test_induced_ortho_on_basis():
    r = induced_ortho_check(I3, [e(0), e(1), e(2)])
    assert r["O1"] and r["O2"] and r["O3"] and r["O4"]


def test_induced_o4_points_are_solved():
    r = induced_ortho_check(I3, [e(0), e(1), (1, 1, 0)])
    assert r["O4"]
    q = r["o4_points"][(0, 1)]
    assert I3.form(q, e(0)) == 0 and q == (0, 1, 0)
    for (a, b), q in r["o4_points"].items():
        assert any(q)


def test_induced_ortho_rejects_bad_samples():
    with pytest.raises(InvalidInputError):
        induced_ortho_check(I3, [e(0), (2, 0, 0)])
    with pytest.raises(InvalidInputError):
        induced_ortho_check(I3, [(0, 0, 0)])
    r = induced_ortho_check(HermitianSpace.diagonal([1, -1, 1]), [(1, 1, 0), e(2)])
    assert not r["O1"] and r["witnesses"]["O1"] == 0


# ---- reconstruction ----

GRAMS = {
    "identity3": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "diag123": [[1, 0, 0], [0, 2, 0], [0, 0, 3]],
    "identity4": [[1 if i == j else 0 for j in range(4)] for i in range(4)],
    "diag1125": [[(1, 1, 2, 5)[i] if i == j else 0 for j in range(4)] for i in range(4)],
    "dense": [[2, 1, 0], [1, 3, 1], [0, 1, 4]],
}


@pytest.mark.parametrize("name", list(GRAMS))
def test_piron_reconstruct_is_proportional(name):
    G = Matrix.of(QQ, GRAMS[name])
    r = piron_reconstruct(G.nrows, oracle_from_gram(G))
    lam = form_uniqueness(G, r.form)
    assert lam is not None and lam != 0
    assert r.involution == "identity"
    assert next(x for row in r.form.rows for x in row if x) == 1


def test_reconstruction_queries_stay_within_height_bound():
    G = Matrix.of(QQ, GRAMS["diag1125"])
    seen = []

    def oracle(x, y):
        seen.append(max(abs(v) for v in x + y))
        return form_of(G, x, y) == 0

    r = piron_reconstruct(4, oracle)
    assert r.queries == len(seen) and max(seen) <= 10 ** 6


def test_scaled_oracle_gives_the_same_form():
    G = Matrix.of(QQ, GRAMS["diag123"])
    a = piron_reconstruct(3, oracle_from_gram(G)).form
    b = piron_reconstruct(3, oracle_from_gram(G.scale(-7))).form
    assert a == b


@settings(max_examples=8, deadline=None)
@given(spd_grams())
def test_reconstruction_of_random_positive_forms(gram):
    G = Matrix.of(QQ, gram)
    r = piron_reconstruct(G.nrows, oracle_from_gram(G))
    assert form_uniqueness(G, r.form) is not None
    rng = random.Random(1)
    oracle = oracle_from_gram(G)
    for _ in range(50):
        x = [rng.randint(-3, 3) for _ in gram]
        y = [rng.randint(-3, 3) for _ in gram]
        if any(x) and any(y):
            assert (form_of(r.form, x, y) == 0) == oracle(x, y)


def test_reconstruction_errors():
    with pytest.raises(OracleInconsistentError):
        piron_reconstruct(3, lambda x, y: False)
    with pytest.raises(OracleInconsistentError):
        piron_reconstruct(3, lambda x, y: True)
    with pytest.raises(IsotropyError):
        piron_reconstruct(3, oracle_from_gram([[0, 1, 1], [1, 0, 1], [1, 1, 0]]))
    with pytest.raises(PreconditionError):
        piron_reconstruct(2, oracle_from_gram([[1, 0], [0, 1]]))


# ---- uniqueness and semi-unitary maps ----

def test_form_uniqueness_examples():
    f = Matrix.of(QQ, GRAMS["dense"])
    assert form_uniqueness(f, f.scale(5)) == 5
    assert form_uniqueness(f, f) == 1
    i3, d = Matrix.identity(QQ, 3), Matrix.of(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert form_uniqueness(i3, d) is None
    # the distinguishing pair
    x, y = (1, 0, 1), (1, 0, -1)
    assert form_of(i3, x, y) == 0 and form_of(d, x, y) == -1
    with pytest.raises(DimensionError):
        form_uniqueness(i3, Matrix.identity(QQ, 2))


def test_semiunitary_examples():
    r = semiunitary_check(Matrix.identity(QQ, 3), I3, I3)
    assert r.scale == 1 and r.unitary
    r = semiunitary_check(Matrix.identity(QQ, 3).scale(2), I3, I3)
    assert r.scale == 4 and not r.unitary
    shear = Matrix.of(QQ, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert semiunitary_check(shear, I3, I3) is None
    with pytest.raises(PreconditionError):
        semiunitary_check(Matrix.of(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 0]]), I3, I3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.sampled_from([[1, 1, 1], [1, 2, 3], [2, 2, 2]]))
def test_semiunitary_agrees_with_pullback(rows, diag):
    M = Matrix.of(QQ, rows)
    h1, h2 = HermitianSpace.diagonal(diag), I3
    try:
        r = semiunitary_check(M, h1, h2)
    except PreconditionError:
        assert rank(M) < 3
        return
    lam = form_uniqueness(h1.gram, pullback_gram(M, h2))
    assert (r is None and lam is None) or r.scale == lam
