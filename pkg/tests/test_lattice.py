import itertools

import numpy as np
import pytest

from plg.corpus import benzene, line_geometry
from plg.errors import CapExceededError, InvalidInputError, NotJoinPreservingError, PreconditionError
from plg.geometry import (GeoMorphism, Geometry, coproduct, discrete, from_vector_space,
                          identity_morphism, is_isomorphism)
from plg.lattice import (LatMorphism, alpha_iso, atoms_geometry, beta_iso, boolean_lattice, center,
                         chain, check_lat_morphism, from_geometry, from_leq, is_modular,
                         lattice_coproduct, map_G, map_L, predicates, right_adjoint)

from . import oracles

FANO = from_vector_space(2, 3)


def order_lattice(n, covers):
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        leq[a, b] = True
    for _ in range(n):
        leq = leq | ((leq.astype(int) @ leq.astype(int)) > 0)
    return from_leq(leq)


# small non-examples
PENTAGON = order_lattice(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
M3 = order_lattice(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
# flats of the rank-3 uniform matroid on 4 points: atomistic, covering law, not modular
U34 = order_lattice(12, [(0, a) for a in range(1, 5)]
                    + [(a, 5 + k) for k, (x, y) in enumerate(itertools.combinations(range(1, 5), 2)) for a in (x, y)]
                    + [(5 + k, 11) for k in range(6)])

CORPUS = {
    "fano": from_geometry(FANO),
    "pg(2,3)": from_geometry(from_vector_space(3, 3)),
    "pg(3,2)": from_geometry(from_vector_space(2, 4)),
    "discrete(3)": from_geometry(discrete(3)),
    "line(4)": from_geometry(line_geometry(4)),
    "fano+line": from_geometry(coproduct([FANO, line_geometry(3)])[0]),
    "boolean(3)": boolean_lattice(3),
    "chain(2)": chain(2),
    "chain(4)": chain(4),
    "pentagon": PENTAGON,
    "m3": M3,
    "u34": U34,
    "benzene": benzene().lattice,
}


def dense(l):
    return l.leq.tolist()


# ---- construction ----

def test_from_geometry_examples():
    L = CORPUS["fano"]
    assert L.n == 16 and len(L.atoms) == 7
    # height 3: longest chain has 4 elements
    assert L.labels[L.bottom] == frozenset() and L.labels[L.top] == frozenset(range(7))
    p = from_geometry(discrete(1))
    assert p.n == 2 and p.leq[p.bottom, p.top]
    assert CORPUS["pg(3,2)"].n == 67 and CORPUS["pg(2,3)"].n == 28
    with pytest.raises(CapExceededError):
        from_geometry(from_vector_space(2, 4), cap=50)


@pytest.mark.parametrize("name", ["fano", "discrete(3)", "pentagon", "m3", "benzene", "u34"])
def test_tables_match_brute_force(name):
    L = CORPUS[name]
    leq = dense(L)
    for x, y in itertools.product(range(L.n), repeat=2):
        assert L.join[x, y] == oracles.lub(leq, x, y)
        assert L.meet[x, y] == oracles.glb(leq, x, y)
    bot, atoms = oracles.atoms(leq)
    assert L.bottom == bot and sorted(L.atoms) == sorted(atoms)


def test_from_leq_rejects_non_lattices():
    # two incomparable maximal elements
    with pytest.raises(InvalidInputError):
        from_leq([[1, 1, 1], [0, 1, 0], [0, 0, 1]])
    # 0 < a, b < c, d < 1: a v b is ambiguous
    leq = np.eye(6, dtype=bool)
    for a, b in [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5),
                 (0, 3), (0, 4), (0, 5), (1, 5), (2, 5)]:
        leq[a, b] = True
    with pytest.raises(InvalidInputError):
        from_leq(leq)
    with pytest.raises(InvalidInputError):
        from_leq([[1, 1], [1, 1]])


# ---- predicates ----

def test_projective_lattices_pass_all_predicates():
    for name in ("fano", "pg(2,3)", "pg(3,2)", "discrete(3)", "line(4)", "fano+line", "boolean(3)"):
        r = predicates(CORPUS[name])
        assert all(r.as_dict().values()), (name, r.witnesses)


def test_non_modular_examples_have_witnesses():
    for name in ("pentagon", "benzene", "u34"):
        ok, w = is_modular(CORPUS[name])
        assert not ok and w is not None
        x, y, z = w
        L = CORPUS[name]
        assert L.leq[x, z] and L.join[x, L.meet[y, z]] != L.meet[L.join[x, y], z]
    # M3 is the subspace lattice of a three-point line
    r = predicates(M3)
    assert r.modular and r.atomistic and r.covering_law
    assert atoms_geometry(M3).lines == ((0, 1, 2),)


@pytest.mark.parametrize("name", list(CORPUS))
def test_predicates_agree_with_oracles(name):
    L = CORPUS[name]
    if L.n > 30:
        pytest.skip("brute-force modularity is cubic in pure python")
    r = predicates(L)
    leq = dense(L)
    assert r.modular == oracles.is_modular(leq)
    assert r.atomistic == oracles.is_atomistic(leq)


@pytest.mark.parametrize("name", list(CORPUS))
def test_predicate_implications(name):
    r = predicates(CORPUS[name])
    if r.modular:
        assert r.upper_semimodular and r.lower_semimodular
    if r.atomistic:
        assert r.covering_law == r.upper_semimodular
    if r.lower_semimodular and r.covering_law:
        assert r.intersection_property
    if r.atomistic:
        assert r.modular == r.intersection_property
    assert r.complete and r.continuous and r.atoms_compact


def test_u34_is_the_interesting_non_example():
    r = predicates(U34)
    assert r.atomistic and r.covering_law and r.upper_semimodular
    assert not r.modular and not r.intersection_property and not r.lower_semimodular


# ---- the two natural isomorphisms ----

@pytest.mark.parametrize("g", [FANO, discrete(4), Geometry(0, ()), from_vector_space(3, 3),
                               coproduct([FANO, line_geometry(4)])[0]])
def test_alpha_iso(g):
    m, ok = alpha_iso(g)
    assert ok and is_isomorphism(m)


@pytest.mark.parametrize("name", ["fano", "boolean(3)", "pg(3,2)", "fano+line", "chain(2)"])
def test_beta_iso(name):
    L = CORPUS[name]
    f, ok = beta_iso(L)
    assert ok
    assert oracles.is_lattice_iso(L.n, dense(L), dense(f.target), list(f.mapping))


def test_atoms_geometry_examples():
    assert atoms_geometry(boolean_lattice(3)).lines == ()
    assert atoms_geometry(chain(1 + 1)).n_points == 1
    with pytest.raises(PreconditionError):
        atoms_geometry(U34)
    with pytest.raises(PreconditionError):
        beta_iso(benzene().lattice)


# ---- coproducts and the center ----

def test_coproduct_examples():
    L = CORPUS["fano"]
    P, inj = lattice_coproduct([L])
    assert P.n == 16 and all(check_lat_morphism(f) for f in inj)
    P, _ = lattice_coproduct([chain(2), chain(2)])
    assert P.n == 4 and predicates(P).modular and len(P.atoms) == 2
    P, inj = lattice_coproduct([L, chain(2)])
    assert P.n == 32 and all(check_lat_morphism(f) for f in inj)
    with pytest.raises(CapExceededError):
        lattice_coproduct([L, L, L], cap=1000)


def test_coproduct_of_geometries_matches_product_of_lattices():
    G, _ = coproduct([FANO, line_geometry(3)])
    P, _ = lattice_coproduct([from_geometry(FANO), from_geometry(line_geometry(3))])
    L = from_geometry(G)
    assert L.n == P.n == 16 * 5
    assert beta_iso(P)[1]


def test_center_examples():
    assert center(CORPUS["fano"]) == sorted([CORPUS["fano"].bottom, CORPUS["fano"].top])
    assert len(center(boolean_lattice(3))) == 8
    P, inj = lattice_coproduct([CORPUS["fano"], chain(2)])
    z = set(center(P))
    assert inj[0].mapping[CORPUS["fano"].top] in z and inj[1].mapping[1] in z
    assert len(z) == 4


@pytest.mark.parametrize("name", ["fano", "boolean(3)", "fano+line", "m3", "benzene"])
def test_center_is_boolean_sublattice(name):
    L = CORPUS[name]
    z = center(L)
    assert L.bottom in z and L.top in z
    zs = set(z)
    for a, b in itertools.product(z, z):
        assert L.join[a, b] in zs and L.meet[a, b] in zs
    for a in z:
        assert any(L.join[a, b] == L.top and L.meet[a, b] == L.bottom for b in z)
    for a, b, c in itertools.product(z, z, z):
        assert L.meet[a, L.join[b, c]] == L.join[L.meet[a, b], L.meet[a, c]]


# ---- functoriality and adjoints ----

def test_map_L_identity_and_injection():
    L = CORPUS["fano"]
    f = map_L(identity_morphism(FANO))
    assert f.mapping == tuple(range(L.n))
    G, inj = coproduct([FANO, FANO])
    f = map_L(inj[0])
    for x in range(L.n):
        assert f.target.labels[f.mapping[x]] == L.labels[x]


def test_map_L_constant_morphism():
    const = GeoMorphism(FANO, discrete(1), (0,) * 7)
    f = map_L(const)
    for x in range(f.source.n):
        want = f.target.bottom if x == f.source.bottom else f.target.top
        assert f.mapping[x] == want


def test_map_G_examples():
    B3, B2 = boolean_lattice(3), boolean_lattice(2)
    # projection forgetting atom 2: S -> S minus {2}
    mapping = tuple(B2.index(lab - {2}) for lab in B3.labels)
    f = LatMorphism(B3, B2, mapping)
    assert check_lat_morphism(f)
    g = map_G(f)
    assert len(g.kernel) == 1
    L = CORPUS["fano"]
    assert map_G(LatMorphism(L, L, tuple(range(L.n)))).mapping == tuple(range(7))
    bf, _ = beta_iso(L)
    assert sorted(map_G(bf).mapping) == list(range(7))


def test_adjunction_laws_for_geometry_morphisms():
    G, inj = coproduct([FANO, line_geometry(3)])
    for m in inj + [identity_morphism(FANO), GeoMorphism(FANO, discrete(2), (0,) * 7)]:
        f = map_L(m)
        g = right_adjoint(f)
        S, T = f.source, f.target
        for x in range(S.n):
            assert S.leq[x, g.mapping[f.mapping[x]]]
        for y in range(T.n):
            assert T.leq[f.mapping[g.mapping[y]], y]
            # g is the pullback g*(T) on labels
            if m.kernel == frozenset():
                assert S.labels[g.mapping[y]] == m.pullback(T.labels[y])


def test_right_adjoint_of_meet_with_constant():
    B = boolean_lattice(3)
    c = B.index(frozenset({0, 1}))
    cc = B.index(frozenset({2}))
    f = LatMorphism(B, B, tuple(int(B.meet[x, c]) for x in range(B.n)))
    g = right_adjoint(f)
    assert g.mapping == tuple(int(B.join[y, cc]) for y in range(B.n))
    ident = LatMorphism(B, B, tuple(range(B.n)))
    assert right_adjoint(ident).mapping == tuple(range(B.n))


def test_right_adjoint_rejects_non_join_preserving():
    L = M3
    c = L.atoms[0]
    f = LatMorphism(L, L, tuple(int(L.meet[x, c]) for x in range(L.n)))
    with pytest.raises(NotJoinPreservingError) as e:
        right_adjoint(f)
    assert e.value.witness is not None
