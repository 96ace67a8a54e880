"""Rebuilding the coordinate field of an arguesian geometry from its collineations.

Central collineations come from the perspectivity rule; translations with a
common axis give the vector group, homotheties with center o give the field.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (ConstructionError, InconsistencyError, InvalidInputError,
                     NotArguesianError, PreconditionError)
from .exactmath import GF, Matrix, kernel_basis, projective_normalize
from .geometry import (GeoMorphism, Geometry, bits, closure_mask, desargues_holds,
                       dimension, is_irreducible, is_isomorphism, is_subspace_mask,
                       to_mask)


@dataclass(frozen=True)
class Collineation:
    perm: tuple
    axis: frozenset | None = None
    center: int | None = None

    def __call__(self, x: int) -> int:
        return self.perm[x]


def _meet_point(g: Geometry, m1: int, m2: int, what: str) -> int:
    s = m1 & m2
    if s == 0 or s & (s - 1):
        raise ConstructionError(f"{what}: expected exactly one common point, got {bits(s)}",
                                witness=(bits(m1), bits(m2)))
    return s.bit_length() - 1


def _require_arguesian(g: Geometry):
    if not is_irreducible(g):
        raise PreconditionError("geometry is reducible")
    if dimension(g) < 2:
        raise PreconditionError("dimension must be at least 2")
    d = desargues_holds(g)
    if not d.holds:
        raise NotArguesianError("Desargues' property fails", witness=d.witness)


def is_hyperplane_mask(g: Geometry, h: int) -> bool:
    full = g.full_mask
    if h == full or not is_subspace_mask(g, h):
        return False
    return all(closure_mask(g, h | (1 << x)) == full for x in range(g.n_points) if not h >> x & 1)


def hyperplanes(g: Geometry) -> list[frozenset]:
    """Coatoms of the subspace lattice, grown rank by rank from the empty set."""
    d = dimension(g)
    layer = {0}
    for _ in range(d):
        nxt = set()
        for s in layer:
            for x in range(g.n_points):
                if not s >> x & 1:
                    nxt.add(closure_mask(g, s | (1 << x)))
        layer = nxt
    out = sorted(layer, key=lambda m: bits(m))
    for h in out:
        if not is_hyperplane_mask(g, h):
            raise InconsistencyError("rank-d subspace is not a coatom", witness=bits(h))
    return [frozenset(bits(h)) for h in out]


def _check_collineation(g: Geometry, perm, hmask: int, c: int) -> str | None:
    if sorted(perm) != list(range(g.n_points)):
        return "not a bijection"
    if not is_isomorphism(GeoMorphism(g, g, tuple(perm))):
        return "not a collineation"
    if any(perm[h] != h for h in bits(hmask)):
        return "axis not fixed pointwise"
    pm = g.pair_mask
    for y in range(g.n_points):
        if y != c:
            ln = pm[c][y]
            if to_mask(perm[x] for x in bits(ln)) != ln:
                return f"line through the center and {y} not fixed"
    return None


def central_collineation(g: Geometry, H, c: int, p: int, p2: int,
                         check_desargues: bool = True, aux: int | None = None) -> Collineation:
    """The collineation with axis H and center c sending p to p2."""
    if check_desargues:
        _require_arguesian(g)
    g._check_index(c, p, p2)
    hmask = to_mask(H)
    if not is_hyperplane_mask(g, hmask):
        raise PreconditionError("axis is not a hyperplane", witness=sorted(H))
    if hmask >> p & 1 or hmask >> p2 & 1:
        raise PreconditionError("p and p' must lie off the axis", witness=(p, p2))
    if c == p or c == p2:
        raise PreconditionError("center must differ from p and p'", witness=(c, p, p2))
    axis = frozenset(bits(hmask))
    if p == p2:
        return Collineation(tuple(range(g.n_points)), axis, c)
    pm = g.pair_mask
    if not pm[c][p] >> p2 & 1:
        raise PreconditionError("c, p, p' must be collinear", witness=(c, p, p2))

    def image(x, ref, ref_img):
        f = _meet_point(g, pm[ref][x], hmask, "line(ref, x) meet axis")
        return _meet_point(g, pm[c][x], pm[f][ref_img], "line(c, x) meet line(f, ref')")

    cp = pm[c][p]
    if aux is None:
        aux = next((r for r in range(g.n_points) if not (cp | hmask) >> r & 1), None)
    if aux is None or (cp | hmask) >> aux & 1:
        raise ConstructionError("no auxiliary point off the axis and off line(c, p)")
    aux_img = image(aux, p, p2)
    perm = []
    for x in range(g.n_points):
        if hmask >> x & 1 or x == c:
            perm.append(x)
        elif x == p:
            perm.append(p2)
        elif cp >> x & 1:
            perm.append(image(x, aux, aux_img))
        else:
            perm.append(image(x, p, p2))
    why = _check_collineation(g, perm, hmask, c)
    if why is not None or perm[p] != p2:
        raise ConstructionError(f"perspectivity rule does not give a central collineation: {why}",
                                witness=(tuple(sorted(H)), c, p, p2))
    return Collineation(tuple(perm), axis, c)


# ---- translations ----

@dataclass
class TranslationGroup:
    points: tuple          # V = G minus H, sorted
    zero: int              # the origin o
    translations: dict     # p -> Collineation with o -> p
    add: dict              # (p, q) -> p + q

    def plus(self, p, q):
        return self.add[(p, q)]

    def neg(self, p):
        return next(q for q in self.points if self.add[(p, q)] == self.zero)


def translation_group(g: Geometry, H, o: int, check_desargues: bool = True) -> TranslationGroup:
    if check_desargues:
        _require_arguesian(g)
    hmask = to_mask(H)
    if hmask >> o & 1:
        raise PreconditionError("origin must lie off the axis")
    V = tuple(x for x in range(g.n_points) if not hmask >> x & 1)
    trans = {o: Collineation(tuple(range(g.n_points)), frozenset(bits(hmask)), None)}
    pm = g.pair_mask
    for p in V:
        if p == o:
            continue
        c = _meet_point(g, pm[o][p], hmask, "line(o, p) meet axis")
        trans[p] = central_collineation(g, H, c, o, p, check_desargues=False)
    add = {(p, q): trans[p](q) for p in V for q in V}
    _verify_abelian(V, o, add)
    # simple transitivity: for each p the map v -> tau_v(p) is a bijection of V
    for p in V:
        if sorted(trans[v](p) for v in V) != list(V):
            raise ConstructionError("translations do not act simply transitively", witness=p)
    return TranslationGroup(V, o, trans, add)


def _verify_abelian(V, o, add):
    for p in V:
        if add[(o, p)] != p or add[(p, o)] != p:
            raise ConstructionError("origin is not the zero of translation addition", witness=p)
        if not any(add[(p, q)] == o for q in V):
            raise ConstructionError("missing additive inverse", witness=p)
    for p, q in itertools.product(V, V):
        if add[(p, q)] != add[(q, p)]:
            raise ConstructionError("translation addition is not commutative", witness=(p, q))
    for p, q, r in itertools.product(V, V, V):
        if add[(add[(p, q)], r)] != add[(p, add[(q, r)])]:
            raise ConstructionError("translation addition is not associative", witness=(p, q, r))


# ---- the homothety field ----

@dataclass
class FieldTables:
    order: int
    add: tuple
    mul: tuple
    commutative: bool
    maps: tuple = field(default=(), repr=False)   # element id -> map on V (tuple indexed like V)


class TableField:
    """Adapter exposing FieldTables through the exactmath field protocol."""

    def __init__(self, k: FieldTables):
        self.k = k
        self.zero, self.one = 0, 1
        self._neg = [k.add[a].index(0) for a in range(k.order)]
        self._inv = [None] + [k.mul[a].index(1) for a in range(1, k.order)]

    def canon(self, v):
        v = int(v)
        if not 0 <= v < self.k.order:
            raise InvalidInputError(f"{v} is not an element id")
        return v

    def add(self, a, b):
        return self.k.add[a][b]

    def sub(self, a, b):
        return self.k.add[a][self._neg[b]]

    def mul(self, a, b):
        return self.k.mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def is_zero(self, a):
        return a == 0

    def elements(self):
        return range(self.k.order)


def verify_field(add, mul) -> str | None:
    q = len(add)
    E = range(q)
    for a in E:
        if add[0][a] != a or add[a][0] != a:
            return "0 is not an additive identity"
        if mul[1][a] != a or mul[a][1] != a:
            return "1 is not a multiplicative identity"
        if 0 not in add[a]:
            return "missing additive inverse"
        if a and 1 not in mul[a]:
            return "missing multiplicative inverse"
    for a, b in itertools.product(E, E):
        if add[a][b] != add[b][a]:
            return "addition not commutative"
    for a, b, c in itertools.product(E, E, E):
        if add[add[a][b]][c] != add[a][add[b][c]]:
            return "addition not associative"
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            return "multiplication not associative"
        if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
            return "left distributivity fails"
        if mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]]:
            return "right distributivity fails"
    if 1 == 0 or q < 2:
        return "trivial ring"
    return None


def homothety_field(g: Geometry, H, o: int, tg: TranslationGroup | None = None,
                    check_desargues: bool = True) -> FieldTables:
    if tg is None:
        tg = translation_group(g, H, o, check_desargues)
    hmask = to_mask(H)
    V = tg.points
    vpos = {x: i for i, x in enumerate(V)}
    pm = g.pair_mask
    u = next(x for x in V if x != o)
    targets = sorted(x for x in bits(pm[o][u]) if x != o and not hmask >> x & 1)
    zero_map = tuple(o for _ in V)
    homs = {}
    for t in targets:
        h = central_collineation(g, H, o, u, t, check_desargues=False)
        homs[t] = tuple(h(x) for x in V)
    # ids: 0 = constant map to o, 1 = identity, then by image of u
    order_t = [u] + [t for t in targets if t != u]
    maps = [zero_map] + [homs[t] for t in order_t]
    index = {m: i for i, m in enumerate(maps)}
    q = len(maps)

    def apply(m, x):
        return m[vpos[x]]

    add, mul = [], []
    for a in maps:
        arow, mrow = [], []
        for b in maps:
            s = tuple(tg.plus(apply(a, x), apply(b, x)) for x in V)
            if s not in index:
                raise ConstructionError("sum of two field elements is not a field element")
            arow.append(index[s])
            comp = tuple(apply(a, apply(b, x)) for x in V)
            if comp not in index:
                raise ConstructionError("composition of two field elements is not a field element")
            mrow.append(index[comp])
        add.append(tuple(arow))
        mul.append(tuple(mrow))
    why = verify_field(add, mul)
    if why is not None:
        raise ConstructionError(f"homothety tables are not a field: {why}")
    comm = all(mul[a][b] == mul[b][a] for a in range(q) for b in range(q))
    return FieldTables(q, tuple(add), tuple(mul), comm, tuple(maps))


def identify_field(k: FieldTables) -> tuple | None:
    """For prime order p, the map n -> 1+...+1 (n times) as a tuple; None otherwise."""
    from .exactmath import is_prime
    p = k.order
    if not is_prime(p):
        return None
    mp = [0]
    for _ in range(1, p):
        mp.append(k.add[mp[-1]][1])
    if sorted(mp) != list(range(p)):
        return None
    for a in range(p):
        for b in range(p):
            if mp[(a + b) % p] != k.add[mp[a]][mp[b]] or mp[(a * b) % p] != k.mul[mp[a]][mp[b]]:
                return None
    return tuple(mp)


# ---- coordinates ----

@dataclass
class CoordModel:
    field: FieldTables
    vspace_dim: int
    coords: tuple          # point -> canonical homogeneous vector of element ids
    hyperplane: frozenset
    origin: int

    @property
    def field_order(self) -> int:
        return self.field.order

    @property
    def add_table(self):
        return self.field.add

    @property
    def mul_table(self):
        return self.field.mul


def projective_space_over(F, order: int, d: int) -> tuple[Geometry, list]:
    """P(F^d) for a finite field given through the exactmath protocol."""
    pts = [v for v in itertools.product(range(order), repeat=d)
           if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    index = {v: i for i, v in enumerate(pts)}
    lines = set()
    covered = set()
    for i, j in itertools.combinations(range(len(pts)), 2):
        if (i, j) in covered:
            continue
        u, v = pts[i], pts[j]
        ln = set()
        for a in range(order):
            for b in range(order):
                if a or b:
                    w = tuple(F.add(F.mul(a, x), F.mul(b, y)) for x, y in zip(u, v))
                    ln.add(index[projective_normalize(F, w)])
        ln = tuple(sorted(ln))
        if len(ln) >= 3:
            lines.add(ln)
            covered.update(itertools.combinations(ln, 2))
    return Geometry(len(pts), tuple(sorted(lines)), provenance="rebuilt"), pts


def coordinatize(g: Geometry, seed: int | None = None, check_desargues: bool = True) -> CoordModel:
    if check_desargues:
        _require_arguesian(g)
    elif not is_irreducible(g) or dimension(g) < 2:
        raise PreconditionError("coordinatization needs an irreducible geometry of dimension >= 2")
    hs = hyperplanes(g)
    if seed is None:
        H = hs[0]
        o = min(x for x in range(g.n_points) if x not in H)
    else:
        rng = random.Random(seed)
        H = rng.choice(hs)
        o = rng.choice([x for x in range(g.n_points) if x not in H])
    tg = translation_group(g, H, o, check_desargues=False)
    K = homothety_field(g, H, o, tg)
    V = tg.points
    vpos = {x: i for i, x in enumerate(V)}

    def smul(k, x):
        return K.maps[k][vpos[x]]

    _verify_vector_space(K, tg, smul)
    # greedy basis: extend the span until it covers V
    coords = {o: ()}
    basis = []
    while len(coords) < len(V):
        e = min(x for x in V if x not in coords)
        basis.append(e)
        new = {}
        for s, cs in coords.items():
            for k in range(K.order):
                pt = tg.plus(s, smul(k, e))
                if pt in new:
                    raise InconsistencyError("linear combinations collide; V is not free over K")
                new[pt] = cs + (k,)
        coords = new
    n = len(basis)
    F = TableField(K)
    hmask = to_mask(H)
    pm = g.pair_mask
    phi = []
    for x in range(g.n_points):
        if hmask >> x & 1:
            y = min(z for z in bits(pm[o][x]) if z not in (o, x))
            v = coords[y] + (0,)
        else:
            v = coords[x] + (1,)
        phi.append(projective_normalize(F, v))
    model = CoordModel(K, n + 1, tuple(phi), H, o)
    rebuilt, pts = projective_space_over(F, K.order, n + 1)
    pos = {v: i for i, v in enumerate(pts)}
    m = GeoMorphism(g, rebuilt, tuple(pos[v] for v in phi))
    if not is_isomorphism(m):
        raise InconsistencyError("coordinate map is not an isomorphism onto P(V x K)")
    return model


def _verify_vector_space(K: FieldTables, tg: TranslationGroup, smul):
    V = tg.points
    for k in range(K.order):
        for x in V:
            if smul(k, tg.neg(x)) != tg.neg(smul(k, x)):
                raise ConstructionError("scalar multiplication does not commute with negation", witness=(k, x))
            for y in V:
                if smul(k, tg.plus(x, y)) != tg.plus(smul(k, x), smul(k, y)):
                    raise ConstructionError("scalars are not additive maps", witness=(k, x, y))
    for x in V:
        if smul(1, x) != x or smul(0, x) != tg.zero:
            raise ConstructionError("unit laws fail for scalar multiplication", witness=x)


def rebuild_geometry(model: CoordModel) -> Geometry:
    F = TableField(model.field)
    return projective_space_over(F, model.field.order, model.vspace_dim)[0]


# ---- morphisms between coordinate geometries ----

@dataclass
class SemilinearRep:
    matrix: Matrix
    sigma: str = "identity"


def is_nondegenerate(m: GeoMorphism) -> bool:
    img = sorted(m.image())
    if len(img) < 3:
        return False
    a, b = img[0], img[1]
    ln = m.target.pair_mask[a][b]
    return any(not ln >> c & 1 for c in img[2:])


def linearize_morphism(m: GeoMorphism) -> SemilinearRep:
    S, T = m.source, m.target
    if S.coords is None or T.coords is None or S.field_order is None or S.field_order != T.field_order:
        raise PreconditionError("linearization needs vector-space geometries over one prime field")
    if len(m.image()) < 2:
        # proportionality only needs two independent image vectors
        raise PreconditionError("morphism has rank < 2: image is at most one point")
    F = GF(S.field_order)
    d1, d2 = len(S.coords[0]), len(T.coords[0])
    # unknown M (d2 x d1), row-major; each point adds linear conditions on M
    rows = []
    for x, y in enumerate(m.mapping):
        v = S.coords[x]
        if y is None:
            for i in range(d2):
                r = [0] * (d1 * d2)
                for j in range(d1):
                    r[i * d1 + j] = v[j]
                rows.append(r)
            continue
        ann = kernel_basis(Matrix.of(F, [T.coords[y]]))  # vectors w with w . target = 0
        for w in ann.rows:
            r = [0] * (d1 * d2)
            for i in range(d2):
                for j in range(d1):
                    r[i * d1 + j] = F.add(r[i * d1 + j], F.mul(w[i], v[j]))
            rows.append(r)
    sol = kernel_basis(Matrix.of(F, rows, d1 * d2))
    if sol.nrows != 1:
        raise InconsistencyError(f"expected a unique matrix up to scalar, solution space has dimension {sol.nrows}")
    flat = projective_normalize(F, sol.rows[0])
    M = Matrix.of(F, [flat[i * d1:(i + 1) * d1] for i in range(d2)], d1)
    tpos = {v: i for i, v in enumerate(T.coords)}
    for x, y in enumerate(m.mapping):
        img = M.apply(S.coords[x])
        if y is None:
            if any(img):
                raise InconsistencyError("matrix does not kill a kernel point", witness=x)
        elif not any(img) or tpos[projective_normalize(F, img)] != y:
            raise InconsistencyError("matrix does not reproduce the point map", witness=x)
    return SemilinearRep(M)


def matrix_morphism(M: Matrix, S: Geometry, T: Geometry) -> GeoMorphism:
    """Point map x -> [M x] between vector-space geometries (None where M x = 0)."""
    F = M.field
    tpos = {v: i for i, v in enumerate(T.coords)}
    mapping = []
    for v in S.coords:
        w = M.apply(v)
        mapping.append(tpos[projective_normalize(F, w)] if any(w) else None)
    return GeoMorphism(S, T, tuple(mapping))


def prime_coords(model: CoordModel) -> list[tuple]:
    """Coordinates of a prime-order model rewritten as GF(p) residues."""
    mp = identify_field(model.field)
    if mp is None:
        raise PreconditionError("field is not identified with a prime field")
    back = {e: n for n, e in enumerate(mp)}
    F = GF(model.field.order)
    return [projective_normalize(F, [back[e] for e in v]) for v in model.coords]


def change_of_coordinates(m1: CoordModel, m2: CoordModel, perm: Sequence[int]) -> GeoMorphism:
    """Map on P(GF(p)^d) sending the m1-coordinates of x to the m2-coordinates of perm[x]."""
    from .geometry import from_vector_space
    if m1.field.order != m2.field.order or m1.vspace_dim != m2.vspace_dim:
        raise PreconditionError("models have different field order or dimension")
    P = from_vector_space(m1.field.order, m1.vspace_dim)
    pos = {v: i for i, v in enumerate(P.coords)}
    c1, c2 = prime_coords(m1), prime_coords(m2)
    mapping = [None] * P.n_points
    for x, v in enumerate(c1):
        mapping[pos[v]] = pos[c2[perm[x]]]
    return GeoMorphism(P, P, tuple(mapping))
