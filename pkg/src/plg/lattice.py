"""Finite lattices, projective-lattice predicates and the geometry <-> lattice round trip."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (CapExceededError, InconsistencyError, InvalidInputError,
                     NotJoinPreservingError, PreconditionError)
from .geometry import (DEFAULT_CAP, GeoMorphism, Geometry, bits, check_morphism,
                       is_isomorphism, subspace_masks, to_mask)

FINITE_NOTE = "finite lattice: complete and continuous (atoms compact) hold automatically"


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    n: int
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    bottom: int
    top: int
    atoms: tuple
    labels: tuple | None = field(default=None, repr=False)

    @classmethod
    def from_leq(cls, leq, labels=None) -> "FiniteLattice":
        """Build from a full order relation; computes and verifies meets and joins."""
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n) or n == 0:
            raise InvalidInputError("order relation must be a non-empty square matrix")
        leq = leq | np.eye(n, dtype=bool)
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            i, j = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))[0]
            raise InvalidInputError("relation is not antisymmetric", witness=(int(i), int(j)))
        li = leq.astype(np.float32)
        if np.any(((li @ li) > 0) & ~leq):
            i, j = np.argwhere(((li @ li) > 0) & ~leq)[0]
            raise InvalidInputError("relation is not transitive (list the full order)",
                                    witness=(int(i), int(j)))
        down = leq.sum(axis=0)  # number of elements below each element
        # bit k of U[x] / D[x] says the k-th element of a linear extension is
        # above / below x; the lowest common upper bit is the only candidate for
        # a least upper bound, the highest common lower bit for a greatest lower one
        order = [int(v) for v in np.argsort(down, kind="stable")]
        U = _row_bits(leq[:, order])
        D = _row_bits(leq.T[:, order])
        join = np.empty((n, n), dtype=np.int64)
        meet = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            ux, dx = U[x], D[x]
            jrow, mrow = [0] * n, [0] * n
            for y in range(x + 1):
                u, d = ux & U[y], dx & D[y]
                if not u or not d:
                    raise InvalidInputError("some pair has no upper or lower bound", witness=(x, y))
                j = order[(u & -u).bit_length() - 1]
                m = order[d.bit_length() - 1]
                # least: below every upper bound; greatest: above every lower bound
                if u & ~U[j] or d & ~D[m]:
                    raise InvalidInputError("order is not a lattice", witness=(x, y))
                jrow[y] = j
                mrow[y] = m
            join[x, :x + 1] = jrow[:x + 1]
            meet[x, :x + 1] = mrow[:x + 1]
        iu = np.triu_indices(n, 1)
        join[iu] = join.T[iu]
        meet[iu] = meet.T[iu]
        bottoms = np.nonzero(leq.all(axis=1))[0]
        tops = np.nonzero(leq.all(axis=0))[0]
        bottom, top = int(bottoms[0]), int(tops[0])
        lt = leq & ~np.eye(n, dtype=bool)
        atoms = tuple(int(a) for a in range(n) if lt[bottom, a] and down[a] == 2)
        return cls(n, leq, meet, join, bottom, top, atoms, tuple(labels) if labels is not None else None)

    @cached_property
    def covers(self) -> np.ndarray:
        """covers[x, y]: x < y with nothing strictly between."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        f = lt.astype(np.float32)
        return lt & ~((f @ f) > 0)

    @cached_property
    def label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)} if self.labels is not None else {}

    def index(self, label) -> int:
        return self.label_index[label]

    def join_all(self, xs) -> int:
        r = self.bottom
        for x in xs:
            r = int(self.join[r, x])
        return r

    def meet_all(self, xs) -> int:
        r = self.top
        for x in xs:
            r = int(self.meet[r, x])
        return r

    def le(self, x, y) -> bool:
        return bool(self.leq[x, y])

    def order_pairs(self) -> list:
        """Non-reflexive (i, j) pairs with i <= j, sorted."""
        return [(int(i), int(j)) for i, j in np.argwhere(self.leq) if i != j]


def _row_bits(m: np.ndarray) -> list[int]:
    """Each boolean row as an int with bit k set iff m[row, k]."""
    packed = np.packbits(m, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def from_leq(leq, labels=None) -> FiniteLattice:
    return FiniteLattice.from_leq(leq, labels)


def chain(k: int) -> FiniteLattice:
    return from_leq(np.triu(np.ones((k, k), dtype=bool)))


def boolean_lattice(k: int) -> FiniteLattice:
    masks = sorted(range(1 << k), key=lambda m: (bin(m).count("1"), bits(m)))
    leq = np.array([[a & ~b == 0 for b in masks] for a in masks])
    return from_leq(leq, labels=[frozenset(bits(m)) for m in masks])


def from_geometry(g: Geometry, cap: int = DEFAULT_CAP) -> FiniteLattice:
    """Subspace lattice; element i is labelled by its subspace (a frozenset)."""
    masks = subspace_masks(g, cap)
    arr = [m for m in masks]
    n = len(arr)
    leq = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(arr):
        leq[i] = [a & ~b == 0 for b in arr]
    lat = from_leq(leq, labels=[frozenset(bits(m)) for m in arr])
    return lat


# ---- predicates ----

@dataclass
class LatticeReport:
    atomistic: bool
    modular: bool
    upper_semimodular: bool
    lower_semimodular: bool
    covering_law: bool
    intersection_property: bool
    atoms_compact: bool = True
    complete: bool = True
    continuous: bool = True
    witnesses: dict = field(default_factory=dict)
    note: str = FINITE_NOTE

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "atomistic", "modular", "upper_semimodular", "lower_semimodular",
            "covering_law", "intersection_property", "atoms_compact", "complete", "continuous")}


def _first(mask) -> tuple | None:
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def is_atomistic(l: FiniteLattice):
    for x in range(l.n):
        below = [a for a in l.atoms if l.leq[a, x]]
        if l.join_all(below) != x:
            return False, (x,)
    return True, None


def is_modular(l: FiniteLattice):
    J, M, leq = l.join, l.meet, l.leq
    ys = np.arange(l.n)
    for x in range(l.n):
        zs = np.nonzero(leq[x])[0]
        lhs = J[x, M[ys[:, None], zs[None, :]]]
        rhs = M[J[x, ys][:, None], zs[None, :]]
        bad = lhs != rhs
        if bad.any():
            i, k = np.argwhere(bad)[0]
            return False, (x, int(ys[i]), int(zs[k]))
    return True, None


def is_upper_semimodular(l: FiniteLattice):
    C, J, M = l.covers, l.join, l.meet
    u = np.arange(l.n)[:, None]
    v = np.arange(l.n)[None, :]
    bad = C[M[u, v], v] & ~C[u, J[u, v]]
    w = _first(bad)
    return (w is None), w


def is_lower_semimodular(l: FiniteLattice):
    C, J, M = l.covers, l.join, l.meet
    u = np.arange(l.n)[:, None]
    v = np.arange(l.n)[None, :]
    bad = C[u, J[u, v]] & ~C[M[u, v], v]
    w = _first(bad)
    return (w is None), w


def has_covering_law(l: FiniteLattice):
    C, J, M = l.covers, l.join, l.meet
    for a in l.atoms:
        xs = np.arange(l.n)
        bad = (M[a, xs] == l.bottom) & ~C[xs, J[a, xs]]
        if bad.any():
            return False, (a, int(xs[bad][0]))
    return True, None


def has_intersection_property(l: FiniteLattice):
    J, M, leq = l.join, l.meet, l.leq
    xs = np.arange(l.n)
    for p in l.atoms:
        for q in l.atoms:
            if p == q:
                continue
            bad = leq[p, J[q, xs]] & (M[J[p, q], xs] == l.bottom)
            if bad.any():
                return False, (p, q, int(xs[bad][0]))
    return True, None


def predicates(l: FiniteLattice) -> LatticeReport:
    w = {}
    res = {}
    for name, fn in (("atomistic", is_atomistic), ("modular", is_modular),
                     ("upper_semimodular", is_upper_semimodular),
                     ("lower_semimodular", is_lower_semimodular),
                     ("covering_law", has_covering_law),
                     ("intersection_property", has_intersection_property)):
        ok, wit = fn(l)
        res[name] = ok
        if not ok:
            w[name] = wit
    return LatticeReport(witnesses=w, **res)


# ---- atoms geometry and the round trips ----

def _atom_geometry(l: FiniteLattice) -> Geometry:
    atoms = l.atoms
    pos = {a: i for i, a in enumerate(atoms)}
    lines = set()
    for b, c in itertools.combinations(atoms, 2):
        j = l.join[b, c]
        ln = tuple(sorted(pos[a] for a in atoms if l.leq[a, j]))
        if len(ln) >= 3:
            lines.add(ln)
    return Geometry(len(atoms), tuple(sorted(lines)), provenance="atoms")


def atoms_geometry(l: FiniteLattice, report: LatticeReport | None = None) -> Geometry:
    r = report or predicates(l)
    for name in ("atomistic", "covering_law", "intersection_property"):
        if not getattr(r, name):
            raise PreconditionError(f"atoms geometry needs a lattice with {name}",
                                    witness=r.witnesses.get(name))
    return _atom_geometry(l)


def alpha_iso(g: Geometry, cap: int = DEFAULT_CAP) -> tuple[GeoMorphism, bool]:
    """a -> {a} from g onto the atoms geometry of its subspace lattice."""
    L = from_geometry(g, cap)
    G2 = atoms_geometry(L)
    pos = {a: i for i, a in enumerate(L.atoms)}
    m = GeoMorphism(g, G2, tuple(pos[L.index(frozenset([a]))] for a in range(g.n_points)))
    return m, is_isomorphism(m)


@dataclass(frozen=True, eq=False)
class LatMorphism:
    source: FiniteLattice
    target: FiniteLattice
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != self.source.n:
            raise InvalidInputError("mapping length must equal the source size")

    def __call__(self, x):
        return self.mapping[x]


def is_order_isomorphism(f: LatMorphism) -> bool:
    S, T = f.source, f.target
    if S.n != T.n or len(set(f.mapping)) != S.n:
        return False
    idx = np.array(f.mapping)
    return bool(np.array_equal(S.leq, T.leq[np.ix_(idx, idx)]))


def join_preservation_witness(f: LatMorphism):
    S, T = f.source, f.target
    m = np.array(f.mapping)
    if m[S.bottom] != T.bottom:
        return (S.bottom,)
    lhs = m[S.join]
    rhs = T.join[m[:, None], m[None, :]]
    return _first(lhs != rhs)


def check_lat_morphism(f: LatMorphism) -> bool:
    if join_preservation_witness(f) is not None:
        return False
    ok_targets = set(f.target.atoms) | {f.target.bottom}
    return all(f.mapping[a] in ok_targets for a in f.source.atoms)


def beta_iso(l: FiniteLattice) -> tuple[LatMorphism, bool]:
    r = predicates(l)
    G = atoms_geometry(l, r)
    if not r.modular:
        raise PreconditionError("beta needs a modular lattice", witness=r.witnesses.get("modular"))
    L2 = from_geometry(G)
    mapping = []
    for x in range(l.n):
        lab = frozenset(i for i, a in enumerate(l.atoms) if l.leq[a, x])
        if lab not in L2.label_index:
            f = LatMorphism(l, L2, tuple([L2.bottom] * l.n))
            return f, False
        mapping.append(L2.index(lab))
    f = LatMorphism(l, L2, tuple(mapping))
    return f, is_order_isomorphism(f)


# ---- coproducts and centers ----

def lattice_coproduct(ls: Sequence[FiniteLattice], cap: int = DEFAULT_CAP):
    size = 1
    for l in ls:
        size *= l.n
    if size > cap:
        raise CapExceededError(f"product has {size} elements, cap is {cap}", witness=size)
    leq = np.ones((1, 1), dtype=bool)
    meet = np.zeros((1, 1), dtype=np.int64)
    join = np.zeros((1, 1), dtype=np.int64)
    labels = [()]
    for l in ls:
        a, k = leq.shape[0], l.n
        leq = (leq[:, None, :, None] & l.leq[None, :, None, :]).reshape(a * k, a * k)
        meet = (meet[:, None, :, None] * k + l.meet[None, :, None, :]).reshape(a * k, a * k)
        join = (join[:, None, :, None] * k + l.join[None, :, None, :]).reshape(a * k, a * k)
        labels = [t + (x,) for t in labels for x in range(k)]
    n = len(labels)
    idx = {t: i for i, t in enumerate(labels)}
    bottom = idx[tuple(l.bottom for l in ls)]
    top = idx[tuple(l.top for l in ls)]
    atoms = []
    for k, l in enumerate(ls):
        for a in l.atoms:
            t = [m.bottom for m in ls]
            t[k] = a
            atoms.append(idx[tuple(t)])
    P = FiniteLattice(n, leq, meet, join, bottom, top, tuple(sorted(atoms)), tuple(labels))
    inj = []
    for k, l in enumerate(ls):
        mp = []
        for x in range(l.n):
            t = [m.bottom for m in ls]
            t[k] = x
            mp.append(idx[tuple(t)])
        inj.append(LatMorphism(l, P, tuple(mp)))
    return P, inj


def is_central(l: FiniteLattice, z: int) -> bool:
    M, J, leq = l.meet, l.join, l.leq
    for zc in range(l.n):
        if M[z, zc] != l.bottom or J[z, zc] != l.top:
            continue
        a, b = M[:, z], M[:, zc]
        if len(set(zip(a.tolist(), b.tolist()))) != l.n:
            continue
        if int(leq[:, z].sum()) * int(leq[:, zc].sum()) != l.n:
            continue
        # order reflecting: componentwise <= must imply <=
        prod_le = leq[np.ix_(a, a)] & leq[np.ix_(b, b)]
        if np.any(prod_le & ~leq):
            continue
        return True
    return False


def center(l: FiniteLattice) -> list[int]:
    return [z for z in range(l.n) if is_central(l, z)]


# ---- functoriality ----

def map_L(m: GeoMorphism, cap: int = DEFAULT_CAP, source_lattice=None, target_lattice=None) -> LatMorphism:
    """S -> intersection of all T with S inside g*(T)."""
    L1 = source_lattice or from_geometry(m.source, cap)
    L2 = target_lattice or from_geometry(m.target, cap)
    tmasks = [to_mask(t) for t in L2.labels]
    pulls = [m.pullback_mask(t) for t in tmasks]
    full = m.target.full_mask
    mapping = []
    for s in L1.labels:
        sm = to_mask(s)
        acc = full
        for t, pb in zip(tmasks, pulls):
            if sm & ~pb == 0:
                acc &= t
        mapping.append(L2.index(frozenset(bits(acc))))
    f = LatMorphism(L1, L2, tuple(mapping))
    if not check_lat_morphism(f):
        raise InconsistencyError("left adjoint of g* is not a lattice morphism")
    return f


def map_G(f: LatMorphism) -> GeoMorphism:
    G1 = _atom_geometry(f.source)
    G2 = _atom_geometry(f.target)
    pos2 = {a: i for i, a in enumerate(f.target.atoms)}
    mapping = []
    for a in f.source.atoms:
        y = f.mapping[a]
        if y == f.target.bottom:
            mapping.append(None)
        elif y in pos2:
            mapping.append(pos2[y])
        else:
            raise PreconditionError("lattice map sends an atom to a non-atom", witness=(a, y))
    gm = GeoMorphism(G1, G2, tuple(mapping))
    if not check_morphism(gm):
        raise InconsistencyError("induced atom map is not a geometry morphism")
    return gm


def right_adjoint(f: LatMorphism) -> LatMorphism:
    w = join_preservation_witness(f)
    if w is not None:
        raise NotJoinPreservingError("map does not preserve joins", witness=w)
    S, T = f.source, f.target
    m = np.array(f.mapping)
    g = []
    for y in range(T.n):
        g.append(S.join_all(np.nonzero(T.leq[m, y])[0].tolist()))
    ga = np.array(g)
    # f(x) <= y  iff  x <= g(y)
    if not np.array_equal(T.leq[m][:, np.arange(T.n)], S.leq[:, ga]):
        raise InconsistencyError("computed right adjoint fails the adjunction law")
    return LatMorphism(T, S, tuple(int(v) for v in g))
