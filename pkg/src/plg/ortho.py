"""Orthogonality: Hilbert geometries, Hilbert lattices and propositional systems."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (InconsistencyError, InvalidInputError, NotClosedError,
                     PreconditionError)
from .geometry import (DEFAULT_CAP, GeoMorphism, Geometry, bits,
                       closure_mask, coproduct, induced, irreducible_components,
                       is_isomorphism, is_subspace_mask, subspace_masks, to_mask)
from .lattice import (FiniteLattice, LatMorphism, _atom_geometry, center,
                      check_lat_morphism, from_geometry, has_covering_law,
                      is_atomistic, is_order_isomorphism, lattice_coproduct)


def worker_count(requested: int | None = None) -> int:
    n = requested or os.cpu_count() or 1
    env = os.environ.get("PLG_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return max(1, n)


@dataclass(frozen=True, eq=False)
class OrthoGeometry:
    geometry: Geometry
    pairs: frozenset = frozenset()  # unordered pairs stored as (i, j) with i <= j

    def __post_init__(self):
        n = self.geometry.n_points
        norm = set()
        for p in self.pairs:
            i, j = p
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInputError(f"ortho pair {p} outside 0..{n - 1}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "pairs", frozenset(norm))

    @property
    def n_points(self) -> int:
        return self.geometry.n_points

    @cached_property
    def perp_masks(self) -> tuple:
        pm = [0] * self.n_points
        for i, j in self.pairs:
            pm[i] |= 1 << j
            pm[j] |= 1 << i
        return tuple(pm)

    def orth(self, a: int, b: int) -> bool:
        return bool(self.perp_masks[a] >> b & 1)


def perp_mask(og: OrthoGeometry, mask: int) -> int:
    acc = og.geometry.full_mask
    pm = og.perp_masks
    for a in bits(mask):
        acc &= pm[a]
    return acc


def perp_subspace(og: OrthoGeometry, s: Iterable[int]) -> frozenset:
    out = perp_mask(og, to_mask(s))
    return frozenset(bits(out))


# ---- Hilbert geometry axioms ----

@dataclass
class OrthoReport:
    O1: bool
    O2: bool
    O3: bool
    O4: bool
    O5: bool
    O6: bool
    O7: bool
    state_space: bool
    o5_necessity: bool = True
    closed_count: int = 0
    nonclosed_count: int = 0
    witnesses: dict = field(default_factory=dict)

    @property
    def hilbert(self) -> bool:
        return self.O1 and self.O2 and self.O3 and self.O4 and self.O5

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("O1", "O2", "O3", "O4", "O5", "O6", "O7", "state_space")}


def check_ortho_axioms(og: OrthoGeometry, cap: int = DEFAULT_CAP) -> OrthoReport:
    g = og.geometry
    n = g.n_points
    pm = og.perp_masks
    lines = g.pair_mask
    full = g.full_mask
    w = {}

    o1 = True
    for a in range(n):
        if pm[a] >> a & 1:
            o1 = False
            w["O1"] = (a,)
            break
    o2 = True
    for a in range(n):
        for b in bits(pm[a]):
            if not pm[b] >> a & 1:
                o2 = False
                w.setdefault("O2", (a, b))
    o3 = True
    for p in range(n):
        ps = bits(pm[p])
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                extra = lines[a][b] & ~pm[p]
                if extra and o3:
                    o3 = False
                    w["O3"] = (a, b, bits(extra)[0], p)
    o4 = True
    o6 = True
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            ln = lines[a][b]
            if o4 and not ln & pm[a]:
                o4 = False
                w["O4"] = (a, b)
            if o6:
                for p in range(n):
                    if not ln & pm[p]:
                        o6 = False
                        w["O6"] = (a, b, p)
                        break
    o7 = True
    for a in range(n):
        if pm[a] == full:
            o7 = False
            w.setdefault("O7", (a,))
    sep = o1 and o2
    if sep:
        for a in range(n):
            for b in range(n):
                if a != b and not pm[a] & ~pm[b]:
                    sep = False
                    w["state_space"] = (a, b)
                    break
            if not sep:
                break

    o5 = True
    nec = True
    closed = nonclosed = 0
    for s in subspace_masks(g, cap):
        sp = perp_mask(og, s)
        spp = perp_mask(og, sp)
        spans = closure_mask(g, s | sp) == full
        if spp == s:
            closed += 1
            if not spans and o5:
                o5 = False
                w["O5"] = tuple(bits(s))
        else:
            nonclosed += 1
            if spans and nec:
                nec = False
                w["O5_necessity"] = tuple(bits(s))
    return OrthoReport(o1, o2, o3, o4, o5, o6, o7, sep, nec, closed, nonclosed, w)


# ---- ortho lattices and propositional systems ----

@dataclass(frozen=True, eq=False)
class OrthoLattice:
    lattice: FiniteLattice
    perp: tuple

    @property
    def n(self):
        return self.lattice.n


@dataclass(frozen=True, eq=False)
class PropSystem:
    lattice: FiniteLattice
    perp: tuple

    @property
    def n(self):
        return self.lattice.n


def check_hilbert_lattice(ol) -> dict:
    L = ol.lattice
    P = np.array(ol.perp)
    PP = P[P]
    leq, J, M = L.leq, L.join, L.meet
    ar = np.arange(L.n)
    res, w = {}, {}
    res["H1"] = bool(leq[ar, PP].all())
    if not res["H1"]:
        w["H1"] = int(np.argmin(leq[ar, PP]))
    # H2: x <= y implies y^ <= x^
    bad = leq & ~leq[np.ix_(P, P)].T
    res["H2"] = not bad.any()
    if bad.any():
        w["H2"] = tuple(int(v) for v in np.argwhere(bad)[0])
    res["H3"] = bool((M[ar, P] == L.bottom).all())
    if not res["H3"]:
        w["H3"] = int(np.argmax(M[ar, P] != L.bottom))
    closed = PP == ar
    h4 = True
    for x in np.nonzero(closed)[0]:
        for a in L.atoms:
            j = J[a, x]
            if PP[j] != j:
                h4 = False
                w.setdefault("H4", (int(a), int(x)))
    res["H4"] = h4
    h5 = J[ar, P][closed] == L.top
    res["H5"] = bool(h5.all())
    if not res["H5"]:
        w["H5"] = int(ar[closed][np.argmin(h5)])
    res["witnesses"] = w
    return res


def to_ortho_lattice(og: OrthoGeometry, cap: int = DEFAULT_CAP, report: OrthoReport | None = None) -> OrthoLattice:
    r = report or check_ortho_axioms(og, cap)
    if not r.hilbert:
        failed = [k for k in ("O1", "O2", "O3", "O4", "O5") if not getattr(r, k)]
        raise PreconditionError(f"not a Hilbert geometry: {', '.join(failed)} fail",
                                witness={k: r.witnesses.get(k) for k in failed})
    L = from_geometry(og.geometry, cap)
    perp = tuple(L.index(perp_subspace(og, s)) for s in L.labels)
    ol = OrthoLattice(L, perp)
    h = check_hilbert_lattice(ol)
    if not all(h[k] for k in ("H1", "H2", "H3", "H4", "H5")):
        raise InconsistencyError("Hilbert geometry produced a lattice failing H1-H5", witness=h["witnesses"])
    return ol


def closed_elements(ol) -> tuple[PropSystem, tuple]:
    L = ol.lattice
    P = np.array(ol.perp)
    PP = P[P]
    closed = [int(x) for x in range(L.n) if PP[x] == x]
    pos = {x: i for i, x in enumerate(closed)}
    idx = np.array(closed)
    labels = [L.labels[x] for x in closed] if L.labels is not None else None
    C = FiniteLattice.from_leq(L.leq[np.ix_(idx, idx)], labels)
    # meets are inherited, joins are the biorthogonal closure of the plain join
    for i, x in enumerate(closed):
        for j, y in enumerate(closed):
            if closed[C.meet[i, j]] != L.meet[x, y]:
                raise InconsistencyError("meet of closed elements is not inherited", witness=(x, y))
            if closed[C.join[i, j]] != PP[L.join[x, y]]:
                raise InconsistencyError("join in C differs from (x v y)^^", witness=(x, y))
    perp = tuple(pos[int(P[x])] for x in closed)
    return PropSystem(C, perp), tuple(closed)


@dataclass
class PropReport:
    orthocomplementation: bool
    orthomodular: bool
    atomistic: bool
    covering_law: bool
    complete: bool = True
    witnesses: dict = field(default_factory=dict)
    note: str = "finite lattice: completeness holds automatically"

    @property
    def ok(self) -> bool:
        return self.orthocomplementation and self.orthomodular and self.atomistic and self.covering_law

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("orthocomplementation", "orthomodular", "atomistic", "covering_law", "complete")}


def orthomodular_witness(L: FiniteLattice, perp) -> tuple | None:
    P = np.array(perp)
    J, M = L.join, L.meet
    for x in range(L.n):
        ys = np.nonzero(L.leq[x])[0]
        lhs = J[x, M[P[x], ys]]
        bad = lhs != ys
        if bad.any():
            return (x, int(ys[bad][0]))
    return None


def check_prop_system(c) -> PropReport:
    L = c.lattice
    P = np.array(c.perp)
    w = {}
    ar = np.arange(L.n)
    oc = True
    if len(P) != L.n or P.min() < 0 or P.max() >= L.n:
        raise InvalidInputError("perp map has the wrong shape")
    if not np.array_equal(P[P], ar):
        oc = False
        w["orthocomplementation"] = ("involutive", int(np.argmax(P[P] != ar)))
    anti = L.leq & ~L.leq[np.ix_(P, P)].T
    if oc and anti.any():
        oc = False
        w["orthocomplementation"] = ("antitone",) + tuple(int(v) for v in np.argwhere(anti)[0])
    if oc and not (L.join[ar, P] == L.top).all():
        oc = False
        w["orthocomplementation"] = ("x v x^ = 1", int(np.argmax(L.join[ar, P] != L.top)))
    if oc and not (L.meet[ar, P] == L.bottom).all():
        oc = False
        w["orthocomplementation"] = ("x ^ x^ = 0", int(np.argmax(L.meet[ar, P] != L.bottom)))
    om_w = orthomodular_witness(L, P)
    if om_w is not None:
        w["orthomodular"] = om_w
    at, at_w = is_atomistic(L)
    if not at:
        w["atomistic"] = at_w
    cv, cv_w = has_covering_law(L)
    if not cv:
        w["covering_law"] = cv_w
    return PropReport(oc, om_w is None, at, cv, witnesses=w)


def atoms_hilbert_geometry(c, report: PropReport | None = None) -> OrthoGeometry:
    r = report or check_prop_system(c)
    if not r.ok:
        failed = [k for k, v in r.as_dict().items() if not v]
        raise PreconditionError(f"not a propositional system: {', '.join(failed)} fail", witness=r.witnesses)
    L = c.lattice
    G = _atom_geometry(L)
    atoms = L.atoms
    pairs = {(i, j) for i, a in enumerate(atoms) for j, b in enumerate(atoms)
             if i <= j and L.leq[a, c.perp[b]]}
    return OrthoGeometry(G, frozenset(pairs))


# ---- natural isomorphisms of the triple equivalence ----

def _lattice_iso_with_perp(src, dst, mapping) -> bool:
    f = LatMorphism(src.lattice, dst.lattice, tuple(mapping))
    if not is_order_isomorphism(f):
        return False
    return all(mapping[src.perp[x]] == dst.perp[mapping[x]] for x in range(src.n))


def kappa_check(G: OrthoGeometry, cap: int = DEFAULT_CAP) -> bool:
    """a -> {a} from G to G(C(L(G)))."""
    L = to_ortho_lattice(G, cap)
    C, _ = closed_elements(L)
    G3 = atoms_hilbert_geometry(C)
    pos = {a: i for i, a in enumerate(C.lattice.atoms)}
    mapping = tuple(pos[C.lattice.index(frozenset([a]))] for a in range(G.n_points))
    if not is_isomorphism(GeoMorphism(G.geometry, G3.geometry, mapping)):
        return False
    n = G.n_points
    return all(G.orth(a, b) == G3.orth(mapping[a], mapping[b]) for a in range(n) for b in range(n))


def lambda_check(L: OrthoLattice, cap: int = DEFAULT_CAP) -> bool:
    """x -> {atoms below x} from L to L(G(C(L)))."""
    C, incl = closed_elements(L)
    G = atoms_hilbert_geometry(C)
    L2 = to_ortho_lattice(G, cap)
    catoms = [incl[a] for a in C.lattice.atoms]
    mapping = []
    for x in range(L.n):
        lab = frozenset(i for i, a in enumerate(catoms) if L.lattice.leq[a, x])
        if lab not in L2.lattice.label_index:
            return False
        mapping.append(L2.lattice.index(lab))
    return _lattice_iso_with_perp(L, L2, mapping)


def mu_check(C: PropSystem, cap: int = DEFAULT_CAP) -> bool:
    """x -> {atoms below x} from C to C(L(G(C)))."""
    G = atoms_hilbert_geometry(C)
    L = to_ortho_lattice(G, cap)
    C2, _ = closed_elements(L)
    mapping = []
    for x in range(C.n):
        lab = frozenset(i for i, a in enumerate(C.lattice.atoms) if C.lattice.leq[a, x])
        if lab not in C2.lattice.label_index:
            return False
        mapping.append(C2.lattice.index(lab))
    return _lattice_iso_with_perp(C, C2, mapping)


@dataclass
class RoundTripReport:
    kappa: bool
    lam: bool
    mu: bool

    @property
    def ok(self) -> bool:
        return self.kappa and self.lam and self.mu


def triple_round_trip(x, cap: int = DEFAULT_CAP) -> RoundTripReport:
    if isinstance(x, OrthoGeometry):
        G = x
        L = to_ortho_lattice(G, cap)
        C, _ = closed_elements(L)
    elif isinstance(x, OrthoLattice):
        L = x
        C, _ = closed_elements(L)
        G = atoms_hilbert_geometry(C)
    elif isinstance(x, PropSystem):
        C = x
        G = atoms_hilbert_geometry(C)
        L = to_ortho_lattice(G, cap)
    else:
        raise InvalidInputError(f"cannot round-trip a {type(x).__name__}")
    return RoundTripReport(kappa_check(G, cap), lambda_check(L, cap), mu_check(C, cap))


# ---- ortho morphisms ----

@dataclass(frozen=True, eq=False)
class OrthoMorphism:
    source: object
    target: object
    mapping: tuple


def check_ortho_morphism(m: OrthoMorphism, cap: int = DEFAULT_CAP) -> dict:
    S, T = m.source, m.target
    if isinstance(S, OrthoGeometry):
        gm = GeoMorphism(S.geometry, T.geometry, m.mapping)
        continuous = True
        for t in subspace_masks(T.geometry, cap):
            if perp_mask(T, perp_mask(T, t)) != t:
                continue
            pb = gm.pullback_mask(t)
            if perp_mask(S, perp_mask(S, pb)) != pb:
                continuous = False
                break
        ortho = all(T.orth(m.mapping[a], m.mapping[b])
                    for a in range(S.n_points) for b in range(S.n_points)
                    if S.orth(a, b) and m.mapping[a] is not None and m.mapping[b] is not None)
        return {"continuous": continuous, "ortho": ortho}
    f = LatMorphism(S.lattice, T.lattice, m.mapping)
    PS, PT = np.array(S.perp), np.array(T.perp)
    fm = np.array(m.mapping)
    TL = T.lattice.leq
    continuous = bool(TL[fm[PS[PS]], PT[PT[fm]]].all())
    ortho = bool(TL[fm[PS], PT[fm]].all())
    out = {"continuous": continuous, "ortho": ortho, "lattice_morphism": check_lat_morphism(f)}
    if continuous:
        C1, inc1 = closed_elements(S)
        C2, inc2 = closed_elements(T)
        pos2 = {x: i for i, x in enumerate(inc2)}
        cf = tuple(pos2[int(PT[PT[fm[x]]])] for x in inc1)
        out["closed_map_morphism"] = check_lat_morphism(LatMorphism(C1.lattice, C2.lattice, cf))
    return out


# ---- coproducts and components ----

def ortho_coproduct(ogs: Sequence[OrthoGeometry]) -> tuple[OrthoGeometry, list[GeoMorphism]]:
    G, inj = coproduct([og.geometry for og in ogs])
    pairs = set()
    for og, f in zip(ogs, inj):
        pairs.update((f.mapping[i], f.mapping[j]) for i, j in og.pairs)
    blocks = [f.mapping for f in inj]
    for x, y in itertools.combinations(range(len(blocks)), 2):
        pairs.update((a, b) for a in blocks[x] for b in blocks[y])
    return OrthoGeometry(G, frozenset(pairs)), inj


def prop_coproduct(cs: Sequence, cap: int = DEFAULT_CAP):
    """Product lattice with componentwise orthocomplement; keeps the input type."""
    P, inj = lattice_coproduct([c.lattice for c in cs], cap)
    perp = tuple(P.index(tuple(c.perp[x] for c, x in zip(cs, t))) for t in P.labels)
    kind = type(cs[0]) if cs else PropSystem
    return kind(P, perp), inj


def hilbert_components(og: OrthoGeometry) -> list[tuple]:
    comps = irreducible_components(og.geometry)
    masks = [to_mask(c) for c in comps]
    for c, m in zip(comps, masks):
        if perp_mask(og, perp_mask(og, m)) != m:
            raise InconsistencyError("component is not biorthogonally closed", witness=c)
    for (i, a), (j, b) in itertools.combinations(enumerate(masks), 2):
        for x in bits(a):
            if og.perp_masks[x] & b != b:
                raise InconsistencyError("components are not mutually orthogonal", witness=(comps[i], comps[j]))
    return comps


def closed_subgeometry(og: OrthoGeometry, s: Iterable[int], cap: int = DEFAULT_CAP) -> tuple[OrthoGeometry, tuple]:
    pts = tuple(sorted(set(s)))
    sm = to_mask(pts)
    if perp_mask(og, perp_mask(og, sm)) != sm:
        raise NotClosedError("subset is not biorthogonally closed", witness=pts)
    pos = {p: i for i, p in enumerate(pts)}
    G = induced(og.geometry, pts)
    pairs = frozenset((pos[i], pos[j]) for i, j in og.pairs if i in pos and j in pos)
    sub = OrthoGeometry(G, pairs)
    if not check_ortho_axioms(sub, cap).hilbert:
        raise InconsistencyError("closed subgeometry is not a Hilbert geometry", witness=pts)
    # relative closure T'' (computed inside S) equals T^^ in the whole geometry
    for t in subspace_masks(G, cap):
        rel = perp_mask(sub, perp_mask(sub, t))
        whole = perp_mask(og, perp_mask(og, to_mask(pts[i] for i in bits(t))))
        if to_mask(pts[i] for i in bits(rel)) != whole:
            raise InconsistencyError("relative biorthogonal closure mismatch", witness=tuple(bits(t)))
    return sub, pts


def projector(og: OrthoGeometry, s: Iterable[int]) -> GeoMorphism:
    g = og.geometry
    sm = to_mask(s)
    sp = perp_mask(og, sm)
    if perp_mask(og, sp) != sm:
        raise NotClosedError("projector needs a closed subspace", witness=tuple(bits(sm)))
    if closure_mask(g, sm | sp) != g.full_mask:
        raise PreconditionError("S v S^ is not the whole geometry", witness=tuple(bits(sm)))
    mapping = []
    for a in range(g.n_points):
        if sp >> a & 1:
            mapping.append(None)
            continue
        hit = bits(closure_mask(g, sp | (1 << a)) & sm)
        if len(hit) != 1:
            raise InconsistencyError("({a} v S^) meets S in more than one point", witness=(a, hit))
        mapping.append(hit[0])
    return GeoMorphism(g, g, tuple(mapping))


def projector_laws(og: OrthoGeometry, pr: GeoMorphism) -> dict:
    n = og.n_points
    dom = [a for a in range(n) if pr.mapping[a] is not None]
    idem = all(pr.mapping[pr.mapping[a]] == pr.mapping[a] for a in dom)
    adj = all(og.orth(pr.mapping[a], b) == og.orth(a, pr.mapping[b]) for a in dom for b in dom)
    return {"idempotent": idem, "self_adjoint": adj}


# ---- Sasaki maps and superselection ----

@dataclass
class SasakiResult:
    phi: tuple
    psi: tuple
    adjunction: bool
    atoms_to_atoms: bool | None = None
    witness: tuple | None = None


def sasaki(c, x: int) -> SasakiResult:
    L = c.lattice
    P = c.perp
    J, M, leq = L.join, L.meet, L.leq
    px = P[x]
    phi = tuple(int(M[x, J[px, y]]) for y in range(L.n))
    psi = tuple(int(J[px, M[x, y]]) for y in range(L.n))
    ph, ps = np.array(phi), np.array(psi)
    # phi(y) <= z  iff  y <= psi(z)
    lhs = leq[ph][:, np.arange(L.n)]
    rhs = leq[:, ps]
    bad = lhs != rhs
    w = tuple(int(v) for v in np.argwhere(bad)[0]) if bad.any() else None
    atoms_ok = None
    if is_atomistic(L)[0] and has_covering_law(L)[0]:
        ok = set(L.atoms) | {L.bottom}
        atoms_ok = all(phi[a] in ok for a in L.atoms)
    return SasakiResult(phi, psi, w is None, atoms_ok, w)


@dataclass
class Superselection:
    center: list
    rules: list
    criterion: bool | None = None


def superselection(c, og: OrthoGeometry | None = None) -> Superselection:
    L = c.lattice
    z = center(L)
    zset = set(z)
    rules = [a for a in z if a != L.bottom and all(
        y == L.bottom or y == a or not L.leq[y, a] for y in z)]
    crit = None
    if og is not None and L.labels is not None:
        full = og.geometry.full_mask
        crit = True
        for i, lab in enumerate(L.labels):
            m = to_mask(lab)
            geometric = (full & ~m) == perp_mask(og, m)
            if geometric != (i in zset):
                crit = False
    return Superselection(z, rules, crit)


# ---- exhaustive search for orthogonalities on a small geometry ----

def _search_chunk(args):
    n, pairs, line_masks, subspaces, is_sub, start, stop = args
    r = np.arange(start, stop, dtype=np.int64)
    perp = [np.zeros(len(r), dtype=np.int64) for _ in range(n)]
    for k, (i, j) in enumerate(pairs):
        bit = (r >> k) & 1
        perp[i] |= bit << j
        perp[j] |= bit << i
    ok = np.ones(len(r), dtype=bool)
    for p in range(n):
        ok &= is_sub[perp[p]]
    n3 = int(ok.sum())
    for a in range(n):
        for b in range(n):
            if a != b:
                ok &= (perp[a] & (line_masks[a][b] & ~(1 << a))) != 0
    n4 = int(ok.sum())
    full = (1 << n) - 1
    hits = []
    for idx in np.nonzero(ok)[0]:
        pm = [int(perp[p][idx]) for p in range(n)]

        def pp(mask):
            acc = full
            for x in bits(mask):
                acc &= pm[x]
            return acc

        good = True
        for s in subspaces:
            sp = pp(s)
            if pp(sp) == s and s | sp != full:
                # closure of S u S^ must be everything
                good = _closure_is_full(line_masks, s | sp, full)
                if not good:
                    break
        if good:
            hits.append(int(r[idx]))
    return n3, n4, hits


def _closure_is_full(line_masks, mask, full):
    changed = True
    while changed:
        changed = False
        pts = bits(mask)
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                m = line_masks[a][b]
                if m & ~mask:
                    mask |= m
                    changed = True
    return mask == full


@dataclass
class SearchReport:
    total: int
    pass_o1_o3: int
    pass_o1_o4: int
    hits: list

    @property
    def pass_o1_o5(self) -> int:
        return len(self.hits)


def relation_from_index(g: Geometry, r: int) -> OrthoGeometry:
    pairs = list(itertools.combinations(range(g.n_points), 2))
    return OrthoGeometry(g, frozenset(p for k, p in enumerate(pairs) if r >> k & 1))


def search_orthogonalities(g: Geometry, workers: int | None = None, chunk_bits: int = 16) -> SearchReport:
    """Count symmetric irreflexive relations on g satisfying O1-O5, all of them, exhaustively."""
    n = g.n_points
    if n > 8:
        raise InvalidInputError("exhaustive search is limited to geometries with at most 8 points")
    pairs = list(itertools.combinations(range(n), 2))
    total = 1 << len(pairs)
    is_sub = np.array([is_subspace_mask(g, m) for m in range(1 << n)], dtype=bool)
    subs = subspace_masks(g)
    step = 1 << min(chunk_bits, len(pairs))
    jobs = [(n, pairs, g.pair_mask, subs, is_sub, s, min(s + step, total)) for s in range(0, total, step)]
    w = worker_count(workers)
    if w > 1:
        with ProcessPoolExecutor(max_workers=w) as ex:
            results = list(ex.map(_search_chunk, jobs))
    else:
        results = [_search_chunk(j) for j in jobs]
    hits = sorted(h for _, _, hs in results for h in hs)
    return SearchReport(total, sum(a for a, _, _ in results), sum(b for _, b, _ in results), hits)
