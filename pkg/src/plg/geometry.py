"""Finite projective geometries stored as maximal lines.

Point sets are handled internally as int bitmasks (bit i = point i); the
public API speaks frozensets.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (AxiomFailure, CapExceededError, InconsistencyError,
                     InvalidInputError, PreconditionError)
from .exactmath import GF, projective_normalize

DEFAULT_CAP = 100_000


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def to_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


@dataclass(frozen=True)
class Geometry:
    n_points: int
    lines: tuple
    provenance: str | None = field(default=None, compare=False)
    # optional homogeneous coordinates when built from a vector space
    coords: tuple | None = field(default=None, compare=False, repr=False)
    field_order: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, int) or n < 0:
            raise InvalidInputError(f"bad point count {n!r}")
        norm = []
        for ln in self.lines:
            pts = sorted(set(ln))
            if len(pts) != len(list(ln)):
                raise InvalidInputError(f"line {list(ln)} repeats a point")
            if len(pts) < 3:
                raise InvalidInputError(f"stored line {pts} has fewer than 3 points")
            if pts[0] < 0 or pts[-1] >= n:
                raise InvalidInputError(f"line {pts} has an index outside 0..{n - 1}")
            norm.append(tuple(pts))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InvalidInputError(f"line {list(a)} listed twice")
        seen = {}
        for i, ln in enumerate(norm):
            for a, b in itertools.combinations(ln, 2):
                if (a, b) in seen:
                    raise InvalidInputError(
                        f"pair {{{a},{b}}} lies on two stored lines",
                        witness=(a, b, norm[seen[(a, b)]], ln))
                seen[(a, b)] = i
        object.__setattr__(self, "lines", tuple(norm))

    # ---- cached incidence data ----

    @cached_property
    def line_masks(self) -> tuple:
        return tuple(to_mask(ln) for ln in self.lines)

    @cached_property
    def line_id(self) -> np.ndarray:
        """line_id[a, b] = index of the stored line through a and b, or -1."""
        lid = np.full((self.n_points, self.n_points), -1, dtype=np.int32)
        for i, ln in enumerate(self.lines):
            idx = np.array(ln)
            lid[np.ix_(idx, idx)] = i
        np.fill_diagonal(lid, -1)
        return lid

    @cached_property
    def pair_mask(self) -> list:
        """pair_mask[a][b] = bitmask of line(a, b)."""
        n = self.n_points
        lid = self._lid_rows
        lm = self.line_masks
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                i = lid[a][b]
                row.append(lm[i] if i >= 0 else (1 << a) | (1 << b))
            out.append(row)
        return out

    @cached_property
    def lines_through(self) -> tuple:
        lt = [[] for _ in range(self.n_points)]
        for i, ln in enumerate(self.lines):
            for p in ln:
                lt[p].append(i)
        return tuple(tuple(x) for x in lt)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_points) - 1

    def _check_index(self, *pts):
        for p in pts:
            if not (0 <= p < self.n_points):
                raise InvalidInputError(f"point {p} out of range 0..{self.n_points - 1}")

    @cached_property
    def _lid_rows(self) -> list:
        return self.line_id.tolist()

    def collinear(self, a: int, b: int, c: int) -> bool:
        if a == b or b == c or a == c:
            return True
        row = self._lid_rows[a]
        i = row[b]
        return i >= 0 and i == row[c]


def line(g: Geometry, a: int, b: int) -> frozenset:
    g._check_index(a, b)
    return frozenset(bits(g.pair_mask[a][b]))


def closure_mask(g: Geometry, mask: int) -> int:
    pts = bits(mask)
    inside = list(pts)
    queue = list(pts)
    pm = g.pair_mask
    while queue:
        x = queue.pop()
        row = pm[x]
        add = 0
        for y in inside:
            add |= row[y]
        new = add & ~mask
        if new:
            mask |= new
            nb = bits(new)
            inside.extend(nb)
            queue.extend(nb)
    return mask


def closure(g: Geometry, points: Iterable[int]) -> frozenset:
    pts = list(points)
    g._check_index(*pts)
    return frozenset(bits(closure_mask(g, to_mask(pts))))


def is_subspace_mask(g: Geometry, mask: int) -> bool:
    pts = bits(mask)
    pm = g.pair_mask
    for i, a in enumerate(pts):
        row = pm[a]
        for b in pts[i + 1:]:
            if row[b] & ~mask:
                return False
    return True


def is_subspace(g: Geometry, points: Iterable[int]) -> bool:
    return is_subspace_mask(g, to_mask(points))


def subspace_masks(g: Geometry, cap: int = DEFAULT_CAP) -> list[int]:
    """All subspace bitmasks, sorted by (size, sorted points)."""
    found = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(g.n_points):
                if not s >> x & 1:
                    t = closure_mask(g, s | (1 << x))
                    if t not in found:
                        found.add(t)
                        if len(found) > cap:
                            raise CapExceededError(
                                f"more than {cap} subspaces", witness=len(found))
                        nxt.append(t)
        frontier = nxt
    return sorted(found, key=lambda m: (bin(m).count("1"), bits(m)))


def all_subspaces(g: Geometry, cap: int = DEFAULT_CAP) -> list[frozenset]:
    return [frozenset(bits(m)) for m in subspace_masks(g, cap)]


# ---- axioms ----

@dataclass
class AxiomReport:
    G1: bool
    G2: bool
    G3: bool
    symmetric: bool
    witness: tuple | None = None
    failed: str | None = None

    @property
    def ok(self) -> bool:
        return self.G1 and self.G2 and self.G3 and self.symmetric


def _incidence_cube(g: Geometry) -> np.ndarray:
    """inc[a, c, x] is true when x lies on line(a, c)."""
    n = g.n_points
    inc = np.zeros((n, n, n), dtype=bool)
    ar = np.arange(n)
    inc[ar, :, ar] = True
    inc[:, ar, ar] = True
    lid = g.line_id
    for i, ln in enumerate(g.lines):
        a, c = np.nonzero(lid == i)
        for x in ln:
            inc[a, c, x] = True
    return inc


def _g3_witness(g: Geometry):
    n = g.n_points
    if n < 5 or not g.lines:
        return None
    inc = _incidence_cube(g).astype(np.float32)
    lines = g.lines
    best = None
    for p in range(n):
        through = g.lines_through[p]
        for i, j in itertools.combinations(through, 2):
            A = np.array([x for x in lines[i] if x != p])
            C = np.array([x for x in lines[j] if x != p])
            ka, kc = len(A), len(C)
            T = inc[np.ix_(A, C)].reshape(ka * kc, n)
            meet = (T @ T.T).reshape(ka, kc, ka, kc) > 0
            need = (A[:, None] != A[None, :])[:, None, :, None] & (C[:, None] != C[None, :])[None, :, None, :]
            bad = need & ~meet
            if bad.any():
                ia, ic, ib, id_ = np.argwhere(bad)[0]
                w = (int(A[ia]), int(A[ib]), int(C[ic]), int(C[id_]), p)
                if best is None or w < best:
                    best = w
        if best is not None:
            return best
    return None


def check_axioms(g: Geometry) -> AxiomReport:
    n = g.n_points
    col = g.collinear
    # G1: l(a, b, a)
    for a in range(n):
        for b in range(n):
            if not col(a, b, a):
                return AxiomReport(False, True, True, True, (a, b), "G1")
    # G2 quantified through the relation: S = {x : l(x, p, q)}
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            S = [x for x in range(n) if col(x, p, q)]
            for a in S:
                for b in S:
                    if not col(a, b, p):
                        return AxiomReport(True, False, True, True, (a, b, p, q), "G2")
    # the collinearity relation must be symmetric; sampled above 128 points
    triples: Iterable = itertools.combinations(range(n), 3)
    if n > 128:
        rng = random.Random(0)
        triples = (tuple(sorted(rng.sample(range(n), 3))) for _ in range(200_000))
    for t in triples:
        vals = {col(*perm) for perm in itertools.permutations(t)}
        if len(vals) != 1:
            return AxiomReport(True, True, True, False, t, "symmetry")
    w = _g3_witness(g)
    if w is not None:
        return AxiomReport(True, True, False, True, w, "G3")
    return AxiomReport(True, True, True, True)


# ---- constructions ----

def projective_points(p: int, d: int) -> list[tuple]:
    GF(p)  # rejects non-prime p
    if not isinstance(d, int) or d < 1:
        raise InvalidInputError(f"vector space dimension must be >= 1, got {d!r}")
    return [v for v in itertools.product(range(p), repeat=d)
            if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]


def from_vector_space(p: int, d: int) -> Geometry:
    F = GF(p)
    pts = projective_points(p, d)
    index = {v: i for i, v in enumerate(pts)}
    lines = set()
    covered = set()
    for i, j in itertools.combinations(range(len(pts)), 2):
        if (i, j) in covered:
            continue
        u, v = pts[i], pts[j]
        ln = set()
        for a in range(p):
            for b in range(p):
                if a or b:
                    w = tuple(F.add(F.mul(a, x), F.mul(b, y)) for x, y in zip(u, v))
                    ln.add(index[projective_normalize(F, w)])
        ln = tuple(sorted(ln))
        if len(ln) >= 3:
            lines.add(ln)
            covered.update(itertools.combinations(ln, 2))
    return Geometry(len(pts), tuple(sorted(lines)), provenance=f"vector-space GF({p})^{d}",
                    coords=tuple(pts), field_order=p)


def discrete(n: int) -> Geometry:
    return Geometry(n, (), provenance=f"discrete({n})")


def relabel(g: Geometry, perm: Sequence[int]) -> Geometry:
    """Point i becomes perm[i]."""
    if sorted(perm) != list(range(g.n_points)):
        raise InvalidInputError("relabeling must be a permutation of the points")
    return Geometry(g.n_points, tuple(tuple(perm[x] for x in ln) for ln in g.lines),
                    provenance="relabeled")


def induced(g: Geometry, points: Sequence[int]) -> Geometry:
    """Subgeometry on a subspace, points renumbered in the given order."""
    pos = {p: i for i, p in enumerate(points)}
    mask = to_mask(points)
    lines = [tuple(pos[x] for x in ln) for ln, m in zip(g.lines, g.line_masks) if m & ~mask == 0]
    return Geometry(len(points), tuple(lines), provenance="induced")


# ---- morphisms ----

@dataclass(frozen=True)
class GeoMorphism:
    source: Geometry
    target: Geometry
    mapping: tuple  # mapping[a] is a target point, or None when a is in the kernel

    def __post_init__(self):
        if len(self.mapping) != self.source.n_points:
            raise InvalidInputError("mapping length must equal the source point count")
        for v in self.mapping:
            if v is not None and not (0 <= v < self.target.n_points):
                raise InvalidInputError(f"image {v} outside the target")

    @property
    def kernel(self) -> frozenset:
        return frozenset(i for i, v in enumerate(self.mapping) if v is None)

    def kernel_mask(self) -> int:
        return to_mask(self.kernel)

    def pullback_mask(self, tmask: int) -> int:
        m = 0
        for a, v in enumerate(self.mapping):
            if v is None or tmask >> v & 1:
                m |= 1 << a
        return m

    def pullback(self, t: Iterable[int]) -> frozenset:
        return frozenset(bits(self.pullback_mask(to_mask(t))))

    def image(self) -> frozenset:
        return frozenset(v for v in self.mapping if v is not None)


def identity_morphism(g: Geometry) -> GeoMorphism:
    return GeoMorphism(g, g, tuple(range(g.n_points)))


def coproduct(gs: Sequence[Geometry]) -> tuple[Geometry, list[GeoMorphism]]:
    lines = []
    off = 0
    offsets = []
    for g in gs:
        offsets.append(off)
        lines.extend(tuple(x + off for x in ln) for ln in g.lines)
        off += g.n_points
    G = Geometry(off, tuple(lines), provenance="coproduct")
    inj = [GeoMorphism(g, G, tuple(range(o, o + g.n_points))) for g, o in zip(gs, offsets)]
    return G, inj


def check_morphism(m: GeoMorphism, cap: int = DEFAULT_CAP) -> bool:
    S, T = m.source, m.target
    if not m.kernel:
        for ln in S.lines:
            imgs = [m.mapping[x] for x in ln]
            distinct = set(imgs)
            if len(distinct) == 1:
                continue
            if len(distinct) != len(imgs):
                return False
            a, b = imgs[0], imgs[1]
            if any(T.pair_mask[a][b] >> y & 1 == 0 for y in imgs):
                return False
        return True
    if not is_subspace_mask(S, m.kernel_mask()):
        return False
    for t in subspace_masks(T, cap):
        if not is_subspace_mask(S, m.pullback_mask(t)):
            return False
    return True


def is_isomorphism(m: GeoMorphism) -> bool:
    S, T = m.source, m.target
    if S.n_points != T.n_points or any(v is None for v in m.mapping):
        return False
    if len(set(m.mapping)) != S.n_points:
        return False
    if len(S.lines) != len(T.lines):
        return False
    tlines = set(T.lines)
    return all(tuple(sorted(m.mapping[x] for x in ln)) in tlines for ln in S.lines)


# ---- structure ----

def is_irreducible(g: Geometry) -> bool:
    lid = g.line_id
    off = ~np.eye(g.n_points, dtype=bool)
    return bool(np.all(lid[off] >= 0))


def irreducible_components(g: Geometry) -> list[tuple]:
    """Classes of a ~ b iff card(line(a, b)) != 2, ordered by least element."""
    n = g.n_points
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ln in g.lines:
        r = find(ln[0])
        for x in ln[1:]:
            parent[find(x)] = r
    classes: dict[int, list] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    out = sorted(tuple(c) for c in classes.values())
    lid = g.line_id
    for c in out:
        # the relation must already be transitive on each class
        idx = np.array(c)
        sub = lid[np.ix_(idx, idx)]
        bad = np.argwhere((sub < 0) & ~np.eye(len(c), dtype=bool))
        if len(bad):
            i, j = bad[0]
            raise AxiomFailure("line relation is not transitive; geometry fails G3",
                               witness=(c[i], c[j]))
        if not is_subspace_mask(g, to_mask(c)):
            raise AxiomFailure("component is not a subspace", witness=c)
    return out


def reassemble(g: Geometry, comps: Sequence[Sequence[int]] | None = None) -> tuple[Geometry, GeoMorphism]:
    """Coproduct of the induced components, with the point map from g into it."""
    if comps is None:
        comps = irreducible_components(g)
    rebuilt, inj = coproduct([induced(g, c) for c in comps])
    mapping = [None] * g.n_points
    for c, m in zip(comps, inj):
        for i, x in enumerate(c):
            mapping[x] = m.mapping[i]
    return rebuilt, GeoMorphism(g, rebuilt, tuple(mapping))


def component_of_image(m: GeoMorphism) -> int | None:
    if not is_irreducible(m.source):
        raise PreconditionError("source geometry is reducible")
    img = m.image()
    if not img:
        return None
    comps = irreducible_components(m.target)
    hit = [i for i, c in enumerate(comps) if img & set(c)]
    if len(hit) != 1:
        raise InconsistencyError("image of an irreducible geometry straddles components",
                                 witness=sorted(img))
    return hit[0]


def dimension(g: Geometry) -> int:
    def greedy(order):
        cl = 0
        count = 0
        for x in order:
            if not cl >> x & 1:
                cl = closure_mask(g, cl | (1 << x))
                count += 1
        return count - 1

    d = greedy(range(g.n_points))
    if __debug__ and g.n_points > 1:
        order = list(range(g.n_points))
        random.Random(g.n_points).shuffle(order)
        assert greedy(order) == d, "greedy dimension depends on point order"
    return d


# ---- Desargues ----

@dataclass
class DesarguesReport:
    holds: bool
    witness: tuple | None = None  # (c, a1, a2, a3, b1, b2, b3)

    def __bool__(self):
        return self.holds


def _meet_table(g: Geometry) -> np.ndarray:
    """meet[i, j] = the point common to stored lines i, j, or n when none (or i == j)."""
    nl = len(g.lines)
    n = g.n_points
    inc = np.zeros((nl, n), dtype=np.int32)
    for i, ln in enumerate(g.lines):
        inc[i, list(ln)] = 1
    common = inc @ inc.T
    meet = np.full((nl, nl), n, dtype=np.int64)
    ii, jj = np.nonzero(common == 1)
    pts = np.argmax(inc[ii] * inc[jj], axis=1)
    meet[ii, jj] = pts
    np.fill_diagonal(meet, n)
    return meet


def _collinear_cube(g: Geometry) -> np.ndarray:
    """col[x, y, z] for points plus a sentinel index n that is never collinear."""
    n = g.n_points
    col = np.zeros((n + 1, n + 1, n + 1), dtype=bool)
    ar = np.arange(n)
    col[ar, ar, :n] = True
    col[ar, :n, ar] = True
    col[:n, ar, ar] = True
    for ln in g.lines:
        idx = np.array(ln)
        col[np.ix_(idx, idx, idx)] = True
    return col


def desargues_holds(g: Geometry) -> DesarguesReport:
    if not is_irreducible(g):
        raise PreconditionError("Desargues' property needs an irreducible geometry")
    if dimension(g) < 2:
        raise PreconditionError("Desargues' property needs dimension at least 2")
    n = g.n_points
    lid = g.line_id
    meet = _meet_table(g)
    col = _collinear_cube(g)
    for c in range(n):
        through = g.lines_through[c]
        pairs = {}
        for L in through:
            rest = [x for x in g.lines[L] if x != c]
            ab = [(a, b) for a in rest for b in rest if a != b]
            pairs[L] = (np.array([x for x, _ in ab]), np.array([y for _, y in ab]))
        for L1, L2, L3 in itertools.combinations(through, 3):
            a1, b1 = pairs[L1]
            a2, b2 = pairs[L2]
            a3, b3 = pairs[L3]
            d12 = meet[lid[a1[:, None], a2[None, :]], lid[b1[:, None], b2[None, :]]]
            d13 = meet[lid[a1[:, None], a3[None, :]], lid[b1[:, None], b3[None, :]]]
            d23 = meet[lid[a2[:, None], a3[None, :]], lid[b2[:, None], b3[None, :]]]
            hyp = (~col[a1[:, None, None], a2[None, :, None], a3[None, None, :]]
                   & ~col[b1[:, None, None], b2[None, :, None], b3[None, None, :]])
            ok = col[d12[:, :, None], d13[:, None, :], d23[None, :, :]]
            bad = hyp & ~ok
            if bad.any():
                i, j, k = np.argwhere(bad)[0]
                w = (c, int(a1[i]), int(a2[j]), int(a3[k]), int(b1[i]), int(b2[j]), int(b3[k]))
                return DesarguesReport(False, w)
    return DesarguesReport(True)


def desargues_violated_by(g: Geometry, w: Sequence[int]) -> bool:
    """Independent check that a configuration meets the hypotheses and breaks the conclusion."""
    c, a1, a2, a3, b1, b2, b3 = w
    A, B = (a1, a2, a3), (b1, b2, b3)
    for a, b in zip(A, B):
        if len({c, a, b}) != 3 or not g.collinear(c, a, b):
            return False
    for trio in itertools.combinations((c,) + A, 3):
        if g.collinear(*trio):
            return False
    for trio in itertools.combinations((c,) + B, 3):
        if g.collinear(*trio):
            return False
    diag = []
    for i, k in ((0, 1), (0, 2), (1, 2)):
        s = set(line(g, A[i], A[k])) & set(line(g, B[i], B[k]))
        if len(s) != 1:
            return True
        diag.append(s.pop())
    return not g.collinear(*diag)
