"""Text and JSON formats for geometries, lattices and Gram matrices.

Text formats are line-oriented; '#' starts a comment.  Serialisation is
canonical, so parse(dump(x)) == x and dump(parse(s)) == s for canonical s.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError
from .exactmath import Matrix, parse_rational
from .geometry import Geometry
from .hermitian import HermitianSpace
from .lattice import FiniteLattice, from_leq
from .ortho import OrthoGeometry, OrthoLattice, PropSystem


def _ints(tokens, where):
    try:
        return [int(t) for t in tokens]
    except ValueError as e:
        raise InvalidInputError(f"{where}: expected integers, got {' '.join(tokens)!r}") from e


def _lines_of(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            out.append((no, s.split()))
    return out


# ---- geometry ----

def geometry_from_parts(n, lines, ortho=()):
    if not isinstance(n, int) or n < 0:
        raise InvalidInputError(f"points must be a nonnegative integer, got {n!r}")
    for ln in lines:
        if len(set(ln)) != len(ln):
            raise InvalidInputError(f"line repeats a point: {list(ln)}")
    g = Geometry(n, tuple(tuple(ln) for ln in lines), provenance="parsed")
    if ortho is None:
        return g
    pairs = [tuple(p) for p in ortho]
    for p in pairs:
        if len(p) != 2 or p[0] >= p[1]:
            raise InvalidInputError(f"ortho pair must be 'i j' with i < j, got {list(p)}")
    return OrthoGeometry(g, frozenset(pairs))


def parse_geometry_text(text: str):
    rows = _lines_of(text)
    if not rows or rows[0][1][0] != "points" or len(rows[0][1]) != 2:
        raise InvalidInputError("geometry file must start with 'points N'")
    n = _ints(rows[0][1][1:], "points")[0]
    lines, ortho, has_ortho = [], [], False
    for no, tok in rows[1:]:
        if tok[0] == "line":
            lines.append(tuple(_ints(tok[1:], f"line {no}")))
        elif tok[0] == "ortho":
            if len(tok) != 3:
                raise InvalidInputError(f"line {no}: 'ortho i j' takes two indices")
            ortho.append(tuple(_ints(tok[1:], f"line {no}")))
            has_ortho = True
        else:
            raise InvalidInputError(f"line {no}: unknown keyword {tok[0]!r}")
    return geometry_from_parts(n, lines, ortho if has_ortho else None)


def dump_geometry_text(g) -> str:
    og = g if isinstance(g, OrthoGeometry) else None
    geo = og.geometry if og else g
    out = [f"points {geo.n_points}"]
    out += ["line " + " ".join(map(str, ln)) for ln in sorted(geo.lines)]
    if og:
        out += [f"ortho {i} {j}" for i, j in sorted(og.pairs)]
    return "\n".join(out) + "\n"


def geometry_json(g) -> dict:
    og = g if isinstance(g, OrthoGeometry) else None
    geo = og.geometry if og else g
    d = {"points": geo.n_points, "lines": [list(ln) for ln in sorted(geo.lines)]}
    if og:
        d["ortho"] = [list(p) for p in sorted(og.pairs)]
    return d


# ---- lattices ----

def lattice_from_parts(n, leq_pairs, perp_pairs=None):
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"elements must be a positive integer, got {n!r}")
    leq = np.eye(n, dtype=bool)
    for i, j in leq_pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidInputError(f"leq pair ({i}, {j}) out of range")
        leq[i, j] = True
    if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
        raise InvalidInputError("relation is not antisymmetric")
    trans = (leq.astype(np.int32) @ leq.astype(np.int32)) > 0
    if np.any(trans & ~leq):
        i, j = map(int, np.argwhere(trans & ~leq)[0])
        raise InvalidInputError("order must be listed in full (not transitively closed)", witness=(i, j))
    L = from_leq(leq)
    if perp_pairs is None:
        return L
    perp = [None] * n
    for i, j in perp_pairs:
        if not (0 <= i < n and 0 <= j < n) or perp[i] is not None:
            raise InvalidInputError(f"bad perp pair ({i}, {j})")
        perp[i] = j
    if any(p is None for p in perp):
        raise InvalidInputError("perp must be given for every element")
    return OrthoLattice(L, tuple(perp))


def parse_lattice_text(text: str):
    rows = _lines_of(text)
    if not rows or rows[0][1][0] != "elements" or len(rows[0][1]) != 2:
        raise InvalidInputError("lattice file must start with 'elements N'")
    n = _ints(rows[0][1][1:], "elements")[0]
    leq, perp, has_perp = [], [], False
    for no, tok in rows[1:]:
        if tok[0] not in ("leq", "perp") or len(tok) != 3:
            raise InvalidInputError(f"line {no}: expected 'leq i j' or 'perp i j'")
        pair = tuple(_ints(tok[1:], f"line {no}"))
        if tok[0] == "leq":
            leq.append(pair)
        else:
            perp.append(pair)
            has_perp = True
    return lattice_from_parts(n, leq, perp if has_perp else None)


def _lattice_parts(x):
    L = x if isinstance(x, FiniteLattice) else x.lattice
    pairs = [(int(i), int(j)) for i, j in np.argwhere(L.leq) if i != j]
    perp = None if isinstance(x, FiniteLattice) else list(x.perp)
    return L.n, sorted(pairs), perp


def dump_lattice_text(x) -> str:
    n, pairs, perp = _lattice_parts(x)
    out = [f"elements {n}"] + [f"leq {i} {j}" for i, j in pairs]
    if perp is not None:
        out += [f"perp {i} {j}" for i, j in enumerate(perp)]
    return "\n".join(out) + "\n"


def lattice_json(x) -> dict:
    n, pairs, perp = _lattice_parts(x)
    d = {"elements": n, "leq": [list(p) for p in pairs]}
    if perp is not None:
        d["perp"] = [[i, j] for i, j in enumerate(perp)]
    return d


# ---- Gram matrices ----

def parse_gram_text(text: str) -> HermitianSpace:
    rows = _lines_of(text)
    if not rows or rows[0][1][0] != "dim" or len(rows[0][1]) != 2:
        raise InvalidInputError("Gram file must start with 'dim N'")
    n = _ints(rows[0][1][1:], "dim")[0]
    body = [tok for _, tok in rows[1:]]
    if len(body) != n or any(len(r) != n for r in body):
        raise InvalidInputError(f"expected {n} rows of {n} rationals")
    return HermitianSpace.of([[parse_rational(t) for t in r] for r in body])


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def dump_gram_text(h) -> str:
    m = h.gram if isinstance(h, HermitianSpace) else h
    return "\n".join([f"dim {m.nrows}"] + [" ".join(_frac(x) for x in r) for r in m.rows]) + "\n"


def gram_json(h) -> dict:
    m = h.gram if isinstance(h, HermitianSpace) else h
    return {"dim": m.nrows, "gram": [[_frac(x) for x in r] for r in m.rows]}


# ---- dispatch ----

def from_json(d: dict):
    if not isinstance(d, dict):
        raise InvalidInputError("JSON input must be an object")
    try:
        if "points" in d:
            return geometry_from_parts(d["points"], [tuple(ln) for ln in d.get("lines", [])],
                                       d.get("ortho"))
        if "elements" in d:
            return lattice_from_parts(d["elements"], [tuple(p) for p in d.get("leq", [])],
                                      [tuple(p) for p in d["perp"]] if "perp" in d else None)
        if "dim" in d:
            rows = d["gram"]
            if len(rows) != d["dim"]:
                raise InvalidInputError("gram row count does not match dim")
            return HermitianSpace.of([[parse_rational(str(t)) for t in r] for r in rows])
    except (TypeError, KeyError) as e:
        raise InvalidInputError(f"malformed JSON input: {e}") from e
    raise InvalidInputError("JSON input needs one of 'points', 'elements' or 'dim'")


def loads(text: str):
    """Parse any supported format, sniffing the kind from the first token."""
    s = text.lstrip()
    if s.startswith("{"):
        try:
            return from_json(json.loads(s))
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"bad JSON: {e}") from e
    rows = _lines_of(text)
    if not rows:
        raise InvalidInputError("empty input")
    head = rows[0][1][0]
    if head == "points":
        return parse_geometry_text(text)
    if head == "elements":
        return parse_lattice_text(text)
    if head == "dim":
        return parse_gram_text(text)
    raise InvalidInputError(f"cannot tell the input kind from {head!r}")


def to_json(x) -> dict:
    if isinstance(x, (Geometry, OrthoGeometry)):
        return geometry_json(x)
    if isinstance(x, (FiniteLattice, OrthoLattice, PropSystem)):
        return lattice_json(x)
    if isinstance(x, (HermitianSpace, Matrix)):
        return gram_json(x)
    raise InvalidInputError(f"cannot serialise a {type(x).__name__}")


def dumps(x, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(to_json(x), sort_keys=True) + "\n"
    if isinstance(x, (Geometry, OrthoGeometry)):
        return dump_geometry_text(x)
    if isinstance(x, (FiniteLattice, OrthoLattice, PropSystem)):
        return dump_lattice_text(x)
    if isinstance(x, (HermitianSpace, Matrix)):
        return dump_gram_text(x)
    raise InvalidInputError(f"cannot serialise a {type(x).__name__}")
