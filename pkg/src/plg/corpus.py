"""Named test objects: small projective spaces, ortho structures and counterexamples."""

from __future__ import annotations

import itertools
import re

import numpy as np

from .errors import InvalidInputError
from .exactmath import is_prime
from .geometry import Geometry, discrete, from_vector_space
from .lattice import from_leq
from .ortho import OrthoGeometry, OrthoLattice

FAMILIES = ("fano", "pg(d,p)", "discrete(n)", "line(n)", "mo(n)", "boolean(n)", "benzene", "hall9")

_SPEC = re.compile(r"^\s*([a-z0-9]+)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")


def parse_spec(spec: str) -> tuple[str, tuple]:
    m = _SPEC.match(spec.lower())
    if not m:
        raise InvalidInputError(f"bad corpus spec {spec!r}")
    name, args = m.group(1), m.group(2)
    params = tuple(int(a) for a in args.split(",") if a.strip()) if args else ()
    return name, params


def line_geometry(n: int) -> Geometry:
    if n < 3:
        raise InvalidInputError(f"line({n}) needs at least 3 points")
    return Geometry(n, (tuple(range(n)),), provenance="generated")


def mo(n: int) -> OrthoGeometry:
    """2n points on one line, paired i <-> i' as (2k, 2k+1)."""
    if n < 2:
        raise InvalidInputError(f"mo({n}) needs n >= 2")
    g = line_geometry(2 * n)
    return OrthoGeometry(g, frozenset((2 * k, 2 * k + 1) for k in range(n)))


def boolean(n: int) -> OrthoGeometry:
    if n < 1:
        raise InvalidInputError(f"boolean({n}) needs n >= 1")
    return OrthoGeometry(discrete(n), frozenset(itertools.combinations(range(n), 2)))


def benzene() -> OrthoLattice:
    """0 < a < b < 1 and 0 < b' < a' < 1, with ' swapping the two chains.

    Element ids: 0=bottom, 1=a, 2=b, 3=b', 4=a', 5=top.
    """
    covers = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]
    leq = np.eye(6, dtype=bool)
    for i, j in covers:
        leq[i, j] = True
    for _ in range(3):
        leq = leq | ((leq.astype(np.int32) @ leq.astype(np.int32)) > 0)
    L = from_leq(leq, labels=("0", "a", "b", "b'", "a'", "1"))
    return OrthoLattice(L, (5, 4, 3, 2, 1, 0))


# ---- the Hall plane of order 9 ----

def _gf9():
    # a + 3b stands for a + b*i with i^2 = -1 over GF(3)
    def add(x, y):
        return (x % 3 + y % 3) % 3 + 3 * ((x // 3 + y // 3) % 3)

    def mul(x, y):
        a, b, c, d = x % 3, x // 3, y % 3, y // 3
        return (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)

    A = [[add(x, y) for y in range(9)] for x in range(9)]
    M = [[mul(x, y) for y in range(9)] for x in range(9)]
    return A, M


def nearfield9():
    """Addition and product tables of the order-9 nearfield.

    The GF(9) product is twisted by the Frobenius x -> x^3 whenever the right
    factor is a non-square.
    """
    A, M = _gf9()
    squares = {M[x][x] for x in range(1, 9)}
    cube = [M[M[x][x]][x] for x in range(9)]
    N = [[M[x][y] if y == 0 or y in squares else M[cube[x]][y] for y in range(9)] for x in range(9)]
    return A, N


def hall9() -> Geometry:
    """Projective completion of the affine plane over the order-9 nearfield.

    Affine point (x, y) is 9x + y; 81 + m is the direction of slope m and 90 the
    vertical direction.
    """
    A, N = nearfield9()
    lines = []
    for m in range(9):
        for b in range(9):
            lines.append(tuple(sorted([9 * x + A[N[m][x]][b] for x in range(9)] + [81 + m])))
    for c in range(9):
        lines.append(tuple(range(9 * c, 9 * c + 9)) + (90,))
    lines.append(tuple(range(81, 91)))
    return Geometry(91, tuple(sorted(lines)), provenance="generated")


def generate(spec: str):
    name, p = parse_spec(spec)

    def want(k):
        if len(p) != k:
            raise InvalidInputError(f"{name} takes {k} parameter(s), got {len(p)}")

    if name == "fano":
        want(0)
        return from_vector_space(2, 3)
    if name == "pg":
        want(2)
        d, q = p
        if d < 1 or not is_prime(q):
            raise InvalidInputError(f"pg({d},{q}) needs d >= 1 and prime p")
        return from_vector_space(q, d + 1)
    if name == "discrete":
        want(1)
        if p[0] < 1:
            raise InvalidInputError("discrete(n) needs n >= 1")
        return discrete(p[0])
    if name == "line":
        want(1)
        return line_geometry(p[0])
    if name == "mo":
        want(1)
        return mo(p[0])
    if name == "boolean":
        want(1)
        return boolean(p[0])
    if name == "benzene":
        want(0)
        return benzene()
    if name == "hall9":
        want(0)
        return hall9()
    raise InvalidInputError(f"unknown corpus family {name!r}; known: {', '.join(FAMILIES)}")
