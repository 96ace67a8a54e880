"""Brute-force reference implementations, written straight from the definitions.

They only read the stored line list and never touch the masks, caches or
numpy tables used by the library.
"""

import itertools


def collinear(lines, a, b, c):
    if len({a, b, c}) <= 2:
        return True
    return any({a, b, c} <= set(ln) for ln in lines)


def line(lines, a, b):
    if a == b:
        return {a}
    for ln in lines:
        if a in ln and b in ln:
            return set(ln)
    return {a, b}


def is_subspace(lines, s):
    return all(line(lines, a, b) <= s for a in s for b in s)


def subspaces(n, lines):
    out = []
    for k in range(n + 1):
        for sub in itertools.combinations(range(n), k):
            if is_subspace(lines, set(sub)):
                out.append(frozenset(sub))
    return out


def g3_holds(n, lines):
    """l(a,b,p), l(c,d,p) with distinct points give q with l(a,c,q), l(b,d,q)."""
    for a, b, c, d, p in itertools.permutations(range(n), 5):
        if collinear(lines, a, b, p) and collinear(lines, c, d, p):
            if not any(collinear(lines, a, c, q) and collinear(lines, b, d, q) for q in range(n)):
                return False
    return True


def meet_point(lines, a, b, c, d):
    common = line(lines, a, b) & line(lines, c, d)
    return common.pop() if len(common) == 1 else None


def desargues_holds(n, lines):
    """Two triangles in perspective from c must be in perspective from a line."""
    for cc in range(n):
        others = [x for x in range(n) if x != cc]
        for a1, a2, a3 in itertools.permutations(others, 3):
            if collinear(lines, a1, a2, a3):
                continue
            for b1 in line(lines, cc, a1) - {cc, a1}:
                for b2 in line(lines, cc, a2) - {cc, a2}:
                    for b3 in line(lines, cc, a3) - {cc, a3}:
                        if collinear(lines, b1, b2, b3):
                            continue
                        if len({cc, a1, a2, a3, b1, b2, b3}) < 7:
                            continue
                        if len({frozenset(line(lines, cc, x)) for x in (a1, a2, a3)}) < 3:
                            continue
                        p = meet_point(lines, a1, a2, b1, b2)
                        q = meet_point(lines, a1, a3, b1, b3)
                        r = meet_point(lines, a2, a3, b2, b3)
                        if p is None or q is None or r is None or not collinear(lines, p, q, r):
                            return False, (cc, a1, a2, a3, b1, b2, b3)
    return True, None


def closure(lines, s):
    s = set(s)
    while True:
        new = set(s)
        for a in s:
            for b in s:
                new |= line(lines, a, b)
        if new == s:
            return frozenset(s)
        s = new


def is_lattice_iso(n, leq1, leq2, mapping):
    return sorted(mapping) == list(range(n)) and all(
        leq1[x][y] == leq2[mapping[x]][mapping[y]] for x in range(n) for y in range(n))


# ---- lattices, from the order relation alone ----

def lub(leq, x, y):
    n = len(leq)
    ups = [z for z in range(n) if leq[x][z] and leq[y][z]]
    least = [z for z in ups if all(leq[z][w] for w in ups)]
    return least[0]


def glb(leq, x, y):
    n = len(leq)
    lows = [z for z in range(n) if leq[z][x] and leq[z][y]]
    greatest = [z for z in lows if all(leq[w][z] for w in lows)]
    return greatest[0]


def is_modular(leq):
    n = len(leq)
    return all(lub(leq, x, glb(leq, y, z)) == glb(leq, lub(leq, x, y), z)
               for x in range(n) for y in range(n) for z in range(n) if leq[x][z])


def covers(leq, x, y):
    if x == y or not leq[x][y]:
        return False
    return not any(z not in (x, y) and leq[x][z] and leq[z][y] for z in range(len(leq)))


def atoms(leq):
    n = len(leq)
    bot = next(b for b in range(n) if all(leq[b]))
    return bot, [a for a in range(n) if covers(leq, bot, a)]


def is_atomistic(leq):
    bot, ats = atoms(leq)
    for x in range(len(leq)):
        acc = bot
        for a in ats:
            if leq[a][x]:
                acc = lub(leq, acc, a)
        if acc != x:
            return False
    return True
