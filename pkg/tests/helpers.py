"""Independent oracles used by the test suite.

Everything here is deliberately naive and kept separate from the library
so that the two sides of each check cannot share a bug: elimination
without transform bookkeeping, textbook direct-sum arithmetic of
finitely generated abelian groups, and brute-force enumerations.
"""

from __future__ import annotations

import random
from math import gcd

from skernel.complexes import ChainComplex, HomologyGroup
from skernel.matrices import IntMatrix


def naive_snf_diagonal(m: IntMatrix) -> list:
    """Repeated gcd row/column elimination; diagonal entries only."""
    a = m.to_lists()
    rows, cols = m.rows, m.cols
    diag = []
    t = 0
    while t < min(rows, cols):
        # pick any nonzero entry, favouring small ones
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    for s in range(cols):
                        a[i][s] -= q * a[t][s]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            for j in range(t + 1, cols):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    for s in range(rows):
                        a[s][j] -= q * a[s][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty:
                p = a[t][t]
                for i in range(t + 1, rows):
                    if any(a[i][j] % p for j in range(t + 1, cols)):
                        for s in range(cols):
                            a[t][s] += a[i][s]
                        dirty = True
                        break
        diag.append(abs(a[t][t]))
        t += 1
    while len(diag) < min(rows, cols):
        diag.append(0)
    return diag


def group_of_divisors(divs) -> HomologyGroup:
    """Canonical form of Z/d1 + Z/d2 + ... (d = 0 means a free factor)."""
    primes = {}
    free = 0
    for d in divs:
        d = abs(d)
        if d == 0:
            free += 1
            continue
        if d == 1:
            continue
        n = d
        p = 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                primes.setdefault(p, []).append(e)
            p += 1
        if n > 1:
            primes.setdefault(n, []).append(1)
    for p in primes:
        primes[p].sort(reverse=True)
    torsion = []
    while any(primes.values()):
        t = 1
        for p, es in primes.items():
            if es:
                t *= p ** es.pop(0)
        torsion.append(t)
    torsion.sort()
    # smallest invariant first, and the chain must divide upward
    out = []
    for t in reversed(torsion):
        out.append(t)
    out.reverse()
    return HomologyGroup(free, tuple(out))


def tensor_groups(a: HomologyGroup, b: HomologyGroup) -> HomologyGroup:
    divs = []
    divs.extend([0] * (a.free_rank * b.free_rank))
    for t in a.torsion:
        divs.extend([t] * b.free_rank)
    for t in b.torsion:
        divs.extend([t] * a.free_rank)
    for s in a.torsion:
        for t in b.torsion:
            divs.append(gcd(s, t))
    return group_of_divisors(divs)


def tor_groups(a: HomologyGroup, b: HomologyGroup) -> HomologyGroup:
    divs = [gcd(s, t) for s in a.torsion for t in b.torsion]
    return group_of_divisors(divs)


def direct_sum(groups) -> HomologyGroup:
    divs = []
    for g in groups:
        divs.extend([0] * g.free_rank)
        divs.extend(g.torsion)
    return group_of_divisors(divs)


def kunneth_homology(ha: dict, hb: dict, n: int) -> HomologyGroup:
    """H_n of a tensor product from the homology of the factors."""
    parts = []
    for i, g in ha.items():
        h = hb.get(n - i)
        if h is not None:
            parts.append(tensor_groups(g, h))
    for i, g in ha.items():
        h = hb.get(n - 1 - i)
        if h is not None:
            parts.append(tor_groups(g, h))
    return direct_sum(parts)


def shuffles(p: int, q: int):
    """All (p, q)-shuffles as (mu, nu, sign) with mu the p-element part."""
    out = []
    universe = list(range(p + q))
    import itertools

    for mu in itertools.combinations(universe, p):
        nu = tuple(x for x in universe if x not in mu)
        inversions = sum(1 for a in mu for b in nu if a > b)
        out.append((mu, nu, (-1) ** inversions))
    return out


# instance generation is not an oracle; share the library's seeded builder
from skernel.generators import random_complex  # noqa: F401  (re-export)
