"""Slow, direct implementations used as references by the tests.

Nothing here imports the package's algorithms; each function follows the
plain definition with Fractions and itertools.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import factorial


# -- dyadic enumeration ------------------------------------------------------

def interval_by_index(j: int) -> tuple[Fraction, Fraction]:
    """Walk the diagonals of (depth, zigzag position) until reaching j."""
    t = 0
    diag = 0
    while True:
        for z in range(diag + 1):
            m = diag - z
            if t == j:
                k = (z + 1) // 2 if z % 2 else -(z // 2)
                return Fraction(k, 2 ** m), Fraction(k + 1, 2 ** m)
            t += 1
        diag += 1


def pair_colors(M: int) -> dict[tuple[int, int], int]:
    """c(beta, alpha) by the greedy least-index rule with r_a = a + 1/3."""
    r = [a + Fraction(1, 3) for a in range(M)]
    inside = lambda j, x: interval_by_index(j)[0] < x < interval_by_index(j)[1]
    c = {}
    for alpha in range(M):
        prev = -1
        for beta in range(alpha):
            j = prev + 1
            while not (
                inside(j, r[beta])
                and not inside(j, r[alpha])
                and not any(inside(j, r[xi]) for xi in range(beta))
            ):
                j += 1
            c[beta, alpha] = j
            prev = j
    return c


def fingerprint(A, c) -> tuple:
    A = sorted(A)
    return (len(A),) + tuple(c[A[i], A[j]] for i, j in combinations(range(len(A)), 2))


def decompositions_by_subsets(U, c) -> list[tuple[frozenset, frozenset]]:
    """Every unordered {A, B}, A != B, A | B = U with equal fingerprints."""
    U = sorted(U)
    subsets = [frozenset(s) for k in range(len(U) + 1) for s in combinations(U, k)]
    whole = frozenset(U)
    out = set()
    for A in subsets:
        for B in subsets:
            if A != B and A | B == whole and fingerprint(A, c) == fingerprint(B, c):
                out.add(frozenset((A, B)))
    return sorted((tuple(sorted(p, key=sorted)) for p in out), key=str)


# -- factorial levels -------------------------------------------------------

def in_A(x: Fraction, n: int) -> bool:
    return n >= 1 and 0 < x < 2 ** n and (x * factorial(n)).denominator == 1


def level_by_search(x: Fraction) -> int:
    n = 1
    while not in_A(x, n):
        n += 1
    return n


def A(n: int) -> list[Fraction]:
    f = factorial(n)
    return sorted({Fraction(p, f) for p in range(1, 2 ** n * f)})


def slice_edges(n: int) -> tuple[list[Fraction], set[tuple[Fraction, Fraction]]]:
    """Vertices of A_{n+1} - A_n and the pairs joined by a midpoint z in some
    A_m with both ends outside A_{m+1}."""
    big = set(A(n + 1))
    verts = sorted(v for v in big if not in_A(v, n))
    vs = set(verts)
    edges = set()
    mids = [(z, level_by_search(z)) for z in A(n + 1)]
    for x in verts:
        for z, m in mids:
            y = 2 * z - x
            if y != x and y in vs and not in_A(x, m + 1) and not in_A(y, m + 1):
                edges.add((min(x, y), max(x, y)))
    return verts, edges


# -- Ramsey -------------------------------------------------------------------

def has_mono_triangle(m: int, colors: dict[tuple[int, int], int]) -> bool:
    return any(
        colors[a, b] == colors[a, c] == colors[b, c] for a, b, c in combinations(range(m), 3)
    )


def all_two_colorings(m: int):
    pairs = list(combinations(range(m), 2))
    for bits in product((1, 2), repeat=len(pairs)):
        yield dict(zip(pairs, bits))


# -- symmetric collisions on finite sets --------------------------------------

def symmetric_collisions(points, f, d) -> list[tuple[Fraction, Fraction]]:
    pts = set(points)
    out = []
    for x in pts:
        for u in pts:
            h = x - u
            if h > 0 and h < d[x] and x + h in pts and f[u] == f[x + h]:
                out.append((x, h))
    return sorted(out)
