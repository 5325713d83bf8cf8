"""Four-valued coloring of Q built from the factorial levels A_n.

A positive rational is in ``A_n`` when it is ``p/n!`` with ``0 < p/n! < 2^n``.
Points x, y first appearing in the same level L are joined when their
midpoint lies in some ``A_m`` while neither is in ``A_{m+1}``. For L >= 3 this
midpoint is forced into ``A_{L-2} = u Z cap (0, 2^(L-2))`` with
``u = 1/(L-2)!``, so on the slice ``A_L - A_{L-1}``:

* x ~ y exactly when ``x + y`` is a multiple of ``2u`` below ``T = 2^(L-1)``;
* the residues ``r = x mod 2u`` and ``2u - r`` form one bipartite threshold
  graph, connected on the vertices below ``T - 2u`` with least vertex
  ``min(r, 2u - r) < u``;
* every vertex at or above ``T - 2u`` is isolated.

Giving the least vertex of every component bit 0 therefore yields

    bit(x) = 0                              if L <= 2 or x >= T - 2u
    bit(x) = [(x mod 2u) > u]                otherwise.

Positive rationals get ``bit``, negative ones ``2 + bit(-x)`` and zero gets 0.

The slice graphs for small levels are also built explicitly (integer
numerators over ``(n+1)!``) and 2-colored by BFS, which checks the bipartition
and the anchor rule without relying on the argument above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceError, SoundnessError
from .foundations import format_rational

MAX_MEMBER_LEVEL = 6
MAX_SLICE = 5
_MAX_TABLE_DENOMINATOR = 1 << 28
_INT64_MAX = (1 << 63) - 1


# -- levels -----------------------------------------------------------------

@lru_cache(maxsize=None)
def kempner(d: int) -> int:
    """Least n >= 1 with d | n!."""
    if d < 1:
        raise DomainError(f"kempner needs a positive integer, got {d}")
    best = 1
    n = d
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            best = max(best, _kempner_prime_power(p, e))
        p += 1
    if n > 1:
        best = max(best, n)
    return best


def _kempner_prime_power(p: int, e: int) -> int:
    k = 0
    have = 0
    while have < e:
        k += p
        m = k
        while m % p == 0:
            m //= p
            have += 1
    return k


def _size_level(x: Fraction) -> int:
    """Least n >= 1 with x < 2^n, for x > 0."""
    return max(1, (x.numerator // x.denominator).bit_length())


def level(x: Fraction) -> int:
    """Least n >= 1 with x in A_n."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"level is defined for positive rationals, got {format_rational(x)}")
    return max(kempner(x.denominator), _size_level(x))


def in_level(x: Fraction, n: int) -> bool:
    x = Fraction(x)
    return n >= 1 and x > 0 and factorial(n) % x.denominator == 0 and x < 2 ** n


def level_size(n: int) -> int:
    return 2 ** n * factorial(n) - 1


def members(n: int, bound: int = MAX_MEMBER_LEVEL) -> list[Fraction]:
    """A_n in increasing order."""
    if n < 1:
        raise DomainError(f"levels start at 1, got {n}")
    if n > bound:
        raise ResourceError(f"level {n} exceeds the enumeration bound {bound}")
    f = factorial(n)
    return [Fraction(p, f) for p in range(1, 2 ** n * f)]


# -- the coloring -----------------------------------------------------------

def positive_bit(x: Fraction) -> int:
    x = Fraction(x)
    L = level(x)
    if L <= 2:
        return 0
    f = factorial(L - 2)
    if x * f >= 2 ** (L - 1) * f - 2:
        return 0
    return 1 if (x * f) % 2 > 1 else 0


def color_q(x: Fraction) -> int:
    x = Fraction(x)
    if x == 0:
        return 0
    if x > 0:
        return positive_bit(x)
    return 2 + positive_bit(-x)


@dataclass
class _DenominatorTables:
    """Per common denominator Q: gcd(r, Q) for residues r, and for every
    divisor d of Q and size level s (so L = max(S(d), s)) the factor
    ((L - 2)! mod 2d), with -1 marking L <= 2, and the least numerator over d
    of an isolated vertex."""

    Q: int
    gcds: np.ndarray
    factor: np.ndarray
    isolated: np.ndarray
    kemp: np.ndarray
    smax: int


_FACT_CACHE: list[int] = [1]


def _fact(n: int) -> int:
    while len(_FACT_CACHE) <= n:
        _FACT_CACHE.append(_FACT_CACHE[-1] * len(_FACT_CACHE))
    return _FACT_CACHE[n]


def _divisors(Q: int) -> list[int]:
    small, big = [], []
    i = 1
    while i * i <= Q:
        if Q % i == 0:
            small.append(i)
            if i * i != Q:
                big.append(Q // i)
        i += 1
    return small + big[::-1]


def _tables(Q: int, smax: int) -> _DenominatorTables:
    if Q > _MAX_TABLE_DENOMINATOR:
        raise ResourceError(f"common denominator {Q} too large for table evaluation")
    gcds = np.gcd(np.arange(Q, dtype=np.int64), Q)
    factor = np.full((Q + 1, smax + 1), -1, dtype=np.int64)
    isolated = np.full((Q + 1, smax + 1), _INT64_MAX, dtype=np.int64)
    kemp = np.zeros(Q + 1, dtype=np.int64)
    for d in _divisors(Q):
        S = kempner(d)
        kemp[d] = S
        for s in range(1, smax + 1):
            L = max(S, s)
            if L > 2:
                factor[d, s] = _fact(L - 2) % (2 * d)
                # n/d >= 2^(L-1) - 2/(L-2)!
                isolated[d, s] = min(_INT64_MAX, 2 ** (L - 1) * d - (2 * d) // _fact(L - 2))
    return _DenominatorTables(Q, gcds, factor, isolated, kemp, smax)


def color_table(Q: int, nmax: int) -> np.ndarray:
    """Colors of N/Q for N = -nmax .. nmax, as an int8 array indexed by
    N + nmax."""
    absN = np.arange(nmax + 1, dtype=np.int64)
    whole = absN // Q
    smax = max(1, int(whole.max()).bit_length()) if nmax else 1
    tb = _tables(Q, smax)
    g = tb.gcds[absN % Q]
    d = Q // g
    n = absN // g
    size = np.maximum(1, np.frexp(whole.astype(np.float64))[1]).astype(np.int64)
    fac = tb.factor[d, size]
    two_d = 2 * d
    t = ((n % two_d) * np.maximum(fac, 0)) % two_d
    bit = ((fac >= 0) & (t > d) & (n < tb.isolated[d, size])).astype(np.int8)
    bit[0] = 0
    out = np.empty(2 * nmax + 1, dtype=np.int8)
    out[nmax:] = bit
    out[:nmax] = (2 + bit[1:])[::-1]
    out[nmax] = 0
    return out


def color_array(nums: np.ndarray, Q: int) -> np.ndarray:
    """Colors of nums / Q (any sign) through :func:`color_table`."""
    nums = np.asarray(nums, dtype=np.int64)
    nmax = int(np.abs(nums).max()) if nums.size else 0
    return color_table(Q, nmax)[nums + nmax]


# -- slice graphs -----------------------------------------------------------

def _level_mask(nums: np.ndarray, D: int, N: int, k: int) -> np.ndarray:
    """Membership in A_k of nums / D where D = N! and k <= N."""
    step = D // factorial(k)
    return (nums > 0) & (nums % step == 0) & (nums < (2 ** k) * D)


def level_array(nums: np.ndarray, N: int) -> np.ndarray:
    """Levels of nums / N! for positive values known to lie in A_N
    (0 where the value is not in A_N)."""
    D = factorial(N)
    out = np.zeros(nums.shape, dtype=np.int64)
    for k in range(N, 0, -1):
        out[_level_mask(nums, D, N, k)] = k
    return out


@dataclass
class MidpointGraph:
    """Slice A_{n+1} - A_n with its midpoint edges; vertices and edge
    endpoints are numerators over ``denominator = (n+1)!``."""

    n: int
    denominator: int
    vertices: np.ndarray
    src: np.ndarray
    dst: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def vertex(self, num: int) -> Fraction:
        return Fraction(int(num), self.denominator)

    def edges(self) -> list[tuple[Fraction, Fraction]]:
        return [(self.vertex(a), self.vertex(b)) for a, b in zip(self.src, self.dst)]

    def has_edge(self, x: Fraction, y: Fraction) -> bool:
        a, b = sorted((Fraction(x) * self.denominator, Fraction(y) * self.denominator))
        if a.denominator != 1 or b.denominator != 1:
            return False
        hit = (self.src == int(a)) & (self.dst == int(b))
        return bool(hit.any())


def _check_slice(n: int, bound: int) -> None:
    if n < 1:
        raise DomainError(f"slices start at 1, got {n}")
    if n > bound:
        raise ResourceError(f"slice {n} exceeds the bound {bound}")


def slice_vertices(n: int, bound: int = MAX_SLICE) -> np.ndarray:
    """Numerators over (n+1)! of A_{n+1} - A_n, increasing."""
    _check_slice(n, bound)
    N = n + 1
    D = factorial(N)
    nums = np.arange(1, 2 ** N * D, dtype=np.int64)
    return nums[~_level_mask(nums, D, N, n)]


def edges_in_slice(n: int, bound: int = MAX_SLICE) -> MidpointGraph:
    """x ~ y on the slice when (x + y)/2 lies in A_{n-1}."""
    verts = slice_vertices(n, bound)
    N = n + 1
    D = factorial(N)
    top = 2 ** N * D
    in_slice = np.zeros(top + 1, dtype=bool)
    in_slice[verts] = True
    src, dst = [], []
    if n >= 2:
        step = D // factorial(n - 1)
        for q in range(1, 2 ** (n - 1) * factorial(n - 1)):
            z2 = 2 * q * step
            lo = max(1, z2 - top + 1)
            xs = verts[(verts >= lo) & (2 * verts < z2)]
            ys = z2 - xs
            keep = in_slice[ys]
            src.append(xs[keep])
            dst.append(ys[keep])
    cat = lambda parts: np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    s, t = cat(src), cat(dst)
    order = np.lexsort((t, s))
    return MidpointGraph(n=n, denominator=D, vertices=verts, src=s[order], dst=t[order])


@dataclass
class SameLevelReport:
    n: int
    pairs_checked: int
    edges_found: int
    violations: list = field(default_factory=list)


def same_level_check(n: int, bound: int = MAX_SLICE) -> SameLevelReport:
    """Walk every G-neighbour of every slice vertex straight from the
    definition (midpoint z in some A_m, neither endpoint in A_{m+1}) and
    report neighbours that first appear in a different level."""
    verts = slice_vertices(n, bound)
    N = n + 1
    D = factorial(N)
    checked = 0
    found = 0
    bad = []
    if n >= 2:
        step = D // factorial(n - 1)
        for q in range(1, 2 ** (n - 1) * factorial(n - 1)):
            z = q * step
            m = int(level_array(np.array([z]), N)[0])
            if not m + 1 <= n:
                continue
            ys = 2 * z - verts
            checked += verts.size
            edge = (ys > 0) & ~_level_mask(ys, D, N, m + 1)
            found += int(edge.sum())
            lv = level_array(ys[edge], N)
            wrong = lv != N
            if wrong.any():
                xs = verts[edge][wrong]
                for x, y in zip(xs[:5], ys[edge][wrong][:5]):
                    bad.append((format_rational(Fraction(int(x), D)), format_rational(Fraction(int(y), D))))
    return SameLevelReport(n=n, pairs_checked=checked, edges_found=found, violations=bad)


@dataclass
class Bipartition:
    graph: MidpointGraph
    bits: np.ndarray
    components: int
    odd_edges: int

    @property
    def bipartite(self) -> bool:
        return self.odd_edges == 0


def bipartition(graph: MidpointGraph) -> Bipartition:
    """BFS-layer 2-coloring, least vertex of each component at bit 0; any
    edge inside one layer parity is an odd cycle."""
    V = graph.vertices
    n = V.size
    a = np.searchsorted(V, graph.src)
    b = np.searchsorted(V, graph.dst)
    heads = np.concatenate([a, b])
    tails = np.concatenate([b, a])
    order = np.argsort(heads, kind="stable")
    nbr = tails[order]
    deg = np.bincount(heads, minlength=n)
    start = np.concatenate([[0], np.cumsum(deg)])
    bits = np.full(n, -1, dtype=np.int8)
    bits[deg == 0] = 0
    components = int((deg == 0).sum())
    for root in np.flatnonzero(deg):
        if bits[root] >= 0:
            continue
        components += 1
        bits[root] = 0
        frontier = np.array([root])
        parity = 0
        while frontier.size:
            parity ^= 1
            lens = deg[frontier]
            offs = np.repeat(start[frontier] - np.cumsum(lens) + lens, lens) + np.arange(lens.sum())
            cand = np.unique(nbr[offs])
            cand = cand[bits[cand] < 0]
            bits[cand] = parity
            frontier = cand
    odd = int((bits[a] == bits[b]).sum())
    return Bipartition(graph=graph, bits=bits, components=components, odd_edges=odd)


# -- windowed S_x certificates ----------------------------------------------

@dataclass(frozen=True)
class SxViolation:
    h: Fraction
    side: str
    witness_level: int

    def to_json(self) -> dict:
        return {"h": format_rational(self.h), "witness-side": self.side, "witness-level": self.witness_level}


@dataclass
class SxCertificate:
    x: Fraction
    level: int | None
    max_h: Fraction
    max_den: int
    scanned: int
    violations: list[SxViolation]

    def to_json(self) -> dict:
        return {
            "x": format_rational(self.x),
            "level": self.level,
            "max_h": format_rational(self.max_h),
            "max_den": self.max_den,
            "scanned": self.scanned,
            "violations": [v.to_json() for v in self.violations],
        }


def _witness_levels(nums: np.ndarray, Q: int, sign: int, n: int) -> np.ndarray:
    """Level of sign * nums / Q where that value lies in A_{n+1}, else 0."""
    vals = sign * nums
    out = np.zeros(vals.shape, dtype=np.int64)
    live = vals > 0
    for k in range(1, n + 2):
        hit = live & (out == 0) & ((vals * (_fact(k) % Q)) % Q == 0) & (vals < (2 ** k) * Q)
        out[hit] = k
    return out


def s_x_windows(xs: Sequence[Fraction], max_h: Fraction, max_den: int) -> list[SxCertificate]:
    """Certificates for several centers; centers sharing a denominator share
    the per-denominator color tables."""
    xs = [Fraction(x) for x in xs]
    max_h = Fraction(max_h)
    if max_h <= 0 or max_den < 1:
        raise DomainError("window needs max_h > 0 and max_den >= 1")
    found: dict[Fraction, list[SxViolation]] = {x: [] for x in xs}
    scanned: dict[Fraction, int] = {x: 0 for x in xs}
    by_den: dict[int, list[Fraction]] = {}
    for x in dict.fromkeys(xs):
        by_den.setdefault(x.denominator, []).append(x)
    for q, group in by_den.items():
        reach = max(abs(x) for x in group) + max_h
        for b in range(1, max_den + 1):
            K = int(max_h * b)
            if K < 1:
                continue
            k = np.arange(1, K + 1)
            coprime = np.gcd(k, b) == 1
            count = int(coprime.sum())
            Q = q * b
            nmax = int(reach * Q) + 1
            table = color_table(Q, nmax)
            for x in group:
                scanned[x] += count
                c = int(x.numerator) * b + nmax
                plus = table[c + q: c + q * K + 1: q]
                minus = table[c - q * K: c: q][::-1]
                hits = np.flatnonzero((plus == minus) & coprime)
                if hits.size == 0:
                    continue
                ks = hits + 1
                centre = int(x.numerator) * b
                if x == 0:
                    raise SoundnessError(f"S_0 is nonempty at h={format_rational(Fraction(int(ks[0]), b))}")
                n = level(abs(x))
                sign = 1 if x > 0 else -1
                low = _witness_levels(centre - ks * q, Q, sign, n)
                high = _witness_levels(centre + ks * q, Q, sign, n)
                for kk, wl, wh in zip(ks.tolist(), low.tolist(), high.tolist()):
                    if wl:
                        found[x].append(SxViolation(Fraction(kk, b), "minus", wl))
                    elif wh:
                        found[x].append(SxViolation(Fraction(kk, b), "plus", wh))
                    else:
                        raise SoundnessError(
                            f"S_x certificate fails at x={format_rational(x)}, h={format_rational(Fraction(kk, b))}"
                        )
    return [
        SxCertificate(
            x=x,
            level=level(abs(x)) if x != 0 else None,
            max_h=max_h,
            max_den=max_den,
            scanned=scanned[x],
            violations=sorted(found[x], key=lambda v: (float(v.h), v.h)),
        )
        for x in xs
    ]


def s_x_window(x: Fraction, max_h: Fraction, max_den: int) -> SxCertificate:
    """All h in (0, max_h] with denominator <= max_den and
    color(x - h) = color(x + h), each certified by a point of A_{n+1}
    (n the level of |x|) on x's side of zero."""
    return s_x_windows([x], max_h, max_den)[0]
