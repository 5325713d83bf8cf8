"""Finite combinatorics behind the lower bounds on decomposition counts.

* the explicit family of ``2^n - 1`` ways to split a ``2n``-point set into a
  union of two different sets, and its vector-sum form with coefficients 1
  and 1/2;
* exhaustive counting of equal-color decompositions for a pluggable set
  coloring;
* monochromatic chains in colorings of pairs ``(i, j)``, i < j, which
  telescope into many equal-color decompositions of one difference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError, ResourceError
from .hamel_coloring import VectorQ

MAX_PATTERN = 16
MAX_GROUND = 16
MAX_CAP = 6
MAX_CHAIN = 20

Symbol = tuple[int, int]  # (i, g) stands for y_i^g


# -- the 2^n - 1 pattern -----------------------------------------------------

@dataclass
class DecompositionPattern:
    n: int
    symbols: list[Symbol]
    pairs: list[tuple[frozenset, frozenset, int]]  # (X, Y, k)
    collisions: list[tuple[int, int]] = field(default_factory=list)

    @property
    def full(self) -> frozenset:
        return frozenset(self.symbols)

    def distinct(self) -> int:
        return len({frozenset((X, Y)) for X, Y, _ in self.pairs})

    def unions_constant(self) -> bool:
        full = self.full
        return all(X | Y == full and X != Y for X, Y, _ in self.pairs)

    def per_k(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, _, k in self.pairs:
            out[k] = out.get(k, 0) + 1
        return out

    def to_json(self) -> dict:
        fmt = lambda S: sorted(f"y{i}^{g}" for i, g in S)
        return {
            "n": self.n,
            "pairs": len(self.pairs),
            "distinct": self.distinct(),
            "unions_constant": self.unions_constant(),
            "per_k": {str(k): v for k, v in sorted(self.per_k().items())},
            "collisions": self.collisions,
            "decompositions": [[fmt(X), fmt(Y)] for X, Y, _ in self.pairs[:64]],
        }


def decomposition_pattern(n: int) -> DecompositionPattern:
    """For each k, A_k = {y_i^0, y_i^1 : i < k} joined with the tail choice
    B^g = {y_j^g(j) : j >= k} and its complement B^{1-g}; fixing g(k) = 0
    lists each unordered split once, 2^(n-k) of them for this k."""
    if not 1 <= n <= MAX_PATTERN:
        raise ResourceError(f"pattern size must be in 1..{MAX_PATTERN}, got {n}")
    symbols = [(i, g) for i in range(1, n + 1) for g in (0, 1)]
    pairs = []
    seen: dict[frozenset, int] = {}
    collisions = []
    for k in range(1, n + 1):
        head = frozenset((i, g) for i in range(1, k) for g in (0, 1))
        for tail in product((0, 1), repeat=n - k):
            g = (0,) + tail
            X = head | {(k + t, g[t]) for t in range(len(g))}
            Y = head | {(k + t, 1 - g[t]) for t in range(len(g))}
            key = frozenset((X, Y))
            if key in seen:
                collisions.append((seen[key], k))
            seen[key] = k
            pairs.append((X, Y, k))
    return DecompositionPattern(n=n, symbols=symbols, pairs=pairs, collisions=collisions)


def _basis_index(s: Symbol) -> int:
    i, g = s
    return 2 * (i - 1) + g


@dataclass
class VectorPattern:
    n: int
    total: VectorQ
    pairs: list[tuple[VectorQ, VectorQ]]

    def distinct(self) -> int:
        return len({frozenset(p) for p in self.pairs})

    def sums_equal(self) -> bool:
        return all(x + y == self.total and x != y for x, y in self.pairs)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pairs": len(self.pairs),
            "distinct": self.distinct(),
            "sums_equal": self.sums_equal(),
            "total": self.total.to_json(),
        }


def instantiate_vectors(pattern: DecompositionPattern) -> VectorPattern:
    """Send y_i^g to basis vector 2(i-1)+g. The shared head enters both
    summands with coefficient 1/2 and the tails with coefficient 1, so each
    split adds up to the all-ones vector."""
    half = Fraction(1, 2)
    total = VectorQ({_basis_index(s): 1 for s in pattern.symbols})
    pairs = []
    for X, Y, _ in pattern.pairs:
        head = X & Y
        x = VectorQ({_basis_index(s): half if s in head else 1 for s in X})
        y = VectorQ({_basis_index(s): half if s in head else 1 for s in Y})
        pairs.append((x, y))
    return VectorPattern(n=pattern.n, total=total, pairs=pairs)


# -- decomposition counting for set colorings --------------------------------

SetColoring = Callable[[frozenset], Hashable]


@dataclass
class DecompositionCount:
    witness: frozenset
    count: int
    sets_scanned: int
    histogram: dict[int, int]
    counts: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=np.int64))

    def count_for(self, s: Iterable[int]) -> int:
        return int(self.counts[sum(1 << i for i in set(s))])

    def to_json(self) -> dict:
        return {
            "witness": sorted(self.witness),
            "count": self.count,
            "sets_scanned": self.sets_scanned,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def max_decompositions(F: SetColoring, N: int, cap: int) -> DecompositionCount:
    """Over all s with |s| <= 2*cap, the number of unordered pairs x != y,
    |x|, |y| <= cap, with x | y = s and F(x) = F(y); returns the maximizer
    (smallest bitmask on ties). F must be pure."""
    if not 0 <= N <= MAX_GROUND or not 0 <= cap <= MAX_CAP:
        raise ResourceError(f"need N <= {MAX_GROUND} and cap <= {MAX_CAP}, got N={N}, cap={cap}")
    groups: dict[Hashable, list[int]] = {}
    for size in range(cap + 1):
        for combo in combinations(range(N), size):
            mask = sum(1 << i for i in combo)
            groups.setdefault(F(frozenset(combo)), []).append(mask)
    counts = np.zeros(1 << N, dtype=np.int64)
    scanned = sum(len(g) for g in groups.values())
    for masks in groups.values():
        arr = np.array(sorted(masks), dtype=np.int64)
        for i in range(arr.size - 1):
            counts += np.bincount(arr[i] | arr[i + 1:], minlength=1 << N)
    best = int(np.argmax(counts))
    values, freq = np.unique(counts, return_counts=True)
    return DecompositionCount(
        witness=frozenset(i for i in range(N) if best >> i & 1),
        count=int(counts[best]),
        sets_scanned=scanned,
        histogram={int(v): int(c) for v, c in zip(values, freq)},
        counts=counts,
    )


# -- difference colorings and monochromatic chains ---------------------------

@dataclass(frozen=True)
class DifferenceColoring:
    """Colors 1..n on the pairs (i, j), 0 <= i < j < m."""

    m: int
    n: int
    F: Mapping[tuple[int, int], int]

    def __post_init__(self):
        for i, j in combinations(range(self.m), 2):
            c = self.F.get((i, j))
            if c is None or not 1 <= c <= self.n:
                raise InputError(f"pair ({i}, {j}) needs a color in 1..{self.n}, got {c}")

    def color(self, i: int, j: int) -> int:
        return self.F[(i, j) if i < j else (j, i)]

    @classmethod
    def from_sequence(cls, m: int, n: int, colors: Sequence[int]) -> "DifferenceColoring":
        """Colors listed in lexicographic pair order."""
        return cls(m, n, dict(zip(combinations(range(m), 2), colors)))

    @classmethod
    def from_points(cls, f: Callable[[VectorQ], int], points: Sequence[VectorQ], n: int) -> "DifferenceColoring":
        """F(i, j) = f(b_j - b_i)."""
        m = len(points)
        return cls(m, n, {(i, j): f(points[j] - points[i]) for i, j in combinations(range(m), 2)})

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "colors": [self.F[p] for p in combinations(range(self.m), 2)]}


def _clique(adj: Sequence[int], cand: int, need: int, chosen: list[int]) -> list[int] | None:
    if need == 0:
        return chosen
    while cand:
        if bin(cand).count("1") < need:
            return None
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        found = _clique(adj, cand & adj[v], need - 1, chosen + [v])
        if found is not None:
            return found
    return None


def _color_masks(dc: DifferenceColoring) -> dict[int, list[int]]:
    masks = {k: [0] * dc.m for k in range(1, dc.n + 1)}
    for (i, j), c in dc.F.items():
        masks[c][i] |= 1 << j
    return masks


def find_monochromatic_chain(dc: DifferenceColoring, L: int) -> tuple[int, list[int]] | None:
    """(color, i_0 < ... < i_{L-1}) with every pair of that color, or None."""
    if dc.m > MAX_CHAIN:
        raise ResourceError(f"chain search limited to m <= {MAX_CHAIN}, got {dc.m}")
    if L < 1:
        raise InputError(f"chain length must be positive, got {L}")
    if L > dc.m:
        return None
    if L == 1:
        return (1, [0])
    full = (1 << dc.m) - 1
    for k, adj in sorted(_color_masks(dc).items()):
        found = _clique(adj, full, L, [])
        if found is not None:
            return k, found
    return None


@dataclass
class RamseyReport:
    m: int
    colors: int
    chain: int
    colorings: int
    with_chain: int
    counterexample: DifferenceColoring | None

    @property
    def always(self) -> bool:
        return self.with_chain == self.colorings

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "colors": self.colors,
            "chain": self.chain,
            "colorings": self.colorings,
            "with_chain": self.with_chain,
            "always": self.always,
            "counterexample": self.counterexample.to_json() if self.counterexample else None,
        }


def all_colorings(m: int, n: int) -> Iterator[DifferenceColoring]:
    for colors in product(range(1, n + 1), repeat=m * (m - 1) // 2):
        yield DifferenceColoring.from_sequence(m, n, colors)


def ramsey_scan(m: int, n: int, L: int, limit: int = 1 << 22) -> RamseyReport:
    """Run the chain search on every n-coloring of the pairs of 0..m-1."""
    total = n ** (m * (m - 1) // 2)
    if total > limit:
        raise ResourceError(f"{total} colorings exceed the scan limit {limit}")
    hits = 0
    witness = None
    for dc in all_colorings(m, n):
        if find_monochromatic_chain(dc, L) is not None:
            hits += 1
        elif witness is None:
            witness = dc
    return RamseyReport(m=m, colors=n, chain=L, colorings=total, with_chain=hits, counterexample=witness)


def _check_chain(dc: DifferenceColoring, chain: Sequence[int]) -> int:
    if len(chain) < 2 or any(a >= b for a, b in zip(chain, chain[1:])):
        raise InputError(f"a chain needs at least two increasing indices, got {list(chain)}")
    if chain[0] < 0 or chain[-1] >= dc.m:
        raise InputError(f"chain {list(chain)} leaves 0..{dc.m - 1}")
    colors = {dc.color(a, b) for a, b in combinations(chain, 2)}
    if len(colors) != 1:
        raise InputError(f"chain {list(chain)} is not monochromatic")
    return colors.pop()


def count_sx_from_chain(dc: DifferenceColoring, chain: Sequence[int]) -> int:
    """Number of monochromatic steps along the chain, i.e. length - 1."""
    _check_chain(dc, chain)
    return len(chain) - 1


def chain_decompositions(
    dc: DifferenceColoring, chain: Sequence[int], points: Sequence[VectorQ]
) -> list[tuple[VectorQ, VectorQ]]:
    """b_last - b_first = (b_j - b_first) + (b_last - b_j) for every inner
    chain index j; both summands carry the chain's color."""
    _check_chain(dc, chain)
    first, last = points[chain[0]], points[chain[-1]]
    return [(points[j] - first, last - points[j]) for j in chain[1:-1]]
