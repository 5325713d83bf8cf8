"""Coding of rational vectors over an abstract indexed basis.

A nonzero vector ``x = sum(l_i * b[a_i])`` with ``a_1 < ... < a_n`` is sent to
a natural number that records the coefficient string ``<l_1, ..., l_n>`` and
the fingerprint of its support. Two distinct vectors with the same code are
then recoverable from their sum, so every sum has at most one such
decomposition.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .foundations import encode_rational_string, format_rational, pair_codes, parse_rational
from .pair_coding import CodingContext, reconstruct_union, type_of

ZERO_CODE = 0


class VectorQ:
    """Finitely supported rational vector; zero coefficients are dropped."""

    __slots__ = ("_items", "_hash")

    def __init__(self, coeffs: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]] = ()):
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        acc: dict[int, Fraction] = {}
        for i, q in coeffs:
            if i < 0:
                raise DomainError(f"basis index must be >= 0, got {i}")
            acc[int(i)] = acc.get(int(i), Fraction(0)) + Fraction(q)
        self._items = tuple(sorted((i, q) for i, q in acc.items() if q != 0))
        self._hash = hash(self._items)

    @classmethod
    def basis(cls, i: int) -> "VectorQ":
        return cls({i: Fraction(1)})

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._items

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(q for _, q in self._items)

    def __getitem__(self, i: int) -> Fraction:
        for j, q in self._items:
            if j == i:
                return q
        return Fraction(0)

    def __bool__(self):
        return bool(self._items)

    def __add__(self, other: "VectorQ") -> "VectorQ":
        return VectorQ(self._items + other._items)

    def __neg__(self) -> "VectorQ":
        return VectorQ((i, -q) for i, q in self._items)

    def __sub__(self, other: "VectorQ") -> "VectorQ":
        return self + (-other)

    def scale(self, q: Fraction) -> "VectorQ":
        return VectorQ((i, q * c) for i, c in self._items)

    def __eq__(self, other):
        return isinstance(other, VectorQ) and self._items == other._items

    def __lt__(self, other: "VectorQ"):
        return self._items < other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self._items:
            return "VectorQ(0)"
        terms = " + ".join(f"{format_rational(q)}*b{i}" for i, q in self._items)
        return f"VectorQ({terms})"

    def to_json(self) -> dict:
        return {str(i): format_rational(q) for i, q in self._items}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "VectorQ":
        return cls({int(k): parse_rational(v) for k, v in data.items()})


def f_code(x: VectorQ, ctx: CodingContext) -> int:
    """Code of the coefficient string paired with the support fingerprint;
    the zero vector gets the reserved code 0."""
    if not x:
        return ZERO_CODE
    support = x.support()
    if support[-1] >= ctx.M:
        raise DomainError(f"support {support} outside 0..{ctx.M - 1}")
    return 1 + pair_codes(encode_rational_string(x.coefficients()), type_of(support, ctx).code)


def recover_pair(s: VectorQ, ctx: CodingContext) -> tuple[VectorQ, VectorQ] | None:
    """The pair {x, y} with x != y, f(x) = f(y) and x + y = s, if any.

    The support of s splits into the two supports; the shared initial part
    carries doubled coefficients and the rest is read off directly.
    """
    if not s:
        return None
    split = reconstruct_union(s.support(), ctx)
    if split is None:
        return None
    A, B = (sorted(part) for part in split)
    lam = []
    for a, b in zip(A, B):
        if a == b:
            lam.append(s[a] / 2)
        elif s[a] == s[b]:
            lam.append(s[a])
        else:
            return None
    x = VectorQ(zip(A, lam))
    y = VectorQ(zip(B, lam))
    if x == y or x + y != s or f_code(x, ctx) != f_code(y, ctx):
        return None
    return _order(x, y)


def brute_recover(s: VectorQ, ctx: CodingContext) -> list[tuple[VectorQ, VectorQ]]:
    """Every split of s into x + y with x != y, f(x) = f(y), where each
    support index goes to x alone, to y alone, or to both with half the
    coefficient. Exponential in |supp(s)|."""
    items = s.items()
    found = set()
    for choice in product((0, 1, 2), repeat=len(items)):
        xs, ys = [], []
        for (i, q), ch in zip(items, choice):
            if ch == 0:
                xs.append((i, q))
            elif ch == 1:
                ys.append((i, q))
            else:
                xs.append((i, q / 2))
                ys.append((i, q / 2))
        x, y = VectorQ(xs), VectorQ(ys)
        if x != y and f_code(x, ctx) == f_code(y, ctx):
            found.add(_order(x, y))
    return sorted(found)


def _order(x: VectorQ, y: VectorQ) -> tuple[VectorQ, VectorQ]:
    """Put the vector whose support has the smaller maximum first."""
    kx, ky = sorted(x.support(), reverse=True), sorted(y.support(), reverse=True)
    return (x, y) if (kx, x) < (ky, y) else (y, x)


def decompositions(W: Iterable[VectorQ], ctx: CodingContext) -> dict[VectorQ, list[tuple[VectorQ, VectorQ]]]:
    """For each sum u + v of distinct equal-code members of W, the pairs."""
    by_code: dict[int, list[VectorQ]] = defaultdict(list)
    for w in sorted(set(W)):
        by_code[f_code(w, ctx)].append(w)
    out: dict[VectorQ, list[tuple[VectorQ, VectorQ]]] = defaultdict(list)
    for members in by_code.values():
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                out[u + v].append(_order(u, v))
    return dict(out)


def verify_thm3(W: Iterable[VectorQ], ctx: CodingContext) -> int:
    """Largest number of equal-code decompositions of a single sum."""
    return max((len(p) for p in decompositions(W, ctx).values()), default=0)


@dataclass
class WindowReport:
    size: int
    sums_checked: int
    max_count: int
    witnesses: list
    mismatches: list

    @property
    def ok(self) -> bool:
        return self.max_count <= 1 and not self.mismatches

    def to_json(self) -> dict:
        return {
            "window_size": self.size,
            "sums_checked": self.sums_checked,
            "max": self.max_count,
            "witnesses": self.witnesses,
            "mismatches": self.mismatches,
        }


def check_window(W: Sequence[VectorQ], ctx: CodingContext, max_witnesses: int = 20) -> WindowReport:
    """Count decompositions over every pairwise sum of W and compare the
    window scan with :func:`recover_pair` on each sum."""
    members = set(W)
    found = decompositions(members, ctx)
    sums = {u + v for u in members for v in members}
    mismatches = []
    for s in sorted(sums):
        rec = recover_pair(s, ctx)
        scan = found.get(s, [])
        if scan and (rec is None or rec != scan[0]):
            mismatches.append({"sum": s.to_json(), "scan": [[a.to_json(), b.to_json()] for a, b in scan]})
        elif rec is not None and rec[0] in members and rec[1] in members and not scan:
            mismatches.append({"sum": s.to_json(), "recovered": [rec[0].to_json(), rec[1].to_json()]})
    witnesses = [
        {"sum": s.to_json(), "pairs": [[a.to_json(), b.to_json()] for a, b in pairs], "count": len(pairs)}
        for s, pairs in sorted(found.items())[:max_witnesses]
    ]
    return WindowReport(
        size=len(members),
        sums_checked=len(sums),
        max_count=max((len(p) for p in found.values()), default=0),
        witnesses=witnesses,
        mismatches=mismatches,
    )


def grid_window(dims: int, coeffs: Sequence[Fraction]) -> list[VectorQ]:
    """All nonzero vectors over indices 0..dims-1 with every coefficient in
    {0} | coeffs."""
    values = [Fraction(0)] + sorted({Fraction(c) for c in coeffs} - {0})
    return [VectorQ(zip(range(dims), vals)) for vals in product(values, repeat=dims) if any(vals)]


def random_window(rng: random.Random, dims: int, size: int, coeffs: Sequence[Fraction]) -> list[VectorQ]:
    """``size`` random vectors, half of them built as equal-code partners of
    the other half by swapping the top support index."""
    out: set[VectorQ] = set()
    coeffs = [Fraction(c) for c in coeffs if c != 0]
    while len(out) < size:
        k = rng.randint(1, min(4, dims - 1))
        supp = sorted(rng.sample(range(dims - 1), k))
        lam = [rng.choice(coeffs) for _ in supp]
        out.add(VectorQ(zip(supp, lam)))
        top = rng.randrange(supp[-1] + 1, dims)
        out.add(VectorQ(zip(supp[:-1] + [top], lam)))
    return sorted(out)
