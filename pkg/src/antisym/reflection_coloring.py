"""Reflection-closed interval systems over a finite enumerated set of
rationals, and the parity 2-coloring they induce.

Every interval ``(b - h, b + h)`` carries the reflection ``x -> 2b - x``.
Points are added one at a time in enumeration order. A point that is not yet
a center gets a fresh interval inside the open half of its shortest
container, plus every image of that interval under products of reflections
of the intervals it sits in. Points of the input set that are mapped onto
each other by a reflection must receive different colors, and the function
:func:`color` two-colors the resulting orbit graph.
"""

from __future__ import annotations

import bisect
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import DomainError, InputError, SoundnessError
from .foundations import format_rational, parse_rational

_FIRST_RADIUS = Fraction(3)
_MAX_HALVINGS = 400
_MAX_IMAGES = 1 << 20


@dataclass(frozen=True)
class CenteredInterval:
    id: int
    center: Fraction
    radius: Fraction
    stage: int
    parent: int | None = None

    @property
    def left(self) -> Fraction:
        return self.center - self.radius

    @property
    def right(self) -> Fraction:
        return self.center + self.radius

    def contains(self, x: Fraction) -> bool:
        return self.left < x < self.right

    def reflect(self, x: Fraction) -> Fraction:
        if not self.contains(x) or x == self.center:
            raise DomainError(
                f"reflection {self.id} is undefined at {format_rational(x)}"
            )
        return 2 * self.center - x


def _in_half(c: Fraction, h: Fraction, b: Fraction, r: Fraction) -> bool:
    """Is (c-h, c+h) inside (b-r, b) or inside (b, b+r)?"""
    if c < b:
        return c - h >= b - r and c + h <= b
    if c > b:
        return c - h >= b and c + h <= b + r
    return False


def _min(a, b):
    return b if a is None or b < a else a


def _overlap(c: Fraction, h: Fraction, b: Fraction, r: Fraction) -> bool:
    return c - h < b + r and b - r < c + h


def _inside(c: Fraction, h: Fraction, b: Fraction, r: Fraction) -> bool:
    return b - r <= c - h and c + h <= b + r


@dataclass(frozen=True)
class IntervalSystem:
    """A finished (or partial) system. ``stage_sizes[n]`` is the number of
    intervals present after the first ``n`` points were processed, so stage
    ``n`` consists of ids ``0 .. stage_sizes[n] - 1``."""

    points: tuple[Fraction, ...]
    intervals: tuple[CenteredInterval, ...]
    stage_sizes: tuple[int, ...]

    def interval(self, gamma: int) -> CenteredInterval:
        return self.intervals[gamma]

    def reflect(self, gamma: int, x: Fraction) -> Fraction:
        return self.intervals[gamma].reflect(Fraction(x))

    def centers(self, stage: int | None = None) -> set[Fraction]:
        n = len(self.intervals) if stage is None else self.stage_sizes[stage]
        return {iv.center for iv in self.intervals[:n]}

    def centered_at(self) -> dict[Fraction, CenteredInterval]:
        return {iv.center: iv for iv in self.intervals}

    def to_json(self) -> dict:
        return {
            "points": [format_rational(p) for p in self.points],
            "stage_sizes": list(self.stage_sizes),
            "intervals": [
                {
                    "id": iv.id,
                    "center": format_rational(iv.center),
                    "radius": format_rational(iv.radius),
                    "stage": iv.stage,
                    "parent": iv.parent,
                }
                for iv in self.intervals
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "IntervalSystem":
        intervals = tuple(
            CenteredInterval(
                id=int(d["id"]),
                center=parse_rational(d["center"]),
                radius=parse_rational(d["radius"]),
                stage=int(d["stage"]),
                parent=None if d["parent"] is None else int(d["parent"]),
            )
            for d in data["intervals"]
        )
        return cls(
            points=tuple(parse_rational(p) for p in data["points"]),
            intervals=intervals,
            stage_sizes=tuple(int(s) for s in data["stage_sizes"]),
        )


class SystemBuilder:
    """Incremental construction, one enumerated point per stage.

    ``avoid`` is the set no interval endpoint may hit; it defaults to the
    points that will be added, and must contain every point passed to
    :meth:`add`.
    """

    def __init__(self, avoid: Iterable[Fraction]):
        self.avoid = frozenset(mpq(Fraction(a)) for a in avoid)
        self.points: list[Fraction] = []
        self.intervals: list[CenteredInterval] = []
        self.stage_sizes: list[int] = [0]
        self._centers: dict[Fraction, int] = {}
        # hot-loop copies of centers and radii as gmpy2 rationals
        self._c: list[mpq] = []
        self._r: list[mpq] = []
        # laminar forest: sibling lists sorted by left endpoint; None = roots
        self._kids: dict[int | None, list[int]] = {None: []}
        self._kid_lefts: dict[int | None, list[Fraction]] = {None: []}

    def _locate(self, c: Fraction, h: Fraction) -> tuple[bool, list[int]]:
        """Descend the forest with (c-h, c+h). Returns whether it can be
        placed as a new leaf, and the chain of containers (outermost first).
        """
        chain: list[int] = []
        node = None
        while True:
            kids = self._kids[node]
            lefts = self._kid_lefts[node]
            # siblings are disjoint, so only the one starting last before c+h
            # can overlap
            pos = bisect.bisect_left(lefts, c + h) - 1
            if pos < 0:
                return True, chain
            gid = kids[pos]
            b, r = self._c[gid], self._r[gid]
            if not _overlap(c, h, b, r):
                return True, chain
            if not _in_half(c, h, b, r):
                return False, chain
            chain.append(gid)
            node = gid

    def _room(self, a: Fraction) -> Fraction | None:
        """Largest h for which (a-h, a+h) alone could be placed; None when
        nothing bounds it. Only used to skip hopeless ladder candidates."""
        node = None
        bound = None
        while True:
            kids = self._kids[node]
            lefts = self._kid_lefts[node]
            pos = bisect.bisect_right(lefts, a) - 1
            if pos >= 0:
                gid = kids[pos]
                b, r = self._c[gid], self._r[gid]
                if b - r < a < b + r:
                    bound = min(r - abs(a - b), abs(a - b))
                    node = gid
                    continue
                bound = _min(bound, a - (b + r))
            if pos + 1 < len(kids):
                bound = _min(bound, lefts[pos + 1] - a)
            return bound

    def _orbit(self, c: Fraction, h: Fraction) -> list[tuple[Fraction, list[int]]] | None:
        """All images of (c-h, c+h) under products of container reflections,
        or None if some image cannot be placed or hits an avoided point."""
        seen = {c}
        queue = deque([c])
        found = []
        while queue:
            x = queue.popleft()
            if x - h in self.avoid or x + h in self.avoid:
                return None
            ok, chain = self._locate(x, h)
            if not ok:
                return None
            found.append((x, chain))
            for gid in chain:
                y = 2 * self._c[gid] - x
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
            if len(seen) > _MAX_IMAGES:
                raise SoundnessError("reflection orbit does not close up")
        return found

    def _insert(self, c: mpq, h: mpq, parent: int | None) -> None:
        iv = CenteredInterval(
            id=len(self.intervals),
            center=Fraction(int(c.numerator), int(c.denominator)),
            radius=Fraction(int(h.numerator), int(h.denominator)),
            stage=len(self.points),
            parent=parent,
        )
        self.intervals.append(iv)
        self._c.append(c)
        self._r.append(h)
        self._centers[iv.center] = iv.id
        self._kids[iv.id] = []
        self._kid_lefts[iv.id] = []
        lefts = self._kid_lefts[parent]
        pos = bisect.bisect_left(lefts, c - h)
        lefts.insert(pos, c - h)
        self._kids[parent].insert(pos, iv.id)

    def add(self, a: Fraction) -> list[int]:
        """Process the next enumerated point; returns the ids added."""
        a = Fraction(a)
        if a in self.points:
            raise InputError(f"duplicate point {format_rational(a)}")
        if a not in self.avoid:
            raise InputError(
                f"point {format_rational(a)} missing from the avoided set"
            )
        self.points.append(a)
        start = len(self.intervals)
        if a not in self._centers:
            h = mpq(_FIRST_RADIUS)
            room = self._room(mpq(a))
            for _ in range(_MAX_HALVINGS):
                if room is not None and h > room:
                    h /= 2
                    continue
                orbit = self._orbit(mpq(a), h)
                if orbit is not None:
                    break
                h /= 2
            else:
                raise SoundnessError(
                    f"no admissible radius found around {format_rational(a)}"
                )
            for x, chain in orbit:
                self._insert(x, h, chain[-1] if chain else None)
        self.stage_sizes.append(len(self.intervals))
        return list(range(start, len(self.intervals)))

    def system(self) -> IntervalSystem:
        return IntervalSystem(
            points=tuple(self.points),
            intervals=tuple(self.intervals),
            stage_sizes=tuple(self.stage_sizes),
        )


def build_system(points: Sequence[Fraction], prefix: int | None = None) -> IntervalSystem:
    """Run the staged construction over ``points`` in the given order.

    With ``prefix`` only the first ``prefix`` points are processed, but
    endpoints still avoid the whole list.
    """
    pts = [Fraction(p) for p in points]
    if not pts:
        raise InputError("need at least one point")
    if len(set(pts)) != len(pts):
        raise InputError("points must be distinct")
    builder = SystemBuilder(pts)
    for a in pts[: len(pts) if prefix is None else prefix]:
        builder.add(a)
    return builder.system()


def reflect(system: IntervalSystem, gamma: int, x: Fraction) -> Fraction:
    return system.reflect(gamma, x)


def check_system(system: IntervalSystem) -> list[str]:
    """Direct check of the five structural conditions; returns the list of
    problems found (empty when the system is sound).

    Every overlapping pair is examined; pairs are found by a sweep over left
    endpoints, which visits exactly the pairs whose open spans meet.
    """
    problems = []
    ivs = system.intervals
    avoid = {mpq(p) for p in system.points}
    rows = sorted(
        (mpq(iv.left), -mpq(iv.radius), mpq(iv.right), mpq(iv.center), iv.id)
        for iv in ivs
    )
    keyed = {(c, -nr) for _, nr, _, c, _ in rows}
    if len(keyed) != len(ivs):
        problems.append("duplicated interval")
    for i, (left, nr, right, c, gid) in enumerate(rows):
        r = -nr
        if r <= 0:
            problems.append(f"interval {gid}: non-positive radius")
        if left in avoid or right in avoid:
            problems.append(f"interval {gid}: endpoint in the point set")
        for left2, nr2, right2, c2, gid2 in rows[i + 1:]:
            if left2 >= right:
                break
            r2 = -nr2
            # sorted by (left, -radius): the earlier row is the outer one if
            # they nest at all
            if right2 > right:
                problems.append(f"intervals {gid},{gid2}: overlap without nesting")
                continue
            if not _in_half(c2, r2, c, r):
                problems.append(f"interval {gid2} straddles the center of {gid}")
                continue
            if (2 * c - c2, r2) not in keyed:
                problems.append(f"reflection of {gid2} in {gid} is missing")
    sizes = system.stage_sizes
    if sizes[0] != 0 or any(x > y for x, y in zip(sizes, sizes[1:])):
        problems.append("stages are not monotone")
    entered = {}
    for iv in ivs:
        entered.setdefault(iv.center, iv.id)
    for n, a in enumerate(system.points, start=1):
        gid = entered.get(a)
        if gid is None or gid >= sizes[n]:
            problems.append(f"stage {n}: point {format_rational(a)} is not a center")
    for iv in ivs:
        if not (iv.stage >= 1 and sizes[iv.stage - 1] <= iv.id < sizes[iv.stage]):
            problems.append(f"interval {iv.id}: stage label disagrees with stage sizes")
    return problems


@dataclass(frozen=True)
class AntisymmetricColoring:
    f: dict[Fraction, int]
    d: dict[Fraction, Fraction]

    def report(self, order: Sequence[Fraction]) -> list[dict]:
        return [
            {"point": format_rational(x), "color": self.f[x], "d": format_rational(self.d[x])}
            for x in order
        ]


def orbit_graph(system: IntervalSystem) -> dict[Fraction, set[Fraction]]:
    """x ~ 2b - x whenever x lies in an interval with center b != x and both
    points belong to the input set."""
    pts = sorted(system.points)
    members = set(pts)
    adj: dict[Fraction, set[Fraction]] = {x: set() for x in system.points}
    for iv in system.intervals:
        lo = bisect.bisect_right(pts, iv.left)
        hi = bisect.bisect_left(pts, iv.right)
        for x in pts[lo:hi]:
            if x != iv.center:
                y = 2 * iv.center - x
                if y in members:
                    adj[x].add(y)
                    adj[y].add(x)
    return adj


def two_color(order: Sequence[Fraction], adj: Mapping[Fraction, set[Fraction]]) -> dict[Fraction, int]:
    """BFS 2-coloring; the earliest vertex of each component in ``order``
    gets color 0. Raises SoundnessError on an odd cycle."""
    color: dict[Fraction, int] = {}
    for root in order:
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    raise SoundnessError(
                        f"odd cycle through {format_rational(x)} and {format_rational(y)}"
                    )
    return color


def color(system: IntervalSystem) -> AntisymmetricColoring:
    f = two_color(system.points, orbit_graph(system))
    by_center = system.centered_at()
    d = {}
    for x in system.points:
        iv = by_center.get(x)
        if iv is None:
            raise SoundnessError(f"point {format_rational(x)} is not a center")
        d[x] = min(iv.radius, Fraction(1))
    return AntisymmetricColoring(f=f, d=d)


@dataclass(frozen=True, order=True)
class Violation:
    x: Fraction
    h: Fraction

    def to_json(self) -> dict:
        return {"x": format_rational(self.x), "h": format_rational(self.h)}


def verify_antisymmetric(
    points: Iterable[Fraction],
    f: Mapping[Fraction, int],
    d: Mapping[Fraction, Fraction],
) -> list[Violation]:
    """Every (x, h) with 0 < h < d(x), x +- h in the set and equal colors."""
    pts = sorted(set(Fraction(p) for p in points))
    if not pts:
        return []
    # integer coordinates over a common denominator keep the O(n^2) scan cheap
    den = 1
    for p in pts:
        den = den * p.denominator // _gcd(den, p.denominator)
    scaled = [p.numerator * (den // p.denominator) for p in pts]
    index = {s: p for s, p in zip(scaled, pts)}
    dd = {s: d[p] * den for s, p in zip(scaled, pts)}
    ff = [f[p] for p in pts]
    out = []
    for i, u in enumerate(scaled):
        for j in range(i + 1, len(scaled)):
            v = scaled[j]
            if (u + v) % 2 or ff[i] != ff[j]:
                continue
            x = (u + v) // 2
            if x in index and (v - u) / Fraction(2) < dd[x]:
                out.append(Violation(index[x], Fraction(v - u, 2 * den)))
    out.sort()
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def random_points(rng: random.Random, size: int, bound: int = 10, max_den: int = 32) -> list[Fraction]:
    """``size`` distinct rationals in (-bound, bound) with denominators up to
    ``max_den``, in the order drawn."""
    out: list[Fraction] = []
    seen: set[Fraction] = set()
    while len(out) < size:
        q = rng.randint(1, max_den)
        p = rng.randint(-bound * q + 1, bound * q - 1)
        x = Fraction(p, q)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out
