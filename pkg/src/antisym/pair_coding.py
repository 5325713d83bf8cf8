"""Pair coloring of a finite index universe, the order-type fingerprint of
finite index sets, and recovery of an equal-fingerprint pair from its union.

Index ``alpha`` in ``0 .. M-1`` carries the rational surrogate point
``r_alpha = alpha + 1/3``; denominators divisible by 3 never land on a dyadic
endpoint. For ``beta < alpha`` the color ``c(beta, alpha)`` is the least
dyadic interval index that

1. exceeds every color already given along ``alpha``'s enumeration,
2. contains ``r_beta``,
3. misses ``r_alpha``,
4. misses ``r_xi`` for every ``xi`` enumerated before ``beta``.

The enumeration of each ``alpha`` is the increasing one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .errors import DomainError, ResourceError, SoundnessError
from .foundations import (
    DyadicInterval,
    dyadic_from_index,
    encode_nat_sequence,
    format_rational,
)

BRUTE_LIMIT = 24


@dataclass(frozen=True, order=True)
class TypeCode:
    """Isomorphism type of ``(A; <, c)``: size plus the colors of all pairs
    under the increasing enumeration, in lexicographic pair order."""

    size: int
    pattern: tuple[int, ...]

    def serialize(self) -> str:
        return f"{self.size}:" + ",".join(map(str, self.pattern))

    @property
    def code(self) -> int:
        return encode_nat_sequence([self.size, *self.pattern])

    def __str__(self):
        return self.serialize()


@dataclass
class CodingContext:
    M: int
    r: tuple[Fraction, ...]
    enum_order: tuple[tuple[int, ...], ...]
    c: dict[tuple[int, int], int]
    _types: dict[frozenset, TypeCode] = field(default_factory=dict, repr=False, compare=False)

    def color(self, beta: int, alpha: int) -> int:
        return self.c[beta, alpha]

    def interval(self, beta: int, alpha: int) -> DyadicInterval:
        return dyadic_from_index(self.c[beta, alpha])

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "r": [format_rational(x) for x in self.r],
            "c": [[b, a, j] for (b, a), j in sorted(self.c.items(), key=lambda t: (t[0][1], t[0][0]))],
        }


def surrogate(alpha: int) -> Fraction:
    return alpha + Fraction(1, 3)


def build_context(
    M: int,
    r: Sequence[Fraction] | None = None,
    enum_order: Sequence[Sequence[int]] | None = None,
) -> CodingContext:
    """Greedy least-index coloring. ``r`` and ``enum_order`` default to the
    surrogates ``alpha + 1/3`` and increasing enumerations; custom ones must
    be distinct non-dyadic rationals and permutations of ``range(alpha)``."""
    if M < 1:
        raise DomainError(f"universe size must be >= 1, got {M}")
    if r is None:
        r = tuple(surrogate(a) for a in range(M))
    else:
        r = tuple(Fraction(x) for x in r)
        d = [x.denominator for x in r]
        if len(r) != M or len(set(r)) != M or any(q & (q - 1) == 0 for q in d):
            raise DomainError("surrogates must be M distinct non-dyadic rationals")
    if enum_order is None:
        enum_order = tuple(tuple(range(a)) for a in range(M))
    else:
        enum_order = tuple(tuple(e) for e in enum_order)
        if len(enum_order) != M or any(sorted(e) != list(range(a)) for a, e in enumerate(enum_order)):
            raise DomainError("each enumeration must be a permutation of its predecessors")
    c: dict[tuple[int, int], int] = {}
    for alpha in range(M):
        prev = -1
        earlier: list[int] = []
        for beta in enum_order[alpha]:
            j = prev + 1
            while True:
                iv = dyadic_from_index(j)
                if (
                    iv.contains(r[beta])
                    and not iv.contains(r[alpha])
                    and not any(iv.contains(r[xi]) for xi in earlier)
                ):
                    break
                j += 1
            c[beta, alpha] = j
            prev = j
            earlier.append(beta)
    return CodingContext(M=M, r=r, enum_order=enum_order, c=c)


def check_conditions(ctx: CodingContext) -> list[str]:
    """Recheck the four defining conditions of the pair coloring."""
    problems = []
    for alpha in range(ctx.M):
        enum = ctx.enum_order[alpha]
        if sorted(enum) != list(range(alpha)):
            problems.append(f"enumeration of {alpha} is not a permutation of its predecessors")
        for i, beta in enumerate(enum):
            j = ctx.c[beta, alpha]
            iv = dyadic_from_index(j)
            if any(j <= ctx.c[g, alpha] for g in enum[:i]):
                problems.append(f"c({beta},{alpha}) does not increase along the enumeration")
            if not iv.contains(ctx.r[beta]):
                problems.append(f"I_c({beta},{alpha}) misses r_{beta}")
            if iv.contains(ctx.r[alpha]):
                problems.append(f"I_c({beta},{alpha}) contains r_{alpha}")
            for xi in enum[:i]:
                if iv.contains(ctx.r[xi]):
                    problems.append(f"I_c({beta},{alpha}) contains earlier r_{xi}")
    return problems


def _check_range(A: Iterable[int], ctx: CodingContext) -> list[int]:
    s = sorted(set(A))
    if s and (s[0] < 0 or s[-1] >= ctx.M):
        raise DomainError(f"index set {s} outside 0..{ctx.M - 1}")
    return s


def type_of(A: Iterable[int], ctx: CodingContext) -> TypeCode:
    key = frozenset(A)
    tc = ctx._types.get(key)
    if tc is None:
        s = _check_range(key, ctx)
        tc = TypeCode(len(s), tuple(ctx.c[a, b] for a, b in combinations(s, 2)))
        ctx._types[key] = tc
    return tc


def is_initial_segment(part: Iterable[int], whole: Iterable[int]) -> bool:
    w = sorted(whole)
    p = set(part)
    return set(w[: len(p)]) == p


def _smallest_common_dyadic(x: Fraction, y: Fraction) -> DyadicInterval | None:
    if int(x // 1) != int(y // 1):
        return None
    m = 0
    while True:
        kx = int((x * 2 ** (m + 1)) // 1)
        ky = int((y * 2 ** (m + 1)) // 1)
        if kx != ky:
            return DyadicInterval(m, int((x * 2 ** m) // 1))
        m += 1


def _exact_partner(u: int, pool: Sequence[int], U: Sequence[int], ctx: CodingContext) -> int | None:
    """The v in pool whose r_v shares with r_u a dyadic interval that holds
    no other surrogate of U. At most one such v exists."""
    for v in pool:
        if v == u:
            continue
        iv = _smallest_common_dyadic(ctx.r[u], ctx.r[v])
        if iv is None:
            continue
        if not any(iv.contains(ctx.r[w]) for w in U if w != u and w != v):
            return v
    return None


def reconstruct_union(U: Iterable[int], ctx: CodingContext) -> tuple[frozenset, frozenset] | None:
    """Recover the unordered pair {A, B}, A != B, F(A) = F(B), A | B = U.

    With m = max U assigned to B and a candidate m' for max(A - B):

    * the common part is X = {x < m' : c(x, m') = c(x, m)};
    * the rest splits into pairs {x, x'} that alone share a dyadic interval;
    * in each pair the element going with m satisfies c(x, m) = c(x', m').

    Every candidate m' is tried and the survivors are checked; two different
    survivors would contradict uniqueness and raise SoundnessError. The
    result is returned as (smaller-max set, larger-max set).

    The pair matching relies on each I_c(beta, alpha) missing every r_xi with
    xi < beta, so only increasing enumerations are accepted.
    """
    if any(e != tuple(range(a)) for a, e in enumerate(ctx.enum_order)):
        raise DomainError("union reconstruction needs increasing enumerations")
    Us = _check_range(U, ctx)
    if len(Us) < 2:
        return None
    m = Us[-1]
    c = ctx.c
    found = set()
    for m2 in Us[:-1]:
        X = [x for x in Us if x < m2 and c[x, m2] == c[x, m]]
        rest = [x for x in Us if x not in X and x != m and x != m2]
        if len(rest) % 2:
            continue
        Y, Z = [m2], [m]
        left = set(rest)
        ok = True
        for u in rest:
            if u not in left:
                continue
            v = _exact_partner(u, sorted(left), Us, ctx)
            if v is None:
                ok = False
                break
            left -= {u, v}
            # u with m (in Z) and v with m' (in Y), or the other way round
            z_u = v < m2 and c[u, m] == c[v, m2]
            z_v = u < m2 and c[v, m] == c[u, m2]
            if z_u == z_v:
                ok = False
                break
            if z_u:
                Z.append(u)
                Y.append(v)
            else:
                Z.append(v)
                Y.append(u)
        if not ok:
            continue
        A = frozenset(X) | frozenset(Y)
        B = frozenset(X) | frozenset(Z)
        if A != B and A | B == frozenset(Us) and type_of(A, ctx) == type_of(B, ctx):
            found.add((A, B))
    if len(found) > 1:
        raise SoundnessError(f"union {Us} decomposes in more than one way: {sorted(map(_fmt_pair, found))}")
    return next(iter(found)) if found else None


def _fmt_pair(p):
    return tuple(sorted(p[0])), tuple(sorted(p[1]))


def _canonical_pair(A: frozenset, B: frozenset) -> tuple[frozenset, frozenset]:
    """Order an unordered pair as (set with smaller max, set with larger max)."""
    ka, kb = sorted(A, reverse=True), sorted(B, reverse=True)
    return (A, B) if ka < kb else (B, A)


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _bits(mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def brute_decompose(
    U: Iterable[int],
    ctx: CodingContext,
    type_fn: Callable[[frozenset], object] | None = None,
) -> list[tuple[frozenset, frozenset]]:
    """All unordered pairs {A, B} with A != B, A | B = U, F(A) = F(B), by
    grouping every subset of U by fingerprint."""
    Us = _check_range(U, ctx)
    if len(Us) > BRUTE_LIMIT:
        raise ResourceError(f"|U| = {len(Us)} exceeds the brute-force bound {BRUTE_LIMIT}")
    full = 0
    for x in Us:
        full |= 1 << x
    fn = type_fn or (lambda s: type_of(s, ctx))
    groups: dict[object, list[int]] = {}
    for sub in _submasks(full):
        groups.setdefault(fn(_bits(sub)), []).append(sub)
    return _pairs_from_groups(groups, full)


def _pairs_from_groups(groups, full: int) -> list[tuple[frozenset, frozenset]]:
    out = []
    for members in groups.values():
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if a | b == full:
                    out.append(_canonical_pair(_bits(a), _bits(b)))
    out.sort(key=_fmt_pair)
    return out


@dataclass
class ExhaustiveReport:
    M: int
    condition_problems: list[str]
    initial_segment_pairs_checked: int
    initial_segment_failures: list
    crossed_quadruples_checked: int
    crossed_quadruple_failures: list
    unions_checked: int
    max_decompositions: int
    unique_split_failures: list
    reconstruct_disagreements: list
    equal_type_pairs: int

    @property
    def ok(self) -> bool:
        return not (
            self.condition_problems
            or self.initial_segment_failures
            or self.crossed_quadruple_failures
            or self.unique_split_failures
            or self.reconstruct_disagreements
        )

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "conditions": {"problems": self.condition_problems},
            "initial_segment": {"pairs_checked": self.initial_segment_pairs_checked, "failures": self.initial_segment_failures},
            "crossed_quadruples": {"quadruples_checked": self.crossed_quadruples_checked, "failures": self.crossed_quadruple_failures},
            "unique_split": {
                "unions_checked": self.unions_checked,
                "max_decompositions": self.max_decompositions,
                "failures": self.unique_split_failures,
            },
            "reconstruction": {"unions_checked": self.unions_checked, "disagreements": self.reconstruct_disagreements},
            "equal_type_pairs": self.equal_type_pairs,
        }


def crossed_quadruples(ctx: CodingContext) -> tuple[int, list]:
    """Quadruples beta != beta', max(beta, beta') < min(alpha, alpha') with
    c(beta, alpha) = c(beta', alpha') and c(beta', alpha) = c(beta, alpha')."""
    c = ctx.c
    checked = 0
    bad = []
    M = ctx.M
    for b1 in range(M):
        for b2 in range(M):
            if b1 == b2:
                continue
            lo = max(b1, b2) + 1
            for a1 in range(lo, M):
                for a2 in range(lo, M):
                    checked += 1
                    if c[b1, a1] == c[b2, a2] and c[b2, a1] == c[b1, a2]:
                        bad.append([b1, b2, a1, a2])
    return checked, bad


def exhaustive_check(ctx: CodingContext, initial_segment_max: int = 4) -> ExhaustiveReport:
    """Every structural check on the fingerprint at the context's full size."""
    M = ctx.M
    types = [type_of(_bits(mask), ctx) for mask in range(1 << M)]

    groups: dict[TypeCode, list[int]] = {}
    for mask, t in enumerate(types):
        groups.setdefault(t, []).append(mask)

    segment_checked = 0
    segment_bad = []
    equal_pairs = 0
    for t, members in groups.items():
        if len(members) > 1:
            equal_pairs += len(members) * (len(members) - 1) // 2
        if t.size > initial_segment_max:
            continue
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                segment_checked += 1
                A, B = _bits(a), _bits(b)
                if not (is_initial_segment(A & B, A) and is_initial_segment(A & B, B)):
                    segment_bad.append([sorted(A), sorted(B)])

    q_checked, q_bad = crossed_quadruples(ctx)

    increasing = all(e == tuple(range(a)) for a, e in enumerate(ctx.enum_order))
    unions = 0
    best = 0
    pc_bad = []
    disagree = []
    for full in range(1 << M):
        local: dict[TypeCode, list[int]] = {}
        for sub in _submasks(full):
            local.setdefault(types[sub], []).append(sub)
        pairs = _pairs_from_groups(local, full)
        unions += 1
        best = max(best, len(pairs))
        if len(pairs) > 1:
            pc_bad.append([_fmt_pair(p) for p in pairs])
        if not increasing:
            continue
        U = _bits(full)
        try:
            rec = reconstruct_union(U, ctx)
        except SoundnessError as exc:
            disagree.append({"U": sorted(U), "error": str(exc)})
            continue
        expect = pairs[0] if len(pairs) == 1 else None
        if len(pairs) <= 1 and rec != expect:
            disagree.append({
                "U": sorted(U),
                "reconstructed": None if rec is None else _fmt_pair(rec),
                "brute": None if expect is None else _fmt_pair(expect),
            })
    return ExhaustiveReport(
        M=M,
        condition_problems=check_conditions(ctx),
        initial_segment_pairs_checked=segment_checked,
        initial_segment_failures=segment_bad,
        crossed_quadruples_checked=q_checked,
        crossed_quadruple_failures=q_bad,
        unions_checked=unions,
        max_decompositions=best,
        unique_split_failures=pc_bad,
        reconstruct_disagreements=disagree,
        equal_type_pairs=equal_pairs,
    )
