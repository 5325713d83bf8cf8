"""Exact rationals, the fixed dyadic interval enumeration, and injective
natural-number encoders.

Rationals are :class:`fractions.Fraction` throughout; they are always in
lowest terms with a positive denominator, which is exactly the invariant the
rest of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import DomainError, InputError

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction; no decimals, no floats."""
    s = text.strip()
    if not s:
        raise InputError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise InputError(f"not a rational literal: {text!r}") from None
    if q == 0:
        raise InputError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction | int) -> str:
    """Canonical ``"p/q"`` form, with ``q`` omitted when it is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- integer pairings -------------------------------------------------------

def zigzag(k: int) -> int:
    """Map Z onto N as 0, 1, -1, 2, -2, ... -> 0, 1, 2, 3, 4, ..."""
    return 2 * k - 1 if k > 0 else -2 * k


def unzigzag(z: int) -> int:
    if z < 0:
        raise DomainError(f"zigzag code must be natural, got {z}")
    return (z + 1) // 2 if z % 2 else -(z // 2)


def cantor_pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise DomainError(f"cantor_pair needs naturals, got ({a}, {b})")
    s = a + b
    return s * (s + 1) // 2 + b


def cantor_unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise DomainError(f"cantor_unpair needs a natural, got {n}")
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def pair_codes(a: int, b: int) -> int:
    """Injective pairing of two codes; inverse is :func:`unpair_codes`."""
    return cantor_pair(a, b)


def unpair_codes(n: int) -> tuple[int, int]:
    return cantor_unpair(n)


# -- dyadic intervals -------------------------------------------------------

@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The open interval (k/2^m, (k+1)/2^m)."""

    m: int
    k: int

    def __post_init__(self):
        if self.m < 0:
            raise DomainError(f"dyadic depth must be >= 0, got {self.m}")

    @property
    def index(self) -> int:
        return cantor_pair(self.m, zigzag(self.k))

    @property
    def left(self) -> Fraction:
        return Fraction(self.k, 2 ** self.m)

    @property
    def right(self) -> Fraction:
        return Fraction(self.k + 1, 2 ** self.m)

    def contains(self, x: Fraction) -> bool:
        scaled = x * 2 ** self.m
        return self.k < scaled < self.k + 1


def dyadic_index(m: int, k: int) -> DyadicInterval:
    return DyadicInterval(m, k)


def dyadic_from_index(j: int) -> DyadicInterval:
    m, z = cantor_unpair(j)
    return DyadicInterval(m, unzigzag(z))


# -- sequence encoders ------------------------------------------------------

def _tree(seq: Sequence[int]) -> int:
    if not seq:
        return 0
    if len(seq) == 1:
        return seq[0]
    mid = len(seq) // 2
    return cantor_pair(_tree(seq[:mid]), _tree(seq[mid:]))


def _untree(code: int, n: int, out: list[int]) -> None:
    if n == 0:
        if code != 0:
            raise InputError("trailing data in an empty sequence code")
    elif n == 1:
        out.append(code)
    else:
        a, b = cantor_unpair(code)
        _untree(a, n // 2, out)
        _untree(b, n - n // 2, out)


def encode_nat_sequence(seq: Sequence[int]) -> int:
    """Length-prefixed Cantor pairing; the empty sequence codes 0.

    Elements are paired along a balanced tree whose shape is fixed by the
    length, so the code has about as many bits as the whole sequence rather
    than doubling once per element.
    """
    seq = list(seq)
    if any(v < 0 for v in seq):
        raise DomainError("sequence entries must be naturals")
    return cantor_pair(len(seq), _tree(seq))


def decode_nat_sequence(code: int) -> list[int]:
    n, body = cantor_unpair(code)
    out: list[int] = []
    _untree(body, n, out)
    return out


def encode_rational(x: Fraction) -> int:
    sign = 1 if x < 0 else 0
    return cantor_pair(sign, cantor_pair(abs(x.numerator), x.denominator - 1))


def decode_rational(code: int) -> Fraction:
    sign, rest = cantor_unpair(code)
    p, q1 = cantor_unpair(rest)
    if sign > 1 or (sign == 1 and p == 0):
        raise InputError(f"{code} is not a rational code")
    x = Fraction(p, q1 + 1)
    if x.denominator != q1 + 1:
        raise InputError(f"{code} is not a rational code (not in lowest terms)")
    return -x if sign else x


def encode_rational_string(seq: Iterable[Fraction]) -> int:
    """Injective code for a finite sequence of rationals."""
    return encode_nat_sequence([encode_rational(Fraction(x)) for x in seq])


def decode_rational_string(code: int) -> list[Fraction]:
    return [decode_rational(c) for c in decode_nat_sequence(code)]
