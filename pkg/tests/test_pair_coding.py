import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from antisym.errors import DomainError, ResourceError
from antisym.pair_coding import (
    TypeCode,
    brute_decompose,
    build_context,
    check_conditions,
    crossed_quadruples,
    exhaustive_check,
    is_initial_segment,
    reconstruct_union,
    surrogate,
    type_of,
)


@pytest.fixture(scope="module")
def ctx12():
    return build_context(12)


@pytest.fixture(scope="module")
def ctx8():
    return build_context(8)


def _pairs(found):
    return {frozenset((frozenset(a), frozenset(b))) for a, b in found}


def test_golden_first_color():
    assert build_context(2).color(0, 1) == 0


def test_colors_match_reference(ctx12, frozen):
    assert [[b, a, j] for (b, a), j in sorted(ctx12.c.items())] == frozen["pair_colors_12"]


def test_colors_increase_along_enumeration(ctx12):
    for a in range(12):
        row = [ctx12.color(b, a) for b in range(a)]
        assert row == sorted(set(row))


def test_conditions_hold(ctx12):
    assert check_conditions(ctx12) == []


def test_crossed_quadruples_absent(ctx12):
    checked, failures = crossed_quadruples(ctx12)
    assert checked > 0 and failures == []


def test_equal_fingerprints_exist_for_pairs(ctx12):
    by_type = {}
    for A in combinations(range(12), 2):
        by_type.setdefault(type_of(A, ctx12), []).append(A)
    assert any(len(v) > 1 for v in by_type.values())


def test_type_code_serialization(ctx8):
    t = type_of({0, 1, 2}, ctx8)
    assert t.size == 3 and len(t.pattern) == 3
    assert t.serialize() == "3:" + ",".join(str(ctx8.color(a, b)) for a, b in [(0, 1), (0, 2), (1, 2)])
    assert TypeCode(0, ()).serialize() == "0:"
    assert type_of(set(), ctx8).code != type_of({0}, ctx8).code


def test_brute_force_matches_reference(ctx8, frozen):
    ref = frozen["decomposable_unions_8"]
    for k in range(2, 6):
        for U in combinations(range(8), k):
            want = _pairs(ref.get(",".join(map(str, U)), []))
            assert _pairs(brute_decompose(U, ctx8)) == want, U


def test_reconstruction_matches_brute_force(ctx8):
    for mask in range(1 << 8):
        U = [i for i in range(8) if mask >> i & 1]
        brute = brute_decompose(U, ctx8)
        assert len(brute) <= 1
        rec = reconstruct_union(U, ctx8)
        assert (rec is None) == (not brute)
        if rec:
            assert rec == brute[0]


def test_worked_reconstruction(ctx12):
    assert reconstruct_union({0, 1, 2}, ctx12) == (frozenset({0, 1}), frozenset({0, 2}))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 14), st.data())
def test_equal_type_pairs_are_recovered(M, data):
    ctx = build_context(M)
    size = data.draw(st.integers(1, min(4, M - 1)))
    A = frozenset(data.draw(st.lists(st.integers(0, M - 2), min_size=size, max_size=size, unique=True)))
    # a partner with the same fingerprint, searched among sets of that size
    partners = [frozenset(B) for B in combinations(range(M), len(A)) if frozenset(B) != A and type_of(B, ctx) == type_of(A, ctx)]
    for B in partners[:3]:
        rec = reconstruct_union(A | B, ctx)
        assert rec is not None and {rec[0], rec[1]} == {A, B}
        assert is_initial_segment(A & B, A) and is_initial_segment(A & B, B)


def test_exhaustive_small():
    rep = exhaustive_check(build_context(7))
    assert rep.ok and rep.max_decompositions <= 1
    js = rep.to_json()
    assert {"initial_segment", "crossed_quadruples", "reconstruction", "unique_split"} <= set(js)


def test_initial_segment_helper():
    assert is_initial_segment({1, 2}, {1, 2, 5})
    assert not is_initial_segment({1, 5}, {1, 2, 5})


def test_range_and_resource_errors(ctx8):
    with pytest.raises(DomainError):
        type_of({8}, ctx8)
    with pytest.raises(ResourceError):
        brute_decompose(range(25), build_context(26))
    with pytest.raises(DomainError):
        build_context(0)


def test_custom_surrogates_validated():
    with pytest.raises(DomainError):
        build_context(2, r=[Fraction(1, 2), Fraction(1, 3)])
    ctx = build_context(3, r=[Fraction(5, 7), Fraction(-2, 3), Fraction(11, 5)])
    assert check_conditions(ctx) == []


def test_shuffled_enumerations():
    rng = random.Random(2)
    order = []
    for a in range(8):
        e = list(range(a))
        rng.shuffle(e)
        order.append(e)
    ctx = build_context(8, enum_order=order)
    assert check_conditions(ctx) == []
    with pytest.raises(DomainError):
        reconstruct_union({0, 1, 2}, ctx)
    assert exhaustive_check(ctx).ok


def test_surrogate_is_not_dyadic():
    assert all(surrogate(a).denominator == 3 for a in range(20))
