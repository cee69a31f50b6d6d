import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tdlabel.codes import alphabetic_code, kraft_sum, nice_weights


def test_nice_weights_uniform_fixed_point():
    assert nice_weights([1, 1, 1, 1]) == [1, 1, 1, 1]


def test_nice_weights_spec_example():
    # (1,1,6): floor = 8/3, so (ceil 8/3, ceil 8/3, 6) = (3,3,6), total 12.
    out = nice_weights([1, 1, 6])
    assert out == [3, 3, 6]
    assert math.log2(12) - math.log2(3) <= math.log2(3) + 2 + 1e-9


def test_nice_weights_singleton():
    assert nice_weights([Fraction(7, 3)]) == [1]


def test_nice_weights_rejects_bad_input():
    with pytest.raises(ValueError):
        nice_weights([])
    with pytest.raises(ValueError):
        nice_weights([1, 0])


def _check_nice_bound(ws):
    out = nice_weights(ws)
    total_in = sum(Fraction(w) for w in ws)
    total_out = sum(out)
    for w_in, w_out in zip(ws, out):
        lhs = math.log2(total_out) - math.log2(w_out)
        cap = min(
            math.log2(len(ws)),
            math.log2(total_in) - math.log2(Fraction(w_in)),
        )
        assert lhs <= cap + 2 + 1e-9


@given(st.lists(st.fractions(min_value=Fraction(1, 1000), max_value=1000), min_size=1, max_size=40))
def test_nice_weights_bound_random(ws):
    _check_nice_bound(ws)


def test_nice_weights_scale_invariant():
    ws = [Fraction(3, 7), Fraction(12, 5), Fraction(1, 2)]
    assert nice_weights(ws) == nice_weights([w * 977 for w in ws])


def test_alphabetic_single_key():
    codes = alphabetic_code([5])
    assert codes == [type(codes[0])()] or len(codes[0]) == 0


def test_alphabetic_two_uniform():
    codes = alphabetic_code([1, 1])
    assert [c.bits() for c in codes] == ["0", "1"]


def _assert_code_contract(weights, codes):
    total = sum(weights)
    # +3 length bound against the Kraft ideal.
    for w, c in zip(weights, codes):
        assert len(c) <= math.log2(total) - math.log2(w) + 3 + 1e-9
    # Order preservation.
    for a, b in zip(codes, codes[1:]):
        assert a.lex_less(b)
    # Prefix-freeness, pairwise.
    for i in range(len(codes)):
        for j in range(len(codes)):
            if i != j:
                assert not codes[i].is_prefix_of(codes[j])
    assert kraft_sum(codes) <= 1


def test_alphabetic_spec_example():
    _assert_code_contract([8, 4, 4], alphabetic_code([8, 4, 4]))


@settings(max_examples=200)
@given(st.lists(st.integers(min_value=1, max_value=10**6), min_size=1, max_size=50))
def test_alphabetic_contract_random(weights):
    _assert_code_contract(weights, alphabetic_code(weights))


def test_alphabetic_rejects_nonpositive():
    with pytest.raises(ValueError):
        alphabetic_code([3, 0, 1])
    with pytest.raises(ValueError):
        alphabetic_code([])


def test_alphabetic_huge_weights_virtual_expansion():
    # Total weight far beyond anything materializable.
    weights = [10**30, 1, 10**27, 5]
    _assert_code_contract(weights, alphabetic_code(weights))


def test_alphabetic_thousand_random_vectors():
    rng = random.Random(20240)
    for _ in range(1000):
        k = rng.randint(1, 30)
        weights = [rng.randint(1, 10**6) for _ in range(k)]
        codes = alphabetic_code(weights)
        total = sum(weights)
        for w, c in zip(weights, codes):
            assert len(c) <= math.log2(total) - math.log2(w) + 3 + 1e-9
        for a, b in zip(codes, codes[1:]):
            assert a.lex_less(b)
