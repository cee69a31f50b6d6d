import pytest
from hypothesis import given, strategies as st

from tdlabel.bits import (
    BitLabel,
    BitReader,
    MalformedLabel,
    bookkeeping_bits,
    frame,
    gamma,
    gamma_decode,
    payload_bits,
    unframe,
)


def bl(s):
    return BitLabel.from_string(s)


def test_empty_label():
    assert len(BitLabel.EMPTY) == 0
    assert BitLabel.EMPTY == bl("")
    assert BitLabel.EMPTY + bl("1") == bl("1")


def test_concat_and_indexing():
    x = bl("0101") + bl("01")
    assert x.bits() == "010101"
    assert [x.bit(i) for i in range(6)] == [0, 1, 0, 1, 0, 1]
    assert x.prefix(3) == bl("010")
    assert x.drop(3) == bl("101")


def test_lex_order():
    assert bl("0").lex_less(bl("1"))
    assert bl("01").lex_less(bl("1"))
    assert bl("0").lex_less(bl("01"))  # proper prefix precedes
    assert not bl("01").lex_less(bl("01"))
    assert bl("0011").lex_less(bl("01"))


def test_prefix_relation():
    assert bl("01").is_prefix_of(bl("0110"))
    assert not bl("01").is_prefix_of(bl("0010"))
    assert bl("").is_prefix_of(bl("0"))
    assert bl("0110").common_prefix_len(bl("0101")) == 2


def test_last_one():
    assert bl("0100").last_one() == 1
    assert bl("0001").last_one() == 3
    assert bl("000").last_one() == -1


# gamma(x) encodes x+1; the codeword for 0 is "1".
def test_gamma_zero():
    assert gamma(0) == bl("1")


def test_gamma_one():
    # gamma(2): one 0 bit, then binary "10".
    assert gamma(1) == bl("010")


def test_gamma_four():
    # gamma(5): two 0 bits, then binary "101".
    assert gamma(4) == bl("00101")


@given(st.integers(min_value=0, max_value=10**9))
def test_gamma_roundtrip_and_length(x):
    code = gamma(x)
    assert len(code) == 2 * (x + 1).bit_length() - 1
    r = BitReader(code + bl("10110"))
    assert gamma_decode(r) == x
    assert r.pos == len(code)


def test_gamma_decode_truncated():
    with pytest.raises(MalformedLabel):
        gamma_decode(BitReader(bl("00")))
    with pytest.raises(MalformedLabel):
        gamma_decode(BitReader(bl("001")))


def test_frame_empty_list():
    assert frame([]) == bl("1")
    assert unframe(bl("1")) == []


def test_frame_single_empty_part():
    # gamma(2) . gamma(1) = "010" + "1".
    assert frame([BitLabel.EMPTY]) == bl("0101")
    assert unframe(bl("0101")) == [BitLabel.EMPTY]


def test_frame_two_parts_matches_definition():
    parts = [bl("10"), bl("0")]
    expected = gamma(2) + gamma(2) + gamma(1) + bl("10") + bl("0")
    assert frame(parts) == expected
    assert unframe(expected) == parts


def test_unframe_trailing_bits_rejected():
    with pytest.raises(MalformedLabel):
        unframe(frame([bl("10")]) + bl("0"))


def test_unframe_truncated_rejected():
    f = frame([bl("1011")])
    with pytest.raises(MalformedLabel):
        unframe(f.prefix(len(f) - 2))


parts_strategy = st.lists(
    st.builds(
        lambda n, v: BitLabel(n, v % (1 << n) if n else 0),
        st.integers(min_value=0, max_value=32),
        st.integers(min_value=0),
    ),
    max_size=64,
)


@given(parts_strategy)
def test_frame_roundtrip(parts):
    assert unframe(frame(parts)) == parts


@given(parts_strategy)
def test_frame_overhead_accounting(parts):
    f = frame(parts)
    assert len(f) == payload_bits(parts) + bookkeeping_bits(parts)
    assert bookkeeping_bits(parts) >= 1


def test_concat_associative():
    a, b, c = bl("01"), bl(""), bl("110")
    assert (a + b) + c == a + (b + c) == BitLabel.concat([a, b, c])


def test_json_roundtrip_spec_example():
    lab = BitLabel.from_json({"len": 10, "hex": "2a8"})
    assert lab.bits() == "0010101010"
    assert lab.to_json() == {"len": 10, "hex": "2a8"}


@given(st.integers(min_value=0, max_value=200), st.integers(min_value=0))
def test_json_roundtrip_random(n, v):
    lab = BitLabel(n, v % (1 << n) if n else 0)
    assert BitLabel.from_json(lab.to_json()) == lab


def test_json_bad_padding_rejected():
    with pytest.raises(MalformedLabel):
        BitLabel.from_json({"len": 2, "hex": "1"})  # nonzero padding bits
