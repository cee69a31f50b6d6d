"""Bit strings, Elias gamma codes, and self-delimiting multipart frames.

A label is an arbitrary-length bit string.  Multipart labels bundle several
bit strings into one self-delimiting string: the part count and every part
length are written as gamma codes in front of the payload, so a decoder can
recover exactly the original list of parts.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Sequence


class MalformedLabel(ValueError):
    """Raised when a bit stream does not parse as the structure it claims."""


class BitLabel:
    """An immutable bit string.

    Bits are indexed from 0 (leftmost / most significant).  Internally the
    string is a pair (length, integer value), so concatenation and prefix
    extraction are plain shifts.
    """

    __slots__ = ("_n", "_v", "_h")

    EMPTY: "BitLabel"

    def __init__(self, nbits: int = 0, value: int = 0):
        if nbits < 0:
            raise ValueError("negative bit length")
        if value < 0 or value >> nbits:
            raise ValueError("value does not fit in %d bits" % nbits)
        self._n = nbits
        self._v = value
        self._h = hash((nbits, value))

    @classmethod
    def from_string(cls, s: str) -> "BitLabel":
        if s and set(s) - {"0", "1"}:
            raise ValueError("not a bit string: %r" % s)
        return cls(len(s), int(s, 2) if s else 0)

    @classmethod
    def from_uint(cls, d: int) -> "BitLabel":
        """Binary representation of d >= 0 in ceil(log2(d+1)) bits (0 -> empty)."""
        if d < 0:
            raise ValueError("negative integer")
        return cls(d.bit_length(), d)

    def to_uint(self) -> int:
        """Read the whole string as an unsigned integer (empty -> 0)."""
        return self._v

    @property
    def nbits(self) -> int:
        return self._n

    def __len__(self) -> int:
        return self._n

    def __bool__(self) -> bool:
        return self._n > 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitLabel)
            and self._n == other._n
            and self._v == other._v
        )

    def __hash__(self) -> int:
        return self._h

    def __add__(self, other: "BitLabel") -> "BitLabel":
        return BitLabel(self._n + other._n, (self._v << other._n) | other._v)

    @classmethod
    def concat(cls, parts: Iterable["BitLabel"]) -> "BitLabel":
        n, v = 0, 0
        for p in parts:
            n += p._n
            v = (v << p._n) | p._v
        return cls(n, v)

    def bit(self, i: int) -> int:
        if not 0 <= i < self._n:
            raise IndexError("bit index out of range")
        return (self._v >> (self._n - 1 - i)) & 1

    def prefix(self, nbits: int) -> "BitLabel":
        if not 0 <= nbits <= self._n:
            raise IndexError("prefix longer than label")
        return BitLabel(nbits, self._v >> (self._n - nbits))

    def drop(self, nbits: int) -> "BitLabel":
        """The suffix after removing the first nbits bits."""
        if not 0 <= nbits <= self._n:
            raise IndexError("cannot drop more bits than present")
        rem = self._n - nbits
        return BitLabel(rem, self._v & ((1 << rem) - 1))

    def is_prefix_of(self, other: "BitLabel") -> bool:
        return self._n <= other._n and other._v >> (other._n - self._n) == self._v

    def lex_less(self, other: "BitLabel") -> bool:
        """Strict lexicographic order; a proper prefix precedes its extensions."""
        m = min(self._n, other._n)
        a = self._v >> (self._n - m)
        b = other._v >> (other._n - m)
        if a != b:
            return a < b
        return self._n < other._n

    def common_prefix_len(self, other: "BitLabel") -> int:
        m = min(self._n, other._n)
        a = self._v >> (self._n - m)
        b = other._v >> (other._n - m)
        x = a ^ b
        return m - x.bit_length()

    def last_one(self) -> int:
        """Index of the last 1-bit, or -1 if the string is all zeros."""
        if self._v == 0:
            return -1
        low = self._v & -self._v
        return self._n - low.bit_length()

    def bits(self) -> str:
        return format(self._v, "0%db" % self._n) if self._n else ""

    def __repr__(self) -> str:
        return "BitLabel(%r)" % self.bits()

    def __iter__(self) -> Iterator[int]:
        for i in range(self._n):
            yield (self._v >> (self._n - 1 - i)) & 1

    def to_json(self) -> dict:
        """Hex serialization; bit 0 is the MSB of the first hex digit."""
        ndigits = (self._n + 3) // 4
        pad = 4 * ndigits - self._n
        return {"len": self._n, "hex": format(self._v << pad, "0%dx" % ndigits) if ndigits else ""}

    @classmethod
    def from_json(cls, obj: dict) -> "BitLabel":
        n = obj["len"]
        h = obj["hex"]
        if len(h) != (n + 3) // 4:
            raise MalformedLabel("hex digit count does not match bit length")
        v = int(h, 16) if h else 0
        pad = 4 * len(h) - n
        if v & ((1 << pad) - 1):
            raise MalformedLabel("nonzero padding bits")
        return cls(n, v >> pad)


BitLabel.EMPTY = BitLabel()


class BitReader:
    """Sequential reader over a BitLabel."""

    __slots__ = ("label", "pos")

    def __init__(self, label: BitLabel, pos: int = 0):
        self.label = label
        self.pos = pos

    @property
    def remaining(self) -> int:
        return len(self.label) - self.pos

    def at_end(self) -> bool:
        return self.pos == len(self.label)

    def read_bit(self) -> int:
        if self.pos >= len(self.label):
            raise MalformedLabel("read past end of label")
        b = self.label.bit(self.pos)
        self.pos += 1
        return b

    def read_label(self, nbits: int) -> BitLabel:
        if nbits < 0 or self.pos + nbits > len(self.label):
            raise MalformedLabel("read past end of label")
        out = self.label.drop(self.pos).prefix(nbits)
        self.pos += nbits
        return out

    def read_uint(self, nbits: int) -> int:
        return self.read_label(nbits).to_uint()


def gamma(x: int) -> BitLabel:
    """Gamma codeword for the nonnegative integer x, encoded as gamma(x+1).

    gamma(y) for y >= 1 is floor(log2 y) zero bits followed by the binary
    representation of y, so the codeword here has length 2*floor(log2(x+1))+1.
    """
    if x < 0:
        raise ValueError("gamma encodes nonnegative integers")
    y = x + 1
    nbits = 2 * y.bit_length() - 1
    return BitLabel(nbits, y)


def gamma_decode(reader: BitReader) -> int:
    """Inverse of gamma; consumes exactly one codeword from the stream."""
    zeros = 0
    while True:
        if reader.at_end():
            raise MalformedLabel("gamma code truncated in zero run")
        if reader.read_bit():
            break
        zeros += 1
    y = (1 << zeros) | reader.read_uint(zeros)
    return y - 1


def frame(parts: Sequence[BitLabel]) -> BitLabel:
    """Self-delimiting encoding of a list of bit strings.

    Layout: gamma(p+1), gamma(|s_1|+1), ..., gamma(|s_p|+1), s_1, ..., s_p.
    """
    pieces = [gamma(len(parts))]
    pieces.extend(gamma(len(s)) for s in parts)
    pieces.extend(parts)
    return BitLabel.concat(pieces)


def read_frame(reader: BitReader) -> List[BitLabel]:
    """Consume one frame from the stream and return its parts."""
    p = gamma_decode(reader)
    lens = [gamma_decode(reader) for _ in range(p)]
    return [reader.read_label(n) for n in lens]


def unframe(label: BitLabel) -> List[BitLabel]:
    """Decode a frame, insisting that it spans the whole label."""
    reader = BitReader(label)
    parts = read_frame(reader)
    if not reader.at_end():
        raise MalformedLabel("trailing bits after frame")
    return parts


def payload_bits(parts: Sequence[BitLabel]) -> int:
    return sum(len(s) for s in parts)


def bookkeeping_bits(parts: Sequence[BitLabel]) -> int:
    return len(frame(parts)) - payload_bits(parts)
