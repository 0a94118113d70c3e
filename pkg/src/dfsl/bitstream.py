"""Bit-granular reads over an immutable byte buffer.

The stream's first bit is the most significant bit of byte 0, and every field
is assembled MSB-first, so multi-byte fields come out big-endian regardless
of byte alignment.

Two addressing modes exist. Cursor-relative reads start at the cursor.
Positional reads (``@p`` and ``start ~ stop``) use significance indexing over
the whole stream: with ``W`` total bits, the first stream bit has index
``W - 1`` and the last has index ``0``, the way register diagrams number bits.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Union

from .errors import (
    DataIOError,
    InvalidCount,
    InvalidRange,
    PositionOutOfRange,
    StreamExhausted,
)

MAX_INT_BITS = 64


@dataclass(frozen=True)
class BitSource:
    data: bytes
    total_bits: int
    origin: str = "bytes"

    def __post_init__(self):
        if not 0 <= self.total_bits <= 8 * len(self.data):
            raise ValueError(f"total_bits {self.total_bits} does not fit in {len(self.data)} bytes")

    @classmethod
    def from_bytes(cls, data: bytes, origin: str = "bytes") -> "BitSource":
        data = bytes(data)
        return cls(data, 8 * len(data), origin)

    @classmethod
    def from_hex_literal(cls, value: int, hex_digit_count: int) -> "BitSource":
        """A stream exactly ``4 * hex_digit_count`` bits wide; leading zero nibbles count."""
        if hex_digit_count < 1:
            raise ValueError("hex_digit_count must be >= 1")
        if value < 0 or value >> (4 * hex_digit_count):
            raise ValueError(f"{value:#x} does not fit in {hex_digit_count} hex digits")
        bits = 4 * hex_digit_count
        nbytes = (bits + 7) // 8
        padded = value << (8 * nbytes - bits)
        return cls(padded.to_bytes(nbytes, "big"), bits, f"0x{value:0{hex_digit_count}x}")

    @classmethod
    def from_hex_string(cls, text: str) -> "BitSource":
        """Parse ``"9351"``, ``"0x9351"`` or ``"93 51"``; width comes from the digit count."""
        digits = "".join(text.split())
        if digits[:2].lower() == "0x":
            digits = digits[2:]
        if not digits:
            raise ValueError("empty hex string")
        try:
            value = int(digits, 16)
        except ValueError:
            raise ValueError(f"not a hex string: {text!r}") from None
        return cls.from_hex_literal(value, len(digits))

    @classmethod
    def from_file(cls, path: Union[str, os.PathLike]) -> "BitSource":
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise DataIOError(str(path), exc.strerror or str(exc)) from exc
        return cls(data, 8 * len(data), str(path))

    def bits_at(self, offset: int, width: int) -> int:
        """Unsigned integer formed by ``width`` bits starting at bit ``offset``."""
        if width < 1:
            raise InvalidCount(width)
        if offset < 0 or offset + width > self.total_bits:
            raise StreamExhausted(offset, width, self.total_bits)
        first = offset >> 3
        end = (offset + width + 7) >> 3
        chunk = int.from_bytes(self.data[first:end], "big")
        return (chunk >> (8 * end - offset - width)) & ((1 << width) - 1)

    def bit_string(self) -> str:
        if not self.total_bits:
            return ""
        return format(self.bits_at(0, self.total_bits), f"0{self.total_bits}b")


@dataclass(frozen=True)
class FieldBits:
    """A field read from a stream.

    ``value`` is an int for widths up to 64 bits; wider fields are returned as
    big-endian bytes, right-aligned in ``ceil(width / 8)`` bytes.
    """

    value: Union[int, bytes]
    offset_bits: int
    width_bits: int


def _field(source: BitSource, offset: int, width: int) -> FieldBits:
    raw = source.bits_at(offset, width)
    if width > MAX_INT_BITS:
        return FieldBits(raw.to_bytes((width + 7) // 8, "big"), offset, width)
    return FieldBits(raw, offset, width)


class BitCursor:
    """Moving read position over a :class:`BitSource`."""

    __slots__ = ("source", "position")

    def __init__(self, source: BitSource, position: int = 0):
        if not 0 <= position <= source.total_bits:
            raise PositionOutOfRange(position, source.total_bits)
        self.source = source
        self.position = position

    def __repr__(self) -> str:
        return f"BitCursor(position={self.position}, total_bits={self.source.total_bits})"

    @property
    def remaining(self) -> int:
        return self.source.total_bits - self.position

    # cursor-relative

    def peek_bits(self, count: int) -> FieldBits:
        if count < 1:
            raise InvalidCount(count)
        return _field(self.source, self.position, count)

    def read_bits(self, count: int) -> FieldBits:
        fb = self.peek_bits(count)
        self.position += count
        return fb

    def peek_bytes(self, count: int) -> FieldBits:
        if count < 1:
            raise InvalidCount(count)
        return self.peek_bits(8 * count)

    def read_bytes(self, count: int) -> FieldBits:
        if count < 1:
            raise InvalidCount(count)
        return self.read_bits(8 * count)

    # significance-indexed

    def _offset_of(self, position_index: int, count: int) -> int:
        total = self.source.total_bits
        if count < 1:
            raise InvalidCount(count)
        if not 0 <= position_index < total:
            raise PositionOutOfRange(position_index, total)
        offset = total - 1 - position_index
        if count > position_index + 1:
            raise StreamExhausted(offset, count, total)
        return offset

    def peek_bits_at(self, position_index: int, count: int = 1) -> FieldBits:
        return _field(self.source, self._offset_of(position_index, count), count)

    def read_bits_at(self, position_index: int, count: int = 1) -> FieldBits:
        """Read bits ``position_index`` down to ``position_index - count + 1``.

        The cursor moves to just past the field.
        """
        fb = self.peek_bits_at(position_index, count)
        self.position = fb.offset_bits + count
        return fb

    def peek_range(self, start: int, stop: int) -> FieldBits:
        if start < stop or stop < 0:
            raise InvalidRange(start, stop)
        return self.peek_bits_at(start, start - stop + 1)

    def read_range(self, start: int, stop: int) -> FieldBits:
        if start < stop or stop < 0:
            raise InvalidRange(start, stop)
        return self.read_bits_at(start, start - stop + 1)
