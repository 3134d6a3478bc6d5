"""Small helpers for binary words stored as uint8 arrays."""

from __future__ import annotations

import numpy as np


def as_bits(values, length: int | None = None) -> np.ndarray:
    """Coerce a sequence of 0/1 values to a uint8 vector, validating entries."""
    arr = np.asarray(values, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d bit vector, got shape {arr.shape}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit vector entries must be 0 or 1")
    if length is not None and arr.size != length:
        raise ValueError(f"expected {length} bits, got {arr.size}")
    return arr


def as_bit_matrix(values, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce to a 2-d uint8 matrix of bits."""
    arr = np.asarray(values, dtype=np.uint8)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d bit matrix, got shape {arr.shape}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit matrix entries must be 0 or 1")
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    return arr


def parity(bits) -> int:
    """Modulo-2 sum of a bit vector."""
    return int(np.bitwise_xor.reduce(np.asarray(bits, dtype=np.uint8)))


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Binary expansion of ``value``, most significant bit first."""
    if not 0 <= value < (1 << width):
        raise ValueError(f"value {value} does not fit in {width} bits")
    if width <= 62:  # beyond this the shifts overflow int64
        return ((value >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    """Inverse of :func:`int_to_bits` (most significant bit first)."""
    out = 0
    for b in np.asarray(bits, dtype=np.uint8):
        out = (out << 1) | int(b)
    return out


def bitstring(bits) -> str:
    return "".join(str(int(b)) for b in np.asarray(bits).ravel())


def all_words(width: int):
    """Iterate every binary word of the given width as a uint8 vector."""
    for value in range(1 << width):
        yield int_to_bits(value, width)
