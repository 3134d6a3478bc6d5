"""The parity-state broadcast channel.

One sender broadcasts to N receivers over a product of binary channels that
all share a per-transmission state s: s=0 leaves the bit alone, s=1 flips
it.  Before transmission t, a fresh word of N state bits is drawn uniformly;
its modulo-2 sum selects s, and receiver i is handed coordinate i of the
word alongside its channel output.  Alone, a receiver's coordinate says
nothing about s; decoding therefore hinges on the coordination value each
receiver feeds its decoder.

State sequences are uint8 arrays of shape (N, n): row i is receiver i's
state bits across the n transmissions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitops import as_bit_matrix, as_bits, bits_to_int, bitstring, int_to_bits, parity


def phi(word) -> int:
    """Channel-state selector: modulo-2 sum of one state word."""
    return parity(as_bits(word))


def phi_sequence(states) -> np.ndarray:
    """Per-transmission channel states for an (N, n) state matrix."""
    mat = as_bit_matrix(states)
    return np.bitwise_xor.reduce(mat, axis=0)


def apply_channel_bit(u: int, s: int) -> int:
    """One channel use: identity when s=0, bit flip when s=1 (i.e. u xor s)."""
    if u not in (0, 1) or s not in (0, 1):
        raise ValueError("channel input and state must be bits")
    return u ^ s


@dataclass(frozen=True)
class BroadcastCode:
    """Raw identity code: receiver i's message is sent as its n-bit expansion.

    Message sets are {0, ..., 2**message_bits[i] - 1}.  The decoding set for
    receiver i under coordination value gamma maps message j to the single
    word (bits of j) xor gamma, so decoding de-flips each position where
    gamma says the state was 1 and reads the bits back.  Decoding sets for
    distinct messages are disjoint because xor by gamma is a bijection.
    """

    N: int
    n: int
    message_bits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("at least 3 receivers are required")
        if self.n < 1:
            raise ValueError("block length must be >= 1")
        bits = self.message_bits or tuple([self.n] * self.N)
        if len(bits) != self.N or any(not 1 <= b <= self.n for b in bits):
            raise ValueError("per-receiver message bits must lie in 1..n")
        object.__setattr__(self, "message_bits", tuple(bits))

    def message_set_size(self, receiver: int) -> int:
        return 1 << self.message_bits[receiver]

    def rate(self, receiver: int) -> float:
        return self.message_bits[receiver] / self.n

    def encode(self, messages) -> np.ndarray:
        """Map a message tuple to the (N, n) matrix of channel inputs."""
        if len(messages) != self.N:
            raise ValueError(f"expected {self.N} messages, got {len(messages)}")
        rows = []
        for i, m in enumerate(messages):
            if not 0 <= int(m) < self.message_set_size(i):
                raise ValueError(f"message {m} outside receiver {i}'s message set")
            rows.append(int_to_bits(int(m), self.n))
        return np.stack(rows)

    def decoding_set(self, receiver: int, gamma, message: int) -> tuple[tuple[int, ...], ...]:
        """The words receiver i decodes to ``message`` under ``gamma`` (a singleton)."""
        g = as_bits(gamma, self.n)
        word = int_to_bits(message, self.n) ^ g
        return (tuple(int(b) for b in word),)

    def decode(self, receiver: int, received, gamma) -> int | None:
        """Message estimate, or None when the word lies in no decoding set."""
        r = as_bits(received, self.n)
        g = as_bits(gamma, self.n)
        m = bits_to_int(r ^ g)
        if m >= self.message_set_size(receiver):
            return None
        return m


@dataclass(frozen=True)
class ChannelOutput:
    """What the n channel uses deliver: all receiver streams plus state info.

    Receiver i observes only its own row of each matrix; ``receiver_view``
    returns exactly that pair.
    """

    streams: np.ndarray    # (N, n) received bits
    state_info: np.ndarray  # (N, n) state bits, row i delivered to receiver i

    def receiver_view(self, receiver: int) -> tuple[np.ndarray, np.ndarray]:
        return self.streams[receiver], self.state_info[receiver]


def transmit_block(code: BroadcastCode, messages, states) -> ChannelOutput:
    """Send a message tuple through n uses of the shared-state channel.

    At each transmission t every receiver's bit is acted on by the same
    state phi(states[:, t]).
    """
    mat = as_bit_matrix(states)
    if mat.shape != (code.N, code.n):
        raise ValueError(f"state matrix shape {mat.shape} does not match code ({code.N}, {code.n})")
    encoded = code.encode(messages)
    s = phi_sequence(mat)
    streams = encoded ^ s[None, :]
    return ChannelOutput(streams=streams, state_info=mat)


def random_states(N: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Fresh uniform state matrix of shape (N, n)."""
    return rng.integers(0, 2, size=(N, n), dtype=np.uint8)


def random_messages(code: BroadcastCode, rng: np.random.Generator) -> tuple[int, ...]:
    # drawn bitwise: message sets reach 2**64, past what integer draws support
    return tuple(bits_to_int(rng.integers(0, 2, size=code.message_bits[i]))
                 for i in range(code.N))


def transcript_lines(states, encoded, streams) -> list[str]:
    """Golden transcript serialization, one line per transmission.

    Format: ``t s_t x_1..x_N u_1..u_N y_1..y_N`` where the three bit groups
    are the state word, the encoded column and the received column at time
    t, each written as a concatenated bit string.
    """
    mat = as_bit_matrix(states)
    enc = as_bit_matrix(encoded, mat.shape)
    out = as_bit_matrix(streams, mat.shape)
    s = phi_sequence(mat)
    lines = []
    for t in range(mat.shape[1]):
        lines.append(f"{t} {int(s[t])} {bitstring(mat[:, t])} {bitstring(enc[:, t])} {bitstring(out[:, t])}")
    return lines
