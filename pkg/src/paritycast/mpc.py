"""Classical conferencing: secure multi-party modulo summation.

Two signalling strategies let the receivers learn each transmission's
channel state without surrendering their own state bits to a coalition of
up to N-2 colluders:

* per-use summation ("strategy I"): run the share-passing modulo-sum
  protocol once per transmission;
* zero-sum masking ("strategy II"): run it once on fresh coins to endow the
  receivers with zero-sum randomness (r_1, ..., r_N), then have everyone
  broadcast their state bits masked by their reusable r_i.

Receivers are 0-based.  Arithmetic is modulo ``modulus`` (2 everywhere in
this package; the share algebra itself works for any modulus).  Pairwise
channels among the first N-1 receivers are the ones that require key setup;
deliveries to the last receiver ride the plain forward chain.  All
point-to-point deliveries are private to their recipient.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bitops import as_bit_matrix
from .errors import SetupError
from .ledger import ComplexityLedger
from .transcript import ProtocolTranscript


def _value_width(modulus: int) -> int:
    return max(1, (modulus - 1).bit_length())


def _encode_value(value: int, modulus: int) -> tuple[int, ...]:
    width = _value_width(modulus)
    return tuple((value >> (width - 1 - k)) & 1 for k in range(width))


@dataclass(frozen=True)
class SecureChannelSetup:
    """Established pairwise channels plus the key-distribution cost paid for them.

    ``security_flag`` stays "conditional": the keys model public-key setup,
    secure only against computationally bounded adversaries.
    """

    N: int
    pairs: frozenset[tuple[int, int]]
    key_messages_sent: int
    security_flag: str = "conditional"

    def has_pair(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.pairs


def setup_secure_channels(N: int, ledger: ComplexityLedger | None = None) -> SecureChannelSetup:
    """Establish the (N-1)(N-2)/2 secure channels the summation protocol needs.

    Only pairs among receivers 0..N-2 are keyed; forward deliveries to
    receiver N-1 need no setup.  One key message is counted per channel.
    """
    if N < 3:
        raise ValueError("at least 3 receivers are required")
    pairs = frozenset((i, j) for i, j in combinations(range(N - 1), 2))
    count = len(pairs)
    assert count == (N - 1) * (N - 2) // 2
    if ledger is not None:
        ledger.count_key_setup("setup", count)
    return SecureChannelSetup(N=N, pairs=pairs, key_messages_sent=count)


@dataclass(frozen=True)
class ShareMatrix:
    """The shares z[i, j] passed from i to j (i < j) and the partial sums w."""

    N: int
    z: dict[tuple[int, int], int]
    w: tuple[int, ...]

    def validate(self, inputs, modulus: int = 2) -> None:
        for (i, j) in self.z:
            if not i < j:
                raise ValueError("shares are defined only for sender < recipient")
        for i in range(self.N - 1):
            expect_w = sum(self.z.get((j, i), 0) for j in range(i)) % modulus
            if self.w[i] != expect_w:
                raise ValueError(f"partial sum w[{i}] inconsistent with received shares")
            sent = sum(self.z[(i, j)] for j in range(i + 1, self.N)) % modulus
            if (inputs[i] + self.w[i]) % modulus != sent:
                raise ValueError(f"share balance violated at receiver {i}")


@dataclass(frozen=True)
class Protocol1Result:
    s: int
    transcript: ProtocolTranscript
    shares: ShareMatrix


def num_share_draws(N: int) -> int:
    """Uniform shares drawn across one protocol run: (N-1)(N-2)/2."""
    return (N - 1) * (N - 2) // 2


def protocol1_modsum(
    inputs,
    setup: SecureChannelSetup,
    rng: np.random.Generator | None = None,
    ledger: ComplexityLedger | None = None,
    phase: str = "zero_sum",
    share_bits=None,
    modulus: int = 2,
) -> Protocol1Result:
    """Share-passing modulo sum: every receiver ends up holding sum(inputs) % modulus.

    Receiver i (for i <= N-3) waits for the shares addressed to it by lower
    receivers, accumulates them into w_i, draws fresh uniform shares for
    receivers i+1..N-2, fixes its share for the last receiver so that
    x_i + w_i = sum of everything it sends, and delivers.  Receiver N-2
    forwards its masked input; receiver N-1 adds its own input to all
    received shares and broadcasts the total.

    ``share_bits`` optionally injects the (N-1)(N-2)/2 uniform draws (order:
    sender-major, recipient ascending) so callers can enumerate all protocol
    randomness exactly.
    """
    values = [int(v) % modulus for v in inputs]
    N = len(values)
    if N < 3:
        raise ValueError("at least 3 receivers are required")
    if setup.N != N:
        raise SetupError(f"setup built for N={setup.N}, protocol run with N={N}")
    for i, j in combinations(range(N - 1), 2):
        if not setup.has_pair(i, j):
            raise SetupError(f"missing secure channel between receivers {i} and {j}")
    if share_bits is not None:
        draws = [int(b) % modulus for b in share_bits]
        if len(draws) != num_share_draws(N):
            raise ValueError(f"expected {num_share_draws(N)} injected shares, got {len(draws)}")
    else:
        if rng is None:
            raise ValueError("either rng or share_bits must be provided")
        draws = [int(v) for v in rng.integers(0, modulus, size=num_share_draws(N))]
    draw_iter = iter(draws)  # consumed in sender-major, recipient-ascending order
    next_draw = draw_iter.__next__

    transcript = ProtocolTranscript()
    z: dict[tuple[int, int], int] = {}
    w = [0] * N
    for i in range(N):
        transcript.record_private(i, "input", _encode_value(values[i], modulus))

    def deliver(rnd: int, i: int, j: int, value: int) -> None:
        transcript.send(rnd, i, j, _encode_value(value, modulus))
        if ledger is not None:
            ledger.count_p2p(phase)

    for i in range(N - 2):
        w[i] = sum(z.get((j, i), 0) for j in range(i)) % modulus
        drawn = []
        for j in range(i + 1, N - 1):
            z[(i, j)] = next_draw()
            drawn.append(z[(i, j)])
        z[(i, N - 1)] = (values[i] + w[i] - sum(drawn)) % modulus
        if drawn:
            transcript.record_private(i, "z_drawn", [b for v in drawn for b in _encode_value(v, modulus)])
        for j in range(i + 1, N):
            deliver(i, i, j, z[(i, j)])

    last = N - 2
    w[last] = sum(z.get((j, last), 0) for j in range(last)) % modulus
    z[(last, N - 1)] = (values[last] + w[last]) % modulus
    deliver(last, last, N - 1, z[(last, N - 1)])

    s = (values[N - 1] + sum(z[(j, N - 1)] for j in range(N - 1))) % modulus
    transcript.broadcast(N - 1, N - 1, _encode_value(s, modulus))
    if ledger is not None:
        ledger.count_broadcast(phase)
    transcript.outputs["modsum"] = (s,)

    shares = ShareMatrix(N=N, z=z, w=tuple(w))
    return Protocol1Result(s=s, transcript=transcript, shares=shares)


@dataclass(frozen=True)
class ZeroSumRandomness:
    """A tuple (r_0, ..., r_{N-1}) with sum r_i = 0 (mod modulus)."""

    values: tuple[int, ...]
    modulus: int = 2

    def __post_init__(self):
        if any(not 0 <= v < self.modulus for v in self.values):
            raise ValueError("zero-sum entries must lie in range(modulus)")
        if sum(self.values) % self.modulus != 0:
            raise ValueError("randomness does not sum to zero")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ZeroSumResult:
    randomness: ZeroSumRandomness
    transcript: ProtocolTranscript
    total: int


def protocol2_generate_zero_sum(
    N: int,
    setup: SecureChannelSetup,
    rng: np.random.Generator | None = None,
    ledger: ComplexityLedger | None = None,
    y_values=None,
    share_bits=None,
    modulus: int = 2,
) -> ZeroSumResult:
    """Endow the receivers with reusable zero-sum randomness.

    Each receiver draws a private uniform coin Y_i; one modulo-sum run
    publishes sum(Y).  Receiver 0 keeps r_0 = Y_0 - sum(Y), everyone else
    keeps r_i = Y_i, so the r's sum to zero while each stays individually
    uniform.
    """
    if y_values is not None:
        ys = [int(v) % modulus for v in y_values]
        if len(ys) != N:
            raise ValueError(f"expected {N} injected coins, got {len(ys)}")
    else:
        if rng is None:
            raise ValueError("either rng or y_values must be provided")
        ys = [int(rng.integers(0, modulus)) for _ in range(N)]

    run = protocol1_modsum(ys, setup, rng=rng, ledger=ledger, phase="zero_sum",
                           share_bits=share_bits, modulus=modulus)
    transcript = run.transcript
    for i in range(N):
        transcript.record_private(i, "y", _encode_value(ys[i], modulus))

    r = [(ys[0] - run.s) % modulus] + [ys[i] for i in range(1, N)]
    for i in range(N):
        transcript.record_private(i, "r", _encode_value(r[i], modulus))
    randomness = ZeroSumRandomness(values=tuple(r), modulus=modulus)
    return ZeroSumResult(randomness=randomness, transcript=transcript, total=run.s)


@dataclass(frozen=True)
class StateDecodeResult:
    estimates: np.ndarray  # (N, n): row i is receiver i's state estimates
    transcript: ProtocolTranscript


def protocol2_decode_states(
    r,
    x_parts,
    ledger: ComplexityLedger | None = None,
    transcript: ProtocolTranscript | None = None,
    phase: str = "decode",
    modulus: int = 2,
) -> StateDecodeResult:
    """Broadcast masked state bits and recover every transmission's state.

    Receiver i broadcasts s_i = x_i + r_i (componentwise, all n bits in one
    broadcast); the masks cancel in the sum, so everyone computes
    s_t = sum_i x_{i,t}.  The same r is reused across all n transmissions.
    """
    values = list(r.values) if isinstance(r, ZeroSumRandomness) else [int(v) % modulus for v in r]
    x = as_bit_matrix(x_parts)
    N, n = x.shape
    if len(values) != N:
        raise ValueError(f"mask length {len(values)} does not match {N} receivers")
    if transcript is None:
        transcript = ProtocolTranscript()

    rnd = transcript.next_round()
    masked = np.zeros((N, n), dtype=np.int64)
    for i in range(N):
        masked[i] = (x[i].astype(np.int64) + values[i]) % modulus
        transcript.broadcast(rnd, i, [b for v in masked[i] for b in _encode_value(int(v), modulus)])
        transcript.record_private(i, "x", x[i])
        transcript.record_private(i, "r", _encode_value(values[i], modulus))
    if ledger is not None:
        ledger.count_broadcast(phase, N)

    s = masked.sum(axis=0) % modulus
    transcript.outputs["s"] = tuple(int(v) for v in s)
    estimates = np.tile(s.astype(np.uint8), (N, 1))
    return StateDecodeResult(estimates=estimates, transcript=transcript)


def cited_message_bound(N: int, t: int | None = None) -> int:
    """Conferencing-message count of the optimised protocol from the literature.

    With collusion tolerance t (default N-2) the cited figure is
    N * ceil((t+1)/2); the share-passing protocol implemented here uses
    N(N-1)/2 deliveries plus one broadcast instead.  Both are reported.
    """
    if t is None:
        t = N - 2
    return N * ((t + 2) // 2)


@dataclass(frozen=True)
class CostSummary:
    strategy: str
    N: int
    n: int
    m: int
    ledger: ComplexityLedger
    cited_bound_per_run: int

    @property
    def classical_total(self) -> int:
        return self.ledger.classical_total()


def strategy_cost(strategy: str, N: int, n: int, m: int = 1) -> CostSummary:
    """Counted resource totals for one end-to-end classical conferencing run.

    Counts come from executing the strategy on a dummy all-zero state block
    (message counts do not depend on the inputs), never from formulas.
    """
    if strategy not in ("classical-mpc-per-use", "classical-mpc-zero-sum"):
        raise ValueError(f"unknown classical strategy {strategy!r}")
    ledger = ComplexityLedger()
    rng = np.random.default_rng(0)
    setup = setup_secure_channels(N, ledger)
    x = np.zeros((N, n), dtype=np.uint8)
    if strategy == "classical-mpc-per-use":
        for t in range(n):
            protocol1_modsum(x[:, t], setup, rng=rng, ledger=ledger, phase="decode")
    else:
        result = protocol2_generate_zero_sum(N, setup, rng=rng, ledger=ledger)
        protocol2_decode_states(result.randomness, x, ledger=ledger)
    return CostSummary(strategy=strategy, N=N, n=n, m=m, ledger=ledger,
                       cited_bound_per_run=cited_message_bound(N))
