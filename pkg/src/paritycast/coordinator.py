"""The coordinator: the channel from the receivers' state bits to their
coordination values.

A coordinator strategy maps the N-by-n matrix of state bits to one
coordination value per receiver per transmission.  Non-signalling
strategies (anything realizable with shared entanglement but no
communication) act locally on each receiver's own bits; signalling
strategies confer via the classical protocols or the validated GHZ path and
end up handing every receiver the true channel state.

Conditional distributions over (gamma | x) for one transmission can be
extracted exactly and checked for the non-signalling property, and the
effective single-receiver channel induced by any non-signalling strategy
can be tabulated by enumeration; it collapses to uniform noise.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .bitops import all_words, as_bit_matrix, bits_to_int, bitstring, int_to_bits
from .channel import BroadcastCode, phi, phi_sequence, random_messages, random_states, transmit_block
from .ghz import PhaseGHZSource, protocol4_decode
from .info import entropy_bits
from .ledger import ComplexityLedger
from .mpc import protocol1_modsum, protocol2_decode_states, protocol2_generate_zero_sum, setup_secure_channels
from .transcript import ProtocolTranscript

STRATEGY_KINDS = (
    "non-signalling-local",
    "classical-mpc-per-use",
    "classical-mpc-zero-sum",
    "entanglement-assisted",
)

LOCAL_MAPS = {
    "constant-zero": np.array([[1.0, 0.0], [1.0, 0.0]]),
    "constant-one": np.array([[0.0, 1.0], [0.0, 1.0]]),
    "copy-own-bit": np.array([[1.0, 0.0], [0.0, 1.0]]),
    "flip-own-bit": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "uniform-random": np.array([[0.5, 0.5], [0.5, 0.5]]),
}


@dataclass
class CoordinatorStrategy:
    """A coordinator with its kind-specific parameters and metering hook."""

    kind: str
    params: dict = field(default_factory=dict)
    ledger: ComplexityLedger | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")

    @property
    def signalling(self) -> bool:
        return self.kind != "non-signalling-local"


def local_strategy(map_name: str = "constant-zero") -> CoordinatorStrategy:
    if map_name not in LOCAL_MAPS:
        raise ValueError(f"unknown local map {map_name!r}; choose from {sorted(LOCAL_MAPS)}")
    return CoordinatorStrategy(kind="non-signalling-local", params={"local_map": map_name})


def _local_map_matrix(strategy: CoordinatorStrategy) -> np.ndarray:
    choice = strategy.params.get("local_map", "constant-zero")
    mat = LOCAL_MAPS[choice] if isinstance(choice, str) else np.asarray(choice, dtype=float)
    if mat.shape != (2, 2) or not np.allclose(mat.sum(axis=1), 1.0, atol=1e-12):
        raise ValueError("local map must be a 2x2 row-stochastic matrix")
    return mat


def _ghz_source(strategy: CoordinatorStrategy, N: int) -> PhaseGHZSource:
    source = strategy.params.get("source")
    if source is None:
        return PhaseGHZSource(kind="honest", N=N)
    if source.N != N:
        raise ValueError(f"strategy source has N={source.N}, input has N={N}")
    return source


def coordinate(
    strategy: CoordinatorStrategy,
    x_parts,
    rng: np.random.Generator,
    ledger: ComplexityLedger | None = None,
) -> tuple[np.ndarray, ProtocolTranscript]:
    """Produce the (N, n) coordination values plus the conferencing transcript.

    Non-signalling strategies leave the transcript empty.  Honest signalling
    strategies return gamma[i, t] = phi(x[:, t]) for every receiver.  A GHZ
    validation failure raises ProtocolAbort rather than returning a wrong
    gamma.
    """
    x = as_bit_matrix(x_parts)
    N, n = x.shape
    meter = ledger if ledger is not None else strategy.ledger

    if strategy.kind == "non-signalling-local":
        p1 = _local_map_matrix(strategy)[x.astype(int), 1]
        gamma = (rng.random(size=(N, n)) < p1).astype(np.uint8)
        return gamma, ProtocolTranscript()

    if strategy.kind == "classical-mpc-per-use":
        setup = setup_secure_channels(N, meter)
        transcript = ProtocolTranscript()
        states = np.zeros(n, dtype=np.uint8)
        for t in range(n):
            run = protocol1_modsum(x[:, t], setup, rng=rng, ledger=meter, phase="decode")
            states[t] = run.s
            transcript.extend(run.transcript)
        for i in range(N):
            transcript.record_private(i, "x", x[i])
        transcript.outputs["s"] = tuple(int(v) for v in states)
        return np.tile(states, (N, 1)), transcript

    if strategy.kind == "classical-mpc-zero-sum":
        setup = setup_secure_channels(N, meter)
        generated = protocol2_generate_zero_sum(N, setup, rng=rng, ledger=meter)
        transcript = generated.transcript
        decoded = protocol2_decode_states(generated.randomness, x, ledger=meter,
                                          transcript=transcript)
        return decoded.estimates, decoded.transcript

    source = _ghz_source(strategy, N)
    m = int(strategy.params.get("m", 1))
    result = protocol4_decode(source, x, m, rng, ledger=meter)
    return result.estimates, result.transcript


@dataclass(frozen=True)
class ConditionalDistribution:
    """Explicit table q(gamma-tuple | x-tuple) for one transmission.

    Rows are indexed by the x tuple, columns by the gamma tuple, both packed
    with receiver 0 as the most significant bit.
    """

    N: int
    table: np.ndarray

    def __post_init__(self):
        dim = 1 << self.N
        tab = np.asarray(self.table, dtype=float)
        if tab.shape != (dim, dim):
            raise ValueError(f"table must be {dim}x{dim} for N={self.N}, got {tab.shape}")
        if (tab < -1e-15).any():
            raise ValueError("probabilities must be non-negative")
        if not np.allclose(tab.sum(axis=1), 1.0, atol=1e-12):
            raise ValueError("each conditional row must sum to 1 within 1e-12")
        object.__setattr__(self, "table", tab)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x_tuple", "gamma_tuple", "probability"])
            for xi in range(1 << self.N):
                for gi in range(1 << self.N):
                    writer.writerow([bitstring(int_to_bits(xi, self.N)),
                                     bitstring(int_to_bits(gi, self.N)),
                                     f"{self.table[xi, gi]:.12g}"])


def as_conditional_table(strategy: CoordinatorStrategy, N: int) -> ConditionalDistribution:
    """Exact single-transmission conditional distribution of a strategy."""
    dim = 1 << N
    table = np.zeros((dim, dim))
    if strategy.kind == "non-signalling-local":
        mat = _local_map_matrix(strategy)
        for xi, x in enumerate(all_words(N)):
            for gi, g in enumerate(all_words(N)):
                table[xi, gi] = float(np.prod([mat[x[k], g[k]] for k in range(N)]))
    else:
        # honest signalling strategies hand every receiver the true state
        for xi, x in enumerate(all_words(N)):
            s = phi(x)
            gi = bits_to_int([s] * N)
            table[xi, gi] = 1.0
    return ConditionalDistribution(N=N, table=table)


@dataclass(frozen=True)
class NonSignallingCheck:
    ok: bool
    max_violation: float


def verify_non_signalling(dist: ConditionalDistribution, tol: float = 1e-9) -> NonSignallingCheck:
    """Check every single-receiver-vs-rest bipartition of the conditional table.

    For each receiver i the marginal distribution of gamma_i given x must
    not depend on the other receivers' inputs; the largest deviation across
    all bipartitions is reported.
    """
    if not isinstance(dist, ConditionalDistribution):
        dist = ConditionalDistribution(N=int(np.log2(len(dist))), table=dist)
    N = dist.N
    dim = 1 << N
    xs = [int_to_bits(v, N) for v in range(dim)]
    gs = [int_to_bits(v, N) for v in range(dim)]
    worst = 0.0
    for i in range(N):
        for g_val in (0, 1):
            cols = [gi for gi in range(dim) if gs[gi][i] == g_val]
            marginal = dist.table[:, cols].sum(axis=1)
            for x_val in (0, 1):
                rows = [xi for xi in range(dim) if xs[xi][i] == x_val]
                values = marginal[rows]
                worst = max(worst, float(values.max() - values.min()))
    return NonSignallingCheck(ok=worst <= tol, max_violation=worst)


def effective_channel_table(N: int) -> np.ndarray:
    """The exact channel a lone receiver faces: g[u, x, y] over its own state
    copy x and output y, for each channel input u.

    Enumerates all 2**N state words; the result provably equals the uniform
    product distribution for both inputs, which is verified before returning.
    """
    if N < 3:
        raise ValueError("at least 3 receivers are required")
    g = np.zeros((2, 2, 2))
    for word in all_words(N):
        s = phi(word)
        for u in (0, 1):
            g[u, word[0], s ^ u] += 1.0
    g /= 1 << N
    if not np.allclose(g, 0.25, atol=1e-12):
        raise RuntimeError("effective channel failed to collapse to the uniform product")
    return g


def effective_channel_mi(g: np.ndarray) -> float:
    """I(u; y) in bits under uniform channel inputs, from the effective table."""
    joint = 0.5 * g.sum(axis=1)  # (u, y)
    h_u = entropy_bits(joint.sum(axis=1))
    h_y = entropy_bits(joint.sum(axis=0))
    h_uy = entropy_bits(joint.ravel())
    return h_u + h_y - h_uy


def success_per_bit(strategy: CoordinatorStrategy, N: int) -> np.ndarray:
    """Exact per-receiver probability that one coordination value equals the
    state, by enumeration over all state words (n = 1)."""
    if strategy.kind == "non-signalling-local":
        mat = _local_map_matrix(strategy)
        probs = np.zeros(N)
        for word in all_words(N):
            s = phi(word)
            for i in range(N):
                probs[i] += mat[word[i], s]
        return probs / (1 << N)
    return np.ones(N)


EXHAUSTIVE_LIMIT = 1 << 20


def success_probability(
    code: BroadcastCode,
    strategy: CoordinatorStrategy,
    rng: np.random.Generator | None = None,
    trials: int | None = None,
    method: str = "auto",
) -> float:
    """Probability that every receiver decodes its message, per the average
    over uniform messages and uniform state sequences.

    Exhaustive evaluation enumerates all 2**(N*n) state sequences when that
    fits the budget; with the raw identity code a decode succeeds exactly
    when the receiver's coordination sequence equals the state sequence, a
    message-independent event, so one representative message tuple gives the
    exact average.  Otherwise a Monte-Carlo estimate over ``trials`` runs is
    returned.
    """
    N, n = code.N, code.n
    joint = 1 << (N * n)
    if method == "auto":
        method = "exhaustive" if joint <= EXHAUSTIVE_LIMIT else "monte-carlo"
    if method == "exhaustive":
        if joint > EXHAUSTIVE_LIMIT:
            raise ValueError(f"2**(N*n) = {joint} exceeds the exhaustive budget {EXHAUSTIVE_LIMIT}")
        if strategy.kind == "non-signalling-local":
            mat = _local_map_matrix(strategy)
            total = 0.0
            for value in range(joint):
                x = int_to_bits(value, N * n).reshape(N, n)
                s = phi_sequence(x)
                p = 1.0
                for i in range(N):
                    for t in range(n):
                        p *= mat[x[i, t], s[t]]
                total += p
            return total / joint
        total = 0
        messages = tuple([0] * N)
        for value in range(joint):
            x = int_to_bits(value, N * n).reshape(N, n)
            gamma, _ = coordinate(strategy, x, rng=np.random.default_rng(value))
            output = transmit_block(code, messages, x)
            ok = all(code.decode(i, output.streams[i], gamma[i]) == messages[i] for i in range(N))
            total += ok
        return total / joint

    if trials is None or trials < 1:
        raise ValueError("monte-carlo evaluation needs trials >= 1")
    if rng is None:
        raise ValueError("monte-carlo evaluation needs an rng")
    hits = 0
    for _ in range(trials):
        x = random_states(N, n, rng)
        messages = random_messages(code, rng)
        gamma, _ = coordinate(strategy, x, rng)
        output = transmit_block(code, messages, x)
        hits += all(code.decode(i, output.streams[i], gamma[i]) == messages[i] for i in range(N))
    return hits / trials
