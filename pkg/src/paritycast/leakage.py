"""Coalition views and mutual-information leakage.

A coalition of honest-but-curious receivers pools everything its members
see: their own state bits and local randomness, every message addressed to
a member, and every broadcast.  Point-to-point messages between
non-members stay invisible.  The secrecy contract under test: for any
coalition of at most N-2 receivers, the view carries zero information about
each non-colluder's mask bit, while the modulo-2 sum of the non-colluders'
state bits is always derivable (and is the only thing that is).

Exact mutual informations are computed by enumerating every input and every
piece of protocol randomness with equal weight and building integer joint
counts; the sampling estimator exists for regimes where enumeration
overflows.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .bitops import bits_to_int, int_to_bits
from .errors import StateSpaceError
from .ghz import PhaseGHZSource, Z_SETTING, sample_outcomes
from .info import conditional_mi_from_counts, mi_from_joint_counts
from .mpc import (
    num_share_draws,
    protocol2_decode_states,
    protocol2_generate_zero_sum,
    setup_secure_channels,
)
from .transcript import Message, ProtocolTranscript

MAX_ENUMERATION = 1 << 22


@dataclass(frozen=True)
class Coalition:
    """A set of colluding receivers, capped at N-2 so two honest ones remain."""

    members: frozenset[int]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(i) for i in self.members))
        if not self.members:
            raise ValueError("a coalition needs at least one member")
        if len(self.members) > self.N - 2:
            raise ValueError(f"coalition of {len(self.members)} exceeds the N-2 = {self.N - 2} bound")
        if any(not 0 <= i < self.N for i in self.members):
            raise ValueError("coalition members must be receiver indices")

    @property
    def outsiders(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.N) if i not in self.members)

    def label(self) -> str:
        return "+".join(str(i) for i in sorted(self.members))


def all_coalitions(N: int):
    """Every admissible coalition for N receivers (sizes 1..N-2)."""
    for size in range(1, N - 1):
        for members in combinations(range(N), size):
            yield Coalition(members=frozenset(members), N=N)


@dataclass(frozen=True)
class CoalitionView:
    """Everything a coalition observes in one protocol run."""

    coalition: Coalition
    own_inputs: tuple  # ((receiver, name, bits), ...) for members only
    received: tuple    # visible messages as (round, sender, recipient|-1, payload)
    derived_sum: tuple | None  # protocol output; excluded from secrecy accounting

    def key(self) -> tuple:
        return (self.own_inputs, self.received)


def extract_view(transcript: ProtocolTranscript, coalition: Coalition) -> CoalitionView:
    """Project a transcript onto what the coalition sees.

    Broadcasts are visible to every coalition; point-to-point messages only
    when addressed to a member.  Member rows of the private registry (state
    bits, coins, masks, drawn shares) are the coalition's own inputs.
    """
    own = []
    for receiver in sorted(coalition.members):
        for name, bits in sorted(transcript.private.get(receiver, {}).items()):
            own.append((receiver, name, bits))
    received = []
    for msg in transcript.messages:
        if not isinstance(msg, Message):
            raise ValueError("malformed transcript entry")
        if msg.sender < 0 or msg.sender >= coalition.N:
            raise ValueError(f"malformed transcript: sender {msg.sender} out of range")
        if msg.recipient is not None and not 0 <= msg.recipient < coalition.N:
            raise ValueError(f"malformed transcript: recipient {msg.recipient} out of range")
        if msg.recipient is None or msg.recipient in coalition.members:
            received.append((msg.round, msg.sender, -1 if msg.recipient is None else msg.recipient,
                             msg.payload))
    return CoalitionView(coalition=coalition, own_inputs=tuple(own), received=tuple(received),
                         derived_sum=transcript.outputs.get("s"))


def broadcast_view_key(transcript: ProtocolTranscript, coalition: Coalition) -> tuple:
    """Reduced view: broadcast payloads only (what any coalition sees for free)."""
    return tuple(msg.payload for msg in transcript.messages if msg.recipient is None)


@dataclass(frozen=True)
class Secret:
    """A named binary-or-small-alphabet function of one protocol run."""

    name: str
    fn: object

    def __call__(self, record: "RunRecord"):
        return self.fn(record)


def secret_r(i: int) -> Secret:
    return Secret(name=f"r_{i}", fn=lambda rec: bits_to_int(rec.transcript.private[i]["r"]))


def secret_y(i: int) -> Secret:
    return Secret(name=f"y_{i}", fn=lambda rec: bits_to_int(rec.transcript.private[i]["y"]))


def secret_x(i: int, t: int = 0) -> Secret:
    return Secret(name=f"x_{i}[{t}]", fn=lambda rec: int(rec.x[i, t]))


def secret_xor_x(indices, t: int = 0) -> Secret:
    idx = tuple(sorted(int(i) for i in indices))
    label = "^".join(f"x_{i}" for i in idx)
    return Secret(name=f"{label}[{t}]",
                  fn=lambda rec: int(np.bitwise_xor.reduce(rec.x[list(idx), t])))


def secret_output() -> Secret:
    return Secret(name="s", fn=lambda rec: rec.transcript.outputs["s"])


@dataclass(frozen=True)
class RunRecord:
    """One complete protocol execution: inputs, transcript, outputs."""

    x: np.ndarray
    transcript: ProtocolTranscript


class StrategyIIRunner:
    """Zero-sum classical conferencing as an enumerable random experiment.

    The probability space is the product of the receivers' private coins Y,
    the (N-1)(N-2)/2 uniform shares of the summation sub-protocol, and the
    uniform N-by-n state block; every atom has equal weight.
    """

    name = "strategy-ii"

    def __init__(self, N: int, n: int = 1):
        self.N = N
        self.n = n
        self._setup = setup_secure_channels(N)
        self._records: list[RunRecord] | None = None

    @property
    def size(self) -> int:
        return 1 << (self.N + num_share_draws(self.N) + self.N * self.n)

    def _run(self, y_values, share_bits, x: np.ndarray) -> RunRecord:
        generated = protocol2_generate_zero_sum(self.N, self._setup, y_values=y_values,
                                                share_bits=share_bits)
        decoded = protocol2_decode_states(generated.randomness, x,
                                          transcript=generated.transcript)
        return RunRecord(x=x, transcript=decoded.transcript)

    def enumerate(self) -> list[RunRecord]:
        if self._records is None:
            records = []
            draws = num_share_draws(self.N)
            for y in product((0, 1), repeat=self.N):
                for shares in product((0, 1), repeat=draws):
                    for xv in range(1 << (self.N * self.n)):
                        x = int_to_bits(xv, self.N * self.n).reshape(self.N, self.n)
                        records.append(self._run(y, shares, x))
            self._records = records
        return self._records

    def sample(self, rng: np.random.Generator) -> RunRecord:
        y = tuple(int(b) for b in rng.integers(0, 2, size=self.N))
        shares = tuple(int(b) for b in rng.integers(0, 2, size=num_share_draws(self.N)))
        x = rng.integers(0, 2, size=(self.N, self.n), dtype=np.uint8)
        return self._run(y, shares, x)


class Protocol4Runner:
    """The decode phase of entanglement-assisted conferencing.

    The probability space is the zero-sum mask tuple (uniform over the
    2**(N-1) even-parity strings, exactly the honest source's final-copy
    law) times the uniform state block.  Validation traffic is generated
    from source copies that are independent of both, so leaving it out of
    the analyzed view changes no mutual information involving (x, r).
    """

    name = "protocol-4"

    def __init__(self, N: int, n: int = 1, m: int = 1):
        self.N = N
        self.n = n
        self.m = m
        self._source = PhaseGHZSource(kind="honest", N=N)
        self._records: list[RunRecord] | None = None

    @property
    def size(self) -> int:
        return 1 << (self.N - 1 + self.N * self.n)

    def _run(self, r, x: np.ndarray) -> RunRecord:
        decoded = protocol2_decode_states(np.asarray(r, dtype=np.uint8), x)
        return RunRecord(x=x, transcript=decoded.transcript)

    def enumerate(self) -> list[RunRecord]:
        if self._records is None:
            records = []
            for head in product((0, 1), repeat=self.N - 1):
                r = head + (int(np.bitwise_xor.reduce(np.array(head, dtype=np.uint8))),)
                for xv in range(1 << (self.N * self.n)):
                    x = int_to_bits(xv, self.N * self.n).reshape(self.N, self.n)
                    records.append(self._run(r, x))
            self._records = records
        return self._records

    def sample(self, rng: np.random.Generator) -> RunRecord:
        r = sample_outcomes(self._source, Z_SETTING, 1, rng)[0]
        x = rng.integers(0, 2, size=(self.N, self.n), dtype=np.uint8)
        return self._run(r, x)


def _view_key_fn(view):
    if callable(view):
        return view
    if view == "full":
        return lambda transcript, coalition: extract_view(transcript, coalition).key()
    if view == "broadcasts":
        return broadcast_view_key
    raise ValueError(f"unknown view selector {view!r}")


def joint_view_counts(runner, secret: Secret, coalition: Coalition,
                      view="full", given: Secret | None = None) -> Counter:
    """Integer joint counts of (secret value, coalition view) over all atoms."""
    if runner.size > MAX_ENUMERATION:
        raise StateSpaceError(
            f"{runner.size} atoms exceed the enumeration budget {MAX_ENUMERATION}; "
            "use sampled_mutual_information instead")
    key_fn = _view_key_fn(view)
    counts: Counter = Counter()
    for record in runner.enumerate():
        key = (secret(record), key_fn(record.transcript, coalition))
        if given is not None:
            key = key + (given(record),)
        counts[key] += 1
    return counts


def exact_mutual_information(runner, secret: Secret, coalition: Coalition,
                             view="full", given: Secret | None = None) -> float:
    """I(secret ; coalition view) in bits, exact over the enumerated space.

    With ``given`` the conditional mutual information I(secret; view | given)
    is returned instead (e.g. conditioning on the published channel states).
    """
    counts = joint_view_counts(runner, secret, coalition, view=view, given=given)
    if given is not None:
        return conditional_mi_from_counts(counts)
    return mi_from_joint_counts(counts)


@dataclass(frozen=True)
class MIEstimate:
    """Plug-in mutual-information estimate with a bootstrap interval.

    The plug-in estimator is positively biased by roughly
    (cells - 1) / (2 * trials * ln 2); ``saturated`` flags runs whose view
    support is too rich for the sample to calibrate, where the estimate is
    untrustworthy regardless of the interval.
    """

    mi_bits: float
    ci_low: float
    ci_high: float
    trials: int
    support_secret: int
    support_view: int
    saturated: bool


def _mi_from_count_matrix(matrix: np.ndarray) -> float:
    total = matrix.sum()
    def h(counts):
        c = counts[counts > 0].astype(float)
        return np.log2(total) - float((c * np.log2(c)).sum()) / total
    return h(matrix.sum(axis=1)) + h(matrix.sum(axis=0)) - h(matrix.ravel())


def sampled_mutual_information(runner, secret: Secret, coalition: Coalition,
                               trials: int, rng: np.random.Generator,
                               view="full", bootstrap: int = 200) -> MIEstimate:
    """Monte-Carlo plug-in MI estimate with a percentile bootstrap interval."""
    if trials < 1000:
        raise ValueError("sampled MI needs trials >= 1000")
    key_fn = _view_key_fn(view)
    counts: Counter = Counter()
    for _ in range(trials):
        record = runner.sample(rng)
        counts[(secret(record), key_fn(record.transcript, coalition))] += 1

    secrets = sorted({k[0] for k in counts})
    views = sorted({k[1] for k in counts})
    s_index = {v: i for i, v in enumerate(secrets)}
    v_index = {v: i for i, v in enumerate(views)}
    matrix = np.zeros((len(secrets), len(views)), dtype=np.int64)
    for (s, v), c in counts.items():
        matrix[s_index[s], v_index[v]] = c

    point = _mi_from_count_matrix(matrix)
    flat = matrix.ravel()
    probs = flat / flat.sum()
    replicates = np.empty(bootstrap)
    for b in range(bootstrap):
        resampled = rng.multinomial(trials, probs).reshape(matrix.shape)
        replicates[b] = _mi_from_count_matrix(resampled)
    ci_low, ci_high = np.percentile(replicates, [2.5, 97.5])
    return MIEstimate(mi_bits=float(point), ci_low=float(ci_low), ci_high=float(ci_high),
                      trials=trials, support_secret=len(secrets), support_view=len(views),
                      saturated=len(views) > trials / 10)


LEAKAGE_CSV_HEADER = ["protocol", "N", "coalition", "secret", "method", "mi_bits", "ci_low", "ci_high"]


def leakage_row(protocol: str, N: int, coalition: Coalition, secret: Secret,
                method: str, mi_bits: float, ci_low: float | None = None,
                ci_high: float | None = None) -> list:
    lo = mi_bits if ci_low is None else ci_low
    hi = mi_bits if ci_high is None else ci_high
    return [protocol, N, coalition.label(), secret.name, method,
            f"{mi_bits:.12g}", f"{lo:.12g}", f"{hi:.12g}"]


def write_leakage_csv(path, rows: list[list]) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LEAKAGE_CSV_HEADER)
        writer.writerows(rows)
