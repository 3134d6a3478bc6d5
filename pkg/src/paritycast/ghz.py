"""Phase-GHZ sources, two-setting statistics, validation and assisted decoding.

The honest source emits the uniform superposition over all even-parity
N-bit strings.  Measured in the computational (Z) basis it yields uniform
zero-sum strings; rewritten in the X basis it is an equal superposition of
the two all-identical outcome strings.  Those two statistics are what the
validation test checks, with zero tolerance on both: every Z-tested copy
must have even parity, every X-tested copy must come out all-identical.

Adversarial sources are fixed parameterized families (classical zero-sum
mixtures, biased mixtures, parity violators, fixed strings), not arbitrary
quantum adversaries; each is detected through the statistic it corrupts.

The validation test here is a two-setting surrogate: the measurement
schedule and acceptance inequalities of the cited verification protocol are
not reproduced.  Among the modeled source families the honest state is the
only one satisfying both statistics surely, which is the property the
surrogate certifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitops import as_bit_matrix, as_bits
from .errors import ProtocolAbort
from .ledger import ComplexityLedger
from .mpc import StateDecodeResult, protocol2_decode_states
from .transcript import ProtocolTranscript

SOURCE_KINDS = (
    "honest",
    "classical-zero-sum-mixture",
    "biased-zero-sum",
    "parity-violating",
    "fixed-string",
)

Z_SETTING = "Z"
X_SETTING = "X"


@dataclass(frozen=True)
class PhaseGHZSource:
    """A source of N-receiver entangled (or pretend-entangled) copies.

    kind selects the family:
      honest                    -- true phase-GHZ statistics;
      classical-zero-sum-mixture -- classical mixture of zero-sum strings
                                   (Z looks honest, X decorrelates);
      biased-zero-sum(param)    -- zero-sum mixture with extra weight param
                                   on the all-zero string;
      parity-violating(param)   -- each copy's Z outcome has odd parity with
                                   probability param (X left honest);
      fixed-string              -- always emits ``string`` in Z, classical X.
    """

    kind: str
    N: int
    param: float = 0.0
    string: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.N < 3:
            raise ValueError("at least 3 receivers are required")
        if not 0.0 <= self.param <= 1.0:
            raise ValueError("source parameter must lie in [0, 1]")
        if self.kind == "fixed-string":
            string = self.string if self.string is not None else tuple([0] * self.N)
            object.__setattr__(self, "string", tuple(int(b) for b in as_bits(string, self.N)))


@dataclass(frozen=True)
class MeasurementRecord:
    setting: str
    outcomes: tuple[int, ...]
    copy_index: int = -1
    group_id: int = -1


@dataclass(frozen=True)
class GHZOracle:
    """Exact statevector reference for the honest source."""

    N: int
    amplitudes: np.ndarray
    z_distribution: np.ndarray
    x_distribution: np.ndarray


def _parities(N: int) -> np.ndarray:
    idx = np.arange(1 << N)
    par = np.zeros(1 << N, dtype=np.uint8)
    for b in range(N):
        par ^= ((idx >> b) & 1).astype(np.uint8)
    return par


def statevector_oracle(N: int) -> GHZOracle:
    """Build the 2**N amplitude vector and its exact Z/X Born distributions.

    Amplitude 2**(-(N-1)/2) sits on every even-parity basis state.  The X
    distribution is obtained by an explicit N-fold Hadamard rotation of the
    amplitudes, independent of any sampling shortcut, so it serves as the
    oracle the samplers are checked against.
    """
    if not 3 <= N <= 12:
        raise ValueError("oracle supports 3 <= N <= 12")
    dim = 1 << N
    amps = np.zeros(dim, dtype=float)
    amps[_parities(N) == 0] = 2.0 ** (-(N - 1) / 2.0)
    z_dist = amps ** 2

    rotated = amps.copy()
    h = 1
    while h < dim:
        for start in range(0, dim, h * 2):
            a = rotated[start:start + h].copy()
            b = rotated[start + h:start + 2 * h].copy()
            rotated[start:start + h] = a + b
            rotated[start + h:start + 2 * h] = a - b
        h *= 2
    rotated /= 2.0 ** (N / 2.0)
    x_dist = rotated ** 2
    return GHZOracle(N=N, amplitudes=amps, z_distribution=z_dist, x_distribution=x_dist)


def source_distribution(source: PhaseGHZSource, setting: str) -> np.ndarray:
    """Exact outcome distribution (indexed with receiver 0 as MSB) of one copy."""
    N = source.N
    dim = 1 << N
    par = _parities(N)
    even = (par == 0)
    uniform_even = np.where(even, 1.0 / even.sum(), 0.0)
    if setting == Z_SETTING:
        if source.kind in ("honest", "classical-zero-sum-mixture"):
            return uniform_even
        if source.kind == "biased-zero-sum":
            dist = (1.0 - source.param) * uniform_even
            dist[0] += source.param
            return dist
        if source.kind == "parity-violating":
            odd = ~even
            uniform_odd = np.where(odd, 1.0 / odd.sum(), 0.0)
            return (1.0 - source.param) * uniform_even + source.param * uniform_odd
        dist = np.zeros(dim)
        dist[int("".join(map(str, source.string)), 2)] = 1.0
        return dist
    if setting == X_SETTING:
        if source.kind in ("honest", "parity-violating"):
            dist = np.zeros(dim)
            dist[0] = 0.5
            dist[dim - 1] = 0.5
            return dist
        # classical mixtures of computational-basis strings: X outcomes i.i.d. uniform
        return np.full(dim, 1.0 / dim)
    raise ValueError(f"unknown measurement setting {setting!r}")


def sample_outcomes(source: PhaseGHZSource, setting: str, size: int,
                    rng: np.random.Generator) -> np.ndarray:
    """Joint outcomes for ``size`` copies, shape (size, N)."""
    N = source.N
    if setting not in (Z_SETTING, X_SETTING):
        raise ValueError(f"unknown measurement setting {setting!r}")

    def even_words(k: int) -> np.ndarray:
        head = rng.integers(0, 2, size=(k, N - 1), dtype=np.uint8)
        tail = np.bitwise_xor.reduce(head, axis=1)[:, None]
        return np.concatenate([head, tail], axis=1)

    if setting == Z_SETTING:
        if source.kind in ("honest", "classical-zero-sum-mixture"):
            return even_words(size)
        if source.kind == "biased-zero-sum":
            words = even_words(size)
            hit = rng.random(size) < source.param
            words[hit] = 0
            return words
        if source.kind == "parity-violating":
            words = even_words(size)
            odd = rng.random(size) < source.param
            words[odd, -1] ^= 1
            return words
        return np.tile(np.asarray(source.string, dtype=np.uint8), (size, 1))

    if source.kind in ("honest", "parity-violating"):
        coin = rng.integers(0, 2, size=size, dtype=np.uint8)
        return np.repeat(coin[:, None], N, axis=1)
    return rng.integers(0, 2, size=(size, N), dtype=np.uint8)


def sample_measurement(source: PhaseGHZSource, setting: str,
                       rng: np.random.Generator) -> MeasurementRecord:
    """One jointly measured copy."""
    outcomes = sample_outcomes(source, setting, 1, rng)[0]
    return MeasurementRecord(setting=setting, outcomes=tuple(int(b) for b in outcomes))


@dataclass(frozen=True)
class ValidationReport:
    directing_receiver: int
    N: int
    m: int
    groups_tested: int
    z_failures: int
    x_failures: int
    z_threshold: int = 0
    x_threshold: int = 0
    copies_consumed: int = 0

    @property
    def verdict(self) -> bool:
        return self.z_failures <= self.z_threshold and self.x_failures <= self.x_threshold


def _run_validation_batch(source: PhaseGHZSource, m: int, rng: np.random.Generator,
                          directing_receiver: int) -> tuple[list[MeasurementRecord], ValidationReport]:
    """Measure one 4Nm-copy batch: 4m random groups of N copies, half Z, half X."""
    N = source.N
    settings = [Z_SETTING] * (2 * m) + [X_SETTING] * (2 * m)
    order = rng.permutation(4 * m)
    records: list[MeasurementRecord] = []
    z_failures = 0
    x_failures = 0
    copy_index = 0
    for group_id in range(4 * m):
        setting = settings[order[group_id]]
        outcomes = sample_outcomes(source, setting, N, rng)
        for row in outcomes:
            records.append(MeasurementRecord(setting=setting,
                                             outcomes=tuple(int(b) for b in row),
                                             copy_index=copy_index, group_id=group_id))
            copy_index += 1
            if setting == Z_SETTING:
                z_failures += int(np.bitwise_xor.reduce(row)) != 0
            else:
                x_failures += int(row.min()) != int(row.max())
    report = ValidationReport(directing_receiver=directing_receiver, N=N, m=m,
                              groups_tested=4 * m, z_failures=z_failures,
                              x_failures=x_failures, copies_consumed=4 * N * m)
    return records, report


def _broadcast_outcome_columns(transcript: ProtocolTranscript, records: list[MeasurementRecord],
                               N: int) -> None:
    rnd = transcript.next_round()
    for i in range(N):
        transcript.broadcast(rnd, i, [rec.outcomes[i] for rec in records])


def protocol3_validate(
    source: PhaseGHZSource,
    m: int,
    rng: np.random.Generator,
    directing_receiver: int = 0,
    ledger: ComplexityLedger | None = None,
    transcript: ProtocolTranscript | None = None,
    available_copies: int | None = None,
) -> ValidationReport:
    """Validate a 4Nm-copy batch under the two-setting test.

    The batch is split into 4m groups of N copies, 2m assigned to parity
    testing in Z and 2m to agreement testing in X, uniformly at random.
    Every receiver broadcasts its outcome column once (N broadcasts).  The
    verdict tolerates zero failures of either kind: the honest source passes
    surely, a parity violator with odd-parity rate d slips through only with
    probability (1-d)**(2mN).
    """
    if m < 1:
        raise ValueError("security parameter m must be >= 1")
    needed = 4 * source.N * m
    if available_copies is not None and available_copies < needed:
        raise ValueError(f"validation needs {needed} copies, only {available_copies} available")
    records, report = _run_validation_batch(source, m, rng, directing_receiver)
    if transcript is not None:
        _broadcast_outcome_columns(transcript, records, source.N)
    if ledger is not None:
        ledger.count_broadcast("validation", source.N)
    return report


@dataclass(frozen=True)
class Protocol4Result:
    estimates: np.ndarray  # (N, n)
    transcript: ProtocolTranscript
    reports: tuple[ValidationReport, ...]


def protocol4_decode(
    source: PhaseGHZSource,
    x_parts,
    m: int,
    rng: np.random.Generator,
    ledger: ComplexityLedger | None = None,
) -> Protocol4Result:
    """Entanglement-assisted state decoding with verifiable zero-sum masks.

    A communal source delivers 4*N**2*m + 1 copies in one frame.  Each
    receiver directs the validation test on its own disjoint 4Nm-copy batch;
    on any failure the protocol aborts with no state estimates.  When all N
    validations pass, the receivers measure the one remaining copy in Z,
    keep their outcome bits as zero-sum masks r_i, and finish exactly like
    the classical mask-broadcast decode: s_{i,t} = x_{i,t} + r_i broadcast
    once per receiver, states recovered as the modulo-2 sum.

    Validation costs N broadcasts in total (one bundled outcome broadcast
    per receiver); the decode step costs N more.
    """
    x = as_bit_matrix(x_parts)
    N, _ = x.shape
    if source.N != N:
        raise ValueError(f"source built for N={source.N}, state block has N={N}")
    if N < 3:
        raise ValueError("at least 3 receivers are required")
    if m < 1:
        raise ValueError("security parameter m must be >= 1")

    copies = 4 * N * N * m + 1
    if ledger is not None:
        ledger.count_ghz("setup", copies)
        ledger.count_broadcast("setup", 1)  # one frame delivery from the communal source

    transcript = ProtocolTranscript()
    all_records: list[MeasurementRecord] = []
    reports: list[ValidationReport] = []
    per_batch = 4 * N * m
    for receiver in range(N):
        records, report = _run_validation_batch(source, m, rng, directing_receiver=receiver)
        if report.copies_consumed > per_batch:
            raise ValueError("validation batch exceeded its copy allocation")
        all_records.extend(records)
        reports.append(report)
    _broadcast_outcome_columns(transcript, all_records, N)
    if ledger is not None:
        ledger.count_broadcast("validation", N)

    if not all(rep.verdict for rep in reports):
        raise ProtocolAbort("phase-GHZ validation failed; no state estimates produced",
                            reports=tuple(reports))

    final = sample_outcomes(source, Z_SETTING, 1, rng)[0]
    decode: StateDecodeResult = protocol2_decode_states(final, x, ledger=ledger,
                                                        transcript=transcript)
    return Protocol4Result(estimates=decode.estimates, transcript=decode.transcript,
                           reports=tuple(reports))
