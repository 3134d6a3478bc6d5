"""Phase-GHZ sources: oracle statistics, validation power, assisted decoding."""

import numpy as np
import pytest
from scipy import stats

from paritycast import (
    ComplexityLedger,
    PhaseGHZSource,
    ProtocolAbort,
    protocol3_validate,
    protocol4_decode,
    sample_measurement,
    sample_outcomes,
    source_distribution,
    statevector_oracle,
)
from paritycast.bitops import int_to_bits, parity
from paritycast.ghz import X_SETTING, Z_SETTING


def test_oracle_amplitudes_n3():
    oracle = statevector_oracle(3)
    expected = np.zeros(8)
    expected[[0b000, 0b011, 0b101, 0b110]] = 0.5
    assert np.allclose(oracle.amplitudes, expected, atol=1e-15)


@pytest.mark.parametrize("N", range(3, 13))
def test_oracle_normalization(N):
    oracle = statevector_oracle(N)
    assert abs((oracle.amplitudes ** 2).sum() - 1.0) < 1e-12
    assert abs(oracle.z_distribution.sum() - 1.0) < 1e-12
    assert abs(oracle.x_distribution.sum() - 1.0) < 1e-12


@pytest.mark.parametrize("N", range(3, 9))
def test_oracle_x_mass_only_on_identical_strings(N):
    oracle = statevector_oracle(N)
    dim = 1 << N
    outside = oracle.x_distribution.copy()
    outside[[0, dim - 1]] = 0.0
    assert outside.sum() < 1e-12
    assert oracle.x_distribution[0] == pytest.approx(0.5, abs=1e-12)
    assert oracle.x_distribution[dim - 1] == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("N", range(3, 9))
def test_oracle_z_uniform_on_even_parity(N):
    oracle = statevector_oracle(N)
    for idx in range(1 << N):
        word = int_to_bits(idx, N)
        expected = 2.0 ** (-(N - 1)) if parity(word) == 0 else 0.0
        assert oracle.z_distribution[idx] == pytest.approx(expected, abs=1e-12)


def test_oracle_range_guard():
    with pytest.raises(ValueError):
        statevector_oracle(2)
    with pytest.raises(ValueError):
        statevector_oracle(13)


@pytest.mark.parametrize("N", range(3, 9))
def test_honest_sampler_law_matches_oracle_exactly(N):
    # the sampler's exact law, not an empirical histogram, against the state
    oracle = statevector_oracle(N)
    source = PhaseGHZSource(kind="honest", N=N)
    assert np.abs(source_distribution(source, Z_SETTING) - oracle.z_distribution).max() < 1e-12
    assert np.abs(source_distribution(source, X_SETTING) - oracle.x_distribution).max() < 1e-12


def test_honest_samples_match_oracle_empirically():
    N, samples = 3, 100_000
    oracle = statevector_oracle(N)
    source = PhaseGHZSource(kind="honest", N=N)
    rng = np.random.default_rng(0)
    for setting, dist in ((Z_SETTING, oracle.z_distribution), (X_SETTING, oracle.x_distribution)):
        outcomes = sample_outcomes(source, setting, samples, rng)
        idx = outcomes @ (1 << np.arange(N - 1, -1, -1))
        empirical = np.bincount(idx, minlength=1 << N) / samples
        assert np.abs(empirical - dist).sum() < 0.01


def test_honest_z_support_is_even_parity_always():
    source = PhaseGHZSource(kind="honest", N=4)
    outcomes = sample_outcomes(source, Z_SETTING, 5000, np.random.default_rng(1))
    assert np.all(np.bitwise_xor.reduce(outcomes, axis=1) == 0)


def test_classical_mixture_x_agreement_probability():
    # N=3 mixture: X outcomes i.i.d. uniform, so all-identical w.p. 2/8
    source = PhaseGHZSource(kind="classical-zero-sum-mixture", N=3)
    dist = source_distribution(source, X_SETTING)
    assert dist[0] + dist[7] == pytest.approx(0.25, abs=1e-12)
    outcomes = sample_outcomes(source, X_SETTING, 200_000, np.random.default_rng(2))
    agree = (outcomes.min(axis=1) == outcomes.max(axis=1)).mean()
    assert abs(agree - 0.25) < 3 * (0.25 * 0.75 / 200_000) ** 0.5 + 1e-9


def test_classical_mixture_z_matches_honest():
    honest = PhaseGHZSource(kind="honest", N=4)
    mixture = PhaseGHZSource(kind="classical-zero-sum-mixture", N=4)
    assert np.array_equal(source_distribution(honest, Z_SETTING),
                          source_distribution(mixture, Z_SETTING))


def test_parity_violating_source_odd_rate():
    source = PhaseGHZSource(kind="parity-violating", N=3, param=0.2)
    dist = source_distribution(source, Z_SETTING)
    odd_mass = sum(dist[i] for i in range(8) if parity(int_to_bits(i, 3)) == 1)
    assert odd_mass == pytest.approx(0.2, abs=1e-12)
    outcomes = sample_outcomes(source, Z_SETTING, 100_000, np.random.default_rng(3))
    odd = np.bitwise_xor.reduce(outcomes, axis=1).mean()
    assert abs(odd - 0.2) < 3 * (0.2 * 0.8 / 100_000) ** 0.5


def test_fixed_string_source():
    source = PhaseGHZSource(kind="fixed-string", N=3, string=(0, 1, 1))
    outcomes = sample_outcomes(source, Z_SETTING, 50, np.random.default_rng(4))
    assert np.all(outcomes == np.array([0, 1, 1]))
    rec = sample_measurement(source, Z_SETTING, np.random.default_rng(5))
    assert rec.outcomes == (0, 1, 1)


def test_source_validation():
    with pytest.raises(ValueError):
        PhaseGHZSource(kind="imaginary", N=3)
    with pytest.raises(ValueError):
        PhaseGHZSource(kind="honest", N=2)
    with pytest.raises(ValueError):
        PhaseGHZSource(kind="biased-zero-sum", N=3, param=1.5)


def test_validation_honest_always_passes():
    source = PhaseGHZSource(kind="honest", N=3)
    rng = np.random.default_rng(6)
    for m in (1, 2, 5):
        report = protocol3_validate(source, m, rng)
        assert report.verdict
        assert report.z_failures == 0 and report.x_failures == 0
        assert report.groups_tested == 4 * m
        assert report.copies_consumed == 4 * 3 * m


def test_validation_counts_broadcasts():
    ledger = ComplexityLedger()
    source = PhaseGHZSource(kind="honest", N=5)
    protocol3_validate(source, 2, np.random.default_rng(7), ledger=ledger)
    assert ledger.phases["validation"].broadcasts == 5


def test_validation_rejects_insufficient_copies():
    source = PhaseGHZSource(kind="honest", N=3)
    with pytest.raises(ValueError, match="copies"):
        protocol3_validate(source, 2, np.random.default_rng(8), available_copies=23)


def test_validation_detects_fixed_string():
    # Z passes (even parity string) but X fails almost surely
    source = PhaseGHZSource(kind="fixed-string", N=3, string=(0, 0, 0))
    rng = np.random.default_rng(9)
    detections = 0
    for _ in range(1000):
        report = protocol3_validate(source, 2, rng)
        assert report.z_failures == 0
        detections += not report.verdict
    assert detections / 1000 >= 0.99


def test_validation_detects_parity_violation_at_analytic_rate():
    delta, m, N, trials = 0.1, 5, 3, 2000
    source = PhaseGHZSource(kind="parity-violating", N=N, param=delta)
    rng = np.random.default_rng(10)
    detections = sum(not protocol3_validate(source, m, rng).verdict for _ in range(trials))
    p_exact = 1.0 - (1.0 - delta) ** (2 * m * N)
    sigma = (p_exact * (1 - p_exact) / trials) ** 0.5
    assert abs(detections / trials - p_exact) <= 3 * sigma


def test_validation_detects_biased_mixture():
    source = PhaseGHZSource(kind="biased-zero-sum", N=3, param=0.3)
    rng = np.random.default_rng(11)
    detections = sum(not protocol3_validate(source, 2, rng).verdict for _ in range(500))
    assert detections / 500 >= 0.99  # classical X statistics give it away


def test_protocol4_honest_decodes_and_meters():
    source = PhaseGHZSource(kind="honest", N=3)
    x = np.array([[1, 0], [0, 1], [0, 1]], dtype=np.uint8)
    ledger = ComplexityLedger()
    result = protocol4_decode(source, x, 1, np.random.default_rng(12), ledger=ledger)
    assert np.array_equal(result.estimates[0], np.array([1, 0]))
    assert ledger.totals.ghz_copies == 37  # 4 * 9 * 1 + 1
    assert ledger.phases["decode"].broadcasts == 3
    assert ledger.phases["validation"].broadcasts == 3
    assert ledger.phases["setup"].broadcasts == 1  # the frame delivery
    assert len(result.reports) == 3
    assert {r.directing_receiver for r in result.reports} == {0, 1, 2}


@pytest.mark.parametrize("N,n", [(3, 4), (4, 3), (5, 8)])
def test_protocol4_honest_matches_parity_randomized(N, n):
    source = PhaseGHZSource(kind="honest", N=N)
    rng = np.random.default_rng(13)
    for _ in range(334):
        x = rng.integers(0, 2, size=(N, n), dtype=np.uint8)
        result = protocol4_decode(source, x, 1, rng)
        assert np.array_equal(result.estimates[0], np.bitwise_xor.reduce(x, axis=0))


def test_protocol4_aborts_on_bad_source():
    source = PhaseGHZSource(kind="fixed-string", N=3, string=(0, 0, 0))
    x = np.zeros((3, 2), dtype=np.uint8)
    rng = np.random.default_rng(14)
    for _ in range(50):
        with pytest.raises(ProtocolAbort) as excinfo:
            protocol4_decode(source, x, 1, rng)
        assert excinfo.value.reports


def test_protocol4_guards():
    source = PhaseGHZSource(kind="honest", N=3)
    with pytest.raises(ValueError):
        protocol4_decode(source, np.zeros((4, 2), dtype=np.uint8), 1, np.random.default_rng(0))
    with pytest.raises(ValueError):
        protocol4_decode(source, np.zeros((3, 2), dtype=np.uint8), 0, np.random.default_rng(0))


def test_final_mask_uniform_over_zero_sum_strings():
    # chi-square over the honest final-copy law against uniform on 2**(N-1) strings
    N, samples = 3, 100_000
    source = PhaseGHZSource(kind="honest", N=N)
    outcomes = sample_outcomes(source, Z_SETTING, samples, np.random.default_rng(15))
    idx = outcomes @ (1 << np.arange(N - 1, -1, -1))
    counts = np.bincount(idx, minlength=8)
    observed = counts[counts > 0]
    assert observed.size == 4
    result = stats.chisquare(observed)
    assert result.pvalue > 0.01
