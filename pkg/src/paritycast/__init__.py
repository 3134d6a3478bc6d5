"""paritycast: a parity-state broadcast channel and the conferencing
protocols its receivers use to decode through it.

The channel flips every receiver's bit whenever the modulo-2 sum of the
per-transmission state word is 1; each receiver holds one coordinate of
that word.  The package simulates the channel, the classical and
entanglement-assisted multi-party summation protocols that recover the
state, the coalition leakage analysis, and the resource accounting that
separates the quadratic classical cost from the linear entanglement-assisted
one.
"""

from .channel import (
    BroadcastCode,
    ChannelOutput,
    apply_channel_bit,
    phi,
    phi_sequence,
    random_messages,
    random_states,
    transcript_lines,
    transmit_block,
)
from .coordinator import (
    ConditionalDistribution,
    CoordinatorStrategy,
    LOCAL_MAPS,
    NonSignallingCheck,
    as_conditional_table,
    coordinate,
    effective_channel_mi,
    effective_channel_table,
    local_strategy,
    success_per_bit,
    success_probability,
    verify_non_signalling,
)
from .errors import PhaseError, ProtocolAbort, SetupError, StateSpaceError
from .ghz import (
    GHZOracle,
    MeasurementRecord,
    PhaseGHZSource,
    Protocol4Result,
    ValidationReport,
    protocol3_validate,
    protocol4_decode,
    sample_measurement,
    sample_outcomes,
    source_distribution,
    statevector_oracle,
)
from .harness import (
    ConverseReport,
    ExperimentConfig,
    ExperimentResult,
    RateReport,
    SCENARIOS,
    ScalingReport,
    converse_demo,
    run_experiment,
    scaling_report,
)
from .leakage import (
    Coalition,
    CoalitionView,
    MIEstimate,
    Protocol4Runner,
    Secret,
    StrategyIIRunner,
    all_coalitions,
    exact_mutual_information,
    extract_view,
    joint_view_counts,
    sampled_mutual_information,
    secret_output,
    secret_r,
    secret_x,
    secret_xor_x,
    secret_y,
)
from .ledger import ComplexityLedger, PhaseCounts
from .mpc import (
    CostSummary,
    Protocol1Result,
    SecureChannelSetup,
    ShareMatrix,
    StateDecodeResult,
    ZeroSumRandomness,
    ZeroSumResult,
    cited_message_bound,
    protocol1_modsum,
    protocol2_decode_states,
    protocol2_generate_zero_sum,
    setup_secure_channels,
    strategy_cost,
)
from .rng import substream
from .transcript import Message, ProtocolTranscript, transcript_from_jsonl

__version__ = "0.1.0"
