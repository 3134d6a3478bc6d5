"""Deterministic, named randomness sub-streams.

Every experiment owns a single root seed; every stochastic choice is drawn
from a named sub-stream derived from it (state generation, protocol
randomness, adversary behaviour, ...) so that transcripts reproduce
bit-exactly and the streams stay independent of call order across
subsystems.
"""

from __future__ import annotations

import hashlib

import numpy as np

STATE_STREAM = "state-generation"
PROTOCOL_STREAM = "protocol-randomness"
ADVERSARY_STREAM = "adversary"
MESSAGE_STREAM = "message-selection"


def _name_key(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")


def substream(root_seed: int, name: str, index: int = 0) -> np.random.Generator:
    """Generator for the sub-stream ``name`` (optionally per-trial ``index``)."""
    seq = np.random.SeedSequence([int(root_seed), _name_key(name), int(index)])
    return np.random.default_rng(seq)
