"""Exact information-theory primitives for small discrete variables.

Entropies are in bits (base-2 logs, 0 log 0 = 0).  Joint distributions are
handled as exact occurrence counts wherever possible so that structurally
zero mutual informations come out zero to near machine precision.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np


def entropy_bits(p) -> float:
    """Entropy of a probability vector."""
    arr = np.asarray(p, dtype=float)
    if arr.size and (arr < -1e-12).any():
        raise ValueError("negative probability")
    total = float(arr.sum())
    if not math.isclose(total, 1.0, abs_tol=1e-9):
        raise ValueError(f"probabilities sum to {total}, expected 1")
    terms = [float(x) * math.log2(float(x)) for x in arr.ravel() if x > 0.0]
    return -math.fsum(terms)


def entropy_from_counts(counts) -> float:
    """Entropy of the empirical distribution given integer counts."""
    values = [int(c) for c in counts if c > 0]
    total = sum(values)
    if total == 0:
        raise ValueError("no observations")
    return math.log2(total) - math.fsum(c * math.log2(c) for c in values) / total


def mi_from_joint_counts(joint: Counter | dict) -> float:
    """Mutual information I(A;B) in bits from counts keyed by (a, b) pairs.

    Computed as H(A) + H(B) - H(A,B); exact up to float rounding.
    """
    a_counts: Counter = Counter()
    b_counts: Counter = Counter()
    for (a, b), c in joint.items():
        a_counts[a] += c
        b_counts[b] += c
    h_a = entropy_from_counts(a_counts.values())
    h_b = entropy_from_counts(b_counts.values())
    h_ab = entropy_from_counts(joint.values())
    return h_a + h_b - h_ab


def conditional_mi_from_counts(joint: Counter | dict) -> float:
    """I(A;B|C) in bits from counts keyed by (a, b, c) triples."""
    by_c: dict = {}
    for (a, b, c), n in joint.items():
        by_c.setdefault(c, Counter())[(a, b)] += n
    total = sum(sum(sub.values()) for sub in by_c.values())
    if total == 0:
        raise ValueError("no observations")
    acc = 0.0
    for sub in by_c.values():
        weight = sum(sub.values()) / total
        acc += weight * mi_from_joint_counts(sub)
    return acc


def mutual_information(p, w) -> float:
    """I(p;W) = H(p) + H(Wp) - H(joint) for input distribution p and channel w.

    ``w[x][y]`` is the probability of output y on input x.
    """
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    if w.shape[0] != p.size:
        raise ValueError("channel rows must match input alphabet")
    joint = p[:, None] * w
    return entropy_bits(p) + entropy_bits(joint.sum(axis=0)) - entropy_bits(joint.ravel())
