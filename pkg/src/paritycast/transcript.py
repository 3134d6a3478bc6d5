"""Conferencing transcripts: every message sent between receivers.

A transcript is the ground truth a coalition's view is carved out of.  It
records point-to-point deliveries (private to their recipient) and
broadcasts (visible to everyone), in a round order that encodes who awaits
whom.  Receivers are 0-based indices throughout.

Transcripts serialize to JSON-lines with one record per message:
``{"round": r, "sender": i, "recipient": j-or-"broadcast", "payload_bits": "0101"}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bitops import bitstring

BROADCAST = None


@dataclass(frozen=True)
class Message:
    round: int
    sender: int
    recipient: int | None  # None means broadcast
    payload: tuple[int, ...]

    @property
    def is_broadcast(self) -> bool:
        return self.recipient is None

    def to_record(self) -> dict:
        return {
            "round": self.round,
            "sender": self.sender,
            "recipient": "broadcast" if self.recipient is None else self.recipient,
            "payload_bits": bitstring(self.payload),
        }


def _payload_tuple(bits) -> tuple[int, ...]:
    if isinstance(bits, (int, np.integer)):
        out = (int(bits),)
    elif isinstance(bits, (list, tuple)):
        out = tuple(int(b) for b in bits)
    else:
        out = tuple(int(b) for b in np.atleast_1d(np.asarray(bits)))
    if any(b not in (0, 1) for b in out):
        raise ValueError("payload bits must be 0 or 1")
    return out


@dataclass
class ProtocolTranscript:
    """Ordered log of conferencing messages plus per-receiver private data.

    ``private[i]`` holds what receiver i knows without any communication:
    its state bits, locally drawn randomness, derived masks.  ``outputs``
    holds the protocol result (the computed channel states), kept separate
    because it is excluded from secrecy accounting.
    """

    messages: list[Message] = field(default_factory=list)
    private: dict[int, dict[str, tuple]] = field(default_factory=dict)
    outputs: dict[str, tuple] = field(default_factory=dict)

    def send(self, round: int, sender: int, recipient: int, bits) -> Message:
        msg = Message(round, sender, int(recipient), _payload_tuple(bits))
        self.messages.append(msg)
        return msg

    def broadcast(self, round: int, sender: int, bits) -> Message:
        msg = Message(round, sender, BROADCAST, _payload_tuple(bits))
        self.messages.append(msg)
        return msg

    def record_private(self, receiver: int, name: str, bits) -> None:
        self.private.setdefault(int(receiver), {})[name] = _payload_tuple(bits)

    def next_round(self) -> int:
        return 1 + max((m.round for m in self.messages), default=-1)

    def extend(self, other: "ProtocolTranscript") -> None:
        """Append another transcript, shifting its rounds after ours."""
        offset = self.next_round()
        for m in other.messages:
            self.messages.append(Message(m.round + offset, m.sender, m.recipient, m.payload))
        for receiver, values in other.private.items():
            self.private.setdefault(receiver, {}).update(values)
        self.outputs.update(other.outputs)

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(m.to_record(), sort_keys=True) for m in self.messages)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_jsonl())
            if self.messages:
                fh.write("\n")


def transcript_from_jsonl(text: str) -> ProtocolTranscript:
    """Parse the JSON-lines serialization back into a transcript (messages only)."""
    out = ProtocolTranscript()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        recipient = rec["recipient"]
        recipient = None if recipient == "broadcast" else int(recipient)
        payload = tuple(int(c) for c in rec["payload_bits"])
        if any(b not in (0, 1) for b in payload):
            raise ValueError(f"malformed payload bits: {rec['payload_bits']!r}")
        out.messages.append(Message(int(rec["round"]), int(rec["sender"]), recipient, payload))
    return out
