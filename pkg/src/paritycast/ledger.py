"""Resource metering: message, key-setup and entangled-copy counters.

Counters only ever increase, broken down by protocol phase so quadratic-vs-
linear scaling claims can be checked against counted (not estimated) totals.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

PHASES = ("setup", "zero_sum", "validation", "decode")

LEDGER_CSV_HEADER = ["strategy", "N", "n", "m", "p2p_messages", "broadcasts", "key_messages", "ghz_copies"]
PHASE_CSV_HEADER = ["strategy", "N", "n", "m", "phase"] + LEDGER_CSV_HEADER[4:]


@dataclass
class PhaseCounts:
    p2p_messages: int = 0
    broadcasts: int = 0
    key_messages: int = 0
    ghz_copies: int = 0

    def merged(self, other: "PhaseCounts") -> "PhaseCounts":
        return PhaseCounts(
            self.p2p_messages + other.p2p_messages,
            self.broadcasts + other.broadcasts,
            self.key_messages + other.key_messages,
            self.ghz_copies + other.ghz_copies,
        )


@dataclass
class ComplexityLedger:
    phases: dict[str, PhaseCounts] = field(default_factory=dict)

    def _phase(self, phase: str) -> PhaseCounts:
        if phase not in PHASES:
            raise ValueError(f"unknown phase {phase!r}; expected one of {PHASES}")
        return self.phases.setdefault(phase, PhaseCounts())

    def count_p2p(self, phase: str, k: int = 1) -> None:
        self._bump(phase, "p2p_messages", k)

    def count_broadcast(self, phase: str, k: int = 1) -> None:
        self._bump(phase, "broadcasts", k)

    def count_key_setup(self, phase: str, k: int = 1) -> None:
        self._bump(phase, "key_messages", k)

    def count_ghz(self, phase: str, k: int = 1) -> None:
        self._bump(phase, "ghz_copies", k)

    def _bump(self, phase: str, counter: str, k: int) -> None:
        if k < 0:
            raise ValueError("ledger counters are monotone; increments must be >= 0")
        entry = self._phase(phase)
        setattr(entry, counter, getattr(entry, counter) + int(k))

    @property
    def totals(self) -> PhaseCounts:
        out = PhaseCounts()
        for entry in self.phases.values():
            out = out.merged(entry)
        return out

    def classical_total(self) -> int:
        t = self.totals
        return t.p2p_messages + t.broadcasts + t.key_messages

    def summary_row(self, strategy: str, N: int, n: int, m: int) -> list:
        t = self.totals
        return [strategy, N, n, m, t.p2p_messages, t.broadcasts, t.key_messages, t.ghz_copies]

    def phase_rows(self, strategy: str, N: int, n: int, m: int) -> list[list]:
        rows = []
        for phase in PHASES:
            entry = self.phases.get(phase)
            if entry is None:
                continue
            rows.append([strategy, N, n, m, phase, entry.p2p_messages, entry.broadcasts,
                         entry.key_messages, entry.ghz_copies])
        return rows


def write_ledger_csv(path, rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LEDGER_CSV_HEADER)
        writer.writerows(rows)


def write_phase_csv(path, rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PHASE_CSV_HEADER)
        writer.writerows(rows)
