"""Run outcomes and their wire format."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .oracle import KSet, TestLedger


class RunOutcome(str, Enum):
    FOUND = "Found"
    ABORT_INITIAL = "AbortInitial"          # initial sample tested non-defective
    ABORT_TOO_LARGE = "AbortTooLarge"       # accumulator hit k_max without success
    ABORT_AT_STEP = "AbortAtStep"           # a reduction step exhausted t_max attempts
    ABORT_NO_MINIMAL = "AbortNoMinimal"     # final bottom-up search found nothing


@dataclass(frozen=True)
class RunResult:
    """Outcome of one sampler run plus its test ledger.

    `positives_pre_bottom_up` snapshots the positive count before the
    final minimality search (deterministic sampler only); for aborted
    runs it equals the final positive count.
    """

    algorithm: str
    outcome: RunOutcome
    ledger: TestLedger
    a0: int
    found: KSet | None = None
    abort_step: int | None = None
    positives_pre_bottom_up: int | None = None

    @property
    def is_find(self) -> bool:
        return self.outcome is RunOutcome.FOUND

    @property
    def found_k(self) -> int | None:
        return None if self.found is None else len(self.found)

    def to_record(self, seed: int) -> dict:
        """JSON-ready run record. `seed` is the run's substream index."""
        record = {
            "algorithm": self.algorithm,
            "outcome": self.outcome.value,
            "found_set": None if self.found is None else list(self.found),
            "k": self.found_k,
            "positives": self.ledger.positives,
            "negatives": self.ledger.negatives,
            "a0": self.a0,
            "seed": seed,
        }
        if self.algorithm == "rc":
            record["abort_step"] = self.abort_step
        return record
