"""Deterministic adaptive sampler for minimal defective k-sets.

One run draws a random ordered sample S of size a0, then repeatedly
binary-searches for the leftmost position in S that completes a
defective set together with the accumulated nodes D. Each found node is
appended to D and the search continues on the prefix strictly left of
it, until D itself tests defective (then a bottom-up pass certifies
minimality) or D would exceed k_max (abort). The trajectory is fully
determined by the initial sample and the oracle's noise draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySelectionError, ValidationError
from .oracle import KSet, Oracle, TestLedger, sample
from .results import RunOutcome, RunResult

ALGORITHM = "sight"

# Registry of node sets already submitted to the oracle this run, with
# the answer observed. The minimality pass skips registered subsets for
# free, and the accumulated-set test reuses a registered answer instead
# of charging a duplicate test.
TestedRegistry = dict[frozenset, bool]


@dataclass(frozen=True)
class SightConfig:
    """Control parameters: initial sample size and target size window."""

    a0: int
    k_min: int = 2
    k_max: int = 4

    def validate(self, universe_size: int) -> None:
        if not 2 <= self.k_min <= self.k_max:
            raise ValidationError("need 2 <= k_min <= k_max")
        if not self.k_max <= self.a0 < universe_size:
            raise ValidationError("need k_max <= a0 < universe size")


def _test_and_record(
    nodes: Sequence[int],
    oracle: Oracle,
    ledger: TestLedger,
    rng: np.random.Generator,
    tested: TestedRegistry,
) -> bool:
    result = oracle.is_defective(nodes, ledger, rng)
    tested[frozenset(nodes)] = result
    return result


def bin_search(
    s: Sequence[int],
    d: Sequence[int],
    oracle: Oracle,
    ledger: TestLedger,
    rng: np.random.Generator,
    tested: Optional[TestedRegistry] = None,
) -> int:
    """Leftmost 1-based index m such that d + s[:m] tests defective.

    Classic halving over positions of `s`: each probe tests the nodes of
    `d` together with a prefix of `s`, narrowing [l, r] until they meet.
    Uses at most ceil(log2(len(s))) tests. The caller guarantees that
    d + s tests defective on a noise-free oracle; under false negatives
    the returned index may be wrong, which the caller's flow absorbs.
    """
    if not s:
        raise EmptySelectionError("cannot binary-search an empty list")
    if tested is None:
        tested = {}
    d = list(d)
    left, right = 1, len(s)
    while left < right:
        i = (right - left + 1) // 2  # ceil((right - left) / 2)
        if _test_and_record(d + list(s[: right - i]), oracle, ledger, rng, tested):
            right = right - i
        else:
            left = right - i + 1
    return right


def bottom_up_sight(
    d: Sequence[int],
    k_min: int,
    k_max: int,
    tested: TestedRegistry,
    oracle: Oracle,
    ledger: TestLedger,
    rng: np.random.Generator,
) -> KSet:
    """Smallest defective subset of `d` among sizes k_min..|d|-1, else `d`.

    Tiers are scanned in ascending size, in random order within a tier,
    skipping (for free) subsets already submitted to the oracle during
    this run. During a run, every registered proper subset of `d` was
    observed non-defective, so skipping cannot hide a smaller answer.
    """
    d_nodes = sorted(d)
    for k in range(k_min, min(k_max, len(d_nodes) - 1) + 1):
        tier = list(combinations(d_nodes, k))
        for idx in rng.permutation(len(tier)):
            cand = tier[idx]
            if frozenset(cand) in tested:
                continue
            if _test_and_record(cand, oracle, ledger, rng, tested):
                return tuple(cand)
    return tuple(d_nodes)


def run_sight(
    universe_size: int,
    config: SightConfig,
    oracle: Oracle,
    rng: np.random.Generator,
    *,
    init_rng: Optional[np.random.Generator] = None,
    init_noise_rng: Optional[np.random.Generator] = None,
    initial_sample: Optional[Sequence[int]] = None,
) -> RunResult:
    """Execute one deterministic-sampler run.

    `init_rng` (defaulting to `rng`) supplies the initial sample and
    `init_noise_rng` (defaulting to `init_rng`) the noise draw for the
    initial test; paired runs hand both algorithms generators for the
    same substreams so they share that prefix exactly. `initial_sample`
    bypasses sampling for callers that need a specific ordered sample.
    """
    config.validate(universe_size)
    init_rng = rng if init_rng is None else init_rng
    init_noise_rng = init_rng if init_noise_rng is None else init_noise_rng
    if initial_sample is None:
        s = sample(range(universe_size), config.a0, init_rng)
    else:
        s = [int(v) for v in initial_sample]
        if len(s) != config.a0:
            raise ValidationError("initial_sample must have exactly a0 elements")

    ledger = TestLedger()
    tested: TestedRegistry = {}

    def result(outcome: RunOutcome, found: KSet | None = None,
               pre_bu: int | None = None) -> RunResult:
        return RunResult(
            algorithm=ALGORITHM,
            outcome=outcome,
            ledger=ledger,
            a0=config.a0,
            found=found,
            positives_pre_bottom_up=ledger.positives if pre_bu is None else pre_bu,
        )

    if not _test_and_record(s, oracle, ledger, init_noise_rng, tested):
        return result(RunOutcome.ABORT_INITIAL)

    d: list[int] = []
    while len(d) < config.k_max:
        if not s:
            # Defective content was truncated away (false negatives) or
            # completes below k_min. Abort rather than search an empty list.
            return result(RunOutcome.ABORT_TOO_LARGE)
        m = bin_search(s, d, oracle, ledger, rng, tested)
        d.append(s[m - 1])
        if len(d) >= config.k_min:
            key = frozenset(d)
            if key in tested:
                defective = tested[key]
            else:
                defective = _test_and_record(d, oracle, ledger, rng, tested)
            if defective:
                pre_bu = ledger.positives
                found = bottom_up_sight(
                    d, config.k_min, config.k_max, tested, oracle, ledger, rng
                )
                return result(RunOutcome.FOUND, found=found, pre_bu=pre_bu)
        s = s[: m - 1]
    return result(RunOutcome.ABORT_TOO_LARGE)
