"""Stochastic adaptive sampler for minimal defective k-sets.

One run draws a random sample S of size a0 and then walks a fixed
size-reduction schedule: at each step it repeatedly draws random subsets
of the next size until one tests defective (adopting it) or the attempt
budget t_max is exhausted (abort). The final surviving set, of size just
above k_max, is searched bottom-up exhaustively for the smallest
defective subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError
from .oracle import KSet, Oracle, TestLedger, sample
from .results import RunOutcome, RunResult

ALGORITHM = "rc"


@dataclass(frozen=True)
class RcConfig:
    """Control parameters: initial size, target window, attempt budget."""

    a0: int
    k_min: int = 2
    k_max: int = 4
    t_max: int = 20

    def validate(self, universe_size: int) -> None:
        if not 2 <= self.k_min <= self.k_max:
            raise ValidationError("need 2 <= k_min <= k_max")
        if not self.k_max < self.a0 < universe_size:
            raise ValidationError("need k_max < a0 < universe size")
        if self.t_max < 1:
            raise ValidationError("t_max must be at least 1")


def build_schedule(a0: int, k_max: int) -> list[int]:
    """Strictly decreasing size schedule from a0 down to just above k_max.

    Each size is the ceiling of the previous divided by c, with c = 2
    while the previous size exceeds 20 (binary splitting) and c = 1.5
    once sizes are 20 or below. Generation stops before any value would
    drop to k_max or less, so the last size always exceeds k_max.
    """
    if a0 <= k_max:
        raise ValidationError("a0 must exceed k_max")
    sizes = [a0]
    while True:
        prev = sizes[-1]
        nxt = (prev + 1) // 2 if prev > 20 else -(-prev * 2 // 3)
        if nxt <= k_max:
            return sizes
        sizes.append(nxt)


def bottom_up_rc(
    s: Sequence[int],
    k_min: int,
    k_max: int,
    oracle: Oracle,
    ledger: TestLedger,
    rng: np.random.Generator,
) -> KSet | None:
    """First defective subset of `s`, scanning sizes k_min..k_max.

    Every subset of each size is tested, in uniformly random order per
    size; unlike the deterministic sampler's final pass there is no
    already-tested bookkeeping to consult. Returns None when no subset
    of size at most k_max tests defective.
    """
    s_nodes = sorted(s)
    for k in range(k_min, min(k_max, len(s_nodes)) + 1):
        tier = list(combinations(s_nodes, k))
        for idx in rng.permutation(len(tier)):
            cand = tier[idx]
            if oracle.is_defective(cand, ledger, rng):
                return tuple(cand)
    return None


def run_rc(
    universe_size: int,
    config: RcConfig,
    oracle: Oracle,
    rng: np.random.Generator,
    *,
    init_rng: Optional[np.random.Generator] = None,
    init_noise_rng: Optional[np.random.Generator] = None,
    initial_sample: Optional[Sequence[int]] = None,
) -> RunResult:
    """Execute one stochastic-sampler run.

    `init_rng`, `init_noise_rng`, and `initial_sample` behave exactly as
    in the deterministic sampler, letting paired runs share the initial
    sample and its test outcome while diverging stochastically after.
    """
    config.validate(universe_size)
    init_rng = rng if init_rng is None else init_rng
    init_noise_rng = init_rng if init_noise_rng is None else init_noise_rng
    schedule = build_schedule(config.a0, config.k_max)
    if initial_sample is None:
        s = sample(range(universe_size), config.a0, init_rng)
    else:
        s = [int(v) for v in initial_sample]
        if len(s) != config.a0:
            raise ValidationError("initial_sample must have exactly a0 elements")

    ledger = TestLedger()

    def result(outcome: RunOutcome, found: KSet | None = None,
               abort_step: int | None = None) -> RunResult:
        return RunResult(
            algorithm=ALGORITHM,
            outcome=outcome,
            ledger=ledger,
            a0=config.a0,
            found=found,
            abort_step=abort_step,
        )

    if not oracle.is_defective(s, ledger, init_noise_rng):
        return result(RunOutcome.ABORT_INITIAL)

    for step, a_i in enumerate(schedule[1:], start=1):
        advanced = False
        for _ in range(config.t_max):
            s_new = sample(s, a_i, rng)
            if oracle.is_defective(s_new, ledger, rng):
                s = s_new
                advanced = True
                break
        if not advanced:
            return result(RunOutcome.ABORT_AT_STEP, abort_step=step)

    found = bottom_up_rc(s, config.k_min, config.k_max, oracle, ledger, rng)
    if found is None:
        return result(RunOutcome.ABORT_NO_MINIMAL)
    return result(RunOutcome.FOUND, found=found)
