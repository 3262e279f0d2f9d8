"""Paired-run experiment harness.

Runs both samplers from identical initial samples over a grid of initial
set sizes, attributes the cost of aborted runs to the next successful
find (per-find amortization), and aggregates the per-cell statistics the
benchmark reports: medians, abort rates, found-size proportions,
Mann-Whitney comparisons, and expected costs under a configurable
positive:negative test cost ratio.

All randomness is derived from (master seed, a0, run index, role)
substreams, so results are byte-identical for a given configuration no
matter how many worker processes execute the grid.
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional, Sequence

from .errors import ValidationError
from .oracle import Oracle, PlantedFamily, TestLedger
from .rc import RcConfig, run_rc
from .results import RunOutcome, RunResult
from .rng import ROLE_INIT, ROLE_INIT_NOISE, ROLE_RC, ROLE_SIGHT, spawn_generator
from .sight import SightConfig, run_sight
from .stats import MannWhitneyResult, mann_whitney_u

DEFAULT_RHOS = (1.0, 10.0, 50.0, 100.0)


@dataclass(frozen=True)
class ExperimentConfig:
    a0_grid: tuple[int, ...]
    runs_per_cell: int
    k_min: int = 2
    k_max: int = 4
    t_max: int = 20
    p_fn: float = 0.0
    master_seed: int = 0
    rhos: tuple[float, ...] = DEFAULT_RHOS
    label: str = "family"
    threads: int = 1

    def validate(self, universe_size: int) -> None:
        if not self.a0_grid:
            raise ValidationError("a0 grid must be nonempty")
        if self.runs_per_cell < 1:
            raise ValidationError("runs per cell must be at least 1")
        if self.threads < 1:
            raise ValidationError("threads must be at least 1")
        if any(rho <= 0 for rho in self.rhos):
            raise ValidationError("cost ratios must be positive")
        for a0 in self.a0_grid:
            SightConfig(a0, self.k_min, self.k_max).validate(universe_size)
            RcConfig(a0, self.k_min, self.k_max, self.t_max).validate(universe_size)


@dataclass(frozen=True)
class PairResult:
    """One paired run: both samplers started from the same initial sample."""

    pair_id: int
    sight: RunResult
    rc: RunResult


@dataclass(frozen=True)
class FindRecord:
    """A successful find with the cost of preceding aborts folded in."""

    algorithm: str
    a0: int
    pair_id: int
    found: tuple[int, ...]
    k: int
    own_positives: int
    own_negatives: int
    amortized_positives: int
    amortized_negatives: int

    @property
    def amortized_total(self) -> int:
        return self.amortized_positives + self.amortized_negatives


@dataclass(frozen=True)
class CellSummary:
    """Aggregates for one (algorithm, a0) cell."""

    algorithm: str
    a0: int
    label: str
    runs: int
    finds: int
    init_fail_rate: float
    abort_rate: Optional[float]          # conditioned on a defective initial set
    med_pos: Optional[float]
    med_neg: Optional[float]
    med_total: Optional[float]
    k_proportions: dict[int, float]
    prop_identical: Optional[float]      # over pairs where both algorithms found
    costs: dict[float, float]            # rho -> med_pos * rho + med_neg
    u_total: Optional[float]
    p_total: Optional[float]
    u_pos: Optional[float]
    p_pos: Optional[float]
    u_neg: Optional[float]
    p_neg: Optional[float]


def run_pair(
    family: PlantedFamily, config: ExperimentConfig, a0: int, pair_id: int
) -> PairResult:
    """Execute one paired run.

    Both samplers receive generators for the identical INIT substream, so
    they draw the same initial sample and the same initial-test noise;
    their decision/noise streams afterwards are independent substreams.
    The initial-test noise substream is keyed without a0, so cells of
    different initial sizes also share it (common random numbers: at
    saturation the same pairs flip to false negatives in every cell).
    """
    oracle = Oracle(family, config.p_fn)
    seed = config.master_seed
    sight_res = run_sight(
        family.universe_size,
        SightConfig(a0, config.k_min, config.k_max),
        oracle,
        spawn_generator(seed, a0, pair_id, ROLE_SIGHT),
        init_rng=spawn_generator(seed, a0, pair_id, ROLE_INIT),
        init_noise_rng=spawn_generator(seed, pair_id, ROLE_INIT_NOISE),
    )
    rc_res = run_rc(
        family.universe_size,
        RcConfig(a0, config.k_min, config.k_max, config.t_max),
        oracle,
        spawn_generator(seed, a0, pair_id, ROLE_RC),
        init_rng=spawn_generator(seed, a0, pair_id, ROLE_INIT),
        init_noise_rng=spawn_generator(seed, pair_id, ROLE_INIT_NOISE),
    )
    return PairResult(pair_id=pair_id, sight=sight_res, rc=rc_res)


_worker_family: Optional[PlantedFamily] = None
_worker_config: Optional[ExperimentConfig] = None


def _init_worker(family: PlantedFamily, config: ExperimentConfig) -> None:
    global _worker_family, _worker_config
    _worker_family = family
    _worker_config = config


def _run_chunk(a0: int, start: int, stop: int) -> list[PairResult]:
    assert _worker_family is not None and _worker_config is not None
    return [run_pair(_worker_family, _worker_config, a0, j) for j in range(start, stop)]


def run_cell(
    family: PlantedFamily, config: ExperimentConfig, a0: int
) -> list[PairResult]:
    """All paired runs of one cell, in pair-id order."""
    runs = config.runs_per_cell
    if config.threads <= 1:
        return [run_pair(family, config, a0, j) for j in range(runs)]
    chunk = max(1, -(-runs // (config.threads * 4)))
    spans = [(start, min(start + chunk, runs)) for start in range(0, runs, chunk)]
    with ProcessPoolExecutor(
        max_workers=config.threads,
        initializer=_init_worker,
        initargs=(family, config),
    ) as pool:
        futures = [pool.submit(_run_chunk, a0, start, stop) for start, stop in spans]
        out: list[PairResult] = []
        for fut in futures:
            out.extend(fut.result())
    return out


def amortize(
    results: Sequence[RunResult],
) -> tuple[list[FindRecord], TestLedger]:
    """Fold aborted-run costs into the next find, in run order.

    Returns the find records plus the unattributed residue: the summed
    ledgers of trailing aborts after the last find. Conservation holds
    exactly: amortized totals plus residue equal the summed run ledgers.
    """
    records: list[FindRecord] = []
    pending_pos = 0
    pending_neg = 0
    for pair_id, res in enumerate(results):
        if res.is_find:
            assert res.found is not None
            records.append(
                FindRecord(
                    algorithm=res.algorithm,
                    a0=res.a0,
                    pair_id=pair_id,
                    found=res.found,
                    k=len(res.found),
                    own_positives=res.ledger.positives,
                    own_negatives=res.ledger.negatives,
                    amortized_positives=res.ledger.positives + pending_pos,
                    amortized_negatives=res.ledger.negatives + pending_neg,
                )
            )
            pending_pos = 0
            pending_neg = 0
        else:
            pending_pos += res.ledger.positives
            pending_neg += res.ledger.negatives
    return records, TestLedger(positives=pending_pos, negatives=pending_neg)


def _mw_or_none(
    x: Sequence[float], y: Sequence[float]
) -> tuple[Optional[MannWhitneyResult], Optional[MannWhitneyResult]]:
    """Mann-Whitney of x vs y, reported from each side's perspective."""
    if not x or not y:
        return None, None
    res_x = mann_whitney_u(x, y)
    res_y = MannWhitneyResult(
        u_x=res_x.u_y,
        u_y=res_x.u_x,
        p_value=res_x.p_value,
        method=res_x.method,
        smaller=res_x.smaller,
    )
    return res_x, res_y


def summarize_cell(
    a0: int,
    pairs: Sequence[PairResult],
    rhos: Sequence[float] = DEFAULT_RHOS,
    label: str = "family",
) -> tuple[CellSummary, CellSummary]:
    """Summaries for both algorithms of one cell (deterministic fold)."""
    if not pairs:
        raise ValidationError("cannot summarize an empty cell")
    by_alg = {
        "sight": [p.sight for p in pairs],
        "rc": [p.rc for p in pairs],
    }
    records = {alg: amortize(results)[0] for alg, results in by_alg.items()}

    both_found = [
        (p.sight.found, p.rc.found) for p in pairs if p.sight.is_find and p.rc.is_find
    ]
    prop_identical = (
        sum(1 for s, r in both_found if s == r) / len(both_found)
        if both_found
        else None
    )

    mw_total = _mw_or_none(
        [r.amortized_total for r in records["sight"]],
        [r.amortized_total for r in records["rc"]],
    )
    mw_pos = _mw_or_none(
        [r.amortized_positives for r in records["sight"]],
        [r.amortized_positives for r in records["rc"]],
    )
    mw_neg = _mw_or_none(
        [r.amortized_negatives for r in records["sight"]],
        [r.amortized_negatives for r in records["rc"]],
    )

    summaries = []
    for side, alg in enumerate(("sight", "rc")):
        results = by_alg[alg]
        recs = records[alg]
        runs = len(results)
        init_fails = sum(1 for r in results if r.outcome is RunOutcome.ABORT_INITIAL)
        mid_aborts = sum(
            1
            for r in results
            if not r.is_find and r.outcome is not RunOutcome.ABORT_INITIAL
        )
        conditioned = runs - init_fails
        finds = len(recs)
        if finds:
            med_pos = float(statistics.median(r.amortized_positives for r in recs))
            med_neg = float(statistics.median(r.amortized_negatives for r in recs))
            med_total = float(statistics.median(r.amortized_total for r in recs))
            k_props = {}
            for r in recs:
                k_props[r.k] = k_props.get(r.k, 0) + 1
            k_props = {k: c / finds for k, c in sorted(k_props.items())}
            costs = {float(rho): med_pos * rho + med_neg for rho in rhos}
        else:
            med_pos = med_neg = med_total = None
            k_props = {}
            costs = {}
        mw_t, mw_p, mw_n = mw_total[side], mw_pos[side], mw_neg[side]
        summaries.append(
            CellSummary(
                algorithm=alg,
                a0=a0,
                label=label,
                runs=runs,
                finds=finds,
                init_fail_rate=init_fails / runs,
                abort_rate=(mid_aborts / conditioned) if conditioned else None,
                med_pos=med_pos,
                med_neg=med_neg,
                med_total=med_total,
                k_proportions=k_props,
                prop_identical=prop_identical,
                costs=costs,
                u_total=None if mw_t is None else mw_t.u_x,
                p_total=None if mw_t is None else mw_t.p_value,
                u_pos=None if mw_p is None else mw_p.u_x,
                p_pos=None if mw_p is None else mw_p.p_value,
                u_neg=None if mw_n is None else mw_n.u_x,
                p_neg=None if mw_n is None else mw_n.p_value,
            )
        )
    return summaries[0], summaries[1]


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    cells: dict[int, list[PairResult]]
    summaries: list[CellSummary]


def run_experiment(family: PlantedFamily, config: ExperimentConfig) -> ExperimentResult:
    """Execute the full paired grid and summarize every cell."""
    config.validate(family.universe_size)
    cells: dict[int, list[PairResult]] = {}
    summaries: list[CellSummary] = []
    for a0 in config.a0_grid:
        pairs = run_cell(family, config, a0)
        cells[a0] = pairs
        summaries.extend(summarize_cell(a0, pairs, config.rhos, config.label))
    return ExperimentResult(config=config, cells=cells, summaries=summaries)


def write_run_log(stream: IO[str], result: ExperimentResult) -> None:
    """Newline-delimited run records in pair-id order within each cell."""
    for a0 in result.config.a0_grid:
        for pair in result.cells[a0]:
            for res in (pair.sight, pair.rc):
                stream.write(
                    json.dumps(res.to_record(pair.pair_id), separators=(",", ":"))
                )
                stream.write("\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def csv_header(rhos: Sequence[float] = DEFAULT_RHOS) -> list[str]:
    cols = [
        "algorithm", "a0", "T_label", "finds", "init_fail_rate", "abort_rate",
        "med_pos", "med_neg", "med_total", "p2", "p3", "p4", "prop_identical",
    ]
    cols.extend(f"cost_r{rho:g}" for rho in rhos)
    cols.extend(["U", "p_value", "U_pos", "p_value_pos", "U_neg", "p_value_neg"])
    return cols


def summary_row(summary: CellSummary, rhos: Sequence[float]) -> list[str]:
    row = [
        summary.algorithm,
        str(summary.a0),
        summary.label,
        str(summary.finds),
        _fmt(summary.init_fail_rate),
        _fmt(summary.abort_rate),
        _fmt(summary.med_pos),
        _fmt(summary.med_neg),
        _fmt(summary.med_total),
        _fmt(summary.k_proportions.get(2)) if summary.finds else "",
        _fmt(summary.k_proportions.get(3)) if summary.finds else "",
        _fmt(summary.k_proportions.get(4)) if summary.finds else "",
        _fmt(summary.prop_identical),
    ]
    for rho in rhos:
        row.append(_fmt(summary.costs.get(float(rho))))
    row.extend(
        _fmt(v)
        for v in (
            summary.u_total, summary.p_total,
            summary.u_pos, summary.p_pos,
            summary.u_neg, summary.p_neg,
        )
    )
    return row


def write_summary_csv(
    stream: IO[str],
    summaries: Sequence[CellSummary],
    rhos: Sequence[float] = DEFAULT_RHOS,
) -> None:
    stream.write(",".join(csv_header(rhos)) + "\n")
    for summary in summaries:
        stream.write(",".join(summary_row(summary, rhos)) + "\n")


def read_run_log(path: str | Path) -> tuple[tuple[int, ...], dict[int, list[PairResult]]]:
    """Rebuild paired results from a run log written by `write_run_log`.

    Returns the a0 grid in first-appearance order and the pairs per cell.
    Records are expected in pair order, deterministic-sampler record
    first within each pair.
    """
    grid: list[int] = []
    cells: dict[int, dict[int, dict[str, RunResult]]] = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        res = RunResult(
            algorithm=rec["algorithm"],
            outcome=RunOutcome(rec["outcome"]),
            ledger=TestLedger(positives=rec["positives"], negatives=rec["negatives"]),
            a0=rec["a0"],
            found=None if rec["found_set"] is None else tuple(rec["found_set"]),
            abort_step=rec.get("abort_step"),
        )
        a0 = rec["a0"]
        if a0 not in cells:
            cells[a0] = {}
            grid.append(a0)
        cells[a0].setdefault(rec["seed"], {})[rec["algorithm"]] = res
    pairs_by_a0: dict[int, list[PairResult]] = {}
    for a0 in grid:
        pairs = []
        for pair_id in sorted(cells[a0]):
            sides = cells[a0][pair_id]
            if "sight" not in sides or "rc" not in sides:
                raise ValidationError(
                    f"run log pair {pair_id} (a0={a0}) is missing one algorithm"
                )
            pairs.append(
                PairResult(pair_id=pair_id, sight=sides["sight"], rc=sides["rc"])
            )
        pairs_by_a0[a0] = pairs
    return tuple(grid), pairs_by_a0
