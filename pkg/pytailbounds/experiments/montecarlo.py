"""Monte Carlo estimation of tail events and domination checks.

Trials are split into fixed chunks of CHUNK_SIZE. Every trial samples from
its own substream, keyed by (seed, trial index), so the summed hit count is
the same for any number of workers and any completion order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from enum import StrEnum
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..martingale.bounds import (
    BetaParams,
    BoundParams,
    ConstantChoice,
    b0,
    b1,
    b2,
    b_subgamma,
    large_deviation_bound,
    selfnorm_bound,
    theorem2_bound,
)
from ..martingale.characteristics import CharKind
from ..martingale.config import ATOM_TOLERANCE
from ..martingale.errors import PreconditionError
from ..martingale.processes import IncrementModel, sample_increments
from ..martingale.streams import RandomStream
from .config import (
    CHUNK_SIZE,
    DEFAULT_DELTA,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    FALSIFY_FACTOR,
    MIN_GATED_HITS,
)
from .events import EventMode, EventSpec, event_mask
from .report import CellStatus, ReportRow, ReportTable

_LOG = logging.getLogger(__name__)


class MCEstimate(BaseModel):
    """Hit count of N trials with a one-sided Hoeffding upper bound."""

    model_config = ConfigDict(frozen=True)

    trials: int = Field(ge=1)
    hits: int = Field(ge=0)
    delta: float = Field(gt=0, lt=1)
    p_hat: float
    upper: float

    @model_validator(mode="after")
    def _check_counts(self) -> Self:
        if self.hits > self.trials:
            raise ValueError(f"hits {self.hits} exceed trials {self.trials}")
        return self

    @classmethod
    def from_counts(
        cls, hits: int, trials: int, delta: float = DEFAULT_DELTA
    ) -> "MCEstimate":
        """upper = p_hat + sqrt(ln(1/delta) / (2N)), clamped to [p_hat, 1]."""
        p_hat = hits / trials
        width = math.sqrt(math.log(1.0 / delta) / (2.0 * trials))
        upper = min(1.0, max(p_hat, p_hat + width))
        return cls(trials=trials, hits=hits, delta=delta, p_hat=p_hat, upper=upper)

    @property
    def half_width(self) -> float:
        return math.sqrt(math.log(1.0 / self.delta) / (2.0 * self.trials))

    def covers(self, probability: float) -> bool:
        """Whether probability lies in the Hoeffding band around p_hat."""
        return abs(self.p_hat - probability) <= self.half_width


def count_hits(
    model: IncrementModel, spec: EventSpec, seed: int, start: int, stop: int
) -> int:
    """Hits among trials start..stop-1, each sampled from its own substream."""
    batch = np.stack(
        [
            sample_increments(model, spec.n, RandomStream(seed, trial))
            for trial in range(start, stop)
        ]
    )
    return int(np.count_nonzero(event_mask(batch, model, spec)))


def _count_chunk(args: tuple[IncrementModel, EventSpec, int, int, int]) -> int:
    return count_hits(*args)


def estimate_event(
    model: IncrementModel,
    spec: EventSpec,
    trials: int,
    seed: int = DEFAULT_SEED,
    delta: float = DEFAULT_DELTA,
    workers: int = DEFAULT_WORKERS,
) -> MCEstimate:
    """
    Estimate P(event) from independent trials.

    Args:
        model: Increment law
        spec: Event to detect
        trials: Number of paths N >= 1
        seed: Master seed
        delta: Confidence failure probability of the upper bound
        workers: Worker processes; 1 runs in-process

    Returns:
        MCEstimate whose hit count depends only on (model, spec, trials, seed)
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    chunks = [
        (model, spec, seed, start, min(start + CHUNK_SIZE, trials))
        for start in range(0, trials, CHUNK_SIZE)
    ]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_count_chunk, chunks))
    else:
        counts = [_count_chunk(chunk) for chunk in chunks]
    _LOG.debug("chunk hit counts for %s: %s", spec.mode, counts)
    return MCEstimate.from_counts(sum(counts), trials, delta)


class BoundName(StrEnum):
    """Theoretical bounds a simulated event can be checked against."""

    B0 = "b0"
    B1 = "b1"
    B2 = "b2"
    B_SUBGAMMA = "b_subgamma"
    THEOREM2 = "theorem2"
    LARGE_DEVIATION = "large_deviation"
    SELFNORM_DERIVED = "selfnorm_derived"
    SELFNORM_PAPER = "selfnorm_paper"


class BoundRule(BaseModel):
    """Which events a bound applies to and what it assumes of the model."""

    model_config = ConfigDict(frozen=True)

    kinds: frozenset[CharKind | None]
    modes: frozenset[EventMode]
    symmetric: bool = False
    supermartingale: bool = False


_QUADRATIC_MODES = frozenset(
    {EventMode.SOME_K, EventMode.MAX_TERMINAL, EventMode.TERMINAL}
)

# Single source of truth for legal bound/event pairings
BOUND_RULES: dict[BoundName, BoundRule] = {
    BoundName.B1: BoundRule(
        kinds=frozenset({CharKind.G, CharKind.H, CharKind.QUAD_PLUS_SQ}),
        modes=_QUADRATIC_MODES,
        supermartingale=True,
    ),
    BoundName.B2: BoundRule(
        kinds=frozenset({CharKind.G, CharKind.H, CharKind.QUAD_PLUS_SQ}),
        modes=_QUADRATIC_MODES,
        supermartingale=True,
    ),
    BoundName.B_SUBGAMMA: BoundRule(
        kinds=frozenset({CharKind.G, CharKind.H, CharKind.QUAD_PLUS_SQ}),
        modes=_QUADRATIC_MODES,
        supermartingale=True,
    ),
    BoundName.B0: BoundRule(
        kinds=frozenset({CharKind.M, CharKind.SQ_VAR}),
        modes=_QUADRATIC_MODES,
        symmetric=True,
    ),
    BoundName.THEOREM2: BoundRule(
        kinds=frozenset({CharKind.G_BETA, CharKind.G_ABS_BETA}),
        modes=_QUADRATIC_MODES,
        supermartingale=True,
    ),
    BoundName.LARGE_DEVIATION: BoundRule(
        kinds=frozenset({CharKind.G_ABS_BETA}),
        modes=frozenset({EventMode.MAX_TERMINAL}),
        supermartingale=True,
    ),
    BoundName.SELFNORM_DERIVED: BoundRule(
        kinds=frozenset({None}),
        modes=frozenset({EventMode.SELF_NORM}),
        symmetric=True,
    ),
    BoundName.SELFNORM_PAPER: BoundRule(
        kinds=frozenset({None}),
        modes=frozenset({EventMode.SELF_NORM}),
        symmetric=True,
    ),
}


def check_pairing(model: IncrementModel, spec: EventSpec, bound: BoundName) -> None:
    """
    Reject a bound that does not apply to the event or the model.

    Raises:
        PreconditionError: On a kind or mode the bound does not cover, an
            asymmetric model for a symmetric bound, or a positive mean
    """
    rule = BOUND_RULES[bound]
    if spec.char_kind not in rule.kinds or spec.mode not in rule.modes:
        raise PreconditionError(
            f"{bound} does not apply to {spec.mode} on {spec.char_kind}"
        )
    if rule.symmetric and not model.is_symmetric():
        raise PreconditionError(f"{bound} requires a symmetric model")
    if rule.supermartingale and model.mean() > ATOM_TOLERANCE:
        raise PreconditionError(f"{bound} requires increments with mean <= 0")


def bound_value(spec: EventSpec, bound: BoundName) -> float:
    """
    Theoretical bound for the probability of spec.

    The truncation level is char_param for G, H and M and 0 otherwise;
    the budget scale is spec.v. Thresholds x <= 0 and an infinite budget
    outside SELF_NORM give the trivial bound 1.
    """
    if spec.x <= 0:
        return 1.0
    if math.isinf(spec.x):
        return 0.0
    if spec.budget == 0:
        # the event forces a zero characteristic; no bound below 1 is claimed
        return 1.0
    if math.isinf(spec.budget) and spec.mode is not EventMode.SELF_NORM:
        # an unconstrained characteristic leaves only the trivial bound
        return 1.0
    match bound:
        case BoundName.B0 | BoundName.B1 | BoundName.B2 | BoundName.B_SUBGAMMA:
            uses_y = spec.char_kind is not None and spec.char_kind.uses_y
            y = spec.char_param if uses_y and spec.char_param is not None else 0.0
            params = BoundParams(x=spec.x, y=y, v=spec.v)
            functions = {
                BoundName.B0: b0,
                BoundName.B1: b1,
                BoundName.B2: b2,
                BoundName.B_SUBGAMMA: b_subgamma,
            }
            return functions[bound](params)
        case BoundName.THEOREM2:
            assert spec.char_param is not None
            return theorem2_bound(
                BetaParams(x=spec.x, v=spec.v, beta=spec.char_param)
            )
        case BoundName.LARGE_DEVIATION:
            assert spec.char_param is not None
            return large_deviation_bound(
                spec.x / spec.n, spec.budget / spec.n, spec.char_param, spec.n
            )
        case BoundName.SELFNORM_DERIVED | BoundName.SELFNORM_PAPER:
            assert spec.char_param is not None
            which = (
                ConstantChoice.PAPER
                if bound is BoundName.SELFNORM_PAPER
                else ConstantChoice.DERIVED
            )
            return selfnorm_bound(spec.x, spec.char_param, which)


def is_informational(spec: EventSpec, bound: BoundName) -> bool:
    """The printed self-normalized constant only gates at beta = 2."""
    return bound is BoundName.SELFNORM_PAPER and spec.char_param != 2.0


def cell_status(
    estimate: MCEstimate, bound: float, informational: bool = False
) -> CellStatus:
    """PASS when upper <= bound; otherwise UNGATED, FLAGGED or FAIL."""
    if estimate.upper <= bound:
        return CellStatus.PASS
    if estimate.hits < MIN_GATED_HITS:
        return CellStatus.UNGATED
    if informational:
        return CellStatus.FLAGGED
    return CellStatus.FAIL


class DominationCell(BaseModel):
    """An event paired with the bound it is checked against."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    spec: EventSpec
    bound: BoundName


def make_row(
    model_id: str,
    spec: EventSpec,
    estimate: MCEstimate,
    bound: BoundName | None = None,
    value: float | None = None,
    status: CellStatus = CellStatus.NA,
) -> ReportRow:
    """One CSV row for a simulated cell."""
    margin = None if value is None else value - estimate.upper
    return ReportRow(
        model_id=model_id,
        event_mode=spec.mode,
        char_kind=spec.char_kind.value if spec.char_kind is not None else "",
        y_or_beta=spec.char_param,
        x=spec.x,
        budget=spec.budget,
        n=spec.n,
        trials=estimate.trials,
        hits=estimate.hits,
        p_hat=estimate.p_hat,
        upper=estimate.upper,
        bound_name=bound.value if bound is not None else "",
        bound_value=value,
        margin=margin,
        status=status,
    )


class DominationRunner:
    """Runs domination cells for one model and collects report rows.

    Each cell is estimated independently with the runner's seed; the
    verdict of the run is the conjunction of the gated cells.
    """

    def __init__(
        self,
        model: IncrementModel,
        model_id: str,
        trials: int,
        seed: int = DEFAULT_SEED,
        delta: float = DEFAULT_DELTA,
        workers: int = DEFAULT_WORKERS,
        falsify: bool = False,
    ):
        """
        Initialize the runner.

        Args:
            model: Increment law shared by every cell
            model_id: Label written to the model_id column
            trials: Trials per cell
            seed: Master seed
            delta: Confidence failure probability
            workers: Worker processes per estimate
            falsify: Divide every bound by FALSIFY_FACTOR
        """
        self.model = model
        self.model_id = model_id
        self.trials = trials
        self.seed = seed
        self.delta = delta
        self.workers = workers
        self.falsify = falsify
        self.table: ReportTable[ReportRow] = ReportTable(ReportRow)

    def run_cell(self, cell: DominationCell) -> ReportRow:
        """Estimate one cell, compare against its bound and record the row."""
        check_pairing(self.model, cell.spec, cell.bound)
        estimate = estimate_event(
            self.model, cell.spec, self.trials, self.seed, self.delta, self.workers
        )
        value = bound_value(cell.spec, cell.bound)
        if self.falsify:
            value /= FALSIFY_FACTOR
        status = cell_status(estimate, value, is_informational(cell.spec, cell.bound))
        _LOG.info(
            "%s %s x=%g: upper=%.6g bound=%.6g %s",
            self.model_id,
            cell.bound,
            cell.spec.x,
            estimate.upper,
            value,
            status,
        )
        row = make_row(self.model_id, cell.spec, estimate, cell.bound, value, status)
        self.table.record(row)
        return row

    def run(self, cells: list[DominationCell]) -> ReportTable[ReportRow]:
        for cell in cells:
            self.run_cell(cell)
        return self.table


def verify_domination(
    model: IncrementModel,
    cells: list[DominationCell],
    trials: int,
    seed: int = DEFAULT_SEED,
    delta: float = DEFAULT_DELTA,
    workers: int = DEFAULT_WORKERS,
    model_id: str | None = None,
    falsify: bool = False,
) -> ReportTable[ReportRow]:
    """
    Check every cell's upper confidence bound against its theoretical bound.

    Returns:
        ReportTable whose passed() is the conjunction of the gated verdicts

    Raises:
        PreconditionError: If a bound is paired with an event or model it
            does not apply to
        DomainError: If a bound cannot be evaluated for its cell
    """
    # every bound is evaluated before any trial is sampled
    for cell in cells:
        check_pairing(model, cell.spec, cell.bound)
        bound_value(cell.spec, cell.bound)
    runner = DominationRunner(
        model,
        model_id if model_id is not None else model.describe(),
        trials,
        seed,
        delta,
        workers,
        falsify,
    )
    return runner.run(cells)
