"""Self-normalized maximum of symmetric sums against both constants."""

import logging

from ..martingale.domains import check_beta
from ..martingale.errors import PreconditionError
from ..martingale.processes import IncrementModel
from .config import DEFAULT_DELTA, DEFAULT_SEED, DEFAULT_WORKERS
from .events import EventMode, EventSpec
from .montecarlo import (
    BoundName,
    bound_value,
    cell_status,
    estimate_event,
    is_informational,
    make_row,
)
from .report import ReportRow, ReportTable

_LOG = logging.getLogger(__name__)


def selfnorm_experiment(
    model: IncrementModel,
    beta: float,
    x_grid: list[float],
    n: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    delta: float = DEFAULT_DELTA,
    workers: int = DEFAULT_WORKERS,
    model_id: str | None = None,
) -> ReportTable[ReportRow]:
    """
    Estimate P(max_k S_k / V_n(beta) >= x) for each x on the grid.

    Each x yields two rows from one estimate: the derived constant, which
    gates the run, and the printed constant, which gates only at beta = 2
    and is FLAGGED rather than failed otherwise.

    Raises:
        PreconditionError: If the model is not symmetric
        DomainError: If beta is outside (1, 2]
    """
    check_beta("selfnorm", beta)
    if not model.is_symmetric():
        raise PreconditionError("self-normalized experiment needs a symmetric model")
    label = model_id if model_id is not None else model.describe()
    table: ReportTable[ReportRow] = ReportTable(ReportRow)

    for x in x_grid:
        spec = EventSpec(mode=EventMode.SELF_NORM, char_param=beta, x=x, n=n)
        estimate = estimate_event(model, spec, trials, seed, delta, workers)
        for bound in (BoundName.SELFNORM_DERIVED, BoundName.SELFNORM_PAPER):
            value = bound_value(spec, bound)
            status = cell_status(estimate, value, is_informational(spec, bound))
            _LOG.info("%s beta=%g x=%g %s: %s", label, beta, x, bound, status)
            table.record(make_row(label, spec, estimate, bound, value, status))
    return table
