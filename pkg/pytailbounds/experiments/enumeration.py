"""Exact event probabilities by exhaustive path enumeration."""

import itertools
import logging
import math

import numpy as np

from ..martingale.errors import DomainError, PreconditionError
from ..martingale.processes import IncrementModel, SymmetricParetoModel
from .config import MAX_ENUMERATION_PATHS, MAX_ENUMERATION_STEPS
from .events import EventSpec, event_mask

_LOG = logging.getLogger(__name__)

_BLOCK = 1 << 15


def exact_event_probability(model: IncrementModel, spec: EventSpec) -> float:
    """
    Sum the probabilities of all support^n paths that realize the event.

    Raises:
        PreconditionError: If the model is not finite-support
        DomainError: If n or the number of paths exceeds the enumeration limits
    """
    if isinstance(model, SymmetricParetoModel):
        raise PreconditionError("enumeration needs a finite-support model")
    atoms = [(v, p) for v, p in model.support() if p > 0]
    paths = len(atoms) ** spec.n
    if spec.n > MAX_ENUMERATION_STEPS or paths > MAX_ENUMERATION_PATHS:
        raise DomainError(
            f"{len(atoms)}^{spec.n} paths exceed the enumeration limit "
            f"({MAX_ENUMERATION_STEPS} steps, {MAX_ENUMERATION_PATHS} paths)"
        )

    values = np.array([v for v, _ in atoms], dtype=np.float64)
    masses = np.array([p for _, p in atoms], dtype=np.float64)
    indices = itertools.product(range(len(atoms)), repeat=spec.n)
    hits: list[float] = []
    while block := list(itertools.islice(indices, _BLOCK)):
        index = np.array(block, dtype=np.intp)
        mask = event_mask(values[index], model, spec)
        hits.extend(np.prod(masses[index[mask]], axis=1).tolist())

    probability = math.fsum(hits)
    _LOG.debug("enumerated %d paths, P = %r", paths, probability)
    return min(1.0, probability)
