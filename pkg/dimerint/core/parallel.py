"""
Ordered parallel map over independent evaluations.

Sweeps of inverse Kasteleyn entries, probe schedules and oracle solves are
independent of one another. They are fanned out to a multiprocessing pool and
gathered in input order, so output is identical to a serial run.

The worker count comes from the DIMER_THREADS environment variable unless
given explicitly; 0 means one worker per CPU.

Version: 1.0.0
"""

import logging
import multiprocessing
import os

from typing import Callable, Iterable, List, Optional, TypeVar

from dimerint.core.validators import ParameterValidators

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "DIMER_THREADS"


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    Return the number of worker processes to use.

    Parameters
    ----------
    workers: int, default=None
        Explicit count. When None, DIMER_THREADS is read; when that is unset
        a single worker is used. 0 means one worker per CPU.
    """

    if workers is None:
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"{WORKERS_ENV} must be a non-negative integer. Got '{raw}'.")

    ParameterValidators.validate_integer_parameter(workers, "workers", min_val=0)
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def ordered_map(func: Callable[[T], R],
                items: Iterable[T],
                workers: Optional[int] = None) -> List[R]:
    """
    Apply func to every item and return the results in input order.

    func and the items must be picklable when more than one worker is used.
    """

    items = list(items)
    workers = min(resolve_workers(workers), max(len(items), 1))

    if workers <= 1:
        return [func(item) for item in items]

    logger.debug(f"Mapping {len(items)} tasks over {workers} worker processes.")
    with multiprocessing.Pool(processes=workers) as pool:
        return list(pool.imap(func, items))
