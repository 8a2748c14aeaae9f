"""
Parallel evaluation of a check over a panel of test objects.

Results are gathered as they complete and then put back in panel order, so
the merged verdict does not depend on thread scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

from .config import PANEL_WORKERS
from .schemas import Status, Verdict

logger = logging.getLogger(__name__)

T = TypeVar("T")


def merge_verdicts(check: str, verdicts: Sequence[Verdict], labels: Optional[Sequence[str]] = None,
                   seed: Optional[int] = None) -> Verdict:
    """First failure wins; otherwise the first unknown; otherwise holds."""
    labels = labels or [str(k) for k in range(len(verdicts))]
    for k, (label, v) in enumerate(zip(labels, verdicts)):
        if v.status == Status.FAILS:
            return Verdict.fails(check, {"item": label, "index": k, "detail": v.witness,
                                         "failed_check": v.check}, cutoffs=v.cutoffs, seed=seed)
    cutoffs: Dict[str, int] = {}
    pending = None
    for label, v in zip(labels, verdicts):
        cutoffs.update(v.cutoffs)
        if v.status == Status.UNKNOWN and pending is None:
            pending = label
    if pending is not None:
        return Verdict.unknown(check, cutoffs, witness={"item": pending}, seed=seed)
    return Verdict.holds(check, cutoffs=cutoffs, seed=seed)


class PanelRunner:
    """Runs one check per panel item on a thread pool."""

    def __init__(self, workers: int = PANEL_WORKERS):
        self.workers = max(1, workers)

    def map(self, fn: Callable[[T], Any], items: Sequence[T]) -> List[Any]:
        if self.workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        results: List[Any] = [None] * len(items)
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            future_to_index = {executor.submit(fn, item): k for k, item in enumerate(items)}
            for future in as_completed(future_to_index):
                results[future_to_index[future]] = future.result()
        return results

    def run(self, check: str, fn: Callable[[T], Verdict], items: Sequence[T],
            labels: Optional[Sequence[str]] = None, seed: Optional[int] = None) -> Verdict:
        logger.info("panel %s: %d items on %d workers", check, len(items), self.workers)
        verdicts = self.map(fn, items)
        merged = merge_verdicts(check, verdicts, labels or [getattr(i, "label", "") or str(k) for k, i in enumerate(items)],
                                seed=seed)
        logger.info("panel %s: %s", check, merged.status.value)
        return merged
