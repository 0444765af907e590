"""Wall-clock budgets and a small process-pool map."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str = "runtime budget exceeded", partial=None):
        super().__init__(message)
        self.partial = partial


class Budget:
    """Cooperative wall-clock limit; long loops call :meth:`check`."""

    def __init__(self, seconds: float | None = None):
        self.seconds = seconds
        self.start = time.monotonic()

    def elapsed(self) -> float:
        return time.monotonic() - self.start

    def exceeded(self) -> bool:
        return self.seconds is not None and self.elapsed() > self.seconds

    def check(self, partial=None) -> None:
        if self.exceeded():
            raise BudgetExceeded(f"runtime budget of {self.seconds}s exceeded", partial)


def pmap(fn: Callable, items: Iterable, workers: int = 1, chunksize: int = 8) -> list:
    """map() that fans out to worker processes when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))
