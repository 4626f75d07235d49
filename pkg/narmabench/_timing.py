"""Measure the wall-clock time of the training blocks."""
import threading
import time
from typing import Callable, Tuple, TypeVar

T = TypeVar("T")

# Timed blocks must not overlap with other timed blocks, otherwise they compete for the CPU.
# The lock is re-entrant so that timed blocks can nest.
_TIMED_SECTION = threading.RLock()


def time_block(action: Callable[[], T]) -> Tuple[T, float]:
    """
    Execute ``action`` exclusively and measure its duration on the monotonic clock.

    :param action: work to be timed, without arguments
    :return: result of the action, wall-clock seconds
    """
    with _TIMED_SECTION:
        start = time.perf_counter()
        result = action()
        elapsed = time.perf_counter() - start

    return result, max(0.0, elapsed)
