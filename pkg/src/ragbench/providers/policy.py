"""Retry with exponential backoff, and a sliding-window rate limiter."""

from __future__ import annotations

import logging
import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, TypeVar

log = logging.getLogger(__name__)

T = TypeVar("T")

WINDOW_SECONDS = 60.0


@dataclass(frozen=True)
class RequestPolicy:
    max_attempts: int = 3
    base_delay: float = 1.0
    multiplier: float = 2.0
    # per-minute budget in calls (or tokens, when callers pass token counts); None = unlimited
    rate_limit: float | None = None

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.base_delay < 0 or self.multiplier < 1:
            raise ValueError("backoff needs base_delay >= 0 and multiplier >= 1")
        if self.rate_limit is not None and self.rate_limit <= 0:
            raise ValueError("rate_limit must be positive")

    def delay(self, attempt: int) -> float:
        """Backoff before attempt ``attempt + 1`` (attempts are 1-based)."""
        return self.base_delay * self.multiplier ** (attempt - 1)


class RetryError(RuntimeError):
    def __init__(self, attempts: int, last_error: BaseException):
        super().__init__(f"gave up after {attempts} attempt(s): {last_error!r}")
        self.attempts = attempts
        self.last_error = last_error


def with_retry(
    policy: RequestPolicy,
    action: Callable[[], T],
    *,
    sleep: Callable[[float], None] = time.sleep,
) -> T:
    """Run ``action`` until it succeeds or ``policy.max_attempts`` is spent.

    Exceptions carrying ``retryable = False`` abort immediately.
    """
    for attempt in range(1, policy.max_attempts + 1):
        try:
            return action()
        except Exception as exc:
            if not getattr(exc, "retryable", True) or attempt == policy.max_attempts:
                raise RetryError(attempt, exc) from exc
            delay = policy.delay(attempt)
            log.warning("attempt %d/%d failed (%r); retrying in %.2fs", attempt, policy.max_attempts, exc, delay)
            sleep(delay)
    raise AssertionError("unreachable")


class RateLimiter:
    """Admit at most ``budget`` units in any 60-second window.

    ``clock`` and ``sleep`` are injectable so the spacing can be checked
    against a simulated clock.
    """

    def __init__(
        self,
        budget: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if budget <= 0:
            raise ValueError("budget must be positive")
        self.budget = budget
        self._clock = clock
        self._sleep = sleep
        self._events: deque[tuple[float, float]] = deque()
        self._used = 0.0
        self._lock = threading.Lock()

    def _expire(self, now: float) -> None:
        while self._events and self._events[0][0] + WINDOW_SECONDS <= now:
            _, units = self._events.popleft()
            self._used -= units

    def acquire(self, units: float = 1.0) -> float:
        """Block until ``units`` fit in the window; return the admission time."""
        with self._lock:
            target = None
            while True:
                now = self._clock()
                # after sleeping until ``target`` the oldest event has expired, even if
                # float rounding left the clock a few ulps short of it
                if target is not None:
                    now = max(now, target)
                self._expire(now)
                # an oversized request is admitted alone rather than never
                if not self._events or self._used + units <= self.budget:
                    self._events.append((now, units))
                    self._used += units
                    return now
                target = self._events[0][0] + WINDOW_SECONDS
                self._sleep(max(target - now, 0.0))
