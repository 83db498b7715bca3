"""
Retry helpers built on tenacity.

Used where a numerical search can be rescued by retrying with a wider
bracket; nothing here sleeps.
"""
from typing import Callable, Tuple, Type, TypeVar

import logging

from tenacity import RetryCallState, Retrying, retry_if_exception_type, stop_after_attempt

logger = logging.getLogger(__name__)

T = TypeVar('T')


class BracketMiss(Exception):
    """A bracketing search did not enclose its target; retry wider."""


def _log_retry(state: RetryCallState) -> None:
    error = state.outcome.exception() if state.outcome else None
    logger.warning(f"Retry attempt {state.attempt_number} after: {str(error)[:200]}")


def retry_with_widening(
    func: Callable[[int], T],
    max_attempts: int = 4,
    exceptions: Tuple[Type[BaseException], ...] = (BracketMiss,),
) -> T:
    """
    Call func(attempt) with attempt = 0, 1, … until it stops raising one of
    `exceptions`.

    Args:
        func: receives the zero-based attempt number so it can widen its search.
        max_attempts: total calls before giving up.
        exceptions: exception types that trigger another attempt.

    Returns:
        Result of the first successful call.

    Raises:
        The last exception once all attempts fail.
    """
    for attempt in Retrying(
        stop=stop_after_attempt(max_attempts),
        retry=retry_if_exception_type(exceptions),
        before_sleep=_log_retry,
        reraise=True,
    ):
        with attempt:
            return func(attempt.retry_state.attempt_number - 1)
