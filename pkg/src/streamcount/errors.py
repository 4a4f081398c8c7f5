"""Exception types shared by the streaming estimators and the harness."""

from __future__ import annotations

__all__ = [
    "StreamModelError",
    "EstimatorInvariantError",
    "ConfigError",
    "scaled_term",
]


class StreamModelError(ValueError):
    """The input stream violates its arrival model's contract."""


class EstimatorInvariantError(RuntimeError):
    """An estimator's internal invariant was violated during a pass."""


class ConfigError(ValueError):
    """An experiment configuration is invalid or internally inconsistent."""


def scaled_term(accumulator: float, rate: float, label: str) -> float:
    """accumulator / rate, where a zero rate must go with a zero accumulator."""
    if rate == 0:
        if accumulator:
            raise EstimatorInvariantError(
                f"{label} accumulated {accumulator} at sampling rate 0"
            )
        return 0.0
    return accumulator / rate
