"""Performance monitoring utilities."""

import logging
import threading
import time
from functools import wraps
from typing import Any, Callable, Dict, TypeVar, cast


logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


def measure_time(func: F) -> F:
    """Decorator to measure function execution time."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        duration = time.perf_counter() - start_time

        if duration > 1.0:  # Log if takes more than 1 second
            logger.warning(f"{func.__name__} took {duration:.2f} seconds")
        else:
            logger.debug(f"{func.__name__} took {duration:.3f} seconds")

        return result

    return cast(F, wrapper)


class PerformanceMonitor:
    """Count numerical work done during a run.

    Safe to update from worker threads.
    """

    def __init__(self) -> None:
        """Initialize performance monitor."""
        self.metrics: Dict[str, int] = {
            "oracle_solves": 0,
            "eigen_calls": 0,
            "numerov_shots": 0,
            "quadratures": 0,
            "cache_hits": 0,
            "cache_misses": 0,
            "domain_doublings": 0,
        }
        self.start_time = time.perf_counter()
        self._lock = threading.Lock()

    def increment(self, metric: str, count: int = 1) -> None:
        """Increment a metric counter."""
        with self._lock:
            if metric in self.metrics:
                self.metrics[metric] += count

    def reset(self) -> None:
        """Zero all counters and restart the clock."""
        with self._lock:
            for key in self.metrics:
                self.metrics[key] = 0
            self.start_time = time.perf_counter()

    def get_uptime(self) -> float:
        """Get elapsed time in seconds."""
        return time.perf_counter() - self.start_time

    def get_summary(self) -> Dict[str, Any]:
        """Get performance summary."""
        with self._lock:
            metrics = self.metrics.copy()
        return {
            "elapsed_seconds": self.get_uptime(),
            "metrics": metrics,
            "cache_hit_rate": self._calculate_cache_hit_rate(metrics),
        }

    @staticmethod
    def _calculate_cache_hit_rate(metrics: Dict[str, int]) -> float:
        """Calculate cache hit rate percentage."""
        total = metrics["cache_hits"] + metrics["cache_misses"]
        if total == 0:
            return 0.0
        return (metrics["cache_hits"] / total) * 100


# Global performance monitor
performance_monitor = PerformanceMonitor()
