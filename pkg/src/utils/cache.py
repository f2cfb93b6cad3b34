"""Simple in-memory cache for repeated oracle solves."""

import threading
import time
from typing import Any, Dict, Hashable, Optional, Tuple

from src.utils.performance import performance_monitor


class SimpleCache:
    """Simple time-based in-memory cache."""

    def __init__(self, default_ttl: int = 600):
        """Initialize cache.

        Args:
            default_ttl: Default time-to-live in seconds (10 minutes)
        """
        self.cache: Dict[Hashable, Tuple[Any, float]] = {}
        self.default_ttl = default_ttl
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        """Get value from cache if not expired."""
        with self._lock:
            if key in self.cache:
                value, expiry = self.cache[key]
                if time.monotonic() < expiry:
                    performance_monitor.increment("cache_hits")
                    return value
                del self.cache[key]
        performance_monitor.increment("cache_misses")
        return None

    def set(self, key: Hashable, value: Any, ttl: Optional[int] = None) -> None:
        """Set value in cache with TTL."""
        ttl = ttl or self.default_ttl
        with self._lock:
            self.cache[key] = (value, time.monotonic() + ttl)

    def invalidate(self, key: Hashable) -> None:
        """Remove key from cache."""
        with self._lock:
            self.cache.pop(key, None)

    def clear(self) -> None:
        """Clear all cache entries."""
        with self._lock:
            self.cache.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self.cache)
