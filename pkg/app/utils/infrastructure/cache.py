"""Cache for parsed input files."""

import logging
import os
from typing import Any, Callable, Optional, Tuple

from cachetools import LRUCache

from app.config import Config

logger = logging.getLogger(__name__)

# Parsed ingest files, keyed on (path, mtime, size) so edits invalidate entries
_file_cache = LRUCache(maxsize=Config.CACHE_MAXSIZE)


def file_key(path: str, *extra: Any) -> Tuple:
    """Cache key for a file: resolved path plus modification stamp."""
    resolved = os.path.realpath(path)
    stat = os.stat(resolved)
    return (resolved, stat.st_mtime_ns, stat.st_size) + tuple(extra)


def get_from_cache(key: Tuple) -> Optional[Any]:
    return _file_cache.get(key)


def add_to_cache(key: Tuple, value: Any) -> None:
    _file_cache[key] = value
    logger.debug(f"Cached {key[0]}")


def cached_parse(path: str, parser: Callable[[str], Any], *extra: Any) -> Any:
    """Parse a file once per (path, mtime, size, extra) and reuse the result."""
    key = file_key(path, *extra)
    hit = get_from_cache(key)
    if hit is not None:
        logger.debug(f"Cache hit for {path}")
        return hit
    value = parser(path)
    add_to_cache(key, value)
    return value


def invalidate_cache() -> None:
    """Drop every cached entry."""
    _file_cache.clear()
    logger.info("File cache cleared")
