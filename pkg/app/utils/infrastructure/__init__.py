"""Infrastructure utilities."""

from app.utils.infrastructure.cache import cached_parse, invalidate_cache

__all__ = ['cached_parse', 'invalidate_cache']
