import fnmatch
import hashlib
import json
import logging
from typing import Any, List, Optional, Union

import redis.asyncio as redis

from .config import get_settings

_store: Optional[Union[redis.Redis, "InMemoryStore"]] = None

logger = logging.getLogger("grmlab")

# Cached reports live for a day
REPORT_TTL = 24 * 3600


class InMemoryStore:
    def __init__(self) -> None:
        self._store: dict[str, Any] = {}

    async def keys(self, pattern: str = "*") -> List[str]:
        return [k for k in self._store if fnmatch.fnmatch(k, pattern)]

    async def get(self, key: str) -> Optional[str]:
        return self._store.get(key)

    async def set(self, key: str, value: Any, ex: Optional[int] = None) -> None:
        self._store[key] = value

    async def ping(self) -> bool:
        return True


def report_key(kind: str, payload: Any) -> str:
    """``kind:sha256`` of the canonical JSON of ``payload``."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return f"{kind}:{hashlib.sha256(canonical.encode('utf-8')).hexdigest()}"


async def get_store() -> Union[redis.Redis, InMemoryStore]:
    global _store
    settings = get_settings()
    if settings.testing:
        if not isinstance(_store, InMemoryStore):
            _store = InMemoryStore()
        return _store

    if _store is None:
        logger.debug("Creating new Redis connection")
        _store = redis.from_url(settings.redis_url, decode_responses=True)
        await _store.ping()
    return _store
