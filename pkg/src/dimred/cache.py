"""Content-addressed on-disk cache for expensive results (JSON payloads)."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Optional

log = logging.getLogger(__name__)


def digest(fragment) -> str:
    blob = json.dumps(fragment, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class Cache:
    """Maps a hash of a config fragment to a stored JSON document.

    Writes go to a temporary file in the cache directory and are renamed
    into place, so concurrent writers never expose partial entries.
    """

    def __init__(self, root, enabled: bool = True):
        self.root = Path(root)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[dict]:
        if not self.enabled:
            return None
        p = self.path(key)
        if not p.exists():
            return None
        try:
            with open(p, encoding="utf-8") as fh:
                doc = json.load(fh)
            if doc.get("key") != key:
                raise ValueError("key mismatch")
            return doc["value"]
        except (ValueError, KeyError, OSError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", p, exc)
            try:
                p.unlink()
            except OSError:
                pass
            return None

    def put(self, key: str, value: dict) -> None:
        if not self.enabled:
            return
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"key": key, "value": value}, fh, sort_keys=True)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, fragment, compute: Callable[[], dict]) -> dict:
        key = digest(fragment)
        hit = self.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        value = compute()
        self.put(key, value)
        # hand back what a later hit would return
        return json.loads(json.dumps(value, sort_keys=True))


class NullCache(Cache):
    def __init__(self):
        super().__init__(Path(os.devnull), enabled=False)
