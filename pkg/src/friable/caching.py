"""On-disk cache location and bookkeeping.

Cache files live in the directory named by the FRIABLE_CACHE_DIR environment
variable, falling back to ./.friable-cache.  Prime prefix sums are stored as
npz archives and solved delay-equation pieces as json; both carry a
format_version entry so stale layouts can be detected and ignored.
"""

from __future__ import annotations

import os
from pathlib import Path

FORMAT_VERSION = 1
_ENV_VAR = "FRIABLE_CACHE_DIR"
_DEFAULT_DIR = ".friable-cache"

__all__ = ["FORMAT_VERSION", "cache_dir", "cache_files", "clear_cache"]


def cache_dir(override: str | os.PathLike | None = None) -> Path:
    """Resolve the cache directory without creating it."""
    if override is not None:
        return Path(override)
    return Path(os.environ.get(_ENV_VAR) or _DEFAULT_DIR)


def cache_files(override: str | os.PathLike | None = None) -> list[Path]:
    root = cache_dir(override)
    if not root.is_dir():
        return []
    return sorted(p for p in root.iterdir() if p.is_file())


def clear_cache(override: str | os.PathLike | None = None) -> int:
    """Delete cached files; returns the number removed."""
    removed = 0
    for path in cache_files(override):
        path.unlink()
        removed += 1
    return removed
