"""Optional corpus-level parallelism, capped by ANISOFRAME_THREADS."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def thread_cap() -> int:
    raw = os.environ.get("ANISOFRAME_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def par_map(fn, items):
    """Map a pure top-level function over items, in processes if allowed."""
    items = list(items)
    workers = min(thread_cap(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
