"""Small shared utilities: bounded thread maps and deterministic file output."""
from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor


def thread_count(default=1):
    """Worker cap from the EDL_THREADS environment variable (default 1)."""
    raw = os.environ.get("EDL_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return default
    return max(1, n)


def parallel_map(fn, items, default_workers=1):
    """Order-preserving map over items; EDL_THREADS caps the worker pool.

    The work functions must be pure: results are independent of the worker
    count, so output files stay byte-identical under any EDL_THREADS.
    """
    items = list(items)
    workers = min(thread_count(default_workers), max(len(items), 1))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def atomic_write_text(path, text):
    """Write via a sibling temp file and rename, so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-edl-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def format_float(x):
    """Stable short float formatting shared by CSV and SVG output."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int,)):
        return str(x)
    return f"{float(x):.12g}"


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if not isinstance(v, str) else v for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
