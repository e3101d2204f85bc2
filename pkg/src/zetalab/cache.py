"""Parameter-keyed file cache for coefficient tables and zero lists.

One flat directory (env ZETALAB_CACHE or ./.zetalab_cache) holding arithmetic
tables in the 'arithfn' binary format and zero lists in the plain-text
ordinate format; filenames carry a short hash of the generating parameters.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

from . import arith, zeta

ENV_VAR = "ZETALAB_CACHE"
DEFAULT_DIR = ".zetalab_cache"


def cache_dir(override: str | None = None) -> Path:
    path = Path(override or os.environ.get(ENV_VAR, DEFAULT_DIR))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _key(**params) -> str:
    blob = ",".join(f"{k}={params[k]!r}" for k in sorted(params))
    return hashlib.sha1(blob.encode()).hexdigest()[:16]


def table_path(name: str, limit: int, directory: Path) -> Path:
    return directory / f"arithfn-{_key(name=name, limit=limit)}.bin"


def load_or_build_table(name: str, limit: int, builder, directory: Path | None = None,
                        enabled: bool = True) -> arith.ArithFnTable:
    """Fetch a cached table or build and store it.  ``builder`` is a thunk."""
    if not enabled:
        return builder()
    directory = directory if directory is not None else cache_dir()
    path = table_path(name, limit, directory)
    if path.exists():
        table = arith.load_table(path)
        if table.limit == limit:
            return table
    table = builder()
    arith.save_table(table, path)
    return table


def zeros_path(T: float, directory: Path) -> Path:
    return directory / f"zeros-{_key(T=T)}.txt"


def _declared_height(path: Path) -> float | None:
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("#") and "max_height=" in first:
        try:
            return float(first.split("max_height=")[1].strip())
        except ValueError:
            return None
    return None


def load_or_find_zeros(T: float, directory: Path | None = None,
                       enabled: bool = True, threads: int = 1) -> zeta.ZeroList:
    if not enabled:
        return zeta.find_zeros(T, threads=threads)
    directory = directory if directory is not None else cache_dir()
    path = zeros_path(T, directory)
    if path.exists():
        declared = _declared_height(path)
        if declared is not None and declared >= T:
            zeros = zeta.ingest_zeros(path, cross_check=False)
            return zeta.ZeroList(zeros.ordinates, "computed", declared)
    zeros = zeta.find_zeros(T, threads=threads)
    zeta.write_zeros(zeros, path)
    return zeros
