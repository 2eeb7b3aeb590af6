"""Small shared helpers: input coercion, exact summation, worker pools."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import InputError

__all__ = [
    "as_square_matrix",
    "fsum_complex",
    "multiset_match_dev",
    "resolve_threads",
    "map_ordered",
]


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex ndarray, rejecting NaN/Inf entries."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InputError(f"{name} must be nonempty")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise InputError(f"{name} contains NaN or Inf entries")
    return arr


def fsum_complex(values) -> complex:
    """Exact compensated sum of complex values (fsum on each part)."""
    vals = np.asarray(list(values), dtype=np.complex128).ravel()
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def multiset_match_dev(a, b) -> float:
    """Largest distance under greedy nearest matching of two complex
    multisets of equal size.

    Lexicographic sorting misorders conjugate pairs whose real parts
    agree only to rounding; matching each value to its nearest unused
    partner instead makes isospectrality checks stable.
    """
    left = np.asarray(list(a), dtype=np.complex128).ravel()
    right = list(np.asarray(list(b), dtype=np.complex128).ravel())
    if left.size != len(right):
        raise InputError(
            f"multisets differ in size: {left.size} vs {len(right)}"
        )
    worst = 0.0
    for v in sorted(left, key=abs, reverse=True):
        j = min(range(len(right)), key=lambda i: abs(v - right[i]))
        worst = max(worst, abs(v - right[j]))
        right.pop(j)
    return worst


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit arg, else PTSPECTRA_THREADS, else cpu count."""
    if threads is None:
        env = os.environ.get("PTSPECTRA_THREADS", "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise InputError(f"PTSPECTRA_THREADS not an integer: {env!r}")
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise InputError(f"thread count must be >= 1, got {threads}")
    return threads


def map_ordered(fn, items, threads: int | None = None) -> list:
    """Map fn over items with a thread pool, preserving input order.

    Falls back to a plain loop for a single worker so tracebacks stay
    simple. Results are always reduced in input order, independent of
    completion order, keeping outputs deterministic.
    """
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
