"""Sieve-built arithmetic function tables and exact Dirichlet convolution.

Tables are the universal currency of the coefficient work: 1-indexed
float64 arrays wrapped with a name and a limit.  Mobius and the divisor
functions tau_k are exact integers stored in floats; von Mangoldt, log and
the derived coefficient sequences are floats accumulated with compensated
(Kahan) summation so that identity checks hold to ~1e-12 relative at desk
scale (N <= 1e6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_LIMIT_CAP = 10**6

_TAU_NAMES = tuple(f"tau_{k}" for k in range(2, 10))
STANDARD_NAMES = ("mobius", "vonmangoldt", "log", "one") + _TAU_NAMES


@dataclass(frozen=True)
class ArithFnTable:
    """Values of an arithmetic function on [1..limit].

    ``values`` has length limit + 1; index 0 is unused and kept at 0 so that
    values[n] is f(n).  Instances are immutable after construction and safe
    for concurrent reads.
    """

    name: str
    limit: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError(f"table limit must be >= 1, got {self.limit}")
        if self.values.shape != (self.limit + 1,):
            raise ValueError(
                f"values length {self.values.shape} inconsistent with limit {self.limit}"
            )
        self.values.setflags(write=False)

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.limit:
            raise IndexError(f"n={n} outside [1, {self.limit}]")
        return float(self.values[n])

    def restrict(self, n_max: int) -> "ArithFnTable":
        """View of the same function truncated to a smaller limit."""
        if n_max > self.limit:
            raise ValueError(f"cannot extend table {self.name} to {n_max}")
        return ArithFnTable(self.name, n_max, self.values[: n_max + 1].copy())


def _prime_mask(n: int) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def primes_up_to(n: int) -> np.ndarray:
    """Primes <= n as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    return np.nonzero(_prime_mask(n))[0].astype(np.int64)


def _sieve_mobius(n: int) -> np.ndarray:
    mu = np.zeros(n + 1, dtype=np.float64)
    mu[1:] = 1.0
    for p in primes_up_to(n):
        mu[p::p] *= -1.0
        if p * p <= n:
            mu[p * p :: p * p] = 0.0
    return mu


def _sieve_von_mangoldt(n: int) -> np.ndarray:
    lam = np.zeros(n + 1, dtype=np.float64)
    for p in primes_up_to(n):
        logp = math.log(p)
        pk = int(p)
        while pk <= n:
            lam[pk] = logp
            pk *= int(p)
    return lam


# sieve results are reused aggressively (tau_9 alone costs 8 convolutions)
_table_cache: dict[tuple[str, int], ArithFnTable] = {}


def clear_table_cache() -> None:
    _table_cache.clear()


def sieve_standard(name: str, limit: int) -> ArithFnTable:
    """Build one of the standard tables: mobius, vonmangoldt, log, one, tau_k.

    tau_k (2 <= k <= 9) is computed as the (k-1)-fold Dirichlet convolution
    of the constant function 1; intermediate tau tables are cached.
    """
    if name not in STANDARD_NAMES:
        raise ValueError(f"unknown arithmetic function {name!r}; expected one of {STANDARD_NAMES}")
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if limit > DEFAULT_LIMIT_CAP:
        raise ValueError(f"limit {limit} exceeds the desk-scale cap {DEFAULT_LIMIT_CAP}")
    key = (name, limit)
    cached = _table_cache.get(key)
    if cached is not None:
        return cached

    if name == "mobius":
        values = _sieve_mobius(limit)
    elif name == "vonmangoldt":
        values = _sieve_von_mangoldt(limit)
    elif name == "log":
        values = np.zeros(limit + 1)
        values[1:] = np.log(np.arange(1, limit + 1, dtype=np.float64))
    elif name == "one":
        values = np.ones(limit + 1)
        values[0] = 0.0
    else:
        k = int(name.split("_")[1])
        if k == 2:
            base = sieve_standard("one", limit)
            table = dirichlet_convolve(base, base, limit)
        else:
            table = dirichlet_convolve(
                sieve_standard(f"tau_{k - 1}", limit), sieve_standard("one", limit), limit
            )
        values = table.values.copy()

    out = ArithFnTable(name, limit, values)
    _table_cache[key] = out
    return out


def dirichlet_convolve(f: ArithFnTable, g: ArithFnTable, limit: int | None = None,
                       name: str | None = None) -> ArithFnTable:
    """Exact Dirichlet convolution (f*g)(n) = sum_{de=n} f(d) g(e) on [1..limit].

    Divisor-loop accumulation, O(limit log limit) element operations, with
    per-entry Kahan compensation: output indices d, 2d, 3d, ... are disjoint
    within each stride, so the compensated update is applied vectorised.
    """
    if limit is None:
        limit = min(f.limit, g.limit)
    if f.limit < limit or g.limit < limit:
        raise ValueError(
            f"convolution limit {limit} exceeds input limits ({f.limit}, {g.limit})"
        )
    out = np.zeros(limit + 1)
    comp = np.zeros(limit + 1)
    fv = f.values
    gv = g.values
    support = np.nonzero(fv[1 : limit + 1])[0] + 1
    for d in support:
        m = limit // d
        addend = fv[d] * gv[1 : m + 1]
        sl = slice(d, d * m + 1, d)
        y = addend - comp[sl]
        t = out[sl] + y
        comp[sl] = (t - out[sl]) - y
        out[sl] = t
    label = name if name is not None else f"({f.name}*{g.name})"
    return ArithFnTable(label, limit, out)


def compute_a1(limit: int) -> ArithFnTable:
    """First moment coefficients a1 = vonmangoldt * log."""
    lam = sieve_standard("vonmangoldt", limit)
    logt = sieve_standard("log", limit)
    return dirichlet_convolve(lam, logt, limit, name="a1")


def compute_a2(limit: int, b: ArithFnTable) -> ArithFnTable:
    """Second moment coefficients a2 = -(vonmangoldt * log * log * b).

    ``b`` is the mollifier coefficient table; its limit must cover [1..limit].
    """
    if b.limit < limit:
        raise ValueError(f"b table limit {b.limit} shorter than required {limit}")
    logt = sieve_standard("log", limit)
    t = compute_a1(limit)
    t = dirichlet_convolve(t, logt, limit)
    t = dirichlet_convolve(t, b, limit)
    return ArithFnTable("a2", limit, -t.values)


@dataclass(frozen=True)
class GrowthReport:
    """Observed coefficient growth against the tau_9 envelope.

    The envelope L^3 * tau_9(n) * p_sup is a shape monitor, not a proven
    pointwise bound: violations are listed, never raised.
    """

    limit: int
    envelope_scale: float
    max_ratio: float
    argmax: int
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def coefficient_growth_report(table: ArithFnTable, log_scale: float,
                              p_sup: float) -> GrowthReport:
    """Compare |table(n)| against log_scale^3 * tau_9(n) * p_sup on [1..limit]."""
    if log_scale <= 0 or p_sup <= 0:
        raise ValueError("log_scale and p_sup must be positive")
    tau9 = sieve_standard("tau_9", table.limit)
    scale = log_scale**3 * p_sup
    envelope = scale * tau9.values[1:]
    ratios = np.abs(table.values[1:]) / envelope
    max_ratio = float(ratios.max())
    argmax = int(ratios.argmax()) + 1
    violations = tuple(int(i) + 1 for i in np.nonzero(ratios > 1.0)[0])
    return GrowthReport(table.limit, scale, max_ratio, argmax, violations)


_CACHE_MAGIC = "arithfn"


def save_table(table: ArithFnTable, path) -> None:
    """Write a table as 'arithfn <name> <N>' header + little-endian float64 array."""
    header = f"{_CACHE_MAGIC} {table.name} {table.limit}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(table.values[1:].astype("<f8").tobytes())


def load_table(path) -> ArithFnTable:
    """Read a table written by :func:`save_table`."""
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        parts = header.split()
        if len(parts) != 3 or parts[0] != _CACHE_MAGIC:
            raise ValueError(f"bad table header {header!r} in {path}")
        name, limit = parts[1], int(parts[2])
        raw = fh.read(8 * limit)
        if len(raw) != 8 * limit:
            raise ValueError(f"truncated table payload in {path}")
    values = np.zeros(limit + 1)
    values[1:] = np.frombuffer(raw, dtype="<f8")
    return ArithFnTable(name, limit, values)
