"""Generalised Vaughan identity and the nine-slot dyadic decomposition.

The identity expands zeta'/zeta into r binomially weighted products of
zeta, zeta', and the truncated Mobius polynomial M(s) = sum_{n<=X} mu(n)/n^s,
with a remainder supported on n > X^r.  Its coefficient form is verified
exactly against the von Mangoldt sieve.  Substituted into the second-moment
coefficients a2 = -(Lambda * log * log * b) with r = 3, plus dyadic splitting
of every factor, it yields the nine-slot terms

    f1 = f2 = f3 = log,  f4 = b,  f5 = f6 = 1,  f7 = f8 = f9 = mu (<= X),

each restricted to a dyadic block, with absent slots set to the convolution
identity.  The module also covers the divisor-splitting lemma, the Perron
cutoff integral, the A/B factorisation plan, and a numerical monitor for the
hybrid large sieve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy import integrate, special

from . import arith
from .arith import ArithFnTable, dirichlet_convolve
from .characters import primitive_characters
from .intfun import divisors, factorize, radical
from .mollifier import MollifierSpec, b_table

VAUGHAN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class VaughanConfig:
    """r >= 1 terms, M(s) truncated at X >= 1."""

    r: int
    X: float

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.X < 1:
            raise ValueError(f"X must be >= 1, got {self.X}")


def _neg_log(limit: int) -> ArithFnTable:
    return ArithFnTable("neglog", limit, -arith.sieve_standard("log", limit).values)


def mu_truncated(X: float, limit: int) -> ArithFnTable:
    """mu(n) for n <= X, zero beyond, as a table on [1..limit]."""
    mu = arith.sieve_standard("mobius", limit)
    values = mu.values.copy()
    cut = int(X)
    if cut < limit:
        values[cut + 1 :] = 0.0
    return ArithFnTable(f"mu<={X:g}", limit, values)


def vaughan_rhs_coefficients(config: VaughanConfig, limit: int) -> ArithFnTable:
    """Dirichlet coefficients on [1..limit] of
    sum_{j=1}^{r} (-1)^{j-1} C(r,j) zeta^{j-1} zeta' M^j.

    zeta contributes the constant function 1, zeta' contributes -log, and
    each M factor contributes mu truncated at X.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit > arith.DEFAULT_LIMIT_CAP:
        raise ValueError(f"limit {limit} exceeds the desk-scale cap")
    one = arith.sieve_standard("one", limit)
    mu_x = mu_truncated(config.X, limit)
    total = np.zeros(limit + 1)
    term = dirichlet_convolve(_neg_log(limit), mu_x, limit)  # j = 1
    for j in range(1, config.r + 1):
        if j > 1:
            term = dirichlet_convolve(dirichlet_convolve(term, mu_x, limit), one, limit)
        sign = 1.0 if j % 2 == 1 else -1.0
        total += sign * comb(config.r, j) * term.values
    return ArithFnTable(f"vaughan_rhs(r={config.r},X={config.X:g})", limit, total)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of an exact coefficient comparison."""

    check: str
    parameters: dict
    worst_index: int
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def verify_vaughan(config: VaughanConfig, limit: int) -> IdentityReport:
    """Assert rhs(n) = -Lambda(n) for n <= limit <= X^r.

    Beyond X^r the remainder term (1 - zeta M)^r zeta'/zeta contributes, so
    larger limits are rejected rather than reported as failures.
    """
    if limit > config.X**config.r:
        raise ValueError(
            f"limit {limit} exceeds X^r = {config.X**config.r:g}; "
            "the remainder term is only guaranteed to vanish up to X^r"
        )
    rhs = vaughan_rhs_coefficients(config, limit)
    lam = arith.sieve_standard("vonmangoldt", limit)
    dev = np.abs(rhs.values[1:] + lam.values[1:])
    worst = int(dev.argmax()) + 1
    tol = VAUGHAN_TOLERANCE * max(1.0, math.log(limit))
    return IdentityReport(
        check="vaughan-identity",
        parameters={"r": config.r, "X": config.X, "N": limit},
        worst_index=worst,
        deviation=float(dev.max()),
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# nine-slot dyadic decomposition of a2

LOG, B_COEF, ONE, MU, IDENTITY = "log", "b", "one", "mobius", "identity"

_SLOT_ROLES = {
    1: (LOG, LOG, LOG, B_COEF, IDENTITY, IDENTITY, MU, IDENTITY, IDENTITY),
    2: (LOG, LOG, LOG, B_COEF, ONE, IDENTITY, MU, MU, IDENTITY),
    3: (LOG, LOG, LOG, B_COEF, ONE, ONE, MU, MU, MU),
}
# a2 = sum_j (-1)^j C(3,j) [1^{*(j-1)} * log^{*3} * b * mu_X^{*j}] below X^3
_GROUP_WEIGHTS = {1: -3.0, 2: 3.0, 3: -1.0}


@dataclass(frozen=True)
class DecompositionTerm:
    """One dyadic convolution term: ranges are the block labels N_1..N_9.

    Slot i holds its role's function restricted to (blocks[i][0], blocks[i][1]];
    the label N_i is the upper edge (1 for absent slots).  Weight is the
    signed binomial factor of the Vaughan term the block choice came from.
    """

    j: int
    weight: float
    ranges: tuple[float, ...]
    blocks: tuple[tuple[float, float], ...]

    @property
    def roles(self) -> tuple[str, ...]:
        return _SLOT_ROLES[self.j]

    @property
    def support_min(self) -> int:
        prod = 1
        for lo, _ in self.blocks:
            prod *= int(lo) + 1
        return prod


def _dyadic_blocks(cap: float, include_unit: bool, upper: float | None = None):
    """Blocks (2^{e-1}, 2^e] covering [1..cap]; optionally the {1} block.

    ``upper`` truncates the top block label (used for the mu slots, whose
    support stops at X)."""
    blocks = []
    if include_unit:
        blocks.append((0.5, 1.0))
    hi = 2.0
    while hi / 2.0 < cap:
        top = hi if upper is None else min(hi, upper)
        blocks.append((hi / 2.0, top))
        if top < hi:
            break
        hi *= 2.0
    return tuple(blocks)


def _b_blocks(y: float):
    """Blocks (y/2^{h+1}, y/2^h] down to the block containing 1, ascending."""
    blocks = []
    h = 0
    while y / 2.0**h >= 1.0:
        blocks.append((y / 2.0 ** (h + 1), y / 2.0**h))
        h += 1
    return tuple(reversed(blocks))


_IDENTITY_BLOCKS = ((0.5, 1.0),)


@dataclass(frozen=True)
class A2Decomposition:
    """Emitted dyadic terms for a2, grouped by Vaughan index j.

    Terms are the cross products of the per-slot block lists, filtered by the
    support rule prod_i (floor(lo_i) + 1) <= n_cap: anything larger cannot
    touch [1..n_cap].
    """

    spec: MollifierSpec
    config: VaughanConfig
    n_cap: int
    slot_blocks: dict  # j -> tuple of 9 block tuples

    def terms(self):
        for j in (1, 2, 3):
            weight = _GROUP_WEIGHTS[j]
            yield from self._terms_of_group(j, weight)

    def _terms_of_group(self, j, weight):
        slots = self.slot_blocks[j]
        mins = [tuple(int(lo) + 1 for lo, _ in blocks) for blocks in slots]
        suffix_min = [1] * 10
        for i in range(8, -1, -1):
            suffix_min[i] = suffix_min[i + 1] * min(mins[i])

        def rec(i, prod, chosen):
            if i == 9:
                blocks = tuple(chosen)
                yield DecompositionTerm(
                    j=j,
                    weight=weight,
                    ranges=tuple(hi for _, hi in blocks),
                    blocks=blocks,
                )
                return
            for blk, mn in zip(slots[i], mins[i]):
                p = prod * mn
                if p * suffix_min[i + 1] > self.n_cap:
                    break
                chosen.append(blk)
                yield from rec(i + 1, p, chosen)
                chosen.pop()

        yield from rec(0, 1, [])

    def count_terms(self) -> dict:
        """Number of emitted terms per group and in total (no materialisation)."""
        counts = {}
        for j in (1, 2, 3):
            slots = self.slot_blocks[j]
            mins = [tuple(int(lo) + 1 for lo, _ in blocks) for blocks in slots]
            suffix_min = [1] * 10
            for i in range(8, -1, -1):
                suffix_min[i] = suffix_min[i + 1] * min(mins[i])

            def rec(i, prod):
                if i == 9:
                    return 1
                total = 0
                for mn in mins[i]:
                    p = prod * mn
                    if p * suffix_min[i + 1] > self.n_cap:
                        break
                    total += rec(i + 1, p)
                return total

            counts[j] = rec(0, 1)
        counts["total"] = counts[1] + counts[2] + counts[3]
        return counts

    def _role_tables(self) -> dict:
        n = self.n_cap
        log_t = arith.sieve_standard("log", n).values
        one_t = arith.sieve_standard("one", n).values
        mu_t = mu_truncated(self.config.X, n).values
        b_t = b_table(self.spec, n).values
        ident = np.zeros(n + 1)
        ident[1] = 1.0
        return {LOG: log_t, ONE: one_t, MU: mu_t, B_COEF: b_t, IDENTITY: ident}

    def reconstruct(self) -> np.ndarray:
        """Sum of weight * (f_1 * ... * f_9) over all emitted terms, on [0..n_cap].

        Terms sharing all but one slot are pooled per slot before convolving
        (an exact regrouping: the block lists tile each slot's support, and
        dropped block combinations start beyond n_cap).  The tiling is
        asserted here; per-term evaluation is available via
        :func:`term_convolution`.
        """
        n = self.n_cap
        tables = self._role_tables()
        total = np.zeros(n + 1)
        for j in (1, 2, 3):
            acc = tables[IDENTITY].copy()
            for role, blocks in zip(_SLOT_ROLES[j], self.slot_blocks[j]):
                if role == IDENTITY:
                    continue
                pooled = _pooled_slot(tables[role], blocks, n, role, self.config, self.spec)
                acc = _convolve_raw(acc, pooled, n)
            total += _GROUP_WEIGHTS[j] * acc
        return total

    def growth_monitor(self) -> arith.GrowthReport:
        """tau_9 envelope report for the reconstructed coefficients."""
        table = ArithFnTable("a2-reconstruction", self.n_cap, self.reconstruct())
        return arith.coefficient_growth_report(
            table, self.spec.log_scale, self.spec.P.sup_norm_01()
        )


def _restrict(values: np.ndarray, lo: float, hi: float, n: int) -> np.ndarray:
    out = np.zeros(n + 1)
    a = int(lo) + 1
    b = min(int(hi), n)
    if a <= b:
        out[a : b + 1] = values[a : b + 1]
    return out


def _pooled_slot(values, blocks, n, role, config, spec) -> np.ndarray:
    pooled = np.zeros(n + 1)
    cover = np.zeros(n + 1)
    for lo, hi in blocks:
        a = int(lo) + 1
        b = min(int(hi), n)
        if a <= b:
            pooled[a : b + 1] += values[a : b + 1]
            cover[a : b + 1] += 1.0
    cap = n
    if role == MU:
        cap = min(cap, int(config.X))
    elif role == B_COEF:
        cap = min(cap, int(spec.y))
    start = 2 if role == LOG else 1
    if not np.all(cover[start : cap + 1] == 1.0):
        bad = int(np.nonzero(cover[start : cap + 1] != 1.0)[0][0]) + start
        raise AssertionError(f"dyadic blocks do not tile slot role {role} at n={bad}")
    return pooled


def _convolve_raw(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n + 1)
    support = np.nonzero(b[1:])[0] + 1
    # iterate over the sparser side
    if len(support) > np.count_nonzero(a[1:]):
        a, b = b, a
        support = np.nonzero(b[1:])[0] + 1
    for d in support:
        m = n // d
        out[d : d * m + 1 : d] += b[d] * a[1 : m + 1]
    return out


def decompose_a2(spec: MollifierSpec, config: VaughanConfig, n_cap: int = 10**4) -> A2Decomposition:
    """Emit the dyadic terms reconstructing a2 on [1..min(n_cap, X^3)].

    Requires r = 3 (the nine-slot layout).  Labels are powers of 2, or
    y/2^h for the b slot, or 1 for absent slots; the top mu block label is
    clipped to X so the slot bound N_i <= X holds for non-dyadic X.
    """
    if config.r != 3:
        raise ValueError(f"the nine-slot decomposition requires r = 3, got r = {config.r}")
    if n_cap < 1 or n_cap > arith.DEFAULT_LIMIT_CAP:
        raise ValueError(f"n_cap {n_cap} outside [1, {arith.DEFAULT_LIMIT_CAP}]")
    y, X = spec.y, config.X
    log_blocks = _dyadic_blocks(n_cap, include_unit=False)
    one_blocks = _dyadic_blocks(n_cap, include_unit=True)
    mu_blocks = _dyadic_blocks(min(X, n_cap), include_unit=True, upper=X)
    b_blocks = _b_blocks(min(y, n_cap))
    per_role = {
        LOG: log_blocks,
        ONE: one_blocks,
        MU: mu_blocks,
        B_COEF: b_blocks,
        IDENTITY: _IDENTITY_BLOCKS,
    }
    slot_blocks = {
        j: tuple(per_role[role] for role in roles) for j, roles in _SLOT_ROLES.items()
    }
    return A2Decomposition(spec=spec, config=config, n_cap=n_cap, slot_blocks=slot_blocks)


def term_convolution(term: DecompositionTerm, decomposition: A2Decomposition,
                     n_cap: int | None = None) -> np.ndarray:
    """(f_1 * ... * f_9) for a single term, on [0..n_cap], without the weight."""
    n = n_cap if n_cap is not None else decomposition.n_cap
    tables = decomposition._role_tables() if n == decomposition.n_cap else None
    if tables is None:
        tmp = A2Decomposition(decomposition.spec, decomposition.config, n,
                              decomposition.slot_blocks)
        tables = tmp._role_tables()
    acc = tables[IDENTITY].copy()
    for role, (lo, hi) in zip(term.roles, term.blocks):
        if role == IDENTITY:
            continue
        acc = _convolve_raw(acc, _restrict(tables[role], lo, hi, n), n)
    return acc


# ---------------------------------------------------------------------------
# divisor splitting: (f_1*...*f_9)(m d) = sum_{d = d_1...d_9} (g_1*...*g_9)(m)


@dataclass(frozen=True)
class SplitReport:
    check: str
    parameters: dict
    worst_index: int
    deviation: float
    tolerance: float
    factorization_count: int

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def split_by_divisor(term: DecompositionTerm, decomposition: A2Decomposition,
                     d: int, m_limit: int, tolerance: float = 1e-10) -> SplitReport:
    """Verify the splitting lemma for one term and one divisor d.

    g_i(m) = f_i(m d_i) if gcd(m, d_1...d_{i-1}) = 1, else 0.  The ordered
    factorisations are evaluated with partial convolutions merged across
    factorisations sharing (radical of d_1...d_{i-1}, remaining divisor) -
    an exact regrouping by linearity, since g_i depends on the earlier d's
    only through the radical.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if m_limit * d > arith.DEFAULT_LIMIT_CAP:
        raise ValueError(f"m_limit*d = {m_limit * d} exceeds the table budget")

    big = term_convolution(term, decomposition, n_cap=m_limit * d)
    lhs = np.zeros(m_limit + 1)
    vals = big[d::d][:m_limit]  # F(d), F(2d), ..., F(m_limit d)
    lhs[1 : 1 + len(vals)] = vals

    tmp = A2Decomposition(decomposition.spec, decomposition.config, m_limit * d,
                          decomposition.slot_blocks)
    tables = tmp._role_tables()

    def g_table(role, lo, hi, d_i, rad):
        """g(m) = f(m d_i) [gcd(m, rad) = 1] on [1..m_limit]."""
        out = np.zeros(m_limit + 1)
        m = np.arange(1, m_limit + 1)
        arg = m * d_i  # <= m_limit * d since d_i | d
        vals = np.where((arg > lo) & (arg <= hi), tables[role][arg], 0.0)
        if rad > 1:
            coprime = np.array([math.gcd(int(x), rad) == 1 for x in m])
            vals = np.where(coprime, vals, 0.0)
        out[1:] = vals
        return out

    ident = np.zeros(m_limit + 1)
    ident[1] = 1.0
    # states: (radical of divisors used so far, remaining divisor) -> table
    states = {(1, d): ident}
    for role, (lo, hi) in zip(term.roles, term.blocks):
        new_states: dict = {}
        for (rad, rem), table in states.items():
            for d_i in divisors(rem):
                if role == IDENTITY and d_i != 1:
                    continue  # identity slot forces d_i = 1
                if role == IDENTITY:
                    nxt = table  # convolution no-op
                else:
                    g = g_table(role, lo, hi, d_i, rad)
                    if not g.any():
                        continue
                    nxt = _convolve_raw(table, g, m_limit)
                key = (radical(rad * d_i), rem // d_i)
                if key in new_states:
                    new_states[key] = new_states[key] + nxt
                else:
                    new_states[key] = nxt
        states = new_states
        if not states:
            break

    rhs = np.zeros(m_limit + 1)
    for (rad, rem), table in states.items():
        if rem == 1:
            rhs += table
    # ordered 9-factorisation count of d: prod over p^a || d of C(a+8, 8)
    count = math.prod(comb(a + 8, 8) for _, a in factorize(d))

    dev = np.abs(lhs[1:] - rhs[1:])
    worst = int(dev.argmax()) + 1 if len(dev) else 0
    return SplitReport(
        check="divisor-splitting",
        parameters={"d": d, "m_limit": m_limit, "term_ranges": term.ranges, "j": term.j},
        worst_index=worst,
        deviation=float(dev.max()) if len(dev) else 0.0,
        tolerance=tolerance,
        factorization_count=count,
    )


# ---------------------------------------------------------------------------
# Perron cutoff


def perron_truncation(M: float, U: float, m: int) -> complex:
    """(1/2 pi i) int_{delta-iU}^{delta+iU} (M0/m)^s ds/s with M0 = M + 1/2,
    delta = 1/log M.

    The integral reduces to Si pieces in closed form plus two absolutely
    convergent tail integrals over (U, inf), evaluated by adaptive
    oscillatory quadrature.  The imaginary part vanishes by symmetry.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    if U <= 0:
        raise ValueError("U must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    M0 = M + 0.5
    assert m != M0  # half-integer cutoff can never hit an integer
    delta = 1.0 / math.log(M)
    L = math.log(M0 / m)
    aL, sgn = abs(L), math.copysign(1.0, L)
    si_LU = float(special.sici(L * U)[0])
    core = si_LU + (math.pi / 2) * math.exp(-aL * delta) \
        - sgn * (math.pi / 2) * (1.0 - math.exp(-aL * delta))
    tail_cos = delta * integrate.quad(
        lambda t: 1.0 / (delta**2 + t**2), U, np.inf, weight="cos", wvar=aL
    )[0]
    tail_sin = delta**2 * integrate.quad(
        lambda t: 1.0 / (t * (delta**2 + t**2)), U, np.inf, weight="sin", wvar=aL
    )[0]
    value = (M0 / m) ** delta / math.pi * (core - tail_cos + sgn * tail_sin)
    return complex(value, 0.0)


def perron_indicator_error(M: float, U: float, m: int) -> float:
    """|perron_truncation - [m <= M]|, the quantity bounded by O(M/U)."""
    indicator = 1.0 if m <= M else 0.0
    return abs(perron_truncation(M, U, m) - indicator)


# ---------------------------------------------------------------------------
# A/B factorisation plan


@dataclass(frozen=True)
class DyadicPlan:
    """One (K, Q, D) cell of the decomposition pipeline.

    X = KQT/(pi D); A0 = max(y T^(1/2), (KQT/D)^(2/3)); the nine factor
    lengths M_1..M_9 are split into a product A * B with A <= A0, with either
    a single long factor (mode 'single') or a greedy prefix of J factors
    (mode 'greedy').  U is the Perron height T^5 retained for fidelity; V
    records the representative integration half-length.
    """

    K: float
    Q: float
    D: float
    y: float
    T: float
    X: float
    A0: float
    Ms: tuple[float, ...]
    J: int
    A: float
    B: float
    V: float
    U: float
    mode: str


def build_dyadic_plan(K: float, Q: float, D: float, y: float, T: float,
                      Ms, eta: float | None = None) -> DyadicPlan:
    """Compute the (A, B) factorisation for one dyadic cell.

    Admissibility: Q > eta (default eta = L^2 with L = log(T/2pi)), D <= K,
    KQ <= 4y, max M_i <= y sqrt(T), and prod M_i <= 2^9 X (dyadic slack).
    Rejections name the failed condition.
    """
    Ms = tuple(float(m) for m in Ms)
    if len(Ms) != 9:
        raise ValueError(f"need 9 factor lengths, got {len(Ms)}")
    if any(m < 1 for m in Ms):
        raise ValueError("factor lengths must be >= 1")
    if eta is None:
        eta = math.log(T / (2 * math.pi)) ** 2
    if not Q > eta:
        raise ValueError(f"inadmissible: Q = {Q} fails Q > eta = {eta:g}")
    if not D <= K:
        raise ValueError(f"inadmissible: D = {D} fails D <= K = {K}")
    if not K * Q <= 4 * y:
        raise ValueError(f"inadmissible: KQ = {K * Q} fails KQ <= 4y = {4 * y}")
    X = K * Q * T / (math.pi * D)
    root = y * math.sqrt(T)
    if max(Ms) > root:
        raise ValueError(
            f"max M_i = {max(Ms):g} exceeds y sqrt(T) = {root:g}; such factors are "
            "handled by the partial-summation route, not the A/B split"
        )
    prod = math.prod(Ms)
    if prod > 2**9 * X:
        raise ValueError(f"prod M_i = {prod:g} exceeds the dyadic slack cap 512 X = {512 * X:g}")
    A0 = max(root, (K * Q * T / D) ** (2.0 / 3.0))
    threshold = K * Q * T / (D * A0)

    big = [i for i, m in enumerate(Ms) if m >= threshold]
    if big:
        i_star = max(big, key=lambda i: Ms[i])
        A = Ms[i_star]
        B = prod / A
        return DyadicPlan(K, Q, D, y, T, X, A0, Ms, i_star + 1, A, B, T, T**5, "single")

    J = 0
    A = 1.0
    while J < 9 and A * Ms[J] <= A0:
        A *= Ms[J]
        J += 1
    B = math.prod(Ms[J:]) if J < 9 else 1.0
    return DyadicPlan(K, Q, D, y, T, X, A0, Ms, J, A, B, T, T**5, "greedy")


# ---------------------------------------------------------------------------
# hybrid large sieve monitor


@dataclass(frozen=True)
class SieveMonitorReport:
    lhs: float
    rhs: float
    ratio: float
    Q: int
    V: float
    H: int
    seed: int | None = None


def hybrid_large_sieve_monitor(Q: int, V: float, H: int, coefficients,
                               seed: int | None = None) -> SieveMonitorReport:
    """LHS = sum_{q ~ Q} sum*_psi int_{-V}^{V} |sum_{m<=H} h_m psi(m) m^{-it}|^2 dt
    against RHS = (Q^2 V + H) sum |h_m|^2.

    The t-integral is exact: int (m/n)^{-it} dt = 2 sin(V log(n/m))/log(n/m),
    2V on the diagonal.  The band (Q/2, Q] never includes q = 1 (the q = 1
    cell belongs to the main-term path), so Q = 1 yields an empty sum.
    """
    if not 1 <= Q <= 30:
        raise ValueError(f"Q = {Q} outside desk scale [1, 30]")
    if not 0 <= V <= 50:
        raise ValueError(f"V = {V} outside desk scale [0, 50]")
    if not 1 <= H <= 500:
        raise ValueError(f"H = {H} outside desk scale [1, 500]")
    h = np.asarray(coefficients, dtype=np.complex128)
    if h.shape != (H,):
        raise ValueError(f"need exactly H = {H} coefficients, got shape {h.shape}")
    norm2 = float(np.vdot(h, h).real)
    if norm2 == 0.0:
        raise ValueError("zero coefficient vector: monitor ratio undefined")

    logs = np.log(np.arange(1, H + 1, dtype=np.float64))
    diff = logs[:, None] - logs[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = 2.0 * np.sin(V * diff) / diff
    np.fill_diagonal(kernel, 2.0 * V)

    lhs = 0.0
    m_idx = np.arange(1, H + 1)
    for q in range(max(2, Q // 2 + 1), Q + 1):
        for psi in primitive_characters(q):
            v = h * psi.values[m_idx % q]
            lhs += float(np.real(np.conj(v) @ kernel @ v))
    rhs = (Q * Q * V + H) * norm2
    return SieveMonitorReport(lhs=lhs, rhs=rhs, ratio=lhs / rhs, Q=Q, V=V, H=H, seed=seed)


def run_sieve_trials(trials: int = 200, seed: int = 20250811, q_max: int = 20,
                     h_max: int = 200, v_max: float = 20.0) -> list[SieveMonitorReport]:
    """Random coefficient sweep; the observed max ratio is the monitor output."""
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(trials):
        Q = int(rng.integers(2, q_max + 1))
        H = int(rng.integers(1, h_max + 1))
        V = float(rng.uniform(0.0, v_max))
        h = rng.standard_normal(H) + 1j * rng.standard_normal(H)
        reports.append(hybrid_large_sieve_monitor(Q, V, H, h, seed=seed))
    return reports


# ---------------------------------------------------------------------------
# S(Q, X, d) brute force


def s_qxd_bruteforce(Q: int, X: int, d: int, nu: int, spec: MollifierSpec,
                     a_table: ArithFnTable | None = None) -> float:
    """S(Q,X,d) = sum_{q ~ Q} sum*_psi max_{M <= X} |sum_{m <= M} a_nu(m d) psi(m)|,
    the max taken over every integer M.

    The dyadic band (Q/2, Q] excludes q = 1 by convention, so Q = 1 gives 0.
    """
    if not 1 <= Q <= 16:
        raise ValueError(f"Q = {Q} outside desk scale [1, 16]")
    if not 1 <= X <= 2000:
        raise ValueError(f"X = {X} outside desk scale [1, 2000]")
    if not 1 <= d <= 8:
        raise ValueError(f"d = {d} outside desk scale [1, 8]")
    if a_table is None:
        if nu == 1:
            a_table = arith.compute_a1(X * d)
        elif nu == 2:
            a_table = arith.compute_a2(X * d, b_table(spec, X * d))
        else:
            raise ValueError(f"nu must be 1 or 2, got {nu}")
    if a_table.limit < X * d:
        raise ValueError(f"a table limit {a_table.limit} < X*d = {X * d}")
    m = np.arange(1, X + 1)
    a_vals = a_table.values[m * d]
    total = 0.0
    for q in range(max(2, Q // 2 + 1), Q + 1):
        for psi in primitive_characters(q):
            series = a_vals * psi.values[m % q]
            total += float(np.abs(np.cumsum(series)).max())
    return total
