"""Critical-line zeta machinery: theta, Hardy Z, zeros, and empirical moments.

Z(t) = e^{i theta(t)} zeta(1/2 + it) is evaluated by float64 Euler-Maclaurin
below ``EM_CUTOFF`` (where zero ordinates must be tight enough to cross-check
published tables to 1e-6) and by the Riemann-Siegel main sum plus four
correction terms above it.  The corrections are Chebyshev fits, generated at
40-digit working precision, of the classical correction functions

    C0 = Psi,  C1 = -Psi'''/(96 pi^2),
    C2 = Psi''/(64 pi^2) + Psi^(6)/(18432 pi^4),
    C3 = -Psi'/(64 pi^2) - Psi^(5)/(3840 pi^4) - Psi^(9)/(5308416 pi^6),

with Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) on p in [0, 1].
Observed accuracy of the Riemann-Siegel branch is ~1e-8 absolute at t = 400
improving to ~3e-10 by t = 5000; the Euler-Maclaurin branch is ~1e-13.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import special

from .mollifier import MollifierSpec, eval_b

EM_CUTOFF = 400.0
FIRST_ZERO = 14.134725141734693

_C0_CHEB = np.array([
    0.6426672862397681, -1.1373021762322886e-16, 0.2719729999978549, 3.6393669639433235e-17,
    0.010738605819339823, -2.2876020916215177e-16, -0.0013743815296340886, 1.0138236542413542e-16,
    -0.0001246822188034505, 7.798643494164265e-18, -5.76459970553334e-07, -1.0398191325552351e-16,
    2.7280674307437e-07, -6.238914795331411e-17, 8.077953231478052e-09, -2.807511657899133e-16,
    -2.088462092282897e-10, 9.878281759274729e-17, -1.3115750829841954e-11, -3.249434789235107e-17,
    -1.450807644697691e-14, 5.9789600121926e-17, 9.837338880930376e-15,
])

_C1_CHEB = np.array([
    1.3786184246951634e-18, 0.010697913921003015, 2.3070987003569286e-17, 0.01717065124337787,
    -1.6897060904022574e-17, 0.002793211149788462, 1.1048078283399375e-17, -3.637565371928601e-05,
    7.148756536317241e-18, -2.7108955231151637e-05, 1.949660873541066e-17, -1.0483749866717334e-06,
    8.448530452011287e-18, 5.8864671669801026e-08, -5.199095662776173e-18, 4.3229672587502056e-09,
    -4.87415218385266e-18, -1.1369588084581093e-11, 0.0, -6.699807477079977e-12,
    -1.2022908720169898e-17, -1.0080526580556723e-13, -1.1535493501784645e-17, 5.1480795365851875e-15,
])

_C2_CHEB = np.array([
    0.0031461158539889114, 5.194653076150269e-19, -0.002308783884530749, -8.123586973087776e-20,
    5.7698207666901066e-05, 1.1779201110977274e-18, 0.0003523886202366621, 5.584966043997845e-20,
    2.524666745868579e-05, -4.874152183852666e-19, -3.4428211971929584e-06, 1.0560663065014107e-18,
    -3.5350745566314006e-07, -8.935945670396552e-19, 3.730830180522904e-09, 5.28033153250705e-19,
    1.2776951866989953e-09, -2.1324415804355398e-18, 2.1874616723592064e-11, -1.5130180737375966e-18,
    -1.9141389967921318e-12, -3.655614137889497e-19, -6.562466094537412e-14, 1.9902788084065058e-18,
    1.2604760637117318e-15,
])

_C3_CHEB = np.array([
    7.180304295285781e-21, 7.123256221203876e-05, 1.2320244696489567e-19, 0.00023234305298164789,
    -3.046345114907916e-19, -0.00012929912045472474, 7.362000694360796e-20, 1.8074496413671444e-05,
    6.092690229815831e-20, 6.526185187220401e-06, 1.3264294354494882e-19, -1.1696365378534899e-07,
    7.869724880178782e-20, -7.349476126501233e-08, 4.696448718816368e-20, -1.7750910078945127e-09,
    -6.854276508542804e-20, 2.5555529628228424e-10, -3.046345114907913e-20, 1.1376636778834866e-11,
    -2.0562829525628414e-19, -3.349864359452138e-13, -1.3960431812393767e-19, -2.553756187069165e-14,
])

_RS_CORRECTIONS = (_C0_CHEB, _C1_CHEB, _C2_CHEB, _C3_CHEB)

# B_2 ... B_24 for the Euler-Maclaurin tail
_BERNOULLI = np.array([
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
    -236364091.0 / 2730,
])


def rs_theta(t):
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    t = np.asarray(t, dtype=np.float64)
    val = special.loggamma(0.25 + 0.5j * t).imag - 0.5 * t * math.log(math.pi)
    return val if val.ndim else float(val)


def rs_theta_asymptotic(t):
    """Stirling form of theta, the independent cross-check route:
    t/2 log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3) + 31/(80640 t^5)."""
    t = np.asarray(t, dtype=np.float64)
    val = (
        0.5 * t * np.log(t / (2 * math.pi))
        - 0.5 * t
        - math.pi / 8
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
    )
    return val if val.ndim else float(val)


def zeta_euler_maclaurin(s):
    """zeta(s) for complex s (array ok) by Euler-Maclaurin, float64.

    Cutoff N grows linearly with |Im s|; with 12 Bernoulli terms the result
    is accurate to ~1e-13 for |Im s| <= 500 and Re s >= 0.4.
    """
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    out = np.empty_like(s)
    t_abs = np.abs(s.imag)
    n_cut = np.maximum(32, np.ceil(0.7 * (t_abs + 25))).astype(int)
    for n_val in np.unique(n_cut):
        idx = np.nonzero(n_cut == n_val)[0]
        sv = s[idx]
        n = np.arange(1, n_val)
        terms = np.exp(-np.outer(sv, np.log(n)))
        total = terms.sum(axis=1)
        nf = float(n_val)
        total += 0.5 * nf ** (-sv) + nf ** (1.0 - sv) / (sv - 1.0)
        poch = sv.copy()  # s (s+1) ... rising
        npow = nf ** (-sv - 1.0)
        for k, b in enumerate(_BERNOULLI, start=1):
            total += b / math.factorial(2 * k) * poch * npow
            poch = poch * (sv + 2 * k - 1) * (sv + 2 * k)
            npow = npow / (nf * nf)
        out[idx] = total
    return out if out.shape != (1,) else complex(out[0])


def _hardy_z_em(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = np.exp(1j * rs_theta(t)) * zeta_euler_maclaurin(0.5 + 1j * t)
    z = np.atleast_1d(z)
    return z.real, np.abs(z.imag)


def _hardy_z_rs(t: np.ndarray) -> np.ndarray:
    tau = t / (2 * math.pi)
    root = np.sqrt(tau)
    a = np.floor(root).astype(int)
    p = root - a
    theta = rs_theta(t)
    out = np.zeros_like(t)
    for a_val in np.unique(a):
        idx = np.nonzero(a == a_val)[0]
        n = np.arange(1, a_val + 1, dtype=np.float64)
        phases = theta[idx, None] - np.outer(t[idx], np.log(n))
        out[idx] = 2.0 * (np.cos(phases) / np.sqrt(n)).sum(axis=1)
    x = 2.0 * p - 1.0
    corr = np.zeros_like(t)
    scale = np.ones_like(t)
    for cheb in _RS_CORRECTIONS:
        corr += np.polynomial.chebyshev.chebval(x, cheb) * scale
        scale /= root
    out += np.where(a % 2 == 1, 1.0, -1.0) * tau ** (-0.25) * corr
    return out


def hardy_z(t, em_cutoff: float = EM_CUTOFF):
    """Hardy's Z(t): real by the functional equation, so zeros of zeta on the
    critical line are its sign changes.  Scalar or array."""
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(arr < 0):
        raise ValueError("hardy_z requires t >= 0")
    out = np.empty_like(arr)
    lo = arr < em_cutoff
    if lo.any():
        out[lo] = _hardy_z_em(arr[lo])[0]
    if (~lo).any():
        out[~lo] = _hardy_z_rs(arr[~lo])
    return out if np.ndim(t) else float(out[0])


def z_imag_residue(t) -> np.ndarray:
    """|Im e^{i theta} zeta(1/2+it)| from the Euler-Maclaurin route; the
    functional-equation reality monitor."""
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return _hardy_z_em(arr)[1]


def gram_points(T: float) -> np.ndarray:
    """Gram points g_n <= T (theta(g_n) = n pi), Newton-refined."""
    if T < 18:
        return np.zeros(0)
    n_max = int(rs_theta(T) / math.pi) + 1
    n = np.arange(0, n_max + 1, dtype=np.float64)
    target = n * math.pi
    u = special.lambertw((n + 0.125) / math.e).real
    g = 2 * math.pi * np.exp(1.0 + u)
    g = np.maximum(g, 18.0)
    for _ in range(6):
        g = g - (rs_theta(g) - target) / (0.5 * np.log(g / (2 * math.pi)))
    return g[(g <= T) & (g >= 18.0)]


@dataclass(frozen=True)
class ZeroList:
    """Ordered positive ordinates of critical-line zeros.

    Validated on construction: strictly increasing, all above the first-zero
    floor 14, and census consistent with the counting formula at the top
    (within the 2 + log T slack that covers S(T) at desk heights).
    """

    ordinates: np.ndarray = field(repr=False)
    source: str
    max_height: float

    def __post_init__(self):
        ords = np.asarray(self.ordinates, dtype=np.float64)
        object.__setattr__(self, "ordinates", ords)
        if ords.size:
            if np.any(np.diff(ords) <= 0):
                bad = int(np.nonzero(np.diff(ords) <= 0)[0][0])
                raise ValueError(f"ordinates not strictly increasing at position {bad + 1}")
            if ords[0] <= 14.0:
                raise ValueError(f"first ordinate {ords[0]} at or below 14")
            if ords[-1] > self.max_height + 1e-9:
                raise ValueError("ordinates exceed the declared max_height")
        if self.max_height > 14.5:
            expected = rs_theta(self.max_height) / math.pi + 1.0
            slack = 2.0 + math.log(self.max_height)
            if abs(len(ords) - expected) > slack:
                raise ValueError(
                    f"census {len(ords)} vs counting formula {expected:.2f} "
                    f"differs beyond slack {slack:.2f}"
                )
        ords.setflags(write=False)

    def __len__(self) -> int:
        return len(self.ordinates)

    def up_to(self, T: float) -> np.ndarray:
        return self.ordinates[self.ordinates <= T]


class ZeroScanError(RuntimeError):
    pass


def _scan_grid(T: float, step_scale: float = 0.2) -> np.ndarray:
    pieces = [np.array([14.0])]
    lo = 14.0
    while lo < T:
        hi = min(T, lo * 2)
        step = step_scale / math.log(hi)
        pieces.append(np.arange(lo, hi, step)[1:])
        lo = hi
    pieces.append(np.array([T]))
    grid = np.concatenate(pieces + [gram_points(T)])
    grid = np.unique(grid)
    return grid[(grid >= 14.0) & (grid <= T)]


def _bisect_brackets(lo: np.ndarray, hi: np.ndarray, f_lo: np.ndarray,
                     iterations: int = 34) -> np.ndarray:
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        f_mid = hardy_z(mid)
        left = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, f_mid, f_lo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def count_formula(T: float) -> float:
    """theta(T)/pi + 1 + S(T), with S(T) from the argument of zeta unwrapped
    along the horizontal segment from sigma = 20 to the critical line."""
    if abs(float(hardy_z(T))) < 1e-8:
        T = T + 1e-4  # nudge off a zero height
    sigmas = np.concatenate([np.linspace(20.0, 3.0, 30), np.linspace(3.0, 0.5, 140)[1:]])
    ang = np.angle(np.atleast_1d(zeta_euler_maclaurin(sigmas + 1j * T)))
    for _ in range(12):
        # raw phase steps folded to (-pi, pi]; unwrap is only trustworthy if
        # the true step between samples stays well under a half turn
        step = (np.diff(ang) + math.pi) % (2 * math.pi) - math.pi
        if np.abs(step).max() < 1.5:
            break
        worst = np.nonzero(np.abs(step) >= 1.5)[0]
        extra = 0.5 * (sigmas[worst] + sigmas[worst + 1])
        sigmas = np.unique(np.concatenate([sigmas, extra]))[::-1]
        ang = np.angle(np.atleast_1d(zeta_euler_maclaurin(sigmas + 1j * T)))
    s_T = np.unwrap(ang)[-1] / math.pi
    return rs_theta(T) / math.pi + 1.0 + s_T


@dataclass(frozen=True)
class NCount:
    """Zero count by census and by the counting formula."""

    T: float
    census: int
    formula: int

    @property
    def agree(self) -> bool:
        return self.census == self.formula


def count_N(T: float, zeros: "ZeroList | None" = None) -> NCount:
    """N(T) two ways; raises if the methods disagree by 2 or more."""
    if T > 1e5:
        raise ValueError("desk scale tops out at T = 1e5")
    if zeros is None:
        zeros = find_zeros(T)
    census = int(len(zeros.up_to(T)))
    formula = int(round(count_formula(T))) if T > 14.5 else 0
    if abs(census - formula) >= 2:
        raise ZeroScanError(
            f"zero census {census} vs formula {formula} at T={T}: missing zeros"
        )
    return NCount(T=T, census=census, formula=formula)


def find_zeros(T: float, threads: int = 1) -> ZeroList:
    """All zero ordinates in (0, T] by sign-change scanning of Z with
    bisection refinement to ~1e-10, completeness checked against the
    counting formula (grid halving on mismatch)."""
    if T > 1e5:
        raise ValueError("desk scale tops out at T = 1e5")
    if T < FIRST_ZERO:
        return ZeroList(np.zeros(0), "computed", T)
    target = int(round(count_formula(T))) if T > 14.5 else 0
    grid = _scan_grid(T)
    for _ in range(7):
        z_vals = _eval_chunked(grid, threads)
        sign_flip = np.nonzero(np.sign(z_vals[:-1]) != np.sign(z_vals[1:]))[0]
        if len(sign_flip) >= target:
            break
        mids = 0.5 * (grid[:-1] + grid[1:])
        grid = np.unique(np.concatenate([grid, mids]))
    else:
        missing = target - len(sign_flip)
        raise ZeroScanError(
            f"{missing} zeros unresolved below T={T} after grid refinement; "
            f"largest unscanned gap near t={grid[np.argmax(np.diff(grid))]:.3f}"
        )
    ordinates = np.sort(
        _bisect_brackets(grid[sign_flip], grid[sign_flip + 1], z_vals[sign_flip])
    )
    if len(ordinates) > 1:
        # a zero landing exactly on a grid point brackets twice
        keep = np.concatenate([[True], np.diff(ordinates) > 1e-8])
        ordinates = ordinates[keep]
    return ZeroList(ordinates, "computed", T)


def _eval_chunked(grid: np.ndarray, threads: int, chunk: int = 20000) -> np.ndarray:
    parts = [grid[i : i + chunk] for i in range(0, len(grid), chunk)]
    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(hardy_z, parts))
    else:
        results = [hardy_z(p) for p in parts]
    return np.concatenate([np.atleast_1d(r) for r in results])


def write_zeros(zeros: ZeroList, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# zero ordinates, source={zeros.source}, max_height={float(zeros.max_height)!r}\n")
        for g in zeros.ordinates:
            fh.write(f"{float(g)!r}\n")


def ingest_zeros(path, cross_check: bool = True) -> ZeroList:
    """Read one decimal ordinate per line ('#' comments allowed), validate
    monotonicity, and cross-check the overlap with computed zeros to 1e-6."""
    ordinates = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                value = float(line)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a decimal ordinate: {line!r}")
            if ordinates and value <= ordinates[-1]:
                raise ValueError(
                    f"{path}:{lineno}: ordinate {value} not above previous {ordinates[-1]}"
                )
            ordinates.append(value)
    arr = np.array(ordinates)
    max_height = float(arr[-1]) if len(arr) else 0.0
    zeros = ZeroList(arr, "ingested", max_height)
    if cross_check and len(arr):
        top = min(200.0, max_height)
        # scan a little past the window so a zero sitting exactly at the
        # endpoint cannot fall outside the computed list
        mine = find_zeros(top + 1.0).ordinates
        theirs = zeros.up_to(top)
        if len(mine) < len(theirs):
            raise ValueError(
                f"overlap [0, {top}]: file has {len(theirs)} zeros, computed {len(mine)}"
            )
        dev = np.abs(mine[: len(theirs)] - theirs).max() if len(theirs) else 0.0
        if dev > 1e-6:
            raise ValueError(f"overlap mismatch: max deviation {dev:.2e} exceeds 1e-6")
    return zeros


# ---------------------------------------------------------------------------
# zeta'(rho) and the moments


def _zprime(gammas: np.ndarray) -> np.ndarray:
    h = 1e-5 * np.maximum(1.0, gammas) ** (-1.0 / 3.0)
    return (hardy_z(gammas + h) - hardy_z(gammas - h)) / (2 * h)


def zeta_prime_at_zero(gamma: float) -> complex:
    """zeta'(1/2 + i gamma) = -i Z'(gamma) e^{-i theta(gamma)} (differentiate
    zeta = e^{-i theta} Z and use Z(gamma) = 0)."""
    return complex(zeta_prime_many(np.array([gamma]))[0])


def zeta_prime_many(gammas: np.ndarray) -> np.ndarray:
    gammas = np.asarray(gammas, dtype=np.float64)
    zp = _zprime(gammas)
    tiny = np.abs(zp) < 1e-12
    if tiny.any():
        warnings.warn(
            f"|Z'(gamma)| < 1e-12 at {gammas[tiny]}: possible multiple zero",
            RuntimeWarning,
        )
    return -1j * zp * np.exp(-1j * rs_theta(gammas))


def zeta_prime_line_route(gamma: float) -> complex:
    """Independent route: numerical t-derivative of zeta(1/2 + it) itself,
    converted by d/ds = -i d/dt."""
    h = 1e-5 * max(1.0, gamma) ** (-1.0 / 3.0)
    ts = np.array([gamma + h, gamma - h])
    zeta_vals = np.exp(-1j * rs_theta(ts)) * hardy_z(ts)
    return complex(-1j * (zeta_vals[0] - zeta_vals[1]) / (2 * h))


@dataclass(frozen=True)
class MomentResult:
    """Empirical S1 = sum B zeta'(rho), S2 = sum |B zeta'(rho)|^2 over
    0 < gamma <= T, with the zero count and the resulting kappa bound."""

    T: float
    spec: MollifierSpec
    S1: complex
    S2: float
    N_T: int
    kappa_bound: float


def compute_moments(T: float, spec: MollifierSpec, zeros: ZeroList) -> MomentResult:
    if zeros.max_height < T:
        raise ValueError(f"zero list reaches {zeros.max_height}, below T = {T}")
    gammas = zeros.up_to(T)
    if len(gammas) == 0:
        raise ValueError(f"no zeros below T = {T}")
    zp = zeta_prime_many(gammas)
    ks = np.arange(1, int(spec.y) + 1)
    bk = np.array([eval_b(int(k), spec) for k in ks])
    live = bk != 0.0
    ks, bk = ks[live], bk[live]
    if len(ks):
        # B(1/2 + i gamma) in blocks of zeros
        B_vals = np.empty(len(gammas), dtype=np.complex128)
        logk = np.log(ks.astype(np.float64))
        coef = bk / np.sqrt(ks.astype(np.float64))
        for i in range(0, len(gammas), 4096):
            g = gammas[i : i + 4096]
            B_vals[i : i + 4096] = np.exp(-1j * np.outer(g, logk)) @ coef
    else:
        B_vals = np.ones(len(gammas), dtype=np.complex128)
    prod = B_vals * zp
    s1 = complex(_kahan_complex(prod))
    s2 = float(_kahan_real(np.abs(prod) ** 2))
    n_t = len(gammas)
    kappa = abs(s1) ** 2 / (s2 * n_t)
    return MomentResult(T=T, spec=spec, S1=s1, S2=s2, N_T=n_t, kappa_bound=kappa)


def _kahan_complex(values: np.ndarray) -> complex:
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _kahan_real(values: np.ndarray) -> float:
    return math.fsum(values.tolist())


def empirical_kappa_bound(result: MomentResult) -> float:
    """|S1|^2 / (S2 N(T)), the finite-T simple-zero fraction bound."""
    if result.S2 <= 0:
        raise ValueError("S2 must be positive")
    if result.N_T <= 0:
        raise ValueError("N_T must be positive")
    return abs(result.S1) ** 2 / (result.S2 * result.N_T)


def predicted_moment_scales(T: float, spec: MollifierSpec) -> tuple[float, float]:
    """The asymptotic scales (T L^2 / 2pi) s1_factor and (T L^3 / 2pi) s2_factor."""
    from .mollifier import predicted_S1_factor, predicted_S2_factor

    L = spec.log_scale
    base = T / (2 * math.pi)
    return base * L**2 * predicted_S1_factor(spec), base * L**3 * predicted_S2_factor(spec)
