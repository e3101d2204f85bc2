"""Mollifier polynomial, predicted main-term factors, and the ratio optimiser.

The mollifier is the short Dirichlet polynomial with coefficients
b(k) = mu(k) P(log(y/k)/log y), where P has real coefficients, no constant
term, and P(1) = 1, and y = T^theta with 0 < theta < 1/2.  All first/second
moment main terms reduce to closed forms in the three polynomial moments

    int_0^1 P,   int_0^1 P^2,   int_0^1 P'^2,

which are evaluated exactly from the coefficients.  theta = 1/2 is accepted
by the factor-level functions as the limiting substitution (the closed forms
are continuous there); MollifierSpec itself keeps the strict range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import arith

KAPPA_MULTIPLICITY_CONSTANT = 1.3275  # external multiplicity-sum input, not recomputed


@dataclass(frozen=True)
class MollifierPolynomial:
    """P(x) = sum_j c_j x^j with c = coefficients, so P(0) = 0 by construction.

    Requires P(1) = sum c_j = 1 to 1e-12.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise ValueError("polynomial needs at least the linear coefficient")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        s = math.fsum(self.coefficients)
        if abs(s - 1.0) > 1e-12:
            raise ValueError(f"P(1) = {s!r} must equal 1 to 1e-12")

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def __call__(self, x):
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc * x

    def derivative_at(self, x):
        acc = 0.0
        for j in range(self.degree, 0, -1):
            acc = acc * x + j * self.coefficients[j - 1]
        return acc

    def integral(self) -> float:
        """int_0^1 P(u) du = sum c_j / (j+1)."""
        return math.fsum(c / (j + 2) for j, c in enumerate(self.coefficients))

    def integral_square(self) -> float:
        """int_0^1 P(u)^2 du = sum_{i,j} c_i c_j / (i+j+1)."""
        c = self.coefficients
        return math.fsum(
            c[i] * c[j] / (i + j + 3) for i in range(len(c)) for j in range(len(c))
        )

    def integral_deriv_square(self) -> float:
        """int_0^1 P'(u)^2 du = sum_{i,j} i j c_i c_j / (i+j-1)."""
        c = self.coefficients
        return math.fsum(
            (i + 1) * (j + 1) * c[i] * c[j] / (i + j + 1)
            for i in range(len(c))
            for j in range(len(c))
        )

    def sup_norm_01(self) -> float:
        """max_{0<=x<=1} |P(x)| via the critical points of P."""
        candidates = [0.0, 1.0]
        dcoeffs = [(j + 1) * c for j, c in enumerate(self.coefficients)]
        if len(dcoeffs) > 1:
            roots = np.roots(list(reversed(dcoeffs)))
            for r in roots:
                if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0:
                    candidates.append(float(r.real))
        return max(abs(self(x)) for x in candidates)


def paper_quadratic(theta: float) -> MollifierPolynomial:
    """The quadratic choice (1 + theta) x - theta x^2."""
    return MollifierPolynomial((1.0 + theta, -theta))


@dataclass(frozen=True)
class MollifierSpec:
    """Run parameters: theta in (0, 1/2), T > 2*pi, y = T^theta, polynomial P."""

    theta: float
    T: float
    y: float
    P: MollifierPolynomial

    def __post_init__(self):
        if not 0.0 < self.theta < 0.5:
            raise ValueError(f"theta = {self.theta} outside (0, 1/2)")
        if self.T <= 2 * math.pi:
            raise ValueError(f"T = {self.T} must exceed 2*pi")
        if abs(self.y - self.T**self.theta) > 1e-9 * self.y:
            raise ValueError(f"y = {self.y} is not T^theta = {self.T**self.theta}")

    @classmethod
    def from_T_theta(cls, T: float, theta: float, P: MollifierPolynomial | None = None):
        if P is None:
            P = paper_quadratic(theta)
        return cls(theta=theta, T=T, y=T**theta, P=P)

    @classmethod
    def with_y(cls, T: float, y: float, P: MollifierPolynomial | None = None):
        """Spec with an explicit support cutoff; theta is derived as log y / log T."""
        theta = math.log(y) / math.log(T)
        if P is None:
            P = paper_quadratic(theta)
        return cls(theta=theta, T=T, y=y, P=P)

    @property
    def log_scale(self) -> float:
        """L = log(T / 2 pi)."""
        return math.log(self.T / (2 * math.pi))

    @cached_property
    def _mobius(self) -> arith.ArithFnTable:
        return arith.sieve_standard("mobius", max(1, int(self.y)))


@dataclass(frozen=True)
class MainTermReport:
    """The bracketed main-term factors and the kappa value they imply."""

    theta: float
    s1_factor: float
    s2_factor: float
    m11_factor: float
    m21_factor: float
    kappa_star: float


# ---------------------------------------------------------------------------
# closed-form main-term factors (theta in (0, 1/2], limit substitution at 1/2)


def _check_theta(theta: float, positive: bool = False) -> None:
    if not 0.0 <= theta <= 0.5:
        raise ValueError(f"theta = {theta} outside [0, 1/2]")
    if positive and theta == 0.0:
        raise ValueError("theta = 0 hits the 1/theta singularity")


def s1_factor(P: MollifierPolynomial, theta: float) -> float:
    """1/2 + theta * int P."""
    _check_theta(theta)
    return 0.5 + theta * P.integral()


def s2_factor(P: MollifierPolynomial, theta: float) -> float:
    """1/3 + theta int P + theta^2 (int P)^2 + (1/(12 theta)) int P'^2."""
    _check_theta(theta, positive=True)
    ip = P.integral()
    return 1.0 / 3.0 + theta * ip + (theta * ip) ** 2 + P.integral_deriv_square() / (12 * theta)


def m11_factor(P: MollifierPolynomial, theta: float) -> float:
    """1/2 - theta * int P."""
    _check_theta(theta)
    return 0.5 - theta * P.integral()


def m21_factor(P: MollifierPolynomial, theta: float) -> float:
    """1/12 - (theta/2) int P + (3 theta/2) int P^2 - (theta^2/2)(int P)^2
    - (1/(24 theta)) int P'^2."""
    _check_theta(theta, positive=True)
    ip = P.integral()
    return (
        1.0 / 12.0
        - 0.5 * theta * ip
        + 1.5 * theta * P.integral_square()
        - 0.5 * (theta * ip) ** 2
        - P.integral_deriv_square() / (24 * theta)
    )


def predicted_S1_factor(spec: MollifierSpec) -> float:
    return s1_factor(spec.P, spec.theta)


def predicted_S2_factor(spec: MollifierSpec) -> float:
    return s2_factor(spec.P, spec.theta)


def predicted_M11_factor(spec: MollifierSpec) -> float:
    return m11_factor(spec.P, spec.theta)


def predicted_M21_factor(spec: MollifierSpec) -> float:
    return m21_factor(spec.P, spec.theta)


def kappa_star_lower(s1: float, s2: float) -> float:
    """s1^2 / s2, the asymptotic simple-zero proportion bound."""
    if s2 <= 0:
        raise ValueError(f"s2 factor must be positive, got {s2}")
    return s1 * s1 / s2


def kappa_d_lower(kappa_star: float,
                  multiplicity_constant: float = KAPPA_MULTIPLICITY_CONSTANT) -> float:
    """(5 + 2 kappa_star - multiplicity_constant) / 6."""
    if not 0.0 <= kappa_star <= 1.0:
        raise ValueError(f"kappa_star = {kappa_star} outside [0, 1]")
    return (5.0 + 2.0 * kappa_star - multiplicity_constant) / 6.0


def main_term_report(P: MollifierPolynomial, theta: float) -> MainTermReport:
    s1 = s1_factor(P, theta)
    s2 = s2_factor(P, theta)
    return MainTermReport(
        theta=theta,
        s1_factor=s1,
        s2_factor=s2,
        m11_factor=m11_factor(P, theta),
        m21_factor=m21_factor(P, theta),
        kappa_star=kappa_star_lower(s1, s2),
    )


# ---------------------------------------------------------------------------
# ratio optimisation over {P : P(0) = 0, P(1) = 1}


def _quadratic_forms(theta: float, degree: int):
    """Homogeneous forms for s1^2 and s2 in z = (1, c_1..c_d).

    s1 = a.z is affine, s2 = z.B z is a positive quadratic, so the objective
    is a Rayleigh-type quotient (a.z)^2 / (z.B z) on the hyperplane
    g.z = 0 encoding sum c_j = 1.
    """
    j = np.arange(1, degree + 1, dtype=np.float64)
    v = 1.0 / (j + 1.0)
    deriv = np.outer(j, j) / (j[:, None] + j[None, :] - 1.0)
    a = np.concatenate(([0.5], theta * v))
    B = np.zeros((degree + 1, degree + 1))
    B[0, 0] = 1.0 / 3.0
    B[0, 1:] = B[1:, 0] = 0.5 * theta * v
    B[1:, 1:] = theta**2 * np.outer(v, v) + deriv / (12.0 * theta)
    g = np.concatenate(([-1.0], np.ones(degree)))
    return a, B, g, v, deriv


def _objective_gradient(c: np.ndarray, theta: float, v: np.ndarray, deriv: np.ndarray):
    s = float(v @ c)
    s1 = 0.5 + theta * s
    s2 = 1.0 / 3.0 + theta * s + (theta * s) ** 2 + float(c @ deriv @ c) / (12 * theta)
    grad_s1 = theta * v
    grad_s2 = theta * v + 2 * theta**2 * s * v + (deriv @ c) / (6 * theta)
    value = s1 * s1 / s2
    grad = (2 * s1 * grad_s1 * s2 - s1 * s1 * grad_s2) / (s2 * s2)
    return value, grad


def optimize_P(theta: float, degree: int) -> tuple[MollifierPolynomial, float]:
    """Maximise s1_factor^2 / s2_factor over degree-d polynomials with
    P(0) = 0, P(1) = 1.

    The quotient is a ratio of quadratic forms in homogeneous coordinates;
    restricted to the constraint hyperplane the maximiser solves a single
    symmetric-definite linear system (the numerator form has rank one).  A
    projected-gradient ascent pass then polishes to gradient norm <= 1e-10.
    """
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    if not 0.0 < theta <= 0.5:
        raise ValueError(f"theta = {theta} outside (0, 1/2]")
    if degree == 1:
        # constraints pin P(x) = x
        poly = MollifierPolynomial((1.0,))
        return poly, kappa_star_lower(s1_factor(poly, theta), s2_factor(poly, theta))

    a, B, g, v, deriv = _quadratic_forms(theta, degree)
    d = degree
    # basis of the hyperplane g.z = 0: (1,1,0,...) and the c-space differences
    Z = np.zeros((d + 1, d))
    Z[0, 0] = 1.0
    Z[1, 0] = 1.0
    for i in range(1, d):
        Z[i, i] = 1.0
        Z[i + 1, i] = -1.0
    Bp = Z.T @ B @ Z
    ap = Z.T @ a
    try:
        w = np.linalg.solve(Bp, ap)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"degenerate normal equations at theta={theta}, degree={degree}: {exc}")
    z = Z @ w
    if abs(z[0]) < 1e-12 * np.linalg.norm(z):
        raise ValueError(
            f"degenerate normal equations: optimiser escaped to infinity "
            f"(z0 = {z[0]!r}) at theta={theta}, degree={degree}"
        )
    c = z[1:] / z[0]

    # projected ascent polish on the affine slice sum c_j = 1
    value, grad = _objective_gradient(c, theta, v, deriv)
    for _ in range(200):
        pgrad = grad - grad.mean()
        if np.linalg.norm(pgrad) <= 1e-10 * max(1.0, abs(value)):
            break
        step = 1.0
        while step > 1e-14:
            trial = c + step * pgrad
            tval, tgrad = _objective_gradient(trial, theta, v, deriv)
            if tval > value:
                c, value, grad = trial, tval, tgrad
                break
            step *= 0.5
        else:
            break

    # re-normalise the constraint exactly before constructing the polynomial
    c = c / math.fsum(c.tolist())
    poly = MollifierPolynomial(tuple(c))
    return poly, kappa_star_lower(s1_factor(poly, theta), s2_factor(poly, theta))


# ---------------------------------------------------------------------------
# b coefficients and the Dirichlet polynomial B(s)


def eval_b(k: int, spec: MollifierSpec) -> float:
    """b(k) = mu(k) P(log(y/k)/log y) for k <= y, else 0."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > spec.y:
        return 0.0
    mu = spec._mobius[k]
    if mu == 0.0:
        return 0.0
    if spec.y == 1.0:
        return mu if k == 1 else 0.0
    x = math.log(spec.y / k) / math.log(spec.y)
    return mu * spec.P(x)


def b_table(spec: MollifierSpec, limit: int) -> arith.ArithFnTable:
    """b(k) on [1..limit] (zero beyond the support cutoff y)."""
    values = np.zeros(limit + 1)
    for k in range(1, min(limit, int(spec.y)) + 1):
        values[k] = eval_b(k, spec)
    return arith.ArithFnTable("b", limit, values)


def eval_B(s: complex, spec: MollifierSpec) -> complex:
    """B(s) = sum_{k <= y} b(k) k^{-s}."""
    total = 0.0 + 0.0j
    for k in range(1, int(spec.y) + 1):
        bk = eval_b(k, spec)
        if bk != 0.0:
            total += bk * complex(k) ** (-s)
    return total


# Gauss-Legendre on [0, 1]; cross-check fallback for the closed-form moments
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


def quadrature_01(fn) -> float:
    """64-node Gauss-Legendre integral of fn over [0, 1]."""
    return float(np.dot(_GL_WEIGHTS, [fn(x) for x in _GL_NODES]))
