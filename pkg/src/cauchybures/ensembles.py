"""Ensemble parameters, bimoment matrices, and partition functions.

Covers the theta-deformed Cauchy two-matrix model and the theta-deformed
Bures ensemble.  Every partition function is computable by two
independent routes (closed product vs determinant, Pfaffian vs the
squared identity), which the test suite cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, SignError
from .numerics import LogValue, SkewMatrix, pfaffian, pfaffian_bordered

__all__ = [
    "EnsembleParams",
    "moment_c",
    "moment_b",
    "moment_b_vec",
    "partition_cauchy",
    "partition_cauchy_det",
    "partition_bures",
    "partition_bures_closed",
    "bures_closed_report",
]


@dataclass(frozen=True)
class EnsembleParams:
    """Parameter tuple (a, b, theta, n) with derived exponents.

    alpha = (a+b+1)/theta - 1 governs the t-integral weight, beta is the
    partition-product exponent, beta_hat the Bures variant (where the
    second weight exponent is implicitly a+1).
    """

    a: float
    b: float
    theta: float
    n: int

    def __post_init__(self):
        if self.a <= -1.0 or self.b <= -1.0:
            raise DomainError("weight exponents a, b must exceed -1")
        if self.theta <= 0.0:
            raise DomainError("theta must be positive")
        if self.n < 1:
            raise DomainError("n must be a positive integer")

    @property
    def alpha(self) -> float:
        return (self.a + self.b + 1.0) / self.theta - 1.0

    @property
    def beta(self) -> float:
        return (1.0 + self.a + self.b) / self.theta

    @property
    def beta_hat(self) -> float:
        return (self.a + 1.0) / self.theta - 1.0

    def with_n(self, n: int) -> "EnsembleParams":
        return EnsembleParams(self.a, self.b, self.theta, n)

    def bures_pair(self) -> "EnsembleParams":
        """Cauchy parameters (a, a+1) entering every Bures identity."""
        return EnsembleParams(self.a, self.a + 1.0, self.theta, self.n)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _moment_c_log(a: float, b: float, theta: float, j: int, k: int) -> LogValue:
    denom = 1.0 + a + b + theta * (j + k - 2)
    log = (math.lgamma(a + theta * (j - 1) + 1.0)
           + math.lgamma(b + theta * (k - 1) + 1.0) - math.log(denom))
    return LogValue(1, log)


def moment_c(params: EnsembleParams, j: int, k: int) -> float:
    """Cauchy bimoment I_{j,k} = G(a+t(j-1)+1) G(b+t(k-1)+1) / (1+a+b+t(j+k-2))."""
    if j < 1 or k < 1:
        raise DomainError("moment indices start at 1")
    return _moment_c_log(params.a, params.b, params.theta, j, k).to_real()


def moment_b_vec(params: EnsembleParams, j: int) -> float:
    """Scalar Bures moment i_j = Gamma(a + theta*(j-1) + 1)."""
    if j < 1:
        raise DomainError("moment indices start at 1")
    return math.exp(math.lgamma(params.a + params.theta * (j - 1) + 1.0))


def moment_b(params: EnsembleParams, j: int, k: int) -> float:
    """Skew Bures bimoment via 2 I^C_{j,k}(a, a+1) = I^B_{j,k} + i_j i_k."""
    if j < 1 or k < 1:
        raise DomainError("moment indices start at 1")
    if j == k:
        return 0.0
    cp = params.bures_pair()
    val = 2.0 * moment_c(cp, j, k) - moment_b_vec(params, j) * moment_b_vec(params, k)
    return val


# ---------------------------------------------------------------------------
# Cauchy partition function
# ---------------------------------------------------------------------------

def partition_cauchy(params: EnsembleParams) -> LogValue:
    """Closed product form of the Cauchy partition function.

    Non-integer factorials are read as gamma functions:
    (beta+k-2)! -> Gamma(beta+k-1).
    """
    a, b, theta, n = params.a, params.b, params.theta, params.n
    beta = params.beta
    log = 0.0
    for j in range(1, n + 1):
        log += (math.lgamma(a + theta * (j - 1) + 1.0)
                + math.lgamma(b + theta * (j - 1) + 1.0))
    log -= n * math.log(theta)
    for l in range(1, n):
        log += 2.0 * math.lgamma(l + 1)
    for k in range(1, n + 1):
        log += math.lgamma(beta + k - 1.0) - math.lgamma(beta + k + n - 1.0)
    return LogValue(1, log)


def _cauchy_core_logdet(beta: float, theta: float, n: int) -> LogValue:
    """det[1/(1+a+b+theta(j+k-2))] with the gamma prefactors pulled out."""
    if n > 8:
        # Cauchy-type closed product; LU loses all digits past n ~ 10
        log = -n * math.log(theta)
        for l in range(1, n):
            log += 2.0 * math.lgamma(l + 1)
        for k in range(1, n + 1):
            log += math.lgamma(beta + k - 1.0) - math.lgamma(beta + k + n - 1.0)
        return LogValue(1, log)
    jj, kk = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1),
                         indexing="ij")
    core = 1.0 / (theta * (beta + jj + kk - 2.0))
    sign, logdet = np.linalg.slogdet(core)
    if sign == 0:
        raise SignError("singular moment core matrix")
    return LogValue(int(sign), float(logdet))


def partition_cauchy_det(params: EnsembleParams) -> LogValue:
    """Determinant route: prescaled moment matrix times gamma prefactors."""
    a, b, theta, n = params.a, params.b, params.theta, params.n
    pref = 0.0
    for j in range(1, n + 1):
        pref += (math.lgamma(a + theta * (j - 1) + 1.0)
                 + math.lgamma(b + theta * (j - 1) + 1.0))
    core = _cauchy_core_logdet(params.beta, theta, n)
    return LogValue(core.sign, core.log_mag + pref)


# ---------------------------------------------------------------------------
# Bures partition function
# ---------------------------------------------------------------------------

def _bures_moment_matrix(params: EnsembleParams) -> SkewMatrix:
    n = params.n
    upper = np.zeros((n, n))
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            upper[j - 1, k - 1] = moment_b(params, j, k)
    return SkewMatrix(upper)


def partition_bures(params: EnsembleParams) -> LogValue:
    """Bures partition function by the (bordered) Pfaffian of skew moments.

    Even n: Pf(I^B).  Odd n: the matrix is bordered by the scalar moments
    i^B with a leading zero.  The result must be positive.
    """
    n = params.n
    m = _bures_moment_matrix(params)
    if n % 2 == 0:
        val = pfaffian(m)
    else:
        border = np.array([moment_b_vec(params, j) for j in range(1, n + 1)])
        val = pfaffian_bordered(m, border)
    if val.sign <= 0:
        raise SignError("Bures partition function came out non-positive")
    return val


def partition_bures_squared_identity(params: EnsembleParams) -> LogValue:
    """sqrt(2^n Z^C_n(a, a+1; theta)): the normative cross-check value."""
    zc = partition_cauchy(params.bures_pair())
    return LogValue(1, 0.5 * (params.n * math.log(2.0) + zc.log_mag))


def partition_bures_closed(params: EnsembleParams) -> LogValue:
    """EXPERIMENTAL closed product for the Bures partition function.

    The source display lacks an explicit product index; a product over
    j = 0..n-1 is restored here.  Compare with partition_bures via
    bures_closed_report; agreement is reported, not asserted.
    """
    a, theta, n = params.a, params.theta, params.n
    bh = params.beta_hat
    log = 0.5 * n * math.log(math.pi)
    log -= (theta * n * n + 2.0 * a * n - (theta - 1.0) * n) * math.log(2.0)
    for j in range(n):
        log += (math.lgamma(j + 1.0) + math.lgamma(2.0 * bh + j + 2.0)
                - math.lgamma(theta * (j + bh + 1.0) + 0.5))
        log += 0.5 * (math.lgamma(2.0 * theta * (bh + j + 1.0))
                      + math.lgamma(2.0 * theta * (bh + j + 1.0) + 1.0)
                      - math.lgamma(2.0 * (bh + j + 1.0))
                      - math.lgamma(2.0 * (bh + j + 1.0) + 1.0))
    return LogValue(1, log)


def bures_closed_report(params: EnsembleParams) -> dict:
    """Compare the experimental closed product against the Pfaffian route."""
    pf = partition_bures(params)
    closed = partition_bures_closed(params)
    rel = abs(math.expm1(closed.log_mag - pf.log_mag))
    return {
        "n": params.n,
        "a": params.a,
        "theta": params.theta,
        "pfaffian_log": pf.log_mag,
        "closed_log": closed.log_mag,
        "relative_difference": rel,
        "agrees_1e-7": rel < 1e-7,
    }
