"""Closed-form machinery for the Gaussian CEO problem.

A hidden Gaussian source Y0 with variance sigma^2 is observed through L
independent additive Gaussian noise channels Y_l = Y0 + N_l, Var(N_l) =
sigma_l^2 > 0, and reproduced under squared error.  The rate region is
parametrized by a witness vector r of per-encoder noise-information rates:
(R, D) belongs to the region iff there is r >= 0 with, for every subset A,

    sum_{l in A} R_l >= (1/2) log+ [ (1/D) (1/sigma^2
                        + sum_{l in A^c} (1 - e^{-2 r_l}) / sigma_l^2)^{-1} ]
                        + sum_{l in A} r_l,

where log+ x = max(log x, 0).  The empty subset gives the distortion
feasibility condition on r.  All mutual informations used here come from
closed-form log-determinant expressions of the specific constructions, never
numeric integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleError
from .regions import RatePoint

MEMBERSHIP_SLACK = 1e-12


def _log_plus(x: float) -> float:
    return max(math.log(x), 0.0)


@dataclass(frozen=True)
class GaussianParams:
    """Source variance and per-encoder noise variances (all strictly positive)."""

    sigma2: float
    noise_vars: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "noise_vars", tuple(float(v) for v in self.noise_vars))
        if self.sigma2 <= 0.0 or any(v <= 0.0 for v in self.noise_vars):
            raise InfeasibleError("sigma2 and every noise variance must be > 0")
        if not self.noise_vars:
            raise InfeasibleError("need at least one encoder")

    @property
    def L(self) -> int:
        return len(self.noise_vars)

    @property
    def d_min(self) -> float:
        """Smallest achievable distortion (all observations, infinite rate)."""
        return 1.0 / (1.0 / self.sigma2 + sum(1.0 / v for v in self.noise_vars))


def _subset_bound(params: GaussianParams, r: Sequence[float], D: float, mask: int) -> float:
    inv = 1.0 / params.sigma2
    total = 0.0
    for l in range(params.L):
        if mask & (1 << l):
            total += r[l]
        else:
            inv += (1.0 - math.exp(-2.0 * r[l])) / params.noise_vars[l]
    return 0.5 * _log_plus(1.0 / (D * inv)) + total


def gaussian_region_contains(
    params: GaussianParams, point: RatePoint, r: Sequence[float]
) -> bool:
    """True iff every subset constraint holds for this witness r.

    The empty subset is included: it is the feasibility condition that r
    explains distortion D at all.  Slack tolerance 1e-12.
    """
    r = tuple(float(v) for v in r)
    if len(r) != params.L or any(v < 0.0 for v in r):
        raise ValueError(f"need {params.L} nonnegative witness rates, got {r}")
    if len(point.rates) != params.L:
        raise ValueError(f"need {params.L} rates, got {len(point.rates)}")
    D = point.distortions[0]
    if D <= 0.0:
        raise InfeasibleError(f"need D > 0, got {D}")
    for mask in range(1 << params.L):
        lhs = sum(point.rates[l] for l in range(params.L) if mask & (1 << l))
        if lhs < _subset_bound(params, r, D, mask) - MEMBERSHIP_SLACK:
            return False
    return True


def gaussian_min_sum_rate(params: GaussianParams, D: float) -> float:
    """Minimum sum rate of the region at distortion D.

    Minimizes sum_l r_l + (1/2) log+ (sigma^2 / D) over witnesses r subject
    to feasibility 1/D <= 1/sigma^2 + sum_l (1 - e^{-2 r_l}) / sigma_l^2.
    Symmetric noises use the closed-form tight witness; general noises are
    solved by the water-filling condition e^{-2 r_l} = sigma_l^2 / (2 mu)
    with a bisection on mu.  Returns 0 for D >= sigma^2; D at or below the
    distortion floor is infeasible.
    """
    if D <= params.d_min:
        raise InfeasibleError(
            f"D={D} is at or below the distortion floor {params.d_min}"
        )
    if D >= params.sigma2:
        return 0.0
    theta = 1.0 / D - 1.0 / params.sigma2
    base = 0.5 * _log_plus(params.sigma2 / D)
    vs = params.noise_vars
    if len(set(vs)) == 1:
        # Closed-form tight witness: L (1 - e^{-2r}) / v = theta.
        frac = 1.0 - theta * vs[0] / params.L
        return base - 0.5 * params.L * math.log(frac)

    def filled(mu: float) -> float:
        return sum(max(0.0, (1.0 - v / (2.0 * mu))) / v for v in vs)

    lo = min(vs) / 2.0  # all rates zero
    hi = lo
    while filled(hi) < theta:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if filled(mid) < theta:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    rates = [max(0.0, 0.5 * math.log(2.0 * mu / v)) for v in vs]
    return base + sum(rates)


# ---------------------------------------------------------------------------
# The single-letter inequality linking source information to noise information
# ---------------------------------------------------------------------------


def oohama_gap(params: GaussianParams, q: Sequence[float], A: Iterable[int]) -> float:
    """Right minus left side of the inequality

        exp(2 I(Y0; U_A)) <= 1 + sum_{l in A} (1 - exp(-2 I(Y_l; U_l | Y0)))
                                               / (sigma_l^2 / sigma^2)

    for the scalar Gaussian test channels U_l = Y_l + V_l with independent
    noises Var(V_l) = q_l > 0 and trivial shared randomness.  Both sides are
    evaluated in closed form.  The gap is always >= 0; these jointly Gaussian
    test channels attain equality (for singletons trivially, and in fact for
    every subset, which is what makes the region description tight).
    """
    members = sorted(set(int(l) for l in A))
    if not members or members[0] < 1 or members[-1] > params.L:
        raise ValueError(f"A must be a nonempty subset of 1..{params.L}, got {A}")
    q = tuple(float(v) for v in q)
    if len(q) != params.L or any(v <= 0.0 for v in q):
        raise ValueError(f"need {params.L} positive test-noise variances, got {q}")
    s2 = params.sigma2
    # I(Y0; U_A) from the rank-one-plus-diagonal determinant identity:
    # det(sigma^2 11' + diag(d)) = (prod d_l)(1 + sigma^2 sum 1/d_l).
    d = [params.noise_vars[l - 1] + q[l - 1] for l in members]
    i_source = 0.5 * math.log1p(s2 * sum(1.0 / v for v in d))
    lhs = math.exp(2.0 * i_source)
    rhs = 1.0
    for l in members:
        i_noise = 0.5 * math.log(
            (params.noise_vars[l - 1] + q[l - 1]) / q[l - 1]
        )
        rhs += (1.0 - math.exp(-2.0 * i_noise)) * s2 / params.noise_vars[l - 1]
    return rhs - lhs


# ---------------------------------------------------------------------------
# The looseness construction (two encoders, unit variances)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianCounterexample:
    """Informations of the antithetic-common-noise construction.

    U1 = Y1 + V1 + W and U2 = Y2 + V2 - W with unit-variance V's and
    Var(W) = sigma_w2, on the symmetric problem sigma^2 = sigma_l^2 = 1.
    The MMSE distortion of the decoder is 1/2 independently of sigma_w2,
    while both I(Y1,Y2; U1,U2) and 2 I(Y1,Y2; U1 | U2) drop below the true
    minimum sum rate (3/2) log 2 for suitable sigma_w2 > 0.
    """

    sigma_w2: float
    i_joint: float
    i_cond: float
    distortion: float

    @property
    def classical_outer_sum_rate(self) -> float:
        return max(self.i_joint, 2.0 * self.i_cond)


def gaussian_bt_counterexample(sigma_w2: float) -> GaussianCounterexample:
    """Closed-form evaluation of the construction at a given Var(W) >= 0."""
    if sigma_w2 < 0.0:
        raise InfeasibleError(f"need sigma_w2 >= 0, got {sigma_w2}")
    s = float(sigma_w2)
    # Cov(U) = [[3+s, 1-s], [1-s, 3+s]], Cov(U|Y) = [[1+s, -s], [-s, 1+s]].
    det_u = (3.0 + s) ** 2 - (1.0 - s) ** 2
    det_u_given_y = (1.0 + s) ** 2 - s**2
    i_joint = 0.5 * math.log(det_u / det_u_given_y)
    i_y2u2 = 0.5 * math.log((3.0 + s) / (1.0 + s))
    i_cond = i_joint - i_y2u2
    # U1 + U2 = 2 Y0 + (noise of variance 4) is sufficient for Y0.
    cov_y0_sum = 2.0
    var_sum = 4.0 + 4.0
    distortion = 1.0 - cov_y0_sum**2 / var_sum
    return GaussianCounterexample(
        sigma_w2=s, i_joint=i_joint, i_cond=i_cond, distortion=distortion
    )


def search_bt_counterexample(
    margin: float = 0.04, grid: int = 400, s_max: float = 2.0
) -> GaussianCounterexample:
    """Smallest grid value of Var(W) > 0 whose classical-outer sum rate sits
    at least ``margin`` nats below the true minimum (3/2) log 2."""
    target = 1.5 * math.log(2.0) - margin
    best = -math.inf
    for s in np.linspace(s_max / grid, s_max, grid):
        cand = gaussian_bt_counterexample(float(s))
        if cand.classical_outer_sum_rate <= target:
            return cand
        best = max(best, 1.5 * math.log(2.0) - cand.classical_outer_sum_rate)
    raise InfeasibleError(
        f"no Var(W) in (0, {s_max}] reaches margin {margin}; "
        f"largest margin on the grid is {best:.6f}"
    )
