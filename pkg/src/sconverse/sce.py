"""Strong converse exponent of a channel for a fixed input composition.

E_sc(R) = sup_{rho > 1} ((1 - rho)/rho) (I_rho - R), evaluated through its
parametric form: the optimal order solves I_1(P; W_rho) = R, the exponent is
C_1(W_rho || W | P) and the slope is (rho - 1)/rho. Below I_1(P; W) the
exponent vanishes; above the large-order limit of I_1(P; W_rho) it is the
straight line R - I_inf.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .augustin import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    solve_augustin,
    tilted_rows_at_mean,
)
from .errors import ConvergenceError, DomainError, RegimeError
from .prob import Channel, Distribution, check_input, conditional_kl, mutual_information

DEFAULT_RHO_CAP = 2.0 ** 16
BOUNDARY_SNAP = 1e-6
THRESHOLD_STEP_TOL = 1e-7
BISECTION_MAX_ITER = 200


class Regime(str, enum.Enum):
    ZERO = "ZERO"
    PARAMETRIC = "PARAMETRIC"
    HIGH_RATE = "HIGH_RATE"


@dataclass(frozen=True)
class SceResult:
    rate: float
    regime: Regime
    rho_star: float
    exponent: float
    slope: float
    i1: float
    rate_threshold_high: float
    i_inf: float
    bisection_residual: float = 0.0


@dataclass(frozen=True)
class ThresholdEstimate:
    """Large-order limit of I_1(P; W_rho) and the order-infinity Augustin information."""

    value: float
    converged: bool
    last_rho: float
    history: tuple
    i_inf: float
    i_inf_tail_bound: float


def _large_order_tol(rho, tol):
    # exponents of size rho*|ln q| limit attainable precision of the fixed-point residual
    return max(tol, 1e-12 * rho)


class StrongConverse:
    """Exponent evaluator for one (channel, composition) pair.

    Caches I_1, the high-rate threshold and Augustin solves, so rate sweeps
    pay for the threshold estimate once.
    """

    def __init__(self, channel: Channel, p: Distribution, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER, rho_cap: float = DEFAULT_RHO_CAP):
        check_input(channel, p)
        if not rho_cap > 2:
            raise DomainError("rho_cap must exceed 2")
        self.channel = channel
        self.p = p
        self.tol = tol
        self.max_iter = max_iter
        self.rho_cap = float(rho_cap)
        self._solutions = {}

    def solution(self, rho: float):
        sol = self._solutions.get(rho)
        if sol is None:
            sol = solve_augustin(rho, self.channel, self.p,
                                 tol=_large_order_tol(rho, self.tol),
                                 max_iter=self.max_iter, n_probes=0)
            self._solutions[rho] = sol
        return sol

    def tilted(self, rho: float) -> np.ndarray:
        return tilted_rows_at_mean(self.solution(rho), self.channel, self.p)

    def info(self, rho: float) -> float:
        return self.solution(rho).info

    def rate_of(self, rho: float) -> float:
        """I_1(P; W_rho^q) written as C_1(W_rho^q || q | P)."""
        return conditional_kl(self.tilted(rho), self.solution(rho).q, self.p.probs)

    def exponent_at(self, rho: float) -> float:
        return conditional_kl(self.tilted(rho), self.channel.matrix, self.p.probs)

    @cached_property
    def i1(self) -> float:
        return self.info(1.0)

    @cached_property
    def threshold(self) -> ThresholdEstimate:
        history = [(1.0, self.i1)]
        rho, prev, converged = 2.0, self.i1, False
        while rho <= self.rho_cap:
            try:
                value = self.rate_of(rho)
            except ConvergenceError:
                break
            history.append((rho, value))
            if abs(value - prev) < THRESHOLD_STEP_TOL:
                converged = True
                break
            prev = value
            rho *= 2
        # monotone in rho, so the largest evaluation is the best lower estimate
        value = max(v for _, v in history)
        i_inf, tail = self._i_inf()
        return ThresholdEstimate(value=value, converged=converged, last_rho=history[-1][0],
                                 history=tuple(history), i_inf=i_inf, i_inf_tail_bound=tail)

    def _i_inf(self):
        hi = self.rho_cap
        while True:
            try:
                i_hi, i_lo = self.info(hi), self.info(hi / 2)
                break
            except ConvergenceError:
                if hi / 2 <= 2:
                    raise
                hi /= 2
        lo = hi / 2
        # I_rho ~ I_inf - c/(rho - 1): eliminate the leading term
        extrapolated = (i_hi * (hi - 1) - i_lo * (lo - 1)) / (hi - lo)
        estimate = max(extrapolated, i_hi)
        return estimate, abs(estimate - i_hi)

    def find_rho(self, rate: float) -> float:
        lo, hi = 1.0, 2.0
        while self.rate_of(hi) < rate:
            lo, hi = hi, 2 * hi
            if hi > self.rho_cap:
                raise RegimeError(
                    f"rate {rate} not bracketed below rho_cap={self.rho_cap}; "
                    f"threshold estimate {self.threshold.value}")
        if lo == 1.0:
            f_lo = self.i1 - rate
        else:
            f_lo = self.rate_of(lo) - rate
        if f_lo >= 0:
            raise RegimeError(f"rate {rate} not above I_1 at the bracket start {lo}")
        return brentq(lambda r: self.rate_of(r) - rate, lo, hi,
                      xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=BISECTION_MAX_ITER)

    def __call__(self, rate: float) -> SceResult:
        if not rate > 0:
            raise DomainError(f"rate must be positive, got {rate!r}")
        th = self.threshold
        common = dict(rate=float(rate), i1=self.i1, rate_threshold_high=th.value, i_inf=th.i_inf)
        if rate <= self.i1 + BOUNDARY_SNAP:
            return SceResult(regime=Regime.ZERO, rho_star=1.0, exponent=0.0, slope=0.0, **common)
        if rate >= th.value - BOUNDARY_SNAP:
            return SceResult(regime=Regime.HIGH_RATE, rho_star=np.inf,
                             exponent=float(rate - th.i_inf), slope=1.0, **common)
        rho = self.find_rho(rate)
        residual = abs(self.rate_of(rho) - rate)
        return SceResult(regime=Regime.PARAMETRIC, rho_star=float(rho),
                         exponent=self.exponent_at(rho), slope=(rho - 1) / rho,
                         bisection_residual=residual, **common)

    def curve(self, rates):
        return [self(r) for r in rates]

    def grid_oracle(self, rate: float, rho_grid) -> float:
        rho = np.asarray(rho_grid, dtype=float)
        if rho.size == 0 or np.any(rho <= 1):
            raise DomainError("grid must be nonempty with every order > 1")
        infos = np.array([self.info(r) for r in rho])
        return float(np.max((1 - rho) / rho * (infos - rate)))

    def dueck_korner(self, rate: float, result: SceResult | None = None) -> float:
        res = result if result is not None else self(rate)
        if res.regime is not Regime.PARAMETRIC:
            raise RegimeError(f"rate {rate} is in regime {res.regime.value}, not PARAMETRIC")
        rho = res.rho_star
        V = self.tilted(rho)
        pv = self.p.probs
        keep = pv > 0
        V0 = np.where(keep[:, None], V, 0.0)
        i1_v = mutual_information(pv, V0)
        objective = conditional_kl(V, self.channel.matrix, pv) + max(rate - i1_v, 0.0)
        variational = (rho - 1) / rho * (rate - self.info(rho))
        return max(abs(objective - res.exponent), abs(objective - variational))


def sce_full(rate: float, channel: Channel, p: Distribution, **kw) -> SceResult:
    return StrongConverse(channel, p, **kw)(rate)


def sce_grid_oracle(rate: float, channel: Channel, p: Distribution, rho_grid, **kw) -> float:
    """Max over the grid of ((1 - rho)/rho)(I_rho - R): a lower bound on the exponent."""
    return StrongConverse(channel, p, **kw).grid_oracle(rate, rho_grid)


def rate_threshold_high(channel: Channel, p: Distribution, **kw) -> ThresholdEstimate:
    return StrongConverse(channel, p, **kw).threshold


def dueck_korner_check(rate: float, channel: Channel, p: Distribution, **kw) -> float:
    """Gap between the variational objective at V = W_{rho*} and the exponent (nats)."""
    return StrongConverse(channel, p, **kw).dueck_korner(rate)
