"""Berry-Esseen based converse for product hypothesis testing, its matching
achievability construction, and the resulting converse bounds for constant
composition codes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DegenerateVarianceError, DomainError, HypothesisError, RegimeError
from .instance import HtInstance, Letter
from .oracle import DEFAULT_ATOM_CAP, llr_atoms
from .prob import Channel, Composition
from .sce import Regime, StrongConverse

BERRY_ESSEEN = 0.56
WINDOW_SLACK = 1e-12

__all__ = [
    "AchievabilityEvent", "BerryEsseenConstants", "HtInstance", "Letter", "Lemma1Bound",
    "Theorem1Bound", "berry_esseen_constants", "lemma1_converse_bound",
    "lemma2_achievability_event", "lemma2_window", "theorem1_bound", "theorem2_bound",
]


@dataclass(frozen=True)
class BerryEsseenConstants:
    a2: float
    a3: float
    hat_delta: float


def _hat_delta(a2, a3):
    return (1 / (math.e * math.sqrt(a2))) * (1 / math.sqrt(2 * math.pi) + 2 * BERRY_ESSEEN * a3 / a2)


def berry_esseen_constants(rho: float, instance: HtInstance) -> BerryEsseenConstants:
    """Letter-averaged variance and absolute third moment of the LLR under the tilt."""
    if not rho > 1:
        raise DomainError(f"order must exceed 1, got {rho!r}")
    counts = instance.counts
    moments = np.array(instance.llr_moments(rho))
    n = counts.sum()
    a2 = float(counts @ moments[:, 1] / n)
    a3 = float(counts @ moments[:, 2] / n)
    if not a2 > 1e-30:
        raise DegenerateVarianceError(
            "log-likelihood ratio is a.s. constant under the tilted measure (a2 = 0)")
    return BerryEsseenConstants(a2=a2, a3=a3, hat_delta=_hat_delta(a2, a3))


@dataclass(frozen=True)
class Lemma1Bound:
    bound_form_5: float
    bound_form_6: float
    q_budget: float
    deficit: float
    log_q_budget: float
    log_deficit: float
    constants: BerryEsseenConstants
    d_tilted_q: float
    d_tilted_w: float


def _lemma1_coefficient(rho, beta, hat_delta):
    return (2 * math.exp(rho) * hat_delta ** (1 / rho) * beta ** ((rho - 1) / rho)
            / (rho - 1) ** (1 / rho))


def lemma1_converse_bound(rho: float, beta: float, instance: HtInstance) -> Lemma1Bound:
    """Lower bounds on W(E^c) valid for every E with Q(E) <= beta exp(-D(w_rho || Q)).

    Both algebraic forms are returned; ``q_budget`` is that admissible Q-mass.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    const = berry_esseen_constants(rho, instance)
    d_q, d_w, d_w1 = instance.tilted_divergences(rho)
    n = instance.n
    coef = _lemma1_coefficient(rho, beta, const.hat_delta) * n ** (-1 / (2 * rho))
    ac = instance.ac_product()
    log_deficit = math.log(coef) - d_w
    deficit = math.exp(log_deficit)
    form5 = ac - deficit
    form6 = (1 - coef * math.exp(-d_w1)) * ac
    log_budget = math.log(beta) - d_q
    return Lemma1Bound(bound_form_5=form5, bound_form_6=form6, q_budget=math.exp(log_budget),
                       deficit=deficit, log_q_budget=log_budget, log_deficit=log_deficit,
                       constants=const, d_tilted_q=d_q, d_tilted_w=d_w)


@dataclass(frozen=True)
class AchievabilityEvent:
    """Event {singular part} u {Lambda - E[Lambda] >= tau} and its exact masses."""

    rho: float
    beta: float
    tau: float
    delta: float
    q_mass: float
    w_complement_mass: float
    w_event_mass: float
    ac_product: float
    q_mass_bound: float
    w_complement_bound: float
    w_event_floor: float
    log_q_mass: float
    log_q_mass_bound: float
    log_w_event_mass: float
    log_w_event_floor: float
    constants: BerryEsseenConstants
    n_atoms: int

    @property
    def satisfies_q(self) -> bool:
        return self.log_q_mass <= self.log_q_mass_bound

    @property
    def satisfies_w(self) -> bool:
        return self.w_complement_mass <= self.w_complement_bound + 1e-12

    @property
    def satisfies_w_relative(self) -> bool:
        # same inequality written as W(E) >= floor, free of cancellation against ||w_ac||
        return self.log_w_event_mass >= self.log_w_event_floor - 1e-9


def lemma2_window(rho: float, const: BerryEsseenConstants, n: int):
    """(low, high) endpoints of the admissible beta range; low > high means empty."""
    delta = math.e * math.sqrt(2 * math.pi * math.e * const.a2) * const.hat_delta
    spread = rho * math.sqrt(const.a2 * n)
    scale = 9 * const.hat_delta / math.sqrt(n)
    return scale * math.exp(rho * delta - spread), scale * math.exp(spread)


def lemma2_achievability_event(rho: float, beta: float, instance: HtInstance,
                               atom_cap: int = DEFAULT_ATOM_CAP) -> AchievabilityEvent:
    const = berry_esseen_constants(rho, instance)
    n = instance.n
    lo, hi = lemma2_window(rho, const, n)
    if lo > hi:
        raise HypothesisError(
            f"beta window is empty at n={n}, rho={rho}: [{lo:.6g}, {hi:.6g}]", window=(lo, hi))
    if not lo * (1 - WINDOW_SLACK) <= beta <= hi * (1 + WINDOW_SLACK):
        raise HypothesisError(f"beta={beta!r} outside the window [{lo:.6g}, {hi:.6g}]",
                              window=(lo, hi))
    delta = math.e * math.sqrt(2 * math.pi * math.e * const.a2) * const.hat_delta
    tau = math.log(9 * const.hat_delta / (beta * math.sqrt(n))) / rho
    atoms = llr_atoms(rho, instance, atom_cap)
    centre = instance.tilted_llr_mean(rho)
    inside = atoms.lam - centre >= tau
    log_q_in = float(logsumexp(atoms.log_q[inside])) if inside.any() else -math.inf
    log_w_in = float(logsumexp(atoms.log_w[inside])) if inside.any() else -math.inf
    w_comp = float(atoms.p_w[~inside].sum())
    d_q, d_w, _ = instance.tilted_divergences(rho)
    ac = atoms.ac_product
    log_floor = ((1 - rho) * delta - 0.5 * math.log(2 * math.pi * const.a2)
                 + (rho - 1) / rho * math.log(beta / (9 * const.hat_delta))
                 - d_w - math.log(n) / (2 * rho))
    floor = math.exp(log_floor)
    log_q_bound = math.log(beta) - d_q
    return AchievabilityEvent(
        rho=float(rho), beta=float(beta), tau=tau, delta=delta, q_mass=math.exp(log_q_in),
        w_complement_mass=w_comp, w_event_mass=math.exp(log_w_in), ac_product=ac,
        q_mass_bound=math.exp(log_q_bound), w_complement_bound=ac - floor,
        w_event_floor=floor, log_q_mass=log_q_in, log_q_mass_bound=log_q_bound,
        log_w_event_mass=log_w_in, log_w_event_floor=log_floor,
        constants=const, n_atoms=len(atoms))


@dataclass(frozen=True)
class Theorem1Bound:
    rate: float
    rho_star: float
    exponent: float
    prefactor: float
    bound: float
    informative: bool
    constants: BerryEsseenConstants


def code_rate(n: int, M: int, L: int) -> float:
    if n <= 0 or M <= 0 or L <= 0:
        raise DomainError("n, M and L must be positive integers")
    return (math.log(M) - math.log(L)) / n


def _converse(channel, composition, converse):
    if converse is None:
        return StrongConverse(channel, composition.base)
    return converse


def theorem1_at_rate(channel: Channel, composition: Composition, rate: float,
                     converse: StrongConverse | None = None) -> Theorem1Bound:
    if rate <= 0:
        raise RegimeError(f"rate {rate:.12g} is not positive; the trivial bound 0 applies")
    sc = _converse(channel, composition, converse)
    res = sc(rate)
    if res.regime is not Regime.PARAMETRIC:
        target = "theorem2_bound" if res.regime is Regime.HIGH_RATE else "the trivial bound 0"
        raise RegimeError(
            f"rate {rate:.12g} is in regime {res.regime.value}; use {target}")
    rho = res.rho_star
    n = composition.n
    instance = HtInstance.from_composition(channel, composition, sc.solution(rho).q)
    const = berry_esseen_constants(rho, instance)
    prefactor = 2 * math.exp(rho) * (const.hat_delta / (rho - 1)) ** (1 / rho) * n ** (-1 / (2 * rho))
    bound = 1 - prefactor * math.exp(-n * res.exponent)
    return Theorem1Bound(rate=rate, rho_star=rho, exponent=res.exponent, prefactor=prefactor,
                         bound=bound, informative=bound > 0, constants=const)


def theorem1_bound(channel: Channel, composition: Composition, M: int, L: int,
                   converse: StrongConverse | None = None) -> Theorem1Bound:
    """Refined strong converse for (M, L) codes of composition ``composition``.

    Only defined strictly inside the parametric window; the raw value is
    returned with ``informative`` set when it is positive.
    """
    return theorem1_at_rate(channel, composition, code_rate(composition.n, M, L), converse)


def theorem2_at_rate(channel: Channel, composition: Composition, rate: float,
                     converse: StrongConverse | None = None) -> float:
    if rate <= 0:
        return 0.0
    res = _converse(channel, composition, converse)(rate)
    return float(-math.expm1(-composition.n * res.exponent))


def theorem2_bound(channel: Channel, composition: Composition, M: int, L: int,
                   converse: StrongConverse | None = None) -> float:
    """1 - exp(-n E_sc(R)) with R = ln(M/L)/n; valid at every rate."""
    return theorem2_at_rate(channel, composition, code_rate(composition.n, M, L), converse)
