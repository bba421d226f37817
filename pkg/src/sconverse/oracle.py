"""Exact ground truth: log-likelihood-ratio atoms, the Neyman-Pearson trade-off and
list-decoding error probabilities, all by exhaustive (type-class) enumeration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import CapacityError, DomainError, StructureError
from .instance import HtInstance
from .prob import Channel, Composition, safe_log

DEFAULT_ATOM_CAP = 10 ** 7
DEFAULT_OUTPUT_CAP = 10 ** 7


@dataclass(frozen=True, eq=False)
class LlrAtomDistribution:
    """Atoms of Lambda = sum_t ln(dw_t,ac/dq_t) on supp(Q), sorted by increasing lambda.

    ``p_w`` carries only the W-mass on supp(Q); the rest is ``singular_mass_w``.
    Log masses are kept alongside since long products underflow.
    """

    lam: np.ndarray
    p_w: np.ndarray
    p_q: np.ndarray
    p_tilted: np.ndarray
    singular_mass_w: float
    ac_product: float
    rho: float
    log_w: np.ndarray
    log_q: np.ndarray

    def __len__(self):
        return self.lam.size

    @property
    def atoms(self):
        return list(zip(self.lam.tolist(), self.p_w.tolist(), self.p_q.tolist(),
                        self.p_tilted.tolist()))

    def tilted_mean(self) -> float:
        s = self.p_tilted > 0
        return float(self.p_tilted[s] @ self.lam[s])


def _compositions(m: int, k: int) -> np.ndarray:
    """All nonnegative integer vectors of length k summing to m."""
    if k == 1:
        return np.array([[m]])
    rows = []
    for bars in itertools.combinations(range(m + k - 1), k - 1):
        prev, row = -1, []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(m + k - 1 - prev - 1)
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def _weighted(counts: np.ndarray, logs: np.ndarray) -> np.ndarray:
    # sum_i c_i * logs_i with 0 * (-inf) = 0
    terms = np.where(counts > 0, counts * np.where(np.isfinite(logs), logs, 0.0), 0.0)
    hit_neg_inf = ((counts > 0) & np.isneginf(logs)).any(axis=1)
    out = terms.sum(axis=1)
    out[hit_neg_inf] = -np.inf
    return out


def _letter_group(letter, cap):
    s = letter.q > 0
    w, q = letter.w[s], letter.q[s]
    lam = safe_log(w) - np.log(q)
    k, m = w.size, letter.count
    n_classes = comb(m + k - 1, k - 1)
    if n_classes > cap:
        raise CapacityError(f"{n_classes} type classes exceed the atom cap {cap}")
    C = _compositions(m, k)
    coef = gammaln(m + 1) - gammaln(C + 1).sum(axis=1)
    return (_weighted(C, lam[None, :]),
            coef + _weighted(C, safe_log(w)[None, :]),
            coef + _weighted(C, np.log(q)[None, :]))


def llr_atoms(rho: float, instance: HtInstance, atom_cap: int = DEFAULT_ATOM_CAP) -> LlrAtomDistribution:
    """Exact joint atom masses of Lambda under W, Q and the order-rho tilted measure.

    Identical letters are enumerated by type class; distinct groups are
    combined by exact convolution. The tilted masses come from
    p_tilted proportional to p_q * exp(rho * lambda).
    """
    if not rho > 0:
        raise DomainError("tilting order must be positive")
    lam = np.zeros(1)
    log_w = np.zeros(1)
    log_q = np.zeros(1)
    for letter in instance.letters:
        l2, w2, q2 = _letter_group(letter, atom_cap)
        if lam.size * l2.size > atom_cap:
            raise CapacityError(f"{lam.size * l2.size} atoms exceed the atom cap {atom_cap}")
        lam = (lam[:, None] + l2[None, :]).ravel()
        log_w = (log_w[:, None] + w2[None, :]).ravel()
        log_q = (log_q[:, None] + q2[None, :]).ravel()
    order = np.argsort(lam, kind="stable")
    lam, log_w, log_q = lam[order], log_w[order], log_q[order]
    # merge bitwise-equal atoms so lambda is strictly increasing
    starts = np.flatnonzero(np.r_[True, lam[1:] != lam[:-1]])
    if starts.size < lam.size:
        log_w = np.array([logsumexp(g) for g in np.split(log_w, starts[1:])])
        log_q = np.array([logsumexp(g) for g in np.split(log_q, starts[1:])])
        lam = lam[starts]
    with np.errstate(invalid="ignore"):
        log_t = np.where(np.isneginf(lam), -np.inf, log_q + rho * lam)
    log_t = log_t - logsumexp(log_t)
    log_ac = instance.log_ac_product()
    # totals are known exactly; remove the drift accumulated by gammaln rounding
    log_q = log_q - logsumexp(log_q)
    if np.isfinite(log_ac):
        log_w = log_w - logsumexp(log_w) + log_ac
    return LlrAtomDistribution(
        lam=lam,
        p_w=np.exp(log_w),
        p_q=np.exp(log_q),
        p_tilted=np.exp(log_t),
        singular_mass_w=float(-np.expm1(log_ac)),
        ac_product=float(np.exp(log_ac)),
        rho=float(rho),
        log_w=log_w,
        log_q=log_q,
    )


@dataclass(frozen=True)
class NeymanPearsonResult:
    """Optimal test: accept the singular region, all atoms with lambda > threshold,
    and the atom at ``threshold`` with probability ``randomization``."""

    min_w_complement: float
    threshold: float
    randomization: float
    q_mass: float
    w_mass_in_event: float
    log_q_mass: float
    log_w_mass_in_event: float


def np_tradeoff_exact(instance, q_budget: float, atom_cap: int = DEFAULT_ATOM_CAP) -> NeymanPearsonResult:
    """min W(E^c) over (randomized) events E with Q(E) <= q_budget."""
    if not 0 <= q_budget <= 1:
        raise DomainError(f"Q budget must lie in [0, 1], got {q_budget!r}")
    atoms = instance if isinstance(instance, LlrAtomDistribution) else llr_atoms(1.0, instance, atom_cap)
    return np_tradeoff_curve(atoms, [q_budget])[0]


def np_tradeoff_curve(atoms: LlrAtomDistribution, budgets=None, log_budgets=None) -> list:
    """Neyman-Pearson optimum at each Q budget; ``log_budgets`` avoids underflow."""
    if log_budgets is None:
        with np.errstate(divide="ignore"):
            log_budgets = np.log(np.asarray(budgets, dtype=float))
    lam = atoms.lam[::-1]
    lw = atoms.log_w[::-1]
    lq = atoms.log_q[::-1]
    cum_lq = np.logaddexp.accumulate(lq)
    cum_lw = np.logaddexp.accumulate(lw)
    pw = np.exp(lw)
    # W-mass of atoms strictly after index i (descending order), summed from the tail
    tail_w = np.r_[np.cumsum(pw[::-1])[::-1][1:], 0.0]
    out = []
    for lb in np.atleast_1d(np.asarray(log_budgets, dtype=float)):
        j = int(np.searchsorted(cum_lq, lb, side="right"))
        if j >= lam.size:
            out.append(NeymanPearsonResult(0.0, float(lam[-1]), 1.0, float(np.exp(cum_lq[-1])),
                                           float(np.exp(cum_lw[-1])), float(cum_lq[-1]),
                                           float(cum_lw[-1])))
            continue
        l_spent = cum_lq[j - 1] if j > 0 else -np.inf
        frac = float(np.exp(lb - lq[j]) - np.exp(l_spent - lq[j])) if np.isfinite(lq[j]) else 1.0
        frac = min(max(frac, 0.0), 1.0)
        missed = tail_w[j] + (1 - frac) * pw[j]
        with np.errstate(divide="ignore"):
            l_frac = np.log(frac)
        l_taken = np.logaddexp(cum_lw[j - 1] if j > 0 else -np.inf, l_frac + lw[j])
        l_q = np.logaddexp(l_spent, l_frac + lq[j])
        out.append(NeymanPearsonResult(float(missed), float(lam[j]), frac, float(np.exp(l_q)),
                                       float(np.exp(l_taken)), float(l_q), float(l_taken)))
    return out


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """Constant composition (M, L) code: codewords as input-symbol index tuples."""

    codewords: tuple
    L: int
    composition: Composition

    def __init__(self, codewords, L: int, input_alphabet):
        alphabet = tuple(str(a) for a in input_alphabet)
        index = {a: i for i, a in enumerate(alphabet)}
        words = []
        for cw in codewords:
            try:
                words.append(tuple(int(index[str(s)]) for s in cw))
            except KeyError as exc:
                raise StructureError(f"codeword {cw!r} uses unknown symbol {exc}") from None
        if not words:
            raise StructureError("code needs at least one codeword")
        n = len(words[0])
        if n == 0 or any(len(w) != n for w in words):
            raise StructureError("codewords must share a positive length")
        if L < 1:
            raise StructureError("list size must be positive")
        counts = np.bincount(words[0], minlength=len(alphabet))
        for w in words[1:]:
            if not np.array_equal(np.bincount(w, minlength=len(alphabet)), counts):
                raise StructureError(f"codeword {w} does not have composition {counts.tolist()}")
        object.__setattr__(self, "codewords", tuple(words))
        object.__setattr__(self, "L", int(L))
        object.__setattr__(self, "composition", Composition(counts, alphabet))

    @property
    def M(self) -> int:
        return len(self.codewords)

    @property
    def n(self) -> int:
        return len(self.codewords[0])


def exact_list_decoding_error(channel: Channel, code: CodeSpec,
                              output_cap: int = DEFAULT_OUTPUT_CAP, chunk: int = 1 << 16) -> float:
    """Average error of the optimal list-L decoder, by full output enumeration.

    For each output the L most likely messages are listed, ties going to the
    lower message index.
    """
    if code.composition.alphabet != channel.input_alphabet:
        raise StructureError("code alphabet does not match channel inputs")
    m = channel.matrix.shape[1]
    n, M, L = code.n, code.M, code.L
    total = m ** n
    if total > output_cap:
        raise CapacityError(f"{total} output sequences exceed the cap {output_cap}")
    if L >= M:
        return 0.0
    logW = safe_log(channel.matrix)
    C = np.array(code.codewords)
    powers = m ** np.arange(n - 1, -1, -1)
    missed = 0.0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        ys = (idx[:, None] // powers[None, :]) % m
        ll = np.zeros((M, idx.size))
        for t in range(n):
            ll += logW[C[:, t][:, None], ys[:, t][None, :]]
        order = np.argsort(-ll, axis=0, kind="stable")
        rejected = np.take_along_axis(ll, order[L:], axis=0)
        missed += np.exp(rejected).sum()
    return float(missed / M)
