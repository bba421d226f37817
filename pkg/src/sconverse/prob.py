"""Finite distributions, channels, compositions and the Renyi/tilting primitives.

All divergences are in nats. Zero atoms are carried as ``-inf`` in the log
domain; support means "strictly positive entry", with no epsilon.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DivergenceInfiniteError,
    DomainError,
    StructureError,
    UndefinedTiltError,
)

INGEST_TOL = 1e-9


def _as_prob_vector(values, what="distribution") -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise StructureError(f"{what}: expected a nonempty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise StructureError(f"{what}: non-finite entry")
    if np.any(arr < 0):
        raise StructureError(f"{what}: negative entry")
    total = arr.sum()
    if abs(total - 1.0) > INGEST_TOL:
        raise StructureError(f"{what}: entries sum to {float(total)!r}, not 1")
    arr = arr / total
    arr.setflags(write=False)
    return arr


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _labels(alphabet, size=None) -> tuple:
    labels = tuple(str(a) for a in alphabet)
    if len(set(labels)) != len(labels):
        raise StructureError(f"duplicate symbols in alphabet {labels}")
    if size is not None and len(labels) != size:
        raise StructureError(f"alphabet has {len(labels)} symbols but {size} values were given")
    return labels


def default_alphabet(size: int) -> tuple:
    return tuple(str(i) for i in range(size))


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over an ordered alphabet of string labels."""

    alphabet: tuple
    probs: np.ndarray

    def __init__(self, probs, alphabet=None):
        arr = _as_prob_vector(probs)
        labels = default_alphabet(arr.size) if alphabet is None else _labels(alphabet, arr.size)
        object.__setattr__(self, "alphabet", labels)
        object.__setattr__(self, "probs", arr)

    @property
    def support(self) -> np.ndarray:
        return self.probs > 0

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"Distribution({self.probs.tolist()}, alphabet={list(self.alphabet)})"

    @classmethod
    def uniform(cls, size_or_alphabet) -> "Distribution":
        if isinstance(size_or_alphabet, int):
            alphabet = default_alphabet(size_or_alphabet)
        else:
            alphabet = tuple(size_or_alphabet)
        k = len(alphabet)
        return cls(np.full(k, 1.0 / k), alphabet)

    @classmethod
    def point_mass(cls, index: int, alphabet) -> "Distribution":
        if isinstance(alphabet, int):
            alphabet = default_alphabet(alphabet)
        probs = np.zeros(len(alphabet))
        probs[index] = 1.0
        return cls(probs, alphabet)


@dataclass(frozen=True, eq=False)
class SubProbability:
    """Nonnegative measure of total mass at most one (e.g. an absolutely continuous part)."""

    alphabet: tuple
    masses: np.ndarray
    total: float

    def __init__(self, masses, alphabet=None):
        arr = np.array(masses, dtype=float)
        if arr.ndim != 1 or np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise StructureError("sub-probability masses must be finite and nonnegative")
        total = float(arr.sum())
        if total > 1.0 + INGEST_TOL:
            raise StructureError(f"sub-probability total {total!r} exceeds 1")
        arr.setflags(write=False)
        labels = default_alphabet(arr.size) if alphabet is None else _labels(alphabet, arr.size)
        object.__setattr__(self, "alphabet", labels)
        object.__setattr__(self, "masses", arr)
        object.__setattr__(self, "total", total)


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix from an input alphabet to an output alphabet."""

    input_alphabet: tuple
    output_alphabet: tuple
    matrix: np.ndarray

    def __init__(self, matrix, input_alphabet=None, output_alphabet=None):
        mat = np.array(matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] == 0 or mat.shape[1] == 0:
            raise StructureError("channel matrix must be a nonempty 2-d array")
        rows = [_as_prob_vector(r, what=f"channel row {i}") for i, r in enumerate(mat)]
        mat = np.vstack(rows)
        mat.setflags(write=False)
        k, m = mat.shape
        ins = default_alphabet(k) if input_alphabet is None else _labels(input_alphabet, k)
        outs = default_alphabet(m) if output_alphabet is None else _labels(output_alphabet, m)
        object.__setattr__(self, "input_alphabet", ins)
        object.__setattr__(self, "output_alphabet", outs)
        object.__setattr__(self, "matrix", mat)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def rows(self) -> tuple:
        return tuple(Distribution(r, self.output_alphabet) for r in self.matrix)

    def row(self, x) -> Distribution:
        idx = x if isinstance(x, (int, np.integer)) else self.input_alphabet.index(str(x))
        return Distribution(self.matrix[idx], self.output_alphabet)

    def output_distribution(self, p: Distribution) -> Distribution:
        check_input(self, p)
        return Distribution(p.probs @ self.matrix, self.output_alphabet)

    def __repr__(self):
        return f"Channel({self.matrix.tolist()})"


@dataclass(frozen=True, eq=False)
class Composition:
    """Empirical distribution of a length-n input sequence: integer counts and counts/n."""

    base: Distribution
    n: int
    counts: tuple

    def __init__(self, counts, alphabet=None):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise StructureError("composition counts must be nonnegative")
        n = sum(counts)
        if n <= 0:
            raise StructureError("composition blocklength must be positive")
        base = Distribution(np.array(counts, dtype=float) / n, alphabet)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_distribution(cls, p: Distribution, n: int) -> "Composition":
        """Scale ``p`` by ``n``; every ``n * p(x)`` must be an integer (within 1e-9)."""
        if n <= 0:
            raise DomainError("blocklength must be positive")
        counts = []
        for sym, prob in zip(p.alphabet, p.probs):
            scaled = n * prob
            c = round(scaled)
            if abs(scaled - c) > INGEST_TOL * max(1, n):
                raise StructureError(
                    f"n*P({sym}) = {float(scaled)!r} is not an integer for n = {n}"
                )
            counts.append(c)
        return cls(counts, p.alphabet)

    @property
    def alphabet(self):
        return self.base.alphabet

    @property
    def probs(self):
        return self.base.probs

    def fractions(self):
        return tuple(Fraction(c, self.n) for c in self.counts)


def bsc(eps: float) -> Channel:
    return Channel([[1 - eps, eps], [eps, 1 - eps]])


def noiseless(k: int = 2) -> Channel:
    return Channel(np.eye(k))


def check_same_alphabet(a, b):
    if a.alphabet != b.alphabet:
        raise StructureError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")


def check_input(channel: Channel, p: Distribution):
    if p.alphabet != channel.input_alphabet:
        raise StructureError(
            f"input distribution alphabet {p.alphabet} does not match channel inputs "
            f"{channel.input_alphabet}"
        )


def check_output(channel: Channel, q: Distribution):
    if q.alphabet != channel.output_alphabet:
        raise StructureError(
            f"output measure alphabet {q.alphabet} does not match channel outputs "
            f"{channel.output_alphabet}"
        )


def _check_alpha(alpha):
    if not (alpha > 0) or not np.isfinite(alpha):
        raise DomainError(f"order must be a positive finite real, got {alpha!r}")


def safe_log(x) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(x)


# ---------------------------------------------------------------------------
# array kernels (no validation; used in inner loops)
# ---------------------------------------------------------------------------

def kl_div(v: np.ndarray, w: np.ndarray) -> float:
    """KL divergence D(v || w) for arrays; +inf off absolute continuity."""
    sv = v > 0
    if np.any(sv & ~(w > 0)):
        return np.inf
    return float(np.sum(v[sv] * (np.log(v[sv]) - np.log(w[sv]))))


def renyi_div(alpha: float, w: np.ndarray, q: np.ndarray) -> float:
    if alpha == 1:
        return kl_div(w, q)
    sw = w > 0
    sq = q > 0
    if alpha > 1 and np.any(sw & ~sq):
        return np.inf
    common = sw & sq
    if not common.any():
        return np.inf
    terms = alpha * np.log(w[common]) + (1 - alpha) * np.log(q[common])
    return float(logsumexp(terms) / (alpha - 1))


def tilt(alpha: float, w: np.ndarray, q: np.ndarray):
    """Order-alpha tilt of ``w`` against ``q``; returns (tilted, ac_mass)."""
    ac = np.where(q > 0, w, 0.0)
    mass = ac.sum()
    if mass <= 0:
        raise UndefinedTiltError("absolutely continuous component has zero mass")
    w1 = ac / mass
    if alpha == 1:
        return w1, float(mass)
    s = w1 > 0
    logt = alpha * np.log(w1[s]) + (1 - alpha) * np.log(q[s])
    norm = logsumexp(logt)
    if not np.isfinite(norm):
        raise DivergenceInfiniteError("order-alpha divergence of the normalized AC part is infinite")
    out = np.zeros_like(w1)
    out[s] = np.exp(logt - norm)
    out /= out.sum()
    return out, float(mass)


def tilt_rows(alpha: float, W: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Tilt every row of ``W`` against the common measure ``q`` (vectorized)."""
    sq = q > 0
    ac = np.where(sq, W, 0.0)
    mass = ac.sum(axis=1)
    if np.any(mass <= 0):
        bad = int(np.flatnonzero(mass <= 0)[0])
        raise UndefinedTiltError(f"row {bad}: absolutely continuous component has zero mass")
    w1 = ac / mass[:, None]
    if alpha == 1:
        return w1
    s = w1 > 0
    logt = np.full(W.shape, -np.inf)
    logq = safe_log(q)
    logt[s] = alpha * np.log(w1[s]) + ((1 - alpha) * np.broadcast_to(logq, W.shape))[s]
    norm = logsumexp(logt, axis=1, keepdims=True)
    out = np.exp(logt - norm)
    return out / out.sum(axis=1, keepdims=True)


def conditional_div(alpha: float, W: np.ndarray, q: np.ndarray, p: np.ndarray) -> float:
    total = 0.0
    for x in np.flatnonzero(p > 0):
        d = renyi_div(alpha, W[x], q)
        if d == np.inf:
            return np.inf
        total += p[x] * d
    return float(total)


def conditional_kl(V: np.ndarray, W: np.ndarray, p: np.ndarray) -> float:
    """C_1(V || W | p) where ``W`` is either a channel matrix or a single output measure."""
    if W.ndim == 1:
        W = np.broadcast_to(W, V.shape)
    total = 0.0
    for x in np.flatnonzero(p > 0):
        d = kl_div(V[x], W[x])
        if d == np.inf:
            return np.inf
        total += p[x] * d
    return float(total)


def mutual_information(p: np.ndarray, V: np.ndarray) -> float:
    """I_1(p; V) computed against the output marginal of ``V``."""
    return conditional_kl(V, p @ V, p)


# ---------------------------------------------------------------------------
# public operations on validated types
# ---------------------------------------------------------------------------

def renyi_divergence(alpha: float, w: Distribution, q: Distribution) -> float:
    """Order-``alpha`` Renyi divergence D_alpha(w || q) in nats (may be +inf)."""
    _check_alpha(alpha)
    check_same_alphabet(w, q)
    return renyi_div(alpha, w.probs, q.probs)


def kl_divergence(w: Distribution, q: Distribution) -> float:
    return renyi_divergence(1.0, w, q)


def conditional_renyi_divergence(alpha: float, channel: Channel, q: Distribution,
                                 p: Distribution) -> float:
    """sum_x p(x) D_alpha(W(x) || q)."""
    _check_alpha(alpha)
    check_input(channel, p)
    check_output(channel, q)
    return conditional_div(alpha, channel.matrix, q.probs, p.probs)


def absolutely_continuous_part(w: Distribution, q: Distribution) -> SubProbability:
    check_same_alphabet(w, q)
    return SubProbability(np.where(q.probs > 0, w.probs, 0.0), w.alphabet)


def tilted_measure(alpha: float, w: Distribution, q: Distribution):
    """Tilted probability measure of ``w`` toward ``q`` and the AC mass ``||w_ac||``.

    Uses the normalized absolutely continuous part of ``w`` in place of ``w``,
    so the tilt is defined even when ``w`` puts mass off the support of ``q``.
    """
    _check_alpha(alpha)
    check_same_alphabet(w, q)
    tilted, mass = tilt(alpha, w.probs, q.probs)
    return Distribution(tilted, w.alphabet), mass


def tilted_channel(alpha: float, channel: Channel, q: Distribution) -> Channel:
    _check_alpha(alpha)
    check_output(channel, q)
    rows = []
    for sym, row in zip(channel.input_alphabet, channel.matrix):
        try:
            rows.append(tilt(alpha, row, q.probs)[0])
        except (UndefinedTiltError, DivergenceInfiniteError) as exc:
            raise type(exc)(f"input symbol {sym!r}: {exc}") from exc
    return Channel(rows, channel.input_alphabet, channel.output_alphabet)


def total_variation(a, b) -> float:
    a = a.probs if isinstance(a, Distribution) else np.asarray(a)
    b = b.probs if isinstance(b, Distribution) else np.asarray(b)
    return float(0.5 * np.abs(a - b).sum())


def product_log_likelihood_ratio(ws: Sequence[np.ndarray], qs: Sequence[np.ndarray],
                                 ys: Sequence[int]) -> float:
    """ln d(w_1 x ... x w_n)/d(q_1 x ... x q_n) at the sequence ``ys``, summed letterwise."""
    total = 0.0
    for w, q, y in zip(ws, qs, ys):
        total += safe_log(w[y]) - safe_log(q[y])
    return float(total)
