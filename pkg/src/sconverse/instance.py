"""Product-measure hypothesis testing instances: pairs (w_t, q_t) with multiplicities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .prob import Channel, Composition, Distribution, kl_div, safe_log, tilt


@dataclass(frozen=True, eq=False)
class Letter:
    w: np.ndarray
    q: np.ndarray
    count: int = 1

    @property
    def ac_mass(self) -> float:
        return float(self.w[self.q > 0].sum())

    def tilted(self, rho: float) -> np.ndarray:
        return tilt(rho, self.w, self.q)[0]

    def llr(self) -> np.ndarray:
        """ln(dw_ac/dq) on supp(q); -inf where w vanishes, nan off supp(q)."""
        out = np.full(self.w.shape, np.nan)
        s = self.q > 0
        out[s] = safe_log(self.w[s]) - np.log(self.q[s])
        return out


def _vector(x):
    if isinstance(x, Distribution):
        return x.probs
    arr = np.asarray(Distribution(x).probs)
    return arr


class HtInstance:
    """W = (x) w_t against Q = (x) q_t, identical letters run-length encoded.

    ``letters`` is an iterable of ``(w, q)`` or ``(w, q, count)``; alphabets
    may differ between letters but ``w`` and ``q`` of one letter must agree.
    """

    def __init__(self, letters):
        built = []
        for item in letters:
            if isinstance(item, Letter):
                built.append(item)
                continue
            w, q, *rest = item
            count = int(rest[0]) if rest else 1
            if isinstance(w, Distribution) and isinstance(q, Distribution) \
                    and w.alphabet != q.alphabet:
                raise StructureError(f"letter alphabets differ: {w.alphabet} vs {q.alphabet}")
            wv, qv = _vector(w), _vector(q)
            if wv.shape != qv.shape:
                raise StructureError("letter measures have different alphabet sizes")
            if count < 1:
                raise StructureError("letter multiplicity must be positive")
            wv = np.array(wv)
            qv = np.array(qv)
            wv.setflags(write=False)
            qv.setflags(write=False)
            built.append(Letter(wv, qv, count))
        if not built:
            raise StructureError("instance needs at least one letter")
        self.letters = tuple(built)

    @classmethod
    def iid(cls, w, q, n: int) -> "HtInstance":
        return cls([(w, q, n)])

    @classmethod
    def from_composition(cls, channel: Channel, composition: Composition, q) -> "HtInstance":
        """Letters (W(x), q) repeated n P(x) times; the codeword order is irrelevant."""
        qv = _vector(q)
        return cls([(channel.matrix[x], qv, c)
                    for x, c in enumerate(composition.counts) if c > 0])

    @property
    def n(self) -> int:
        return sum(l.count for l in self.letters)

    @property
    def counts(self) -> np.ndarray:
        return np.array([l.count for l in self.letters])

    def expanded(self):
        """Letters one per position (for brute-force checks on small n)."""
        for l in self.letters:
            for _ in range(l.count):
                yield l.w, l.q

    def log_ac_product(self) -> float:
        total = 0.0
        for l in self.letters:
            m = l.ac_mass
            if m == 0:
                return -np.inf
            total += l.count * np.log(m)
        return float(total)

    def ac_product(self) -> float:
        return float(np.exp(self.log_ac_product()))

    def all_absolutely_continuous(self) -> bool:
        return all(not np.any((l.w > 0) & (l.q == 0)) for l in self.letters)

    def tilted_divergences(self, rho: float):
        """(D(w_rho || Q), D(w_rho || W), D(w_rho || W_1)) for the product tilted measure."""
        d_q = d_w = d_w1 = 0.0
        for l in self.letters:
            v, mass = tilt(rho, l.w, l.q)
            w1 = np.where(l.q > 0, l.w, 0.0) / mass
            d_q += l.count * kl_div(v, l.q)
            d_w += l.count * kl_div(v, l.w)
            d_w1 += l.count * kl_div(v, w1)
        return d_q, d_w, d_w1

    def llr_moments(self, rho: float):
        """Per-letter (mean, variance, third absolute central moment) of ln dw_ac/dq under the tilt."""
        out = []
        for l in self.letters:
            v = l.tilted(rho)
            s = v > 0
            lam = np.log(l.w[s]) - np.log(l.q[s])
            mean = float(v[s] @ lam)
            dev = lam - mean
            out.append((mean, float(v[s] @ dev ** 2), float(v[s] @ np.abs(dev) ** 3)))
        return out

    def tilted_llr_mean(self, rho: float) -> float:
        return float(sum(l.count * m for l, (m, _, _) in zip(self.letters, self.llr_moments(rho))))

    def __repr__(self):
        return f"HtInstance(n={self.n}, groups={len(self.letters)})"
