"""Augustin information and mean for a channel and an input distribution.

The mean q is the unique fixed point of q -> sum_x P(x) W_alpha^q(x). Orders
below one use the damped fixed-point iteration directly; orders above one
minimize C_alpha(W || softmax(z) | P) over log-weights z by damped Newton,
whose gradient is exactly q - map(q). Both stop on the same L1 residual.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, softmax

from .errors import ConvergenceError, DomainError
from .prob import (
    Channel,
    Distribution,
    check_input,
    check_output,
    conditional_div,
    conditional_kl,
    mutual_information,
    renyi_div,
    safe_log,
    tilt_rows,
)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10000
CERTIFICATE_SLACK = -1e-8
PROBE_WEIGHTS = (0.5, 0.1, 0.01)


@dataclass(frozen=True, eq=False)
class AugustinSolution:
    alpha: float
    mean: Distribution
    info: float
    iterations: int
    fixed_point_residual: float
    certificate_margin: float
    upper_certificate_margin: float
    method: str

    @property
    def q(self) -> np.ndarray:
        return self.mean.probs


class _Restricted:
    """Channel rows with P(x) > 0, columns restricted to the union of their supports."""

    def __init__(self, W: np.ndarray, p: np.ndarray):
        self.rows = np.flatnonzero(p > 0)
        self.p = p[self.rows]
        sub = W[self.rows]
        self.cols = np.flatnonzero((sub > 0).any(axis=0))
        self.W = sub[:, self.cols]
        self.logW = safe_log(self.W)
        self.mask = self.W > 0
        self.m = W.shape[1]

    def embed(self, q_sub: np.ndarray) -> np.ndarray:
        q = np.zeros(self.m)
        q[self.cols] = q_sub
        return q


def _check_alpha(alpha):
    if not (alpha > 0) or not np.isfinite(alpha):
        raise DomainError(f"order must be a positive finite real, got {alpha!r}")


def fixed_point_map(alpha: float, W: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    keep = p > 0
    return p[keep] @ tilt_rows(alpha, W[keep], q)


def augustin_fixed_point_map(alpha: float, channel: Channel, p: Distribution,
                             q: Distribution) -> Distribution:
    """One application of q -> sum_x P(x) W_alpha^q(x)."""
    _check_alpha(alpha)
    check_input(channel, p)
    check_output(channel, q)
    return Distribution(fixed_point_map(alpha, channel.matrix, p.probs, q.probs),
                        channel.output_alphabet)


def _residual(alpha, W, p, q):
    return float(np.abs(fixed_point_map(alpha, W, p, q) - q).sum())


def _damped_iteration(alpha, R: _Restricted, tol, max_iter):
    q = R.p @ R.W
    lam = 1.0
    prev = np.inf
    for it in range(max_iter + 1):
        mapped = R.p @ tilt_rows(alpha, R.W, q)
        res = float(np.abs(mapped - q).sum())
        if res <= tol:
            return q, it, res
        if res > prev:
            lam = max(lam / 2, 1 / 16)
        prev = res
        q = (1 - lam) * q + lam * mapped
        q /= q.sum()
    raise ConvergenceError(
        f"fixed-point iteration at order {alpha} stopped with residual {res:.3e}",
        residual=res, iterations=max_iter)


def _newton(alpha, R: _Restricted, tol, max_iter):
    k = R.W.shape[1]
    z = np.log(R.p @ R.W)

    def evaluate(z):
        T = np.where(R.mask, alpha * R.logW + (1 - alpha) * z, -np.inf)
        lse = logsumexp(T, axis=1)
        f = logsumexp(z) + R.p @ lse / (alpha - 1)
        return f, softmax(z), np.exp(T - lse[:, None])

    f, Q, Wa = evaluate(z)
    ones = np.ones((k, k)) / k
    res = np.inf
    for it in range(max_iter + 1):
        Wa /= Wa.sum(axis=1, keepdims=True)
        g = Q - R.p @ Wa
        res = float(np.abs(g).sum())
        if res <= tol:
            return Q, it, res
        if it == max_iter:
            break
        mixed = R.p @ Wa
        H = np.diag(Q) - np.outer(Q, Q) + (alpha - 1) * (np.diag(mixed) - (Wa.T * R.p) @ Wa)
        try:
            d = np.linalg.solve(H + ones, -g)
        except np.linalg.LinAlgError:
            d = -g
        gd = float(g @ d)
        if gd >= 0:
            d, gd = -g, -float(g @ g)
        t = 1.0
        while True:
            fn, Qn, Wan = evaluate(z + t * d)
            if fn <= f + 1e-4 * t * gd + 4e-16 * abs(f) or t < 1e-12:
                break
            # near the optimum the decrease in f drops below its rounding; fall back on the gradient
            g_n = Qn - R.p @ (Wan / Wan.sum(axis=1, keepdims=True))
            if res < 1e-8 and np.abs(g_n).sum() < res:
                break
            t /= 2
        z = z + t * d
        z -= z.max()
        f, Q, Wa = fn, Qn, Wan
    raise ConvergenceError(
        f"Newton solve at order {alpha} stopped with residual {res:.3e}",
        residual=res, iterations=max_iter)


def _probes(q: np.ndarray, n_probes: int, rng: np.random.Generator):
    m = q.size
    yield np.full(m, 1.0 / m)
    for i in range(n_probes - 1):
        weight = PROBE_WEIGHTS[i % len(PROBE_WEIGHTS)]
        noise = rng.dirichlet(np.ones(m))
        yield (1 - weight) * q + weight * noise


def sandwich_margins(alpha, W, p, q, info, probes):
    """Minimum slack on each side of D_{1^a}(q||Q) <= C_a(W||Q|P) - I_a <= D_{1va}(q||Q)."""
    lo_order, hi_order = min(1.0, alpha), max(1.0, alpha)
    lower = upper = np.inf
    for Q in probes:
        gap = conditional_div(alpha, W, Q, p) - info
        lower = min(lower, gap - renyi_div(lo_order, q, Q))
        upper = min(upper, renyi_div(hi_order, q, Q) - gap)
    return float(lower), float(upper)


def solve_augustin(alpha: float, channel: Channel, p: Distribution,
                   tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                   n_probes: int = 10, seed: int = 0, certify: bool = True) -> AugustinSolution:
    """Augustin mean and information of order ``alpha``.

    Raises ConvergenceError if the residual tolerance is not met or, with
    ``certify``, if the optimality sandwich fails at any probe measure.
    """
    _check_alpha(alpha)
    check_input(channel, p)
    W, pv = channel.matrix, p.probs
    R = _Restricted(W, pv)
    if alpha == 1:
        q_sub, iterations, method = R.p @ R.W, 0, "closed-form"
    elif alpha < 1:
        q_sub, iterations, _ = _damped_iteration(alpha, R, tol, max_iter)
        method = "fixed-point"
    else:
        q_sub, iterations, _ = _newton(alpha, R, tol, max_iter)
        method = "newton"
    q = R.embed(q_sub / q_sub.sum())
    residual = _residual(alpha, W, pv, q)
    info = conditional_div(alpha, W, q, pv)
    if n_probes > 0:
        rng = np.random.default_rng(seed)
        lower, upper = sandwich_margins(alpha, W, pv, q, info, _probes(q, n_probes, rng))
    else:
        lower = upper = np.nan
    if certify and n_probes > 0 and min(lower, upper) < CERTIFICATE_SLACK:
        raise ConvergenceError(
            f"order {alpha}: optimality certificate failed (margins {lower:.3e}, {upper:.3e})",
            residual=residual, iterations=iterations)
    return AugustinSolution(
        alpha=float(alpha),
        mean=Distribution(q, channel.output_alphabet),
        info=info,
        iterations=iterations,
        fixed_point_residual=residual,
        certificate_margin=lower,
        upper_certificate_margin=upper,
        method=method,
    )


def tilted_rows_at_mean(sol: AugustinSolution, channel: Channel, p: Distribution) -> np.ndarray:
    """Tilted channel rows W_alpha^q(x) for x in supp(P); other rows are NaN."""
    out = np.full(channel.matrix.shape, np.nan)
    keep = p.probs > 0
    out[keep] = tilt_rows(sol.alpha, channel.matrix[keep], sol.q)
    return out


def _solve(alpha, channel, p, solution, **kw):
    if solution is not None:
        return solution
    kw.setdefault("n_probes", 0)
    return solve_augustin(alpha, channel, p, **kw)


def augustin_info_derivative(alpha: float, channel: Channel, p: Distribution,
                             solution: AugustinSolution | None = None, **kw) -> float:
    """d/d(alpha) of the Augustin information, via the tilted channel."""
    sol = _solve(alpha, channel, p, solution, **kw)
    W, pv = channel.matrix, p.probs
    if alpha == 1:
        total = 0.0
        for x in np.flatnonzero(pv > 0):
            s = W[x] > 0
            llr = np.log(W[x, s]) - np.log(sol.q[s])
            mean = W[x, s] @ llr
            total += pv[x] / 2 * (W[x, s] @ (llr - mean) ** 2)
        return float(total)
    V = tilted_rows_at_mean(sol, channel, p)
    return conditional_kl(V, W, pv) / (alpha - 1) ** 2


def i1_of_tilted(rho: float, channel: Channel, p: Distribution,
                 solution: AugustinSolution | None = None, **kw) -> float:
    """C_1(W_rho^q || q | P) at the order-rho Augustin mean q.

    Equals the mutual information of the tilted channel; increasing in rho
    (or constant), so it serves as the rate coordinate of the exponent curve.
    """
    _check_alpha(rho)
    sol = _solve(rho, channel, p, solution, **kw)
    V = tilted_rows_at_mean(sol, channel, p)
    return conditional_kl(V, sol.q, p.probs)


def kl_decomposition(sol: AugustinSolution, channel: Channel, p: Distribution):
    """Return (C_1(W_a||W|P), I_1(P; W_a)) for the tilted channel W_a at the mean."""
    V = tilted_rows_at_mean(sol, channel, p)
    pv = p.probs
    keep = pv > 0
    Vk = np.where(keep[:, None], V, 0.0)
    return conditional_kl(V, channel.matrix, pv), mutual_information(pv, Vk)
