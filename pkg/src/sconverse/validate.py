"""Oracle-versus-bound sweeps: converse dominance, achievability sandwich and
code-level soundness. Each suite returns a JSON-ready report of margins.
"""
from __future__ import annotations

import math
from math import comb

import numpy as np

from .bounds import (
    berry_esseen_constants,
    lemma1_converse_bound,
    lemma2_achievability_event,
    lemma2_window,
    theorem1_at_rate,
    theorem2_at_rate,
)
from .errors import CapacityError, DegenerateVarianceError, HypothesisError, RegimeError
from .instance import HtInstance
from .oracle import CodeSpec, exact_list_decoding_error, llr_atoms, np_tradeoff_curve
from .prob import Channel, Composition, bsc
from .sce import StrongConverse

MARGIN_TOL = 1e-12
LOG_TOL = 1e-9
SUITES = ("ht-converse", "ht-achievability", "code")


def _binary(rng, zero_prob=0.0):
    v = rng.dirichlet([1.0, 1.0])
    if rng.random() < zero_prob:
        v = np.eye(2)[rng.integers(2)]
    return v


def random_ht_instances(rng, count=100, hetero_frac=0.6, singular_prob=0.25):
    """Binary-output instances: heterogeneous with n <= 12, then i.i.d. with n in {100, 1000}."""
    out = []
    n_hetero = int(round(count * hetero_frac))
    for _ in range(n_hetero):
        n = int(rng.integers(1, 13))
        out.append(HtInstance([(_binary(rng, 0.1), _binary(rng, singular_prob)) for _ in range(n)]))
    for i in range(count - n_hetero):
        n = 100 if i % 2 == 0 else 1000
        out.append(HtInstance.iid(_binary(rng), _binary(rng), n))
    return out


def golden_ht_instances():
    w, q = bsc(0.1).matrix[0], np.array([0.5, 0.5])
    return [HtInstance.iid(w, q, 10), HtInstance.iid(w, q, 100)]


def ht_converse_suite(seed=0, n_instances=100, rhos=(1.25, 2.0, 4.0),
                      betas=np.logspace(-3, 3, 7), atom_cap=10 ** 7):
    """Exact Neyman-Pearson optimum against the Berry-Esseen converse."""
    rng = np.random.default_rng(seed)
    instances = golden_ht_instances() + random_ht_instances(rng, n_instances)
    rows, skipped = [], []
    for idx, inst in enumerate(instances):
        if inst.log_ac_product() == -math.inf:
            skipped.append({"instance": idx, "reason": "W and Q mutually singular"})
            continue
        try:
            atoms = llr_atoms(1.0, inst, atom_cap)
        except CapacityError as exc:
            skipped.append({"instance": idx, "reason": str(exc)})
            continue
        singular = not inst.all_absolutely_continuous()
        for rho in rhos:
            try:
                bounds = [lemma1_converse_bound(rho, b, inst) for b in betas]
            except DegenerateVarianceError as exc:
                skipped.append({"instance": idx, "rho": rho, "reason": str(exc)})
                continue
            results = np_tradeoff_curve(atoms, log_budgets=[min(b.log_q_budget, 0.0) for b in bounds])
            for beta, bd, res in zip(betas, bounds, results):
                rows.append({
                    "instance": idx, "n": inst.n, "singular": singular, "rho": float(rho),
                    "beta": float(beta),
                    "np_w_complement": res.min_w_complement,
                    "bound_form_5": bd.bound_form_5,
                    "bound_form_6": bd.bound_form_6,
                    "margin": res.min_w_complement - bd.bound_form_5,
                    "log_margin": bd.log_deficit - res.log_w_mass_in_event,
                })
    violations = [r for r in rows if r["margin"] < -MARGIN_TOL or r["log_margin"] < -LOG_TOL]
    return {
        "suite": "ht-converse", "seed": seed, "checked": len(rows), "skipped": len(skipped),
        "skipped_detail": skipped,
        "min_margin": min((r["margin"] for r in rows), default=None),
        "min_log_margin": min((r["log_margin"] for r in rows), default=None),
        "violations": len(violations), "passed": not violations, "rows": rows,
    }


def ht_achievability_suite(seed=0, ns=(100, 1000), rhos=(1.5, 2.0), n_betas=5, n_random=2,
                           atom_cap=10 ** 7):
    """Constructed event against both halves of the sandwich, at interior window points."""
    rng = np.random.default_rng(seed)
    pairs = [("bsc0.1-uniform", bsc(0.1).matrix[0], np.array([0.5, 0.5]))]
    for i in range(n_random):
        pairs.append((f"random{i}", _binary(rng), _binary(rng)))
    rows, skipped = [], []
    for name, w, q in pairs:
        for n in ns:
            inst = HtInstance.iid(w, q, n)
            atoms = None
            for rho in rhos:
                try:
                    const = berry_esseen_constants(rho, inst)
                except DegenerateVarianceError as exc:
                    skipped.append({"instance": name, "n": n, "rho": rho, "reason": str(exc)})
                    continue
                lo, hi = lemma2_window(rho, const, n)
                if lo > hi:
                    skipped.append({"instance": name, "n": n, "rho": float(rho),
                                    "reason": "empty beta window", "window": [lo, hi]})
                    continue
                for beta in np.geomspace(lo, hi, n_betas + 2)[1:-1]:
                    try:
                        ev = lemma2_achievability_event(rho, beta, inst, atom_cap)
                    except (CapacityError, HypothesisError) as exc:
                        skipped.append({"instance": name, "n": n, "rho": float(rho), "reason": str(exc)})
                        continue
                    l1 = lemma1_converse_bound(rho, beta, inst)
                    if atoms is None:
                        atoms = llr_atoms(1.0, inst, atom_cap)
                    opt = np_tradeoff_curve(atoms, log_budgets=[min(l1.log_q_budget, 0.0)])[0]
                    rows.append({
                        "instance": name, "n": n, "rho": float(rho), "beta": float(beta),
                        "tau": ev.tau, "delta": ev.delta,
                        "q_mass": ev.q_mass, "q_mass_bound": ev.q_mass_bound,
                        "w_complement": ev.w_complement_mass,
                        "w_complement_bound": ev.w_complement_bound,
                        "satisfies_q": ev.satisfies_q, "satisfies_w": ev.satisfies_w,
                        "satisfies_w_relative": ev.satisfies_w_relative,
                        # W(E) of the constructed event lies in [floor, lemma-1 deficit]
                        "event_below_converse": ev.log_w_event_mass <= l1.log_deficit + LOG_TOL,
                        "optimum_below_converse": opt.log_w_mass_in_event <= l1.log_deficit + LOG_TOL,
                        "gap_ratio": math.exp(l1.log_deficit - ev.log_w_event_floor),
                    })
    ok = [r["satisfies_q"] and r["satisfies_w"] and r["satisfies_w_relative"]
          and r["event_below_converse"] and r["optimum_below_converse"] for r in rows]
    return {
        "suite": "ht-achievability", "seed": seed, "checked": len(rows), "skipped": len(skipped),
        "skipped_detail": skipped, "violations": ok.count(False),
        "passed": all(ok), "rows": rows,
    }


def random_codes(rng, channels, count=500, max_n=6, max_m=8):
    """Constant composition codes with distinct codewords drawn from one type class."""
    codes = []
    while len(codes) < count:
        ch = int(rng.integers(len(channels)))
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(0, n + 1))
        size = comb(n, k)
        if size < 2:
            continue
        M = int(rng.integers(2, min(max_m, size) + 1))
        L = int(rng.integers(1, 3))
        picks = rng.choice(size, size=M, replace=False)
        words = [_word_of_rank(n, k, int(r)) for r in sorted(picks)]
        codes.append((ch, CodeSpec(words, L, channels[ch].input_alphabet)))
    return codes


def _word_of_rank(n, k, r):
    # r-th binary word (lexicographic) of length n with k ones
    word = []
    for pos in range(n):
        rest = n - pos - 1
        c = comb(rest, k)
        if r < c:
            word.append(0)
        else:
            r -= c
            word.append(1)
            k -= 1
    return word


def code_suite(seed=0, n_codes=500, n_random_channels=10, output_cap=10 ** 7, extra_codes=()):
    """Exact optimal list-decoding error against the larger of the two converse bounds and 0."""
    rng = np.random.default_rng(seed)
    channels = [bsc(0.1)] + [Channel(rng.dirichlet([1.0, 1.0], size=2)) for _ in range(n_random_channels)]
    codes = [(0, CodeSpec(["01", "10"], 1, channels[0].input_alphabet))]
    codes += [(ch, c) for ch, c in extra_codes]
    codes += random_codes(rng, channels, n_codes)
    cache = {}
    rows, skipped = [], []
    for idx, (ch, code) in enumerate(codes):
        channel = channels[ch] if isinstance(ch, int) else ch
        comp: Composition = code.composition
        key = (id(channel), tuple(list(comp.counts)))
        sc = cache.get(key)
        if sc is None:
            sc = cache[key] = StrongConverse(channel, comp.base)
        try:
            pe = exact_list_decoding_error(channel, code, output_cap)
        except CapacityError as exc:
            skipped.append({"code": idx, "reason": str(exc)})
            continue
        rate = (math.log(code.M) - math.log(code.L)) / code.n
        t2 = theorem2_at_rate(channel, comp, rate, sc)
        try:
            t1 = theorem1_at_rate(channel, comp, rate, sc).bound
        except (RegimeError, DegenerateVarianceError):
            t1 = None
        best = max(t2, 0.0, t1 if t1 is not None else -math.inf)
        rows.append({"code": idx, "channel": ch if isinstance(ch, int) else -1, "n": code.n,
                     "M": code.M, "L": code.L, "counts": list(comp.counts), "rate": rate,
                     "error": pe, "theorem1_bound": t1, "theorem2_bound": t2,
                     "margin": pe - best})
    violations = [r for r in rows if r["margin"] < -MARGIN_TOL]
    return {
        "suite": "code", "seed": seed, "checked": len(rows), "skipped": len(skipped),
        "skipped_detail": skipped,
        "min_margin": min((r["margin"] for r in rows), default=None),
        "violations": len(violations), "passed": not violations, "rows": rows,
    }


def run_suite(name, seed=0, atom_cap=10 ** 7):
    if name == "ht-converse":
        return ht_converse_suite(seed, atom_cap=atom_cap)
    if name == "ht-achievability":
        return ht_achievability_suite(seed, atom_cap=atom_cap)
    if name == "code":
        return code_suite(seed, output_cap=atom_cap)
    raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
