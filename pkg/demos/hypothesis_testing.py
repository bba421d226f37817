# Exact Neyman-Pearson trade-off for a product of i.i.d. letters, against the
# Berry-Esseen converse and the matching achievability event.
import numpy as np

from sconverse import (HtInstance, berry_esseen_constants, lemma1_converse_bound,
                       lemma2_achievability_event, lemma2_window, llr_atoms,
                       np_tradeoff_curve)

w, q = np.array([0.9, 0.1]), np.array([0.5, 0.5])

n = 100
inst = HtInstance.iid(w, q, n)
atoms = llr_atoms(1.0, inst)
print(n, "letters,", len(atoms), "distinct likelihood ratios")

rho = 2.0
for beta in [0.01, 1, 100]:
    bd = lemma1_converse_bound(rho, beta, inst)
    res = np_tradeoff_curve(atoms, log_budgets=[bd.log_q_budget])[0]
    # compare log W(E) against the log deficit: the values of W(E^c) sit too close to 1
    print(f"beta={beta:<5} log W(E) optimum={res.log_w_mass_in_event:.3f} "
          f"converse ceiling={bd.log_deficit:.3f}")

# The achievability window on beta only opens up for long enough blocks.
for n in [100, 1000]:
    inst = HtInstance.iid(w, q, n)
    lo, hi = lemma2_window(rho, berry_esseen_constants(rho, inst), n)
    print(f"n={n}: beta window [{lo:.4g}, {hi:.4g}]", "(empty)" if lo > hi else "")

inst = HtInstance.iid(w, q, 1000)
lo, hi = lemma2_window(rho, berry_esseen_constants(rho, inst), 1000)
ev = lemma2_achievability_event(rho, np.sqrt(lo * hi), inst)
print("event at n=1000: tau", ev.tau, "Q ok", ev.satisfies_q, "W ok", ev.satisfies_w)
