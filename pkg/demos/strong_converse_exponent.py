# The strong converse exponent curve of BSC(0.1) with a uniform input.
#
# Below the mutual information the exponent is zero, in the middle it is
# parametrized by the optimal order rho*, and past the high-rate threshold it
# grows with slope one.
import numpy as np

from sconverse import Distribution, StrongConverse, bsc

sc = StrongConverse(bsc(0.1), Distribution([0.5, 0.5]))
print(f"I_1 = {sc.i1:.6f}, high-rate threshold = {sc.threshold.value:.6f}, "
      f"I_inf = {sc.threshold.i_inf:.6f}")

for rate in np.arange(0.30, 0.80, 0.05):
    res = sc(rate)
    print(f"R={rate:.2f} {res.regime.value:<10} rho*={res.rho_star:<10.6g} "
          f"E={res.exponent:.6f} slope={res.slope:.6f}")

# At R = ln 2 - h(1/82) the optimal order is exactly 2.
r2 = np.log(2) + (1 / 82) * np.log(1 / 82) + (81 / 82) * np.log(81 / 82)
res = sc(r2)
print("rate", r2, "-> rho*", res.rho_star, "exponent", res.exponent)

# The max-over-orders definition on a dense grid agrees with the parametric form.
print("grid oracle:", sc.grid_oracle(r2, np.geomspace(1.001, 100, 5000)))
print("Dueck-Korner discrepancy:", sc.dueck_korner(r2, res))
