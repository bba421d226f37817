# Augustin information of a binary symmetric channel, order by order.
#
# For BSC(0.1) under a uniform input the Augustin mean is uniform by symmetry,
# so I_alpha has a closed form we can print next to the solver output.
import numpy as np

from sconverse import Distribution, bsc, kl_decomposition, solve_augustin

ch = bsc(0.1)
p = Distribution([0.5, 0.5])

for a in [0.5, 1, 1.5, 2, 4, 8]:
    sol = solve_augustin(a, ch, p)
    if a == 1:
        closed = np.log(2) + 0.1 * np.log(0.1) + 0.9 * np.log(0.9)
    else:
        closed = np.log(2) + np.log(0.9 ** a + 0.1 ** a) / (a - 1)
    print(f"alpha={a:<4} I={sol.info:.12f} closed form={closed:.12f} "
          f"residual={sol.fixed_point_residual:.1e} certificate={sol.certificate_margin:.1e}")

# An asymmetric channel: the mean is no longer the output marginal.
ch = bsc(0.2)
p = Distribution([0.3, 0.7])
sol = solve_augustin(2, ch, p)
print("mean at order 2:", sol.q, " output marginal:", p.probs @ ch.matrix)

# The information splits into a KL term against the tilted channel plus the
# mutual information of the tilted channel.
c1, i1 = kl_decomposition(sol, ch, p)
print("I_2 =", sol.info, "=", 2 / (1 - 2) * c1 + i1)
