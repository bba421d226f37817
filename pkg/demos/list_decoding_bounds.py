# Exact list-decoding error of small codes next to the two converse bounds.
import numpy as np

from sconverse import (CodeSpec, Composition, Distribution, StrongConverse, bsc,
                       exact_list_decoding_error, theorem1_at_rate, theorem2_at_rate,
                       theorem2_bound)

ch = bsc(0.1)
code = CodeSpec(["01", "10"], 1, ch.input_alphabet)
print("P_e of {01, 10}:", exact_list_decoding_error(ch, code))
print("exponent bound:", theorem2_bound(ch, code.composition, code.M, code.L))

# every weight-2 word of length 4: rate ln(6)/4 sits above I_1, so the bound bites
code = CodeSpec(["0011", "0101", "0110", "1001", "1010", "1100"], 1, ch.input_alphabet)
print("P_e of the full weight-2 code:", exact_list_decoding_error(ch, code),
      "bound:", theorem2_bound(ch, code.composition, code.M, code.L))

# Along a fixed-rate family the refined bound first turns positive at n = 40,
# but its prefactor stays above one, so the plain exponent bound is stronger.
sc = StrongConverse(ch, Distribution([0.5, 0.5]))
rate = np.log(512) / 10
for n in [10, 40, 400, 4000, 660236]:
    comp = Composition([n // 2, n // 2])
    t1 = theorem1_at_rate(ch, comp, rate, sc)
    t2 = theorem2_at_rate(ch, comp, rate, sc)
    print(f"n={n:<7} theorem1={t1.bound:.6g} theorem2={t2:.6g} prefactor={t1.prefactor:.4f}")
