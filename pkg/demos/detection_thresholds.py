"""Detection-efficiency thresholds for polarization qubits.

The two-outcome Clauser-Horne test with polarizers shows the classic
trade-off: the maximally entangled state violates the most, but weakly
entangled states tolerate the worst detectors.  As a -> 0 the critical
efficiency approaches 2/3 while the violation itself vanishes.
"""
import numpy as np

import bellthresh as bt

sc = bt.qubit_scenario()
f = bt.ch_qubit_functional()
opts = bt.OptimOptions(multistarts=16, rng_seed=0)

res = bt.maximize(sc, f, fix_params=(1.0,), opts=opts)
print(f"maximally entangled pair: CH = {res.total:.5f}")
print(f"  (analytic value sqrt(2)/2 - 1/2 = {np.sqrt(2)/2 - 0.5:.5f})")

eta_max = bt.critical_efficiency(sc, f, fix_params=(1.0,), opts=opts)
print(f"  critical efficiency eta* = {eta_max:.4f}  (analytic 2(sqrt(2)-1) = {2*(np.sqrt(2)-1):.4f})")

print("\neta* as the state gets less entangled:")
for a in (1.0, 0.6, 0.3, 0.1, 0.05):
    eta = bt.critical_efficiency(sc, f, fix_params=(a,), opts=opts)
    ch = bt.maximize(sc, f, fix_params=(a,), opts=opts).total
    print(f"  a = {a:4.2f}:  eta* = {eta:.4f}   CH(eta=1) = {ch:.5f}")

eta_free = bt.critical_efficiency(sc, f, opts=opts)
print(f"\nbest over all states: eta* = {eta_free:.4f}  (limit 2/3 as a -> 0)")

res = bt.maximize(sc, f, eta=0.85, opts=opts)
print(f"\nat eta = 0.85 the best state is a = {res.entanglement[0]:.3f} "
      f"with CH = {res.total:.5f}")
print(f"  singles/joint ratio there: {res.value.ratio:.4f}")
