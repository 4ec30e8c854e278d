# %%
import numpy as np

from qptsim import scan
from qptsim.models import ModelParams, collective_blocks

# %%
# # Odd and even qubit numbers
#
# With equal couplings the total excitation number is conserved, so each
# collective block has an exactly empty resonator until a level crossing
# pulls a photon-carrying state below the vacuum.

ratio = 50.0
for n in (2, 3):
    print(f"N={n}: blocks j = {collective_blocks(n)}")
    for lam in np.linspace(2.2, 2.7, 6):
        p = ModelParams.qubit_qubit(lam, lam, ratio, n_qubits=n)
        res = scan.spectrum(p, n_cut=16, model="collective")
        print(f"  lambda={lam:.2f}  E0={res.ground_energy:+.4f}  "
              f"n_G={res.n_G:.3f}  block j={res.block_j}")

# %%
# Odd N populates the resonator across this window while even N stays dark.
# The ground state hops between blocks, so follow ``block_j`` above.
