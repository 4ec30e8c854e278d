# %%
import warnings

from qptsim import circuit

# %%
# # From circuit elements to model couplings
#
# The reference elements give a fluxonium well inside its two-level regime.

el = circuit.reference_elements()
with warnings.catch_warnings():
    warnings.simplefilter("error", circuit.TwoLevelWarning)
    one = circuit.derive_one_qubit(el)
for key, value in one.as_dict().items():
    print(f"{key:14s} {value}")

# %%
# Two qubits share the mode.  The qubit-qubit terms carry opposite signs in x
# and y, which is what the corrected model flips.

two = circuit.derive_two_qubit(el)
print("D_x", two.D_x, "D_y", two.D_y)
print("model parameters", two.model_params())

# %%
# # Fluxonium spectrum alone
#
# Dimensionless units, half flux quantum bias.  The ratio of the second to
# the first transition decides whether a two-level truncation is safe.

lv = circuit.fluxonium_levels(1.0, 1.0, 2.0, phi_ext=3.141592653589793,
                              flux_quantum=1.0, hbar=1.0)
print("omega_q", lv.omega_q, "anharmonic ratio", lv.anharmonic_ratio, "basis", lv.basis_used)
