"""Rewrite the circuit golden records.

Run only after the fluxonium solver has been re-checked against the grid
oracle in test_circuit.py; the records freeze the closed-form chain.
"""
import json
import math
from pathlib import Path
import warnings

from qptsim import circuit

HERE = Path(__file__).parent

with warnings.catch_warnings():
    warnings.simplefilter("ignore", circuit.TwoLevelWarning)
    el = circuit.reference_elements()
    fl = circuit.fluxonium_levels(1.0, 1.0, 2.0, math.pi, flux_quantum=1.0, hbar=1.0)
    record = {
        "elements": {k: v for k, v in vars(el).items()},
        "one_qubit": circuit.derive_one_qubit(el).as_dict(),
        "two_qubit": circuit.derive_two_qubit(el).as_dict(),
        "fluxonium_dimensionless": {"C_q_bar": 1.0, "L_q_bar": 1.0, "E_J": 2.0,
                                    "phi_ext": math.pi, "flux_quantum": 1.0,
                                    "omega_q": fl.omega_q, "phi0_q": fl.phi0_q},
    }
(HERE / "circuit_reference.json").write_text(json.dumps(record, indent=2) + "\n")
