"""Teleporting one qubit through a W-class three-qubit resource.

Two protocols are simulated exactly or by sampling: a three-qubit
measurement by Alice, and a cheaper two-qubit variant that first filters on
Bob's qubit. Alongside them sit the pairwise entanglement measures that
decide when each protocol is perfect.
"""
__version__ = "0.1.0"

from .protocols import Protocol, run_monte_carlo, run_protocol_exact
from .states import WParams, ap_family, make_input_qubit, make_w_state, proposed_family, w_params

__all__ = [
    "__version__",
    "Protocol",
    "WParams",
    "ap_family",
    "make_input_qubit",
    "make_w_state",
    "proposed_family",
    "run_monte_carlo",
    "run_protocol_exact",
    "w_params",
]
