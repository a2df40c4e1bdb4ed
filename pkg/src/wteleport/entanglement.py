"""Bipartite and tripartite entanglement quantities for three qubits.

Each quantity has a general route (reduced density matrices, eigenvalues)
and, for W-class states, a closed form in the amplitudes. Pairs are labelled
by qubit letters; for a three-qubit state A, B, C are qubits 0, 1, 2.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import qmath
from .states import WParams

PAIRS = {"AB": (0, 1), "BC": (1, 2), "AC": (0, 2)}
_SYY = qmath.tensor(qmath.Y, qmath.Y)


def _two_qubit_density(rho: np.ndarray) -> np.ndarray:
    rho = qmath.validate_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("expected a two-qubit density matrix")
    return rho


# eigenvalues of rho below this are rounding noise; keeping them would put
# sqrt(noise) ~ 1e-8 into the spin-flip spectrum
RANK_ATOL = 1e-14


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    With ``rho = sum_i |v_i><v_i|`` over its subnormalized eigenvectors, the
    square roots of the eigenvalues of ``rho rho_tilde`` are the singular
    values of ``tau_ij = v_i^T (Y (x) Y) v_j``. Working with ``tau`` avoids
    square-rooting eigenvalues that are zero up to rounding.
    """
    rho = _two_qubit_density(rho)
    w, u = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = w > RANK_ATOL
    v = u[:, keep] * np.sqrt(w[keep])
    r = np.zeros(4)
    if v.shape[1]:
        tau = v.T @ _SYY @ v
        sv = np.linalg.svd(tau, compute_uv=False)
        r[: sv.size] = sv
    return float(min(1.0, max(0.0, r[0] - r[1] - r[2] - r[3])))


def negativity(rho: np.ndarray) -> float:
    """Twice the magnitude of the negative spectrum of the partial transpose.

    Normalized so that a Bell state gives 1 and, on pure two-qubit states,
    negativity equals concurrence.
    """
    rho = _two_qubit_density(rho)
    ev = qmath.hermitian_eigenvalues(qmath.partial_transpose(rho, 1))
    return float(min(1.0, 2 * -ev[ev < 0].sum()))


def _pure3(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1 or state.shape[0] != 8:
        raise ValueError("expected a pure three-qubit state vector")
    if abs(np.linalg.norm(state) - 1) > 1e-10:
        raise ValueError("state is not normalized")
    return state


def reduced_pair(state: np.ndarray, pair: str) -> np.ndarray:
    return qmath.partial_trace(_pure3(state), PAIRS[pair])


@dataclass(frozen=True)
class ConcurrenceTriple:
    cab: float
    cbc: float
    cac: float

    def as_tuple(self) -> tuple[float, float, float]:
        return self.cab, self.cbc, self.cac


@dataclass(frozen=True)
class NegativityTriple:
    nab: float
    nbc: float
    nca: float

    def as_tuple(self) -> tuple[float, float, float]:
        return self.nab, self.nbc, self.nca


def pairwise_concurrences(state: np.ndarray) -> ConcurrenceTriple:
    return ConcurrenceTriple(*(concurrence(reduced_pair(state, p)) for p in ("AB", "BC", "AC")))


def pairwise_negativities(state: np.ndarray) -> NegativityTriple:
    return NegativityTriple(*(negativity(reduced_pair(state, p)) for p in ("AB", "BC", "AC")))


def concurrence_closed_form(params: WParams) -> ConcurrenceTriple:
    """``(2|l0 l3|, 2|l2 l3|, 2|l0 l2|)``; identical in either basis."""
    l0, l2, l3 = params.moduli
    return ConcurrenceTriple(2 * l0 * l3, 2 * l2 * l3, 2 * l0 * l2)


def negativity_closed_form(params: WParams) -> NegativityTriple:
    l0, l2, l3 = params.moduli
    return NegativityTriple(
        math.sqrt(l2 ** 4 + 4 * l0 ** 2 * l3 ** 2) - l2 ** 2,
        math.sqrt(l0 ** 4 + 4 * l2 ** 2 * l3 ** 2) - l0 ** 2,
        math.sqrt(l3 ** 4 + 4 * l2 ** 2 * l0 ** 2) - l3 ** 2,
    )


def one_vs_rest_concurrence(state: np.ndarray, pivot: int) -> float:
    """``sqrt(2 (1 - Tr rho_pivot^2))`` for a pure three-qubit state."""
    state = _pure3(state)
    if pivot not in (0, 1, 2):
        raise ValueError("pivot must be 0, 1 or 2")
    rho = qmath.partial_trace(state, [pivot])
    purity = float(np.real(np.trace(rho @ rho)))
    return math.sqrt(max(0.0, 2 * (1 - purity)))


O_OPERATORS = {
    "O1": 2 * qmath.pauli_string("XXZ"),
    "O2": 2 * qmath.pauli_string("XZX"),
    "O3": 2 * qmath.pauli_string("ZXX"),
}


def o_operator_expectations(state: np.ndarray) -> tuple[float, float, float]:
    """Expectations of ``2 XXZ``, ``2 XZX`` and ``2 ZXX``.

    For a canonical W state with real amplitudes their squares over four are
    ``C_AB^2``, ``C_AC^2`` and ``C_BC^2``. With complex amplitudes they pick
    up the cosine of relative phases and only bound the concurrences.
    """
    state = _pure3(state)
    return tuple(qmath.expectation(op, state) for op in O_OPERATORS.values())


@dataclass(frozen=True)
class ThreePiReport:
    pi_a: float
    pi_b: float
    pi_c: float
    pi_abc: float
    one_vs_rest: tuple[float, float, float]
    tangle: float
    concurrences: ConcurrenceTriple
    negativities: NegativityTriple

    def to_dict(self) -> dict:
        d = asdict(self)
        d["one_vs_rest"] = list(self.one_vs_rest)
        return d


def three_pi(state: np.ndarray) -> ThreePiReport:
    """Negativity-based residual entanglements and their mean.

    The one-vs-rest negativity of a pure state equals its one-vs-rest
    concurrence, so ``pi_A = C_A(BC)^2 - N_AB^2 - N_AC^2`` and cyclically.
    The tangle is ``C_A(BC)^2 - C_AB^2 - C_AC^2``.
    """
    state = _pure3(state)
    one = tuple(one_vs_rest_concurrence(state, q) for q in range(3))
    n = pairwise_negativities(state)
    c = pairwise_concurrences(state)
    pi_a = one[0] ** 2 - n.nab ** 2 - n.nca ** 2
    pi_b = one[1] ** 2 - n.nbc ** 2 - n.nab ** 2
    pi_c = one[2] ** 2 - n.nca ** 2 - n.nbc ** 2
    tangle = one[0] ** 2 - c.cab ** 2 - c.cac ** 2
    return ThreePiReport(pi_a, pi_b, pi_c, (pi_a + pi_b + pi_c) / 3, one, tangle, c, n)


def three_pi_w_closed_form(params: WParams) -> float:
    """Three-pi of a W-class state from amplitudes only.

    Uses the vanishing tangle, ``C_A(BC)^2 = C_AB^2 + C_AC^2`` and
    cyclically, together with the closed-form negativities.
    """
    c = concurrence_closed_form(params)
    n = negativity_closed_form(params)
    pi_a = c.cab ** 2 + c.cac ** 2 - n.nab ** 2 - n.nca ** 2
    pi_b = c.cab ** 2 + c.cbc ** 2 - n.nbc ** 2 - n.nab ** 2
    pi_c = c.cac ** 2 + c.cbc ** 2 - n.nca ** 2 - n.nbc ** 2
    return (pi_a + pi_b + pi_c) / 3


def proposed_negativities(cab: float, cac: float) -> tuple[float, float]:
    """``(N_AB = N_BC, N_CA)`` of an ellipse-family state from its concurrences."""
    d = 2 * cac * cac + cab * cab
    if d == 0:
        return 0.0, 0.0
    nab = cac * (math.sqrt(cac * cac + 4 * cab * cab) - cac) / d
    nca = (math.sqrt(cab ** 4 + 4 * cac ** 4) - cab * cab) / d
    return nab, nca


def proposed_pair_feasible(cab: float, cac: float, atol: float = 1e-9) -> bool:
    """Whether ``(C_AB, C_AC)`` comes from a normalized state with ``l0 = l2``.

    Such states satisfy ``2 C_AC^2 + C_AB^2 = 2 C_AC``.
    """
    if not (0 <= cab <= 1 and 0 <= cac <= 1):
        return False
    return abs(2 * cac * cac + cab * cab - 2 * cac) <= atol


def three_pi_closed_form_proposed(cab: float, cac: float, atol: float = 1e-9) -> float:
    """``4 (C_AB^2 - N_AB^2) + 2 (C_AC^2 - N_AC^2)`` for an ellipse-family state.

    This is the sum ``pi_A + pi_B + pi_C`` under ``C_AB = C_BC`` and
    ``N_AB = N_BC``; it is three times :func:`three_pi`'s ``pi_abc``.
    """
    if cab == 0 and cac == 0:
        return 0.0
    if not proposed_pair_feasible(cab, cac, atol):
        raise ValueError(f"(cab, cac) = ({cab}, {cac}) is not an ellipse-family concurrence pair")
    nab, nca = proposed_negativities(cab, cac)
    return 4 * (cab * cab - nab * nab) + 2 * (cac * cac - nca * nca)


@dataclass(frozen=True)
class EntanglementReport:
    concurrences: ConcurrenceTriple
    negativities: NegativityTriple
    one_vs_rest: tuple[float, float, float]
    tangle: float
    pi: tuple[float, float, float]
    pi_abc: float
    o_expectations: tuple[float, float, float]

    def to_dict(self) -> dict:
        return {
            "concurrences": asdict(self.concurrences),
            "negativities": asdict(self.negativities),
            "one_vs_rest": {"A(BC)": self.one_vs_rest[0], "B(CA)": self.one_vs_rest[1],
                            "C(AB)": self.one_vs_rest[2]},
            "tangle": self.tangle,
            "pi": {"A": self.pi[0], "B": self.pi[1], "C": self.pi[2]},
            "pi_abc": self.pi_abc,
            "o_expectations": list(self.o_expectations),
        }


def entanglement_report(state: np.ndarray) -> EntanglementReport:
    tp = three_pi(state)
    return EntanglementReport(
        concurrences=tp.concurrences,
        negativities=tp.negativities,
        one_vs_rest=tp.one_vs_rest,
        tangle=tp.tangle,
        pi=(tp.pi_a, tp.pi_b, tp.pi_c),
        pi_abc=tp.pi_abc,
        o_expectations=o_operator_expectations(state),
    )
