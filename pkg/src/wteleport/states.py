"""Input qubits and three-qubit W-class resource states.

Two placements of the same three amplitudes appear throughout:

* resource basis:  ``l0|100> + l2|001> + l3|010>``
* canonical basis: ``l0|000> + l2|101> + l3|110>``

The two are related by a bit flip on qubit A, so a :class:`WParams` can be
re-tagged without touching the amplitudes.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import qmath

NORM_ATOL = 1e-12
RENORM_ATOL = 1e-9


class Basis(str, enum.Enum):
    RESOURCE = "resource"
    CANONICAL = "canonical"


# amplitude index of l0, l2, l3 in each basis
_SLOTS = {
    Basis.RESOURCE: (0b100, 0b001, 0b010),
    Basis.CANONICAL: (0b000, 0b101, 0b110),
}


@dataclass(frozen=True)
class InputQubit:
    alpha: complex
    beta: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


def make_input_qubit(alpha: complex, beta: complex) -> InputQubit:
    """Qubit ``alpha|0> + beta|1>``.

    Inputs whose norm is within 1e-9 of one are renormalized; anything
    further off is rejected rather than silently rescaled.
    """
    alpha, beta = complex(alpha), complex(beta)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if norm2 == 0:
        raise ValueError("input qubit amplitudes are both zero")
    if not math.isfinite(norm2):
        raise ValueError("input qubit amplitudes must be finite")
    if abs(math.sqrt(norm2) - 1) > RENORM_ATOL:
        raise ValueError(f"input qubit norm {math.sqrt(norm2):.12g} is not 1")
    s = math.sqrt(norm2)
    return InputQubit(alpha / s, beta / s)


@dataclass(frozen=True)
class WParams:
    lambda0: complex
    lambda2: complex
    lambda3: complex
    basis: Basis = Basis.RESOURCE

    def __post_init__(self):
        object.__setattr__(self, "basis", Basis(self.basis))
        for name in ("lambda0", "lambda2", "lambda3"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        total = self.norm2
        if abs(total - 1) > NORM_ATOL:
            raise ValueError(f"|l0|^2+|l2|^2+|l3|^2 = {total:.15g}, expected 1")

    @property
    def norm2(self) -> float:
        return abs(self.lambda0) ** 2 + abs(self.lambda2) ** 2 + abs(self.lambda3) ** 2

    @property
    def moduli(self) -> tuple[float, float, float]:
        return abs(self.lambda0), abs(self.lambda2), abs(self.lambda3)

    @property
    def amplitudes(self) -> tuple[complex, complex, complex]:
        return self.lambda0, self.lambda2, self.lambda3

    def as_basis(self, basis: Basis | str) -> "WParams":
        return replace(self, basis=Basis(basis))

    def to_dict(self) -> dict:
        return {
            "lambda": [_complex_pair(z) for z in self.amplitudes],
            "basis": self.basis.value,
        }


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def w_params(l0, l2, l3, basis: Basis | str = Basis.RESOURCE, renormalize: bool = False) -> WParams:
    """Build :class:`WParams`, optionally rescaling the amplitudes to unit norm.

    Useful for user-typed values like ``0.577`` where exact normalization is
    not achievable.
    """
    amps = np.array([l0, l2, l3], dtype=complex)
    if renormalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("all W amplitudes are zero")
        amps = amps / norm
    return WParams(*amps, basis=basis)


def make_w_state(params: WParams) -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    for slot, amp in zip(_SLOTS[params.basis], params.amplitudes):
        psi[slot] = amp
    return psi


def canonical_to_resource(state: np.ndarray) -> np.ndarray:
    """Apply the bit flip on qubit A that maps canonical to resource form."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (8,):
        raise ValueError("canonical_to_resource expects a three-qubit state")
    return qmath.apply_1q(qmath.X, state, 0)


def w_params_of(state: np.ndarray, basis: Basis | str = Basis.RESOURCE, atol: float = 1e-10) -> WParams:
    """Read the W amplitudes back out of a three-qubit state.

    Raises
    ------
    ValueError
        If the state has weight outside the three W slots of ``basis``.
    """
    basis = Basis(basis)
    state = np.asarray(state, dtype=complex)
    if state.shape != (8,):
        raise ValueError("expected a three-qubit state")
    slots = _SLOTS[basis]
    outside = [i for i in range(8) if i not in slots]
    if np.linalg.norm(state[outside]) > atol:
        raise ValueError(f"state is not W-class in the {basis.value} basis")
    return w_params(*(state[s] for s in slots), basis=basis, renormalize=True)


@dataclass(frozen=True)
class CanonicalParams:
    """Five-term canonical form ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``."""

    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    phi: float = 0.0

    def __post_init__(self):
        lams = self.lambdas
        if any(l < 0 or not math.isfinite(l) for l in lams):
            raise ValueError("canonical coefficients must be finite and nonnegative")
        if abs(sum(l * l for l in lams) - 1) > NORM_ATOL:
            raise ValueError("canonical coefficients are not normalized")
        object.__setattr__(self, "phi", self.phi % (2 * math.pi))

    @property
    def lambdas(self) -> tuple[float, ...]:
        return self.lambda0, self.lambda1, self.lambda2, self.lambda3, self.lambda4


def make_canonical_state(p: CanonicalParams) -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = p.lambda0
    psi[0b100] = p.lambda1 * cmath.exp(1j * p.phi)
    psi[0b101] = p.lambda2
    psi[0b110] = p.lambda3
    psi[0b111] = p.lambda4
    return psi


def ap_family(n: float, theta1: float = 0.0, theta2: float = 0.0) -> WParams:
    """Circle family ``l0 = e^{i t1}/sqrt(2+2n), l2 = 1/sqrt2, l3 = sqrt(n) e^{i t2}/sqrt(2+2n)``."""
    if not (math.isfinite(n) and n >= 0):
        raise ValueError(f"n must be finite and >= 0, got {n}")
    d = math.sqrt(2 + 2 * n)
    return WParams(
        cmath.exp(1j * theta1) / d,
        1 / math.sqrt(2),
        math.sqrt(n) * cmath.exp(1j * theta2) / d,
    )


def proposed_family(m: float, eta1: float = 0.0, eta2: float = 0.0) -> WParams:
    """Ellipse family with ``|l0| = |l2| = sqrt(m/(2+2m))`` and ``|l3| = sqrt(2/(2+2m))``."""
    if not (math.isfinite(m) and m >= 0):
        raise ValueError(f"m must be finite and >= 0, got {m}")
    d = math.sqrt(2 + 2 * m)
    return WParams(
        math.sqrt(m) * cmath.exp(1j * eta1) / d,
        math.sqrt(m) / d,
        math.sqrt(2) * cmath.exp(1j * eta2) / d,
    )


def params_from_concurrences_ap(cab: float, cbc: float, cac: float, atol: float = RENORM_ATOL) -> WParams:
    """Invert the pairwise concurrences of a circle-family state, with ``l2 = 1/sqrt2``.

    ``l0 = cab/cbc * l2`` and ``l3 = cab/cac * l2``. The triple must be
    consistent: the result has to be normalized and reproduce all three
    concurrences, otherwise ``ValueError`` is raised.
    """
    for name, c in (("cab", cab), ("cbc", cbc), ("cac", cac)):
        if not 0 < c <= 1:
            raise ValueError(f"{name} must lie in (0, 1], got {c}")
    l2 = 1 / math.sqrt(2)
    l0 = cab / cbc * l2
    l3 = cab / cac * l2
    norm2 = l0 * l0 + l2 * l2 + l3 * l3
    if abs(norm2 - 1) > atol:
        raise ValueError(f"inconsistent concurrence triple: reconstructed norm^2 = {norm2:.12g}")
    back = (2 * l0 * l3, 2 * l2 * l3, 2 * l0 * l2)
    if max(abs(a - b) for a, b in zip(back, (cab, cbc, cac))) > atol:
        raise ValueError(f"inconsistent concurrence triple: reconstruction gives {back}")
    return w_params(l0, l2, l3, basis=Basis.CANONICAL, renormalize=True)


def params_from_concurrences_proposed(cab: float, cac: float) -> WParams:
    """Ellipse-family amplitudes from ``(C_AB, C_AC)``.

    Only the ratio of the two concurrences enters, so a jointly infeasible
    pair still yields a normalized state; its actual concurrences can be
    recomputed with :func:`wteleport.entanglement.concurrence_closed_form`.
    """
    if cab < 0:
        raise ValueError("cab must be >= 0")
    if cac <= 0:
        raise ValueError("cac must be > 0")
    d = 2 * cac * cac + cab * cab
    l02 = cac * cac / d
    l32 = cab * cab / d
    return WParams(math.sqrt(l02), math.sqrt(l02), math.sqrt(l32), basis=Basis.CANONICAL)


def ghz_state() -> np.ndarray:
    return qmath.normalize(qmath.ket("000") + qmath.ket("111"))


def haar_qubit_from_normals(z: np.ndarray) -> np.ndarray:
    """Map standard normals of shape ``(..., 4)`` to Haar-random qubits ``(..., 2)``."""
    z = np.asarray(z, dtype=float)
    amps = z[..., 0::2] + 1j * z[..., 1::2]
    return amps / np.linalg.norm(amps, axis=-1, keepdims=True)


def haar_input(rng: np.random.Generator) -> InputQubit:
    a, b = haar_qubit_from_normals(rng.standard_normal(4))
    return make_input_qubit(a, b)
