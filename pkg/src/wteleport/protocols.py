"""Teleportation of one qubit over a W-class resource.

Qubit order for the four-qubit register is ``x, A, B, C``: ``x`` carries the
input, Alice holds ``x, A, B`` and Bob holds ``C``.

Two protocols are simulated:

* ``ap``: Alice measures ``x, A, B`` in the basis of the four M-vectors;
  deterministic when ``|l0|^2 + |l3|^2 = |l2|^2``.
* ``proposed``: Alice first projects ``B`` with ``F`` (qubit B on ``|0>``),
  then measures ``x, A`` in the basis of the normalized P-vectors;
  succeeds with probability ``|l0|^2 + |l2|^2`` when ``|l0| = |l2|``.

Every outcome is turned into a 2x2 Kraus map from the input qubit to Bob's
qubit. Bob's Pauli correction is picked from that map, so the pairing
between outcomes and corrections falls out of the algebra instead of being
tabulated.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from . import qmath
from .states import Basis, InputQubit, WParams, make_input_qubit, make_w_state

PROB_EPS = 1e-15
SUCCESS_ATOL = 1e-9
UNIFORMS_PER_TRIAL = 8  # two Philox blocks; slots 0-3 input, 4 branch, 5 outcome

CORRECTIONS = {
    "I": qmath.I2,
    "Z": qmath.Z,
    "X": qmath.X,
    "XZ": qmath.X @ qmath.Z,
}

OUTSIDE = "outside-basis"
FAILURE = "I-F"


class Protocol(str, enum.Enum):
    AP = "ap"
    PROPOSED = "proposed"


@dataclass(frozen=True)
class MeasurementBasis:
    """Measurement vectors as written, plus what is actually measured.

    ``vectors`` are normalized but need not be mutually orthogonal.
    ``measured`` is their in-order Gram-Schmidt image (``None`` where a
    vector is linearly dependent on earlier ones), and ``completion`` spans
    the orthogonal complement, so ``measured + completion`` is always a full
    orthonormal basis.
    """

    label: str
    labels: tuple[str, ...]
    vectors: tuple[np.ndarray, ...]
    measured: tuple[np.ndarray | None, ...]
    completion: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.vectors[0].shape[0]

    def gram(self) -> np.ndarray:
        v = np.array(self.vectors)
        return v.conj() @ v.T

    def is_orthonormal(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.gram(), np.eye(len(self.vectors)), atol=atol, rtol=0))

    def outcomes(self) -> list[tuple[str, np.ndarray, bool]]:
        """``(label, vector, in_basis)`` for every projective outcome."""
        out = [(lab, v, True) for lab, v in zip(self.labels, self.measured) if v is not None]
        out += [(f"{OUTSIDE}:{i}", v, False) for i, v in enumerate(self.completion)]
        return out


def _basis(label: str, labels: Sequence[str], raw: Sequence[np.ndarray]) -> MeasurementBasis:
    vectors = []
    for v in raw:
        n = np.linalg.norm(v)
        vectors.append(v / n if n > 0 else v)
    measured = qmath.gram_schmidt(vectors)
    completion = qmath.orthonormal_completion(vectors, vectors[0].shape[0])
    return MeasurementBasis(label, tuple(labels), tuple(vectors), tuple(measured), tuple(completion))


def _resource(params: WParams) -> WParams:
    # canonical-tagged amplitudes are taken through the A bit flip first
    return params.as_basis(Basis.RESOURCE)


def _vec(terms: dict[str, complex]) -> np.ndarray:
    out = None
    for bits, amp in terms.items():
        k = amp * qmath.ket(bits)
        out = k if out is None else out + k
    return out


def m_vectors(params: WParams) -> list[np.ndarray]:
    """M-vectors on ``x, A, B``; unit norm because the params are normalized."""
    l0, l2, l3 = _resource(params).amplitudes
    return [
        _vec({"010": l0, "001": l3, "100": l2}),
        _vec({"010": l0, "001": l3, "100": -l2}),
        _vec({"110": l0, "101": l3, "000": l2}),
        _vec({"110": l0, "101": l3, "000": -l2}),
    ]


def n_vectors(params: WParams) -> list[np.ndarray]:
    """N-vectors on ``x, A, B``; the +/- sign sits on the ``l2`` term of both pairs."""
    l0, l2, l3 = _resource(params).amplitudes
    return [
        _vec({"010": l0, "100": l2, "001": l3}),
        _vec({"010": l0, "100": -l2, "001": l3}),
        _vec({"110": l0, "000": l2, "101": l3}),
        _vec({"110": l0, "000": -l2, "101": l3}),
    ]


def p_vectors(params: WParams) -> list[np.ndarray]:
    l0, l2, _ = _resource(params).amplitudes
    return [
        _vec({"01": l0, "10": l2}),
        _vec({"01": l0, "10": -l2}),
        _vec({"11": l0, "00": l2}),
        _vec({"11": l0, "00": -l2}),
    ]


# Bob's state accompanying each decomposition vector, as a map on (alpha, beta)
BOB_STATES = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1], [-1, 0]], dtype=complex),
)


def reconstruct(vectors: Sequence[np.ndarray], inp: InputQubit) -> np.ndarray:
    """``1/2 sum_k v_k (x) B_k psi``: the right-hand side of the decomposition."""
    psi = inp.vector
    return 0.5 * sum(np.kron(v, b @ psi) for v, b in zip(vectors, BOB_STATES))


def build_ap_basis(params: WParams) -> MeasurementBasis:
    return _basis("AP_M", ("M1+", "M1-", "M2+", "M2-"), m_vectors(params))


def build_proposed_basis(params: WParams) -> MeasurementBasis:
    return _basis("Proposed_P", ("P1+", "P1-", "P2+", "P2-"), p_vectors(params))


def build_bell_basis() -> MeasurementBasis:
    s = 1 / math.sqrt(2)
    raw = [
        _vec({"00": s, "11": s}),
        _vec({"00": s, "11": -s}),
        _vec({"01": s, "10": s}),
        _vec({"01": s, "10": -s}),
    ]
    return _basis("Bell", ("Phi+", "Phi-", "Psi+", "Psi-"), raw)


@dataclass(frozen=True)
class BranchProjector:
    label: str
    matrix: np.ndarray


def build_branch_projectors() -> tuple[BranchProjector, BranchProjector]:
    """``F = (I_xAB + I_xA (x) Z_B) / 2`` and its complement, on ``x, A, B``."""
    eye = np.eye(8, dtype=complex)
    f = 0.5 * (eye + qmath.tensor(qmath.I2, qmath.I2, qmath.Z))
    return BranchProjector("F", f), BranchProjector("I-F", eye - f)


def choose_correction(kraus: np.ndarray) -> str:
    """Pauli ``U`` maximizing ``|Tr(U K)|``, i.e. making ``U K`` closest to identity.

    Ties resolve in the order I, Z, X, XZ.
    """
    best, best_score = "I", -1.0
    for name, u in CORRECTIONS.items():
        score = abs(np.trace(u @ kraus))
        if score > best_score + 1e-12:
            best, best_score = name, score
    return best


@dataclass(frozen=True)
class ProtocolRunReport:
    protocol: Protocol
    outcome_label: str
    outcome_probability: float
    conditional_probability: float
    branch: str
    branch_probability: float
    correction: str
    output_state: np.ndarray | None
    fidelity: float | None
    success: bool
    stranded_state: np.ndarray | None = None

    def to_dict(self) -> dict:
        def cvec(v):
            return None if v is None else [[float(z.real), float(z.imag)] for z in v]

        return {
            "protocol": self.protocol.value,
            "outcome_label": self.outcome_label,
            "outcome_probability": self.outcome_probability,
            "conditional_probability": self.conditional_probability,
            "branch": self.branch,
            "branch_probability": self.branch_probability,
            "correction": self.correction,
            "output_state": cvec(self.output_state),
            "fidelity": self.fidelity,
            "success": self.success,
            "stranded_state": cvec(self.stranded_state),
        }


@dataclass(frozen=True)
class Outcome:
    """One projective outcome with its Kraus map and chosen correction."""

    label: str
    branch: str
    in_basis: bool
    kraus: np.ndarray
    correction: str

    @property
    def corrected(self) -> np.ndarray:
        u = CORRECTIONS[self.correction] if self.correction in CORRECTIONS else qmath.I2
        return u @ self.kraus


def _alice_blocks(protocol: Protocol, params: WParams) -> np.ndarray:
    """For input ``|j>``, the (Alice, Bob) amplitude block Bob's map is read from.

    Shape ``(2, dA, 2)``. For ``proposed`` this is the F-branch slice
    (qubit B fixed to 0), over Alice's remaining qubits ``x, A``.
    """
    w = make_w_state(_resource(params))
    blocks = []
    f, _ = build_branch_projectors()
    for j in range(2):
        phi = np.kron(qmath.ket(str(j)), w)
        if protocol is Protocol.AP:
            blocks.append(phi.reshape(8, 2))
        else:
            phi = np.kron(f.matrix, qmath.I2) @ phi
            blocks.append(phi.reshape(2, 2, 2, 2)[:, :, 0, :].reshape(4, 2))
    return np.array(blocks)


def protocol_outcomes(protocol: Protocol | str, params: WParams) -> list[Outcome]:
    """All outcomes of one protocol run, in report order.

    For ``proposed`` the last entry is the failure branch ``I-F`` whose
    Kraus map sends the input to the stranded register rather than to Bob;
    its ``kraus`` holds the branch amplitude ``l3`` times identity.
    """
    return list(_prepared(Protocol(protocol), params)[1])


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=256)
def _prepared(protocol: Protocol, params: WParams):
    # basis vectors and outcome maps depend only on the resource, so runs
    # over many inputs share them; arrays are frozen since they are cached
    basis = build_ap_basis(params) if protocol is Protocol.AP else build_proposed_basis(params)
    vectors = tuple(_readonly(v) for _, v, _ in basis.outcomes())
    blocks = _alice_blocks(protocol, params)
    branch = "all" if protocol is Protocol.AP else "F"
    out = []
    for (label, _, in_basis), vec in zip(basis.outcomes(), vectors):
        k = np.stack([vec.conj() @ blocks[j] for j in range(2)], axis=1)
        corr = choose_correction(k) if in_basis else "none"
        out.append(Outcome(label, branch, in_basis, _readonly(k), corr))
    if protocol is Protocol.PROPOSED:
        l3 = _resource(params).lambda3
        out.append(Outcome(FAILURE, FAILURE, False, _readonly(l3 * np.eye(2)), "none"))
    return vectors, tuple(out)


def _check_input(inp: InputQubit) -> InputQubit:
    if not isinstance(inp, InputQubit):
        raise TypeError("input must be an InputQubit")
    return inp


def _report(protocol, outcome: Outcome, c_state, prob, branch_prob, psi) -> ProtocolRunReport:
    cond = prob / branch_prob if branch_prob > PROB_EPS else 0.0
    if prob <= PROB_EPS:
        return ProtocolRunReport(protocol, outcome.label, prob, cond, outcome.branch, branch_prob,
                                 outcome.correction, None, None, False)
    u = CORRECTIONS.get(outcome.correction, qmath.I2)
    out_state = qmath.normalize(u @ c_state)
    fid = qmath.fidelity(psi, out_state)
    success = outcome.in_basis and fid >= 1 - SUCCESS_ATOL
    return ProtocolRunReport(protocol, outcome.label, prob, cond, outcome.branch, branch_prob,
                             outcome.correction, out_state, fid, success)


def run_ap_protocol_exact(params: WParams, inp: InputQubit) -> list[ProtocolRunReport]:
    """Born-rule evolution of the three-qubit-measurement protocol.

    The four-qubit state is projected onto each outcome vector of Alice's
    ``x, A, B`` basis (completed to a full basis), Bob's qubit is
    renormalized and corrected, and the fidelity with the input is scored.
    """
    psi = _check_input(inp).vector
    phi = np.kron(psi, make_w_state(_resource(params))).reshape(8, 2)
    reports = []
    vectors, outcomes = _prepared(Protocol.AP, params)
    for outcome, vec in zip(outcomes, vectors):
        c_state = vec.conj() @ phi
        prob = float(np.vdot(c_state, c_state).real)
        reports.append(_report(Protocol.AP, outcome, c_state, prob, 1.0, psi))
    return reports


def run_proposed_protocol_exact(params: WParams, inp: InputQubit) -> list[ProtocolRunReport]:
    """Born-rule evolution of the two-qubit-measurement protocol.

    Alice applies ``F`` / ``I-F`` to qubit B. On ``F`` she measures ``x, A``
    in the normalized P-vector basis and Bob corrects; on ``I-F`` the run
    fails and the stranded ``x, A, C`` state is recorded.
    """
    psi = _check_input(inp).vector
    f, not_f = build_branch_projectors()
    phi = np.kron(psi, make_w_state(_resource(params)))
    ups1 = np.kron(f.matrix, qmath.I2) @ phi
    ups2 = np.kron(not_f.matrix, qmath.I2) @ phi
    p1 = float(np.vdot(ups1, ups1).real)
    p2 = float(np.vdot(ups2, ups2).real)
    xac = ups1.reshape(2, 2, 2, 2)[:, :, 0, :].reshape(4, 2)

    vectors, outcomes = _prepared(Protocol.PROPOSED, params)
    reports = []
    for outcome, vec in zip(outcomes[:-1], vectors):
        c_state = vec.conj() @ xac
        prob = float(np.vdot(c_state, c_state).real)
        reports.append(_report(Protocol.PROPOSED, outcome, c_state, prob, p1, psi))

    stranded = ups2.reshape(2, 2, 2, 2)[:, :, 1, :].reshape(8)
    stranded = qmath.normalize(stranded) if p2 > PROB_EPS else None
    reports.append(ProtocolRunReport(Protocol.PROPOSED, FAILURE, p2, 1.0 if p2 > PROB_EPS else 0.0,
                                     FAILURE, p2, "none", None, None, False, stranded))
    return reports


def run_protocol_exact(protocol: Protocol | str, params: WParams, inp: InputQubit) -> list[ProtocolRunReport]:
    if Protocol(protocol) is Protocol.AP:
        return run_ap_protocol_exact(params, inp)
    return run_proposed_protocol_exact(params, inp)


# --- Monte Carlo -----------------------------------------------------------


def trial_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials ``start .. start+count-1``, shape ``(count, 8)``.

    Trial ``t`` always reads Philox counter blocks ``2t`` and ``2t+1`` under
    key ``seed``, so any chunking of the trial range sees the same numbers.
    """
    if not 0 <= seed < 1 << 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    gen = np.random.Philox(key=seed)
    gen.advance(start * UNIFORMS_PER_TRIAL // 4)
    raw = gen.random_raw(count * UNIFORMS_PER_TRIAL).reshape(count, UNIFORMS_PER_TRIAL)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def _box_muller(u: np.ndarray) -> np.ndarray:
    """Four normals per row from uniforms in columns 0-3."""
    r1 = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    r2 = np.sqrt(-2.0 * np.log1p(-u[:, 2]))
    t1, t2 = 2 * np.pi * u[:, 1], 2 * np.pi * u[:, 3]
    return np.stack([r1 * np.cos(t1), r1 * np.sin(t1), r2 * np.cos(t2), r2 * np.sin(t2)], axis=1)


def _pick(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    cum = np.cumsum(probs, axis=1)
    idx = (u[:, None] * cum[:, -1:] >= cum).sum(axis=1)
    return np.minimum(idx, probs.shape[1] - 1)


@dataclass(frozen=True)
class SampleSummary:
    protocol: Protocol
    params: WParams
    input_mode: str
    trials: int
    seed: int
    outcome_labels: tuple[str, ...]
    outcome_counts: tuple[int, ...]
    expected_probabilities: tuple[float, ...]
    branch_counts: dict[str, int]
    expected_branch_probabilities: dict[str, float]
    fidelity_count: int
    mean_fidelity: float | None
    fidelity_standard_error: float | None
    success_count: int
    input_state: InputQubit | None = None

    @property
    def outcome_frequencies(self) -> tuple[float, ...]:
        return tuple(c / self.trials for c in self.outcome_counts)

    @property
    def outcome_standard_errors(self) -> tuple[float, ...]:
        return tuple(math.sqrt(f * (1 - f) / self.trials) for f in self.outcome_frequencies)

    @property
    def branch_frequencies(self) -> dict[str, float]:
        return {k: c / self.trials for k, c in self.branch_counts.items()}

    @property
    def branch_standard_errors(self) -> dict[str, float]:
        return {k: math.sqrt(f * (1 - f) / self.trials) for k, f in self.branch_frequencies.items()}

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol.value,
            "params": self.params.to_dict(),
            "input": self.input_mode,
            "trials": self.trials,
            "seed": self.seed,
            "outcomes": [
                {"label": lab, "count": c, "frequency": f, "standard_error": se, "expected_probability": p}
                for lab, c, f, se, p in zip(self.outcome_labels, self.outcome_counts, self.outcome_frequencies,
                                            self.outcome_standard_errors, self.expected_probabilities)
            ],
            "branches": [
                {"label": k, "count": self.branch_counts[k], "frequency": self.branch_frequencies[k],
                 "standard_error": self.branch_standard_errors[k],
                 "expected_probability": self.expected_branch_probabilities[k]}
                for k in self.branch_counts
            ],
            "fidelity_count": self.fidelity_count,
            "mean_fidelity": self.mean_fidelity,
            "fidelity_standard_error": self.fidelity_standard_error,
            "success_count": self.success_count,
            "success_rate": self.success_count / self.trials,
        }


InputSampler = Union[str, InputQubit]


def _run_chunk(outcomes: list[Outcome], two_stage: bool, fixed: np.ndarray | None,
               seed: int, start: int, count: int):
    u = trial_uniforms(seed, start, count)
    if fixed is None:
        amps = _box_muller(u)
        psi = amps[:, 0::2] + 1j * amps[:, 1::2]
        psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    else:
        psi = np.broadcast_to(fixed, (count, 2))

    # Born probabilities of every outcome for every trial's input
    images = np.stack([psi @ o.kraus.T for o in outcomes], axis=1)  # (count, K, 2)
    probs = np.sum(np.abs(images) ** 2, axis=2)
    if two_stage:
        # branch first, then the Bell-type outcome conditional on F
        p_fail = probs[:, -1]
        failed = u[:, 4] < p_fail
        inner = _pick(probs[:, :-1], u[:, 5])
        choice = np.where(failed, len(outcomes) - 1, inner)
    else:
        choice = _pick(probs, u[:, 5])

    fid = np.full(count, np.nan)
    for k, o in enumerate(outcomes):
        mask = choice == k
        if o.branch == FAILURE or not mask.any():
            continue
        out = psi[mask] @ o.corrected.T
        ov = np.abs(np.sum(psi[mask].conj() * out, axis=1)) ** 2
        fid[mask] = np.minimum(1.0, ov / np.sum(np.abs(out) ** 2, axis=1))
    return choice, fid


def run_monte_carlo(protocol: Protocol | str, params: WParams, input_sampler: InputSampler = "haar",
                    trials: int = 1000, seed: int = 0, workers: int = 1,
                    chunk_size: int = 1 << 16) -> SampleSummary:
    """Sample protocol runs with Born-rule outcome statistics.

    Parameters
    ----------
    input_sampler : "haar" or InputQubit
        Draw a fresh Haar-random input per trial, or teleport a fixed qubit.
    trials : int
        Number of independent runs, at least 1.
    seed : int
        Unsigned 64-bit key of the counter-based stream. Trial ``t`` uses its
        own slice of the stream, so the summary does not depend on
        ``workers`` or ``chunk_size``.
    """
    protocol = Protocol(protocol)
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be a positive integer")
    trials = int(trials)
    if isinstance(input_sampler, str):
        if input_sampler != "haar":
            raise ValueError(f"unknown input sampler {input_sampler!r}")
        fixed = None
        input_mode = "haar"
    else:
        fixed = _check_input(input_sampler).vector
        input_mode = "fixed"

    outcomes = protocol_outcomes(protocol, params)
    two_stage = protocol is Protocol.PROPOSED
    starts = range(0, trials, chunk_size)
    jobs = [(s, min(chunk_size, trials - s)) for s in starts]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _run_chunk(outcomes, two_stage, fixed, seed, *j), jobs))
    else:
        parts = [_run_chunk(outcomes, two_stage, fixed, seed, *j) for j in jobs]
    choice = np.concatenate([p[0] for p in parts])
    fid = np.concatenate([p[1] for p in parts])

    counts = np.bincount(choice, minlength=len(outcomes))
    if fixed is None:
        # average over Haar inputs: E[psi psi^dag] = I/2
        expected = [float(np.sum(np.abs(o.kraus) ** 2) / 2) for o in outcomes]
    else:
        expected = [float(np.sum(np.abs(o.kraus @ fixed) ** 2)) for o in outcomes]

    if protocol is Protocol.PROPOSED:
        n_fail = int(counts[-1])
        branch_counts = {"F": trials - n_fail, FAILURE: n_fail}
        branch_expected = {"F": 1 - expected[-1], FAILURE: expected[-1]}
    else:
        branch_counts = {"all": trials}
        branch_expected = {"all": 1.0}

    valid = fid[~np.isnan(fid)]
    n_fid = int(valid.size)
    if n_fid:
        mean = math.fsum(valid.tolist()) / n_fid
        var = math.fsum(((valid - mean) ** 2).tolist()) / (n_fid - 1) if n_fid > 1 else 0.0
        se = math.sqrt(var / n_fid)
    else:
        mean = se = None
    in_basis = np.array([o.in_basis for o in outcomes])
    success = int(np.sum(in_basis[choice] & (np.nan_to_num(fid, nan=0.0) >= 1 - SUCCESS_ATOL)))

    return SampleSummary(
        protocol=protocol,
        params=params,
        input_mode=input_mode,
        trials=trials,
        seed=seed,
        outcome_labels=tuple(o.label for o in outcomes),
        outcome_counts=tuple(int(c) for c in counts),
        expected_probabilities=tuple(expected),
        branch_counts=branch_counts,
        expected_branch_probabilities=branch_expected,
        fidelity_count=n_fid,
        mean_fidelity=mean,
        fidelity_standard_error=se,
        success_count=success,
        input_state=None if fixed is None else make_input_qubit(*fixed),
    )


def haar_input_for_seed(seed: int) -> InputQubit:
    """The Haar input trial 0 of ``seed`` would draw; used by exact runs."""
    amps = _box_muller(trial_uniforms(seed, 0, 1))[0]
    a, b = qmath.normalize([amps[0] + 1j * amps[1], amps[2] + 1j * amps[3]])
    return make_input_qubit(a, b)
