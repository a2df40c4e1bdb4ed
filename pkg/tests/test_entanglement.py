import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from wteleport import entanglement as ent
from wteleport import qmath
from wteleport.states import WParams, ghz_state, make_w_state, proposed_family

S2 = 1 / math.sqrt(2)
seeds = st.integers(0, 2**32 - 1)


def random_pure3(seed: int) -> np.ndarray:
    r = np.random.default_rng(seed)
    return qmath.normalize(r.normal(size=8) + 1j * r.normal(size=8))


def random_w(seed: int, basis: str = "resource") -> WParams:
    r = np.random.default_rng(seed)
    z = r.normal(size=3) + 1j * r.normal(size=3)
    return WParams(*(z / np.linalg.norm(z)), basis=basis)


def random_local_unitary(seed: int) -> np.ndarray:
    r = np.random.default_rng(seed)
    return qmath.tensor(*(qmath.random_unitary_2(r) for _ in range(3)))


def test_bell_and_product():
    bell = qmath.density(qmath.normalize(qmath.ket("00") + qmath.ket("11")))
    assert ent.concurrence(bell) == pytest.approx(1)
    assert ent.negativity(bell) == pytest.approx(1)
    prod = qmath.density(qmath.ket("01"))
    assert ent.concurrence(prod) == pytest.approx(0, abs=1e-12)
    assert ent.negativity(prod) == pytest.approx(0, abs=1e-12)


def test_werner_threshold():
    bell = qmath.density(qmath.normalize(qmath.ket("01") - qmath.ket("10")))
    for p in (0.2, 1 / 3, 0.6, 0.9):
        rho = p * bell + (1 - p) * np.eye(4) / 4
        assert ent.concurrence(rho) == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_concurrence_matches_oracle_on_mixed_states(seed):
    r = np.random.default_rng(seed)
    g = r.normal(size=(4, 4)) + 1j * r.normal(size=(4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    assert abs(ent.concurrence(rho) - oracles.concurrence_oracle(rho)) < 1e-9
    assert abs(ent.negativity(rho) - oracles.negativity_oracle(rho)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_pure_two_qubit_concurrence_equals_negativity(seed):
    r = np.random.default_rng(seed)
    psi = qmath.normalize(r.normal(size=4) + 1j * r.normal(size=4))
    rho = qmath.density(psi)
    assert abs(ent.concurrence(rho) - oracles.pure_pair_concurrence(psi)) < 1e-9
    assert abs(ent.negativity(rho) - ent.concurrence(rho)) < 1e-9


def test_inputs_validated():
    with pytest.raises(ValueError):
        ent.concurrence(np.eye(8) / 8)
    with pytest.raises(ValueError):
        ent.negativity(np.eye(4))
    with pytest.raises(ValueError):
        ent.pairwise_concurrences(np.ones(8))
    with pytest.raises(ValueError):
        ent.one_vs_rest_concurrence(ghz_state(), 3)


@settings(max_examples=80, deadline=None)
@given(seed=seeds, basis=st.sampled_from(["resource", "canonical"]))
def test_closed_forms_match_general_route(seed, basis):
    p = random_w(seed, basis)
    psi = make_w_state(p)
    c = ent.pairwise_concurrences(psi)
    n = ent.pairwise_negativities(psi)
    assert np.allclose(c.as_tuple(), ent.concurrence_closed_form(p).as_tuple(), atol=1e-9)
    assert np.allclose(n.as_tuple(), ent.negativity_closed_form(p).as_tuple(), atol=1e-9)
    # and against the loop oracles directly
    for value, pair in zip(c.as_tuple(), ((0, 1), (1, 2), (0, 2))):
        assert abs(value - oracles.pair_concurrence_pure3(psi, pair)) < 1e-9
    rho_ab = oracles.partial_trace_loops(psi, [0, 1])
    assert abs(n.nab - oracles.negativity_oracle(rho_ab)) < 1e-9


def test_special_state_values():
    p = WParams(0.5, S2, 0.5)
    c = ent.pairwise_concurrences(make_w_state(p))
    assert np.allclose(c.as_tuple(), (0.5, S2, S2), atol=1e-10)
    n = ent.pairwise_negativities(make_w_state(p))
    assert n.nab == pytest.approx(math.sqrt(0.5) - 0.5, abs=1e-10)
    # N_BC and N_CA both come out at exactly one half
    assert n.nbc == pytest.approx(0.5, abs=1e-10)
    assert n.nca == pytest.approx(0.5, abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(seed=seeds)
def test_o_operators_square_to_concurrences_for_real_amplitudes(seed):
    l = oracles.random_w_moduli(np.random.default_rng(seed), 1)[0]
    signs = np.random.default_rng(seed + 7).choice([-1, 1], size=3)
    p = WParams(*(l * signs), basis="canonical")
    o = np.array(ent.o_operator_expectations(make_w_state(p)))
    c = ent.concurrence_closed_form(p)
    assert np.allclose(o ** 2 / 4, np.array([c.cab, c.cac, c.cbc]) ** 2, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_o_operators_bound_concurrences_with_phases(seed):
    p = random_w(seed, "canonical")
    o = np.abs(ent.o_operator_expectations(make_w_state(p))) / 2
    c = ent.concurrence_closed_form(p)
    assert np.all(o <= np.array([c.cab, c.cac, c.cbc]) + 1e-12)


def test_ghz_and_product_three_pi():
    g = ent.three_pi(ghz_state())
    assert g.pi_abc == pytest.approx(1, abs=1e-9)
    assert g.tangle == pytest.approx(1, abs=1e-9)
    prod = ent.three_pi(qmath.ket("010"))
    assert abs(prod.pi_abc) < 1e-12 and abs(prod.tangle) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_three_pi_local_unitary_invariance(seed):
    psi = random_pure3(seed)
    moved = random_local_unitary(seed + 1) @ psi
    a, b = ent.three_pi(psi), ent.three_pi(moved)
    assert abs(a.pi_abc - b.pi_abc) < 1e-9
    assert abs(a.tangle - b.tangle) < 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_w_class_tangle_vanishes_and_pi_nonnegative(seed):
    p = random_w(seed)
    t = ent.three_pi(make_w_state(p))
    assert abs(t.tangle) < 1e-9
    assert min(t.pi_a, t.pi_b, t.pi_c) > -1e-9
    assert abs(t.pi_abc - ent.three_pi_w_closed_form(p)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_one_vs_rest_matches_purity_oracle(seed):
    psi = random_pure3(seed)
    for q in range(3):
        rho = oracles.partial_trace_loops(psi, [q])
        expected = math.sqrt(max(0.0, 2 * (1 - np.real(np.trace(rho @ rho)))))
        assert abs(ent.one_vs_rest_concurrence(psi, q) - expected) < 1e-12


@settings(max_examples=60, deadline=None)
@given(m=st.floats(1e-3, 1e3))
def test_proposed_family_negativities_from_concurrences(m):
    p = proposed_family(m)
    c = ent.concurrence_closed_form(p)
    assert ent.proposed_pair_feasible(c.cab, c.cac)
    nab, nca = ent.proposed_negativities(c.cab, c.cac)
    n = ent.negativity_closed_form(p)
    assert abs(nab - n.nab) < 1e-9 and abs(nab - n.nbc) < 1e-9 and abs(nca - n.nca) < 1e-9


@settings(max_examples=60, deadline=None)
@given(m=st.floats(1e-3, 1e3))
def test_proposed_closed_form_three_pi_is_the_component_sum(m):
    p = proposed_family(m)
    c = ent.concurrence_closed_form(p)
    t = ent.three_pi(make_w_state(p))
    closed = ent.three_pi_closed_form_proposed(c.cab, c.cac)
    assert abs(closed - (t.pi_a + t.pi_b + t.pi_c)) < 1e-9
    assert abs(closed - 3 * t.pi_abc) < 1e-9


def test_proposed_closed_form_rejects_infeasible_pair():
    assert ent.three_pi_closed_form_proposed(0, 0) == 0
    with pytest.raises(ValueError):
        ent.three_pi_closed_form_proposed(0.5, 0.5)


def test_report_dict():
    d = ent.entanglement_report(make_w_state(WParams(0.5, S2, 0.5))).to_dict()
    assert set(d) == {"concurrences", "negativities", "one_vs_rest", "tangle", "pi", "pi_abc", "o_expectations"}
