import numpy as np
import pytest

from switchlab.linalg import ID2, PAULI_X, PAULI_Y, PAULI_Z, kron
from switchlab.ops import choi_of_operation, rand_cptp, rand_density, rand_unitary
from switchlab.order import (
    CHSH_SETTINGS,
    SwitchSpec,
    TEMPORAL_ORDER_UNITARIES,
    alice_reduced_matrix,
    bob_reduced_matrix,
    chsh_value,
    contract_switch_vector,
    control_measurement,
    game_probability,
    ocb_strategy,
    success_probability,
    switch_process_vector,
    switch_supermap_state,
    temporal_order_state,
)
from switchlab.process import (
    causal_mixture,
    channel_process,
    channel_process_reverse,
    ocb_process,
    state_process,
)

P_OCB = (2.0 + np.sqrt(2.0)) / 4.0
KET0 = np.array([1, 0], dtype=complex)


def test_game_probabilities_normalize():
    w = ocb_process()
    s = ocb_strategy()
    for a in range(2):
        for b in range(2):
            for bp in range(2):
                total = sum(
                    game_probability(w, s, x, y, a, b, bp) for x in range(2) for y in range(2)
                )
                assert abs(total - 1.0) < 1e-9


def test_ocb_conditional_guess_probability():
    # P(y=a | a, b, b'=1) = (2 + sqrt 2)/4 for every a, b
    w = ocb_process()
    s = ocb_strategy()
    for a in range(2):
        for b in range(2):
            p = sum(game_probability(w, s, x, a, a, b, 1) for x in range(2))
            assert abs(p - P_OCB) < 1e-9


def test_ocb_success_probability():
    assert abs(success_probability(ocb_process(), ocb_strategy()) - P_OCB) < 1e-9


def test_success_invariant_under_bob_free_state():
    w = ocb_process()
    rng = np.random.default_rng(0)
    for _ in range(5):
        s = ocb_strategy(bob_free_state=rand_density(2, rng))
        assert abs(success_probability(w, s) - P_OCB) < 1e-9


def test_success_on_no_signaling_process_is_half():
    w = state_process(np.eye(4) / 4, (2, 2, 2, 2))
    assert abs(success_probability(w, ocb_strategy()) - 0.5) < 1e-9


def test_reduced_matrices_match_closed_forms():
    w = ocb_process()
    s = ocb_strategy()
    for a in range(2):
        got = bob_reduced_matrix(w, s, a)
        want = kron(0.5 * (ID2 + (-1) ** a / np.sqrt(2) * PAULI_Z), ID2)
        assert np.abs(got - want).max() < 1e-9
    for b in range(2):
        got = alice_reduced_matrix(w, s, b, bp=0)
        want = kron(0.5 * (ID2 + (-1) ** b / np.sqrt(2) * PAULI_Z), ID2)
        assert np.abs(got - want).max() < 1e-9


def test_causal_bound_on_random_separable_processes():
    # Convex mixtures of one-way channel processes never beat 3/4.
    rng = np.random.default_rng(1)
    s = ocb_strategy()
    worst = 0.0
    for _ in range(200):
        w_ba = channel_process(rand_density(2, rng), choi_of_operation(rand_cptp(2, 2, 2, rng)))
        w_ab = channel_process_reverse(
            rand_density(2, rng), choi_of_operation(rand_cptp(2, 2, 2, rng))
        )
        mixed = causal_mixture(w_ab, w_ba, float(rng.uniform()))
        worst = max(worst, success_probability(mixed, s))
    assert worst <= 0.75 + 1e-9


def test_causal_bound_is_tight_for_identity_channel():
    # B -> A identity channel with Bob fed |x+>: his x outcome is deterministic,
    # so the conditional encoding never flips and Alice reads b exactly: 3/4.
    from switchlab.ops import Operation

    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    w = channel_process(proj(plus), choi_of_operation(Operation.from_unitary(ID2)))
    got = success_probability(w, ocb_strategy())
    assert abs(got - 0.75) < 1e-9


def proj(v):
    return np.outer(v, v.conj())


def test_switch_supermap_commuting_case():
    rng = np.random.default_rng(2)
    u = rand_unitary(2, rng)
    spec = SwitchSpec()
    state = switch_supermap_state(u, u, spec)
    # control disentangles: (c0|0> + c1|1>) (x) U^2|psi>
    expected = np.kron(u @ u @ spec.target_state, np.array([1, 1]) / np.sqrt(2))
    overlap = abs(np.vdot(expected, state))
    assert abs(overlap - 1.0) < 1e-9


def test_switch_supermap_direct_product_oracle():
    spec = SwitchSpec()
    state = switch_supermap_state(PAULI_X, PAULI_Z, spec)
    psi = spec.target_state
    expected = (
        np.kron(PAULI_Z @ PAULI_X @ psi, [1, 0]) + np.kron(PAULI_X @ PAULI_Z @ psi, [0, 1])
    ) / np.sqrt(2)
    assert np.abs(state - expected).max() < 1e-12


def test_switch_traced_out_control_is_order_mixture():
    rng = np.random.default_rng(3)
    ua, ub = rand_unitary(2, rng), rand_unitary(2, rng)
    spec = SwitchSpec()
    state = switch_supermap_state(ua, ub, spec)
    rho = np.outer(state, state.conj())
    from switchlab.linalg import partial_trace

    target = partial_trace(rho, (2, 2), keep=(0,))
    psi = spec.target_state
    rho_t = np.outer(psi, psi.conj())
    ba = ub @ ua
    ab = ua @ ub
    expected = 0.5 * (ba @ rho_t @ ba.conj().T + ab @ rho_t @ ab.conj().T)
    assert np.abs(target - expected).max() < 1e-9


def test_switch_process_vector_norm_and_identity_contraction():
    spec = SwitchSpec()
    w = switch_process_vector(spec)
    assert w.shape == (64,)
    # unnormalized |1>> links: squared norm is 2 * 2 per branch
    assert abs(np.linalg.norm(w) - 2.0) < 1e-12
    out = contract_switch_vector(w, ID2, ID2)
    psi = spec.target_state
    expected = (np.kron(psi, [1, 0]) + np.kron(psi, [0, 1])) / np.sqrt(2)
    assert np.abs(out - expected).max() < 1e-12


def test_switch_contraction_identity_random_unitaries():
    rng = np.random.default_rng(4)
    for trial in range(50):
        psi = rand_unitary(2, rng)[:, 0]
        spec = SwitchSpec(target_state=psi)
        w = switch_process_vector(spec)
        ua, ub = rand_unitary(2, rng), rand_unitary(2, rng)
        contracted = contract_switch_vector(w, ua, ub)
        # closed form of the contraction
        expected = (
            np.kron(ub @ ua @ psi, [1, 0]) + np.kron(ua @ ub @ psi, [0, 1])
        ) / np.sqrt(2)
        assert np.abs(contracted - expected).max() < 1e-9
        # and the supermap route agrees with fidelity 1
        supermap = switch_supermap_state(ua, ub, spec)
        fidelity = abs(np.vdot(contracted, supermap)) ** 2
        assert abs(fidelity - 1.0) < 1e-9


def test_control_measurement_identity_case():
    spec = SwitchSpec()
    state = switch_supermap_state(ID2, ID2, spec)
    target, prob = control_measurement(state, +1)
    assert abs(prob - 1.0) < 1e-12
    assert abs(abs(np.vdot(target, spec.target_state)) - 1.0) < 1e-12
    none_target, p_minus = control_measurement(state, -1)
    assert none_target is None and p_minus == 0.0


def test_control_measurement_noncommuting_pair():
    rng = np.random.default_rng(5)
    ua, ub = rand_unitary(2, rng), rand_unitary(2, rng)
    spec = SwitchSpec()
    state = switch_supermap_state(ua, ub, spec)
    psi = spec.target_state
    for sign in (+1, -1):
        target, prob = control_measurement(state, sign)
        raw = (ub @ ua + sign * ua @ ub) @ psi / 2.0
        assert abs(prob - np.linalg.norm(raw) ** 2) < 1e-9
        if target is not None:
            assert abs(abs(np.vdot(target, raw / np.linalg.norm(raw))) - 1.0) < 1e-9


def test_control_measurement_anticommuting():
    # (s_z s_x + s_x s_z)|0> = 0, so the + outcome never fires and the -
    # outcome collects everything.
    spec = SwitchSpec()
    state = switch_supermap_state(PAULI_X, PAULI_Z, spec)
    target_plus, prob_plus = control_measurement(state, +1)
    assert target_plus is None and prob_plus == 0.0
    target_minus, prob_minus = control_measurement(state, -1)
    assert abs(prob_minus - 1.0) < 1e-12
    expected = PAULI_Z @ PAULI_X @ spec.target_state
    assert abs(abs(np.vdot(target_minus, expected)) - 1.0) < 1e-12


def test_charlie_measurement_matches_control_basis():
    from switchlab.order import charlie_measurement

    rng = np.random.default_rng(8)
    ua, ub = rand_unitary(2, rng), rand_unitary(2, rng)
    state = switch_supermap_state(ua, ub, SwitchSpec())
    for sign in (+1, -1):
        plusminus = np.array([1, sign]) / np.sqrt(2)
        projector = kron(ID2, np.outer(plusminus, plusminus.conj()))
        joint, prob = charlie_measurement(state, projector)
        target, prob_ref = control_measurement(state, sign)
        assert abs(prob - prob_ref) < 1e-12
        if target is not None:
            overlap = abs(np.vdot(joint, np.kron(target, plusminus)))
            assert abs(overlap - 1.0) < 1e-9
    with pytest.raises(ValueError):
        charlie_measurement(state, np.eye(4) * 2.0)


def test_temporal_order_state_paper_choice():
    up = KET0
    for sign in (+1, -1):
        state = temporal_order_state(*TEMPORAL_ORDER_UNITARIES, up, up, sign)
        plus = np.array([1, 1]) / np.sqrt(2)
        minus = np.array([1, -1]) / np.sqrt(2)
        expected = (np.kron(plus, plus) + sign * np.kron(minus, minus)) / np.sqrt(2)
        assert abs(abs(np.vdot(state, expected)) - 1.0) < 1e-9


def test_temporal_order_state_trivial_and_degenerate():
    psi1 = np.array([1, 0], dtype=complex)
    psi2 = np.array([0, 1], dtype=complex)
    state = temporal_order_state(ID2, ID2, ID2, ID2, psi1, psi2, +1)
    assert np.abs(state - np.kron(psi1, psi2)).max() < 1e-12
    with pytest.raises(ValueError):
        temporal_order_state(ID2, ID2, ID2, ID2, psi1, psi2, -1)


def test_chsh_on_temporal_order_states():
    up = KET0
    plus_state = temporal_order_state(*TEMPORAL_ORDER_UNITARIES, up, up, +1)
    minus_state = temporal_order_state(*TEMPORAL_ORDER_UNITARIES, up, up, -1)
    assert abs(chsh_value(plus_state) - (-2 * np.sqrt(2))) < 1e-9
    assert abs(chsh_value(minus_state) - (+2 * np.sqrt(2))) < 1e-9


def test_chsh_product_state_within_classical_bound():
    product = np.kron(KET0, KET0)
    assert abs(chsh_value(product)) <= 2.0 + 1e-9


def test_chsh_separable_sweep_stays_classical():
    rng = np.random.default_rng(6)
    for _ in range(50):
        a = rand_unitary(2, rng)[:, 0]
        b = rand_unitary(2, rng)[:, 0]
        assert abs(chsh_value(np.kron(a, b))) <= 2.0 + 1e-9


def test_chsh_rejects_bad_observables():
    with pytest.raises(ValueError):
        chsh_value(np.kron(KET0, KET0), (ID2 * 2, PAULI_Z), (PAULI_Y, PAULI_Z))
