import numpy as np
import pytest

from switchlab.agents import (
    DIMS,
    HBAR,
    AgentAmplitudes,
    ModelState,
    apply_agent_a_then_b,
    apply_agent_b_then_a,
    crossing_rotation_angle,
    postselect,
    run_switch_model,
    trigger_params,
    trigger_timeline,
)

E = {i: np.eye(5)[i - 1] for i in range(1, 6)}  # target basis vectors


def generic_amps(rng, phases=False):
    def mod():
        return np.sqrt(rng.uniform(0.1, 0.9))

    def ph():
        return rng.uniform(0, 2 * np.pi) if phases else 0.0

    return AgentAmplitudes(
        c_1a=mod() * np.exp(1j * ph()),
        c_4a=mod() * np.exp(1j * ph()),
        c_1b=mod() * np.exp(1j * ph()),
        c_2b=mod() * np.exp(1j * ph()),
        f_ba=mod() * np.exp(1j * ph()),
        f_ab=mod() * np.exp(1j * ph()),
        delta_a=tuple(ph() for _ in range(5)),
        delta_b=tuple(ph() for _ in range(5)),
        gamma_ba=ph(),
        gamma_ab=ph(),
    )


def test_ideal_a_then_b_full_absorption():
    out = apply_agent_a_then_b(AgentAmplitudes(), ModelState.from_target(E[1]))
    expected = np.zeros(DIMS, dtype=complex)
    expected[3, 4, 2, 0, 0] = 1.0  # |A_3>|B_5>|e_3>, no heralds
    assert np.abs(out.tensor - expected).max() < 1e-12


def test_no_coupling_input_decays_to_psi00():
    out = apply_agent_a_then_b(AgentAmplitudes(), ModelState.from_target(E[3]))
    expected = np.zeros(DIMS, dtype=complex)
    expected[5, 4, 2, 1, 1] = 1.0  # agents decayed, target unchanged, both heralds
    assert np.abs(out.tensor - expected).max() < 1e-12


def test_ideal_b_then_a_full_absorption():
    out = apply_agent_b_then_a(AgentAmplitudes(), ModelState.from_target(E[1]))
    expected = np.zeros(DIMS, dtype=complex)
    expected[5, 2, 4, 0, 0] = 1.0  # |A_5>|B_3>|e_5>
    assert np.abs(out.tensor - expected).max() < 1e-12


def test_b_then_a_on_e4_only_a_scatters():
    out = apply_agent_b_then_a(AgentAmplitudes(), ModelState.from_target(E[4]))
    expected = np.zeros(DIMS, dtype=complex)
    expected[5, 4, 4, 0, 1] = 1.0  # e_5 out, B heralded
    assert np.abs(out.tensor - expected).max() < 1e-12


def test_branch_amplitudes_match_term_by_term():
    # amplitude oracle: coefficients of the four-branch expansion
    rng = np.random.default_rng(0)
    amps = generic_amps(rng)
    alpha = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    alpha /= np.linalg.norm(alpha)
    out = apply_agent_a_then_b(amps, ModelState.from_target(alpha)).tensor
    c1a, c4a = amps.c_a(1), amps.c_a(4)
    c1b, c2b = amps.c_b(1), amps.c_b(2)
    d = amps.d_a
    db = amps.d_b
    assert abs(out[3, 4, 2, 0, 0] - alpha[0] * c1a * amps.f_ba) < 1e-12
    assert abs(out[3, 4, 1, 0, 1] - alpha[0] * c1a * amps.g_ba) < 1e-12
    assert abs(out[5, 2, 3, 1, 0] - alpha[0] * d(1) * c1b) < 1e-12
    assert abs(out[5, 4, 2, 1, 0] - alpha[1] * d(2) * c2b) < 1e-12
    assert abs(out[5, 4, 4, 0, 1] - alpha[3] * c4a * db(5)) < 1e-12
    for i in range(5):
        assert abs(out[5, 4, i, 1, 1] - alpha[i] * d(i + 1) * db(i + 1)) < 1e-12


@pytest.mark.parametrize("order", [apply_agent_a_then_b, apply_agent_b_then_a])
def test_unitarity_for_arbitrary_amplitudes(order):
    rng = np.random.default_rng(1)
    for _ in range(25):
        amps = generic_amps(rng, phases=True)
        alpha = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        alpha /= np.linalg.norm(alpha)
        out = order(amps, ModelState.from_target(alpha))
        assert abs(np.linalg.norm(out.tensor) - 1.0) < 1e-9


def test_rejects_malformed_input_support():
    bad = np.zeros(DIMS, dtype=complex)
    bad[0, 0, 0, 0, 0] = 1.0  # agent A in A_0, not armed
    with pytest.raises(ValueError):
        apply_agent_a_then_b(AgentAmplitudes(), ModelState(bad))


def test_postselect_ideal_run():
    out = apply_agent_a_then_b(AgentAmplitudes(), ModelState.from_target(E[1]))
    selected, prob = postselect(out, 3)
    assert abs(prob - 1.0) < 1e-12
    assert abs(selected.tensor[3, 4, 2, 0, 0] - 1.0) < 1e-12


def test_postselect_orthogonal_input():
    out = apply_agent_a_then_b(AgentAmplitudes(), ModelState.from_target(E[3]))
    selected, prob = postselect(out, 3)
    assert selected is None and prob == 0.0


def test_postselect_completeness():
    rng = np.random.default_rng(2)
    amps = generic_amps(rng, phases=True)
    alpha = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    alpha /= np.linalg.norm(alpha)
    out = apply_agent_a_then_b(amps, ModelState.from_target(alpha))
    total = sum(postselect(out, zeta)[1] for zeta in range(4))
    assert abs(total - 1.0) < 1e-9


def test_phase_covariance():
    # free phases shift branch phases but never branch probabilities
    rng = np.random.default_rng(3)
    alpha = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    alpha /= np.linalg.norm(alpha)
    base = generic_amps(rng)
    shifted = AgentAmplitudes(
        c_1a=base.c_1a,
        c_4a=base.c_4a,
        c_1b=base.c_1b,
        c_2b=base.c_2b,
        f_ba=base.f_ba,
        f_ab=base.f_ab,
        delta_a=tuple(0.7 for _ in range(5)),
        delta_b=tuple(-0.4 for _ in range(5)),
        gamma_ba=1.1,
        gamma_ab=0.2,
    )
    out0 = apply_agent_a_then_b(base, ModelState.from_target(alpha)).tensor
    out1 = apply_agent_a_then_b(shifted, ModelState.from_target(alpha)).tensor
    assert np.abs(np.abs(out0) - np.abs(out1)).max() < 1e-12


def test_run_switch_model_e1_superposes_orders():
    for sign in (+1, -1):
        result = run_switch_model(AgentAmplitudes(), E[1], zeta=3, sign=sign)
        expected = (E[3] + sign * E[5]) / np.sqrt(2.0)
        assert result.target is not None
        assert np.abs(result.target - expected).max() < 1e-9
        assert abs(result.probability - 0.5) < 1e-12


def test_run_switch_model_e4_is_trivial():
    result = run_switch_model(AgentAmplitudes(), E[4], zeta=2, sign=+1)
    assert np.abs(result.target - E[5]).max() < 1e-9
    assert abs(result.probability - 1.0) < 1e-12


def test_run_switch_model_trivial_when_alpha1_zero():
    # both orders act identically on inputs without an e_1 component
    rng = np.random.default_rng(4)
    amps = generic_amps(rng)
    alpha = np.array([0.0, 0.6, 0.0, 0.8, 0.0], dtype=complex)
    ba = apply_agent_a_then_b(amps, ModelState.from_target(alpha)).tensor
    ab = apply_agent_b_then_a(amps, ModelState.from_target(alpha)).tensor
    assert np.abs(ba - ab).max() < 1e-12


def test_zeta3_state_independent_of_other_components():
    rng = np.random.default_rng(5)
    amps = generic_amps(rng)
    res1 = run_switch_model(amps, E[1], zeta=3, sign=+1)
    mixed = np.array([0.5, 0.4, 0.3, 0.5, 0.4], dtype=complex)
    res2 = run_switch_model(amps, mixed, zeta=3, sign=+1)
    overlap = abs(np.vdot(res1.residual.reshape(-1), res2.residual.reshape(-1)))
    assert abs(overlap - 1.0) < 1e-9


def test_run_switch_model_zero_probability_paths():
    with pytest.raises(ValueError):
        run_switch_model(AgentAmplitudes(), E[3], zeta=3, sign=+1)
    with pytest.raises(ValueError):
        # identical branches cancel under the minus outcome
        run_switch_model(AgentAmplitudes(), E[4], zeta=2, sign=-1)


def test_trigger_params_basic():
    p = trigger_params(1.0, 1e-6, 1e-21, 1e-25)
    assert abs(p.omega - np.pi / 2) < 1e-15
    assert abs(p.period - 4.0) < 1e-12
    want_amp = 2 * 1e-6 * 1e-21 / (np.pi * HBAR * p.omega)
    assert abs(p.amplitude - want_amp) < 1e-6 * want_amp


def test_trigger_regime_flags():
    good = trigger_params(1.0, 1e-6, 1e-30, 1e-20)
    assert good.regime_ok
    # width comparable to sigma breaks the localization condition
    bad = trigger_params(1.0, 1e-6, 1e-21, 1e-25)
    assert not bad.regime_flags["width_over_sigma"]
    assert not bad.regime_ok


def test_crossing_rotation_angle_is_quarter_turn():
    p = trigger_params(1.0, 1e-6, 1e-30, 1e-20)
    assert abs(crossing_rotation_angle(p) - np.pi / 2) < 1e-12
    p2 = trigger_params(0.35, 2e-6, 5e-29, 3e-19)
    assert abs(crossing_rotation_angle(p2) - np.pi / 2) < 1e-12


def test_crossing_angle_linear_in_potential():
    # doubling V0 at fixed amplitude (bypassing the constructor-derived A)
    from switchlab.agents import TriggerParams

    p = trigger_params(1.0, 1e-6, 1e-30, 1e-20)
    bumped = TriggerParams(
        p.omega, p.tau_star, p.interaction_width, 2 * p.potential, p.mass, amplitude=p.amplitude
    )
    assert abs(crossing_rotation_angle(bumped) - 2 * crossing_rotation_angle(p)) < 1e-12


def test_rotation_takes_a0_to_a1():
    p = trigger_params(1.0, 1e-6, 1e-30, 1e-20)
    theta = crossing_rotation_angle(p)
    # 2x2 matrix exponential oracle: exp(-i theta s_x) = cos t - i sin t s_x
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    u = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * sx
    rotated = u @ np.array([1, 0], dtype=complex)
    fidelity = abs(np.vdot(np.array([0, 1]), rotated))
    assert abs(fidelity - 1.0) < 1e-12


def test_trigger_timeline():
    p = trigger_params(1.0, 1e-6, 1e-30, 1e-20)
    start = trigger_timeline(p, 0.0)
    assert start.level == "A0"
    assert abs(start.mean_position - p.amplitude) < 1e-12
    end = trigger_timeline(p, p.tau_star)
    assert end.level == "A1"
    assert abs(end.mean_position) < 1e-6 * p.amplitude
    window = trigger_timeline(p, p.tau_star - 0.5 * p.crossing_window)
    assert window.level == "rotating"
    # the window is narrow on the scale of the quarter period
    assert p.crossing_window < 0.01 * p.tau_star
