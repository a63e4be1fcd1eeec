"""Indefinite causal order: the guessing game, the quantum switch, and the
CHSH test on temporal-order states.

Bit convention throughout: bit 0 encodes |up> = |0>, bit 1 encodes
|down> = |1>, so the (-1)^x factors in the game Choi operators are literal.
Switch states live on target (x) control, in that factor order.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import ID2, PAULI_X, PAULI_Y, PAULI_Z, is_unitary, kron, partial_trace
from .ops import ChoiOperator, Convention, choi_vector_of_unitary
from .process import probability

__all__ = [
    "GameStrategy",
    "ocb_strategy",
    "game_probability",
    "success_probability",
    "bob_reduced_matrix",
    "alice_reduced_matrix",
    "SwitchSpec",
    "switch_supermap_state",
    "switch_process_vector",
    "contract_switch_vector",
    "control_measurement",
    "chsh_value",
    "CHSH_SETTINGS",
    "temporal_order_state",
    "TEMPORAL_ORDER_UNITARIES",
]


@dataclass(frozen=True)
class GameStrategy:
    """Instrument-element Chois played by Alice and Bob in the causal game.

    `alice_choi(x, a)` and `bob_choi(y, b, bp)` return TRANSPOSED-convention
    Choi operators; summed over the guess bit they must be CPTP.
    """

    alice_choi: object
    bob_choi: object
    bob_free_state: np.ndarray = field(default=None)


def ocb_strategy(bob_free_state=None):
    """The strategies achieving P_succ = (2 + sqrt 2)/4 on the OCB process.

    Alice measures and reprepares in z. For b' = 1 Bob reads z and reprepares
    an arbitrary state; for b' = 0 he measures x and encodes b in z with the
    sign fixed by his outcome.
    """
    rho_b2 = ID2 / 2 if bob_free_state is None else np.asarray(bob_free_state, dtype=complex)

    def alice(x, a):
        m = 0.25 * kron(ID2 + (-1) ** x * PAULI_Z, ID2 + (-1) ** a * PAULI_Z)
        return ChoiOperator(2, 2, m, Convention.TRANSPOSED)

    def bob(y, b, bp):
        if bp == 1:
            m = 0.5 * kron(ID2 + (-1) ** y * PAULI_Z, rho_b2)
        else:
            m = 0.25 * kron(ID2 + (-1) ** y * PAULI_X, ID2 + (-1) ** (b + y) * PAULI_Z)
        return ChoiOperator(2, 2, m, Convention.TRANSPOSED)

    return GameStrategy(alice, bob, rho_b2)


def game_probability(w, strategy, x, y, a, b, bp):
    """P(x, y | a, b, b') for the causal game on process w."""
    return probability(w, strategy.alice_choi(x, a), strategy.bob_choi(y, b, bp))


def success_probability(w, strategy):
    """(1/2)[P(x=b | b'=0) + P(y=a | b'=1)] with uniform random bits."""
    p_x_eq_b = 0.0
    p_y_eq_a = 0.0
    for a in range(2):
        for b in range(2):
            for y in range(2):
                p_x_eq_b += 0.25 * game_probability(w, strategy, b, y, a, b, 0)
            for x in range(2):
                p_y_eq_a += 0.25 * game_probability(w, strategy, x, a, a, b, 1)
    return 0.5 * (p_x_eq_b + p_y_eq_a)


def _reduced(w, other_choi_sum, keep):
    if keep == (2, 3):
        full = kron(other_choi_sum, np.eye(w.d_b_in * w.d_b_out))
    else:
        full = kron(np.eye(w.d_a_in * w.d_a_out), other_choi_sum)
    return partial_trace(w.matrix @ full, w.dims, keep=keep)


def bob_reduced_matrix(w, strategy, a):
    """Tr_A[W (sum_x M(x,a) (x) 1)]: the process Bob faces for Alice bit a."""
    m_sum = sum(strategy.alice_choi(x, a).matrix for x in range(2))
    return _reduced(w, m_sum, keep=(2, 3))


def alice_reduced_matrix(w, strategy, b, bp=0):
    """Tr_B[W (1 (x) sum_y N(y,b,b'))]: the process Alice faces."""
    n_sum = sum(strategy.bob_choi(y, b, bp).matrix for y in range(2))
    return _reduced(w, n_sum, keep=(0, 1))


@dataclass(frozen=True)
class SwitchSpec:
    """Target state and control amplitudes feeding the quantum switch."""

    target_state: np.ndarray = None
    control_amplitudes: tuple = (1 / np.sqrt(2), 1 / np.sqrt(2))

    def __post_init__(self):
        psi = (
            np.array([1, 0], dtype=complex)
            if self.target_state is None
            else np.asarray(self.target_state, dtype=complex)
        )
        if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
            raise ValueError("target state must be normalized")
        c = tuple(complex(x) for x in self.control_amplitudes)
        if abs(abs(c[0]) ** 2 + abs(c[1]) ** 2 - 1.0) > 1e-9:
            raise ValueError("control amplitudes must be normalized")
        object.__setattr__(self, "target_state", psi)
        object.__setattr__(self, "control_amplitudes", c)


def switch_supermap_state(ua, ub, spec):
    """Output of the switch supermap on unitaries: the target (x) control state
    c0 U_B U_A |psi>|0> + c1 U_A U_B |psi>|1>."""
    ua = np.asarray(ua, dtype=complex)
    ub = np.asarray(ub, dtype=complex)
    for u in (ua, ub):
        if not is_unitary(u):
            raise ValueError("switch branches must be unitary")
    c0, c1 = spec.control_amplitudes
    psi = spec.target_state
    return c0 * np.kron(ub @ ua @ psi, [1, 0]) + c1 * np.kron(ua @ ub @ psi, [0, 1])


def switch_process_vector(spec):
    """Process vector of the quantum switch on
    A_in (x) A_out (x) B_in (x) B_out (x) C_target (x) C_control.

    Built literally with unnormalized |1>> link vectors, so its norm is
    d = 2 for a normalized qubit target, not 1.
    """
    c0, c1 = spec.control_amplitudes
    psi = spec.target_state
    w = np.zeros((2, 2, 2, 2, 2, 2), dtype=complex)
    for a1 in range(2):
        for link1 in range(2):
            for link2 in range(2):
                # psi enters A, identity links A_out->B_in and B_out->C_t, control |0>
                w[a1, link1, link1, link2, link2, 0] += c0 * psi[a1]
    for b1 in range(2):
        for link1 in range(2):
            for link2 in range(2):
                # psi enters B, links B_out->A_in and A_out->C_t, control |1>
                w[link1, link2, b1, link1, link2, 1] += c1 * psi[b1]
    return w.reshape(-1)


def contract_switch_vector(w_vec, ua, ub):
    """Contract the switch process vector with the Choi vectors of two
    unitaries, leaving the target (x) control state at Charlie."""
    for u in (ua, ub):
        if not is_unitary(np.asarray(u, dtype=complex)):
            raise ValueError("contraction defined here for unitary operations")
    w = np.asarray(w_vec, dtype=complex).reshape(2, 2, 2, 2, 2, 2)
    bra_a = choi_vector_of_unitary(ua).conj().reshape(2, 2)
    bra_b = choi_vector_of_unitary(ub).conj().reshape(2, 2)
    return np.einsum("ij,kl,ijkltc->tc", bra_a, bra_b, w).reshape(-1)


def control_measurement(state, sign):
    """Project the control (last qubit) of a target (x) control state onto
    |+> or |->. Returns (normalized target, probability); the target is None
    for an orthogonal (zero-probability) outcome."""
    state = np.asarray(state, dtype=complex)
    if state.size % 2 != 0:
        raise ValueError("state must end in a qubit control factor")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t = state.reshape(-1, 2)
    target = (t[:, 0] + sign * t[:, 1]) / np.sqrt(2.0)
    prob = float(np.linalg.norm(target) ** 2 / np.linalg.norm(state) ** 2)
    if prob < 1e-12:
        return None, 0.0
    return target / np.linalg.norm(target), prob


def charlie_measurement(state, projector):
    """Generic measurement at the final lab: project the joint
    target (x) control state onto an arbitrary projector.
    Returns (normalized post-measurement state or None, probability)."""
    state = np.asarray(state, dtype=complex)
    projector = np.asarray(projector, dtype=complex)
    if projector.shape != (state.size, state.size):
        raise ValueError("projector dimension does not match the state")
    if np.abs(projector @ projector - projector).max() > 1e-9:
        raise ValueError("measurement operator is not a projector")
    out = projector @ state
    prob = float(np.linalg.norm(out) ** 2 / np.linalg.norm(state) ** 2)
    if prob < 1e-12:
        return None, 0.0
    return out / np.linalg.norm(out), prob


# Measurement settings violating CHSH maximally on the temporal-order states:
# Alice chooses (s_y -+ s_z)/sqrt(2), Bob chooses s_y or s_z.
CHSH_SETTINGS = (
    ((PAULI_Y - PAULI_Z) / np.sqrt(2), (PAULI_Y + PAULI_Z) / np.sqrt(2)),
    (PAULI_Y, PAULI_Z),
)


def chsh_value(state, alice_obs=None, bob_obs=None):
    """E(0,0) + E(0,1) + E(1,0) - E(1,1) for +-1-valued observables on a
    two-qubit pure state; the first observables act on the first factor."""
    if alice_obs is None or bob_obs is None:
        alice_obs, bob_obs = CHSH_SETTINGS
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise ValueError("CHSH evaluation needs a two-qubit state vector")
    for obs in tuple(alice_obs) + tuple(bob_obs):
        obs = np.asarray(obs, dtype=complex)
        if np.abs(obs - obs.conj().T).max() > 1e-9 or np.abs(obs @ obs - ID2).max() > 1e-9:
            raise ValueError("observables must be Hermitian with spectrum {-1, +1}")

    def corr(a, b):
        return float(np.real(state.conj() @ kron(a, b) @ state))

    a0, a1 = alice_obs
    b0, b1 = bob_obs
    value = corr(a0, b0) + corr(a0, b1) + corr(a1, b0) - corr(a1, b1)
    if abs(value) > 2 * np.sqrt(2) + 1e-9:
        raise RuntimeError("CHSH value exceeds the Tsirelson bound; broken state or settings")
    return value


# The gravitational-switch example choice: U_A1 = U_B2 = Hadamard,
# U_A2 = U_B1 = s_z, turning |up,up> into (|++> +- |-->)/sqrt(2).
TEMPORAL_ORDER_UNITARIES = (
    (PAULI_X + PAULI_Z) / np.sqrt(2),
    PAULI_Z,
    PAULI_Z,
    (PAULI_X + PAULI_Z) / np.sqrt(2),
)


def temporal_order_state(u_a1, u_b1, u_a2, u_b2, psi1, psi2, sign):
    """Joint state of the two targets after both switch copies and the mass
    measurement with outcome +-:

        [ (U_B1 U_A1 psi1) (x) (U_A2 U_B2 psi2)
          +- (U_A1 U_B1 psi1) (x) (U_B2 U_A2 psi2) ] / sqrt(2),

    normalized, on system-1 (x) system-2. A zero vector (identical branches
    with sign -) raises ValueError.
    """
    mats = [np.asarray(u, dtype=complex) for u in (u_a1, u_b1, u_a2, u_b2)]
    for u in mats:
        if not is_unitary(u):
            raise ValueError("temporal-order branches must be unitary")
    u_a1, u_b1, u_a2, u_b2 = mats
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    branch_k = np.kron(u_b1 @ u_a1 @ psi1, u_a2 @ u_b2 @ psi2)
    branch_kp = np.kron(u_a1 @ u_b1 @ psi1, u_b2 @ u_a2 @ psi2)
    out = (branch_k + sign * branch_kp) / np.sqrt(2.0)
    norm = np.linalg.norm(out)
    if norm < 1e-9:
        raise ValueError("degenerate choice: the two order branches cancel")
    return out / norm
