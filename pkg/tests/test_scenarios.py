import numpy as np
import pytest

from bellthresh.qcore import StateVector
from bellthresh.scenarios import (
    BIPHOTON_ORDERS,
    biphoton_projectors,
    biphoton_scenario,
    joint_probability,
    mix_with_noise,
    probability_tables,
    qubit_projectors,
    qubit_scenario,
    qubit_state,
    single_probability,
    tritter_scenario,
    tritter_state,
    tritter_unitary,
)

ALL_SCENARIOS = [
    tritter_scenario(),
    biphoton_scenario("P1P2"),
    biphoton_scenario("P1P3"),
    biphoton_scenario("P2P3"),
    qubit_scenario(),
]


def random_settings(sc, rng):
    lo, hi = sc.settings_bounds()
    return lo + rng.random(lo.size) * (hi - lo)


def random_entanglement(sc, rng):
    lo, hi = sc.entanglement_bounds()
    return lo + rng.random(lo.size) * (hi - lo)


def test_scenario_validation():
    with pytest.raises(ValueError):
        biphoton_scenario("P1P4")
    with pytest.raises(ValueError):
        tritter_scenario().schmidt_coefficients([1.0])
    with pytest.raises(ValueError):
        qubit_scenario().measurement_rows([0.1] * 8)


def test_states_are_schmidt_diagonal():
    psi = tritter_state(2.0, 1.0)
    c = 1.0 / np.sqrt(6.0)
    assert np.allclose(psi.amps, [c, 0, 0, 0, 2 * c, 0, 0, 0, c])
    phi = qubit_state(1.0)
    assert np.allclose(phi.amps, [1, 0, 0, 1] / np.sqrt(2.0))


def test_tritter_unitary_structure():
    u = tritter_unitary((0.0, 0.7, 1.9)).mat
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-12)
    assert np.allclose(np.abs(u), 1.0 / np.sqrt(3.0))
    with pytest.raises(ValueError):
        tritter_unitary((0.0, 0.7))


def test_measurement_rows_are_orthonormal():
    rng = np.random.default_rng(11)
    for sc in ALL_SCENARIOS:
        for _ in range(20):
            ma, mb = sc.measurement_rows(random_settings(sc, rng))
            for m in (ma, mb):
                assert m.shape == (2, sc.local_dim, sc.local_dim)
                for i in range(2):
                    gram = m[i] @ m[i].conj().T
                    assert np.allclose(gram, np.eye(sc.local_dim), atol=1e-12)


def test_biphoton_projectors_complete_and_orthogonal():
    rng = np.random.default_rng(3)
    for theta in rng.uniform(0, np.pi, size=25):
        p1, p2, p3 = (p.mat for p in biphoton_projectors(theta))
        assert np.allclose(p1 + p2 + p3, np.eye(3), atol=1e-12)
        for a, b in ((p1, p2), (p1, p3), (p2, p3)):
            assert np.allclose(a @ b, 0.0, atol=1e-12)


def test_qubit_projectors_complete():
    p_pass, p_fail = qubit_projectors(0.3)
    assert np.allclose(p_pass.mat + p_fail.mat, np.eye(2), atol=1e-12)


def test_probability_tables_normalized():
    rng = np.random.default_rng(5)
    for sc in ALL_SCENARIOS:
        for _ in range(40):
            psi = sc.state(random_entanglement(sc, rng))
            joint, sa, sb = probability_tables(sc, psi, random_settings(sc, rng))
            assert np.allclose(joint.sum(axis=(2, 3)), 1.0, atol=1e-10)
            assert np.allclose(sa.sum(axis=1), 1.0, atol=1e-10)
            assert np.allclose(sb.sum(axis=1), 1.0, atol=1e-10)
            assert joint.min() >= -1e-12


def test_probability_tables_match_projector_path():
    rng = np.random.default_rng(9)
    for sc in ALL_SCENARIOS:
        psi = sc.state(random_entanglement(sc, rng))
        settings = random_settings(sc, rng)
        joint, sa, sb = probability_tables(sc, psi, settings)
        for i in range(2):
            for j in range(2):
                for k in range(sc.local_dim):
                    for l in range(sc.local_dim):
                        slow = joint_probability(sc, psi, settings, i, j, k, l)
                        assert abs(joint[i, j, k, l] - slow) < 1e-12
        for i in range(2):
            for k in range(sc.local_dim):
                assert abs(sa[i, k] - single_probability(sc, psi, settings, "A", i, k)) < 1e-12
                assert abs(sb[i, k] - single_probability(sc, psi, settings, "B", i, k)) < 1e-12


def test_probability_tables_accepts_raw_coefficients():
    sc = tritter_scenario()
    rng = np.random.default_rng(2)
    settings = random_settings(sc, rng)
    via_state = probability_tables(sc, sc.state((0.8, 1.3)), settings)
    via_coeffs = probability_tables(sc, sc.schmidt_coefficients((0.8, 1.3)), settings)
    for a, b in zip(via_state, via_coeffs):
        assert np.allclose(a, b, atol=1e-12)


def test_density_path_matches_pure_path():
    rng = np.random.default_rng(13)
    for sc in ALL_SCENARIOS:
        psi = sc.state(random_entanglement(sc, rng))
        settings = random_settings(sc, rng)
        pure = probability_tables(sc, psi, settings)
        mixed = probability_tables(sc, mix_with_noise(psi, 0.0), settings)
        for a, b in zip(pure, mixed):
            assert np.allclose(a, b, atol=1e-12)


def test_noise_mixing_is_linear():
    sc = tritter_scenario()
    psi = sc.state((1.0, 1.0))
    settings = np.linspace(0.3, 5.1, 8)
    tables = [probability_tables(sc, mix_with_noise(psi, f), settings) for f in (0.0, 0.5, 1.0)]
    for lo, mid, hi in zip(*tables):
        assert np.allclose(mid, 0.5 * (lo + hi), atol=1e-12)
    # fully mixed: all joints 1/9, all singles 1/3
    joint, sa, sb = tables[-1]
    assert np.allclose(joint, 1.0 / 9.0, atol=1e-12)
    assert np.allclose(sa, 1.0 / 3.0, atol=1e-12)


def test_biphoton_outcome_orders_permute_tables():
    rng = np.random.default_rng(17)
    settings = random_settings(biphoton_scenario("P1P2"), rng)
    tables = {
        pair: probability_tables(biphoton_scenario(pair), tritter_state(1.0, 1.0), settings)
        for pair in BIPHOTON_ORDERS
    }
    base = tables["P1P2"]
    perm = BIPHOTON_ORDERS["P1P3"]
    joint, sa, sb = tables["P1P3"]
    assert np.allclose(joint, base[0][:, :, perm][:, :, :, perm], atol=1e-12)
    assert np.allclose(sa, base[1][:, perm], atol=1e-12)


def test_general_pure_state_falls_back_to_density_path():
    sc = qubit_scenario()
    psi = StateVector([0.5, 0.5, 0.5, 0.5])  # product state, not Schmidt diagonal
    joint, sa, sb = probability_tables(sc, psi, [0.1, 0.2, 0.3, 0.4])
    assert np.allclose(joint.sum(axis=(2, 3)), 1.0, atol=1e-10)
