import numpy as np
import pytest
import scipy.linalg

from holosim.engine import (
    IntegrationError, NoiseModel, SimConfig, Trajectory, accumulated_excited_population,
    channel_superoperator, evolve, lindblad_rhs, liouvillian, propagator, schedule_oracle,
    segment_oracle, total_hamiltonian,
)
from holosim.linalg import A, E, G, basis_density, embed_qubit, ket, projector, state_fidelity
from holosim.protocols import (
    GateParams, Protocol, PulseSchedule, Segment, build_bnhqc, build_cbnhqc, build_nhqc,
    build_schedule, drive_hamiltonian, target_unitary,
)

from conftest import KHZ

SQRTX_OUT = projector(ket(-1j, 1))  # (|g> - i|e>)/sqrt2 in (e, g) order


def test_noise_model_rates():
    n = NoiseModel(kappa=5e3)
    assert n.kappa_g == pytest.approx(600.0)
    assert n.kappa_e == pytest.approx(4400.0)
    assert n.kappa_g + n.kappa_e == pytest.approx(5e3, rel=1e-12)
    with pytest.raises(ValueError):
        NoiseModel(kappa=-1)
    with pytest.raises(ValueError):
        NoiseModel(delta_omega=-1.5)
    with pytest.raises(ValueError):
        NoiseModel(detuning_mode="sideways")


def test_total_hamiltonian_examples(sqrtx):
    s = build_bnhqc(sqrtx)
    t = 0.3 * s.total_duration
    np.testing.assert_array_equal(total_hamiltonian(s, NoiseModel(), t), drive_hamiltonian(s, t))
    off = total_hamiltonian(s, NoiseModel(delta_omega=-1), t)
    np.testing.assert_array_equal(off, 0)
    d = 2 * np.pi * 1e3
    h = total_hamiltonian(s, NoiseModel(delta=d), t)
    assert abs(h[A, A]) == pytest.approx(d)
    assert h[E, E] == 0 and h[G, G] == 0
    hd = total_hamiltonian(s, NoiseModel(delta=d, detuning_mode="differential"), t)
    assert hd[E, E] == pytest.approx(d / 2) and hd[G, G] == pytest.approx(-d / 2) and hd[A, A] == 0


def test_lindblad_pure_decay():
    n = NoiseModel(kappa=5e3)
    d = lindblad_rhs(basis_density("a"), np.zeros((3, 3)), n)
    assert d[A, A].real == pytest.approx(-5e3)
    assert d[G, G].real == pytest.approx(600.0)
    assert d[E, E].real == pytest.approx(4400.0)


def test_lindblad_trace_free_without_decay(sqrtx):
    rng = np.random.default_rng(3)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    h = drive_hamiltonian(build_bnhqc(sqrtx), 1e-6)
    assert abs(np.trace(lindblad_rhs(rho, h / sqrtx.omega, NoiseModel()))) < 1e-14


def test_liouvillian_matches_rhs(sqrtx):
    rng = np.random.default_rng(5)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    n = NoiseModel(kappa=7e4, delta=1e4)
    h = total_hamiltonian(build_cbnhqc(sqrtx), n, 2e-6)
    lhs = liouvillian(h, n) @ rho.reshape(9)
    np.testing.assert_allclose(lhs, lindblad_rhs(rho, h, n).reshape(9), rtol=0, atol=1e-9)


def test_evolve_bnhqc_ideal(sqrtx):
    res = evolve(build_bnhqc(sqrtx), basis_density("g"))
    q = res.final_state[:2, :2]
    assert state_fidelity(q, SQRTX_OUT) >= 1 - 1e-6
    assert res.final_leakage <= 1e-6


def test_evolve_nhqc_fig1_fidelity(sqrtx):
    res = evolve(build_nhqc(sqrtx), basis_density("g"), NoiseModel(kappa=5e3))
    assert state_fidelity(res.final_state[:2, :2], SQRTX_OUT) == pytest.approx(0.990, abs=0.003)


def test_evolve_empty_schedule_returns_initial_state():
    rho0 = embed_qubit(projector(ket(1, 1j)))
    res = evolve(PulseSchedule(()), rho0, NoiseModel(kappa=1e4))
    np.testing.assert_array_equal(res.final_state, rho0)
    assert res.accumulated_pa == 0.0


def test_trajectory_grid_and_invariants(sqrtx):
    s = build_cbnhqc(sqrtx)
    res = evolve(s, basis_density("g"), NoiseModel(kappa=6.67e4), SimConfig(400, record_stride=7))
    t = res.trajectory.times
    assert t[0] == 0.0 and t[-1] == pytest.approx(s.total_duration, rel=1e-12)
    assert np.all(np.diff(t) > 0)
    assert np.any(np.isclose(t, s.segments[0].duration, rtol=1e-12))
    pops = res.trajectory.populations()
    np.testing.assert_allclose(pops.sum(axis=1), 1.0, atol=1e-9)
    assert pops.min() >= -1e-9
    assert 0 <= res.accumulated_pa <= s.total_duration


def test_evolve_is_deterministic(sqrtx):
    args = (build_nhqc(sqrtx), basis_density("e"), NoiseModel(kappa=1e4, delta=5e3), SimConfig(200))
    a, b = evolve(*args), evolve(*args)
    np.testing.assert_array_equal(a.trajectory.states, b.trajectory.states)


def test_evolve_diverges_with_coarse_steps(sqrtx):
    with pytest.raises(IntegrationError):
        evolve(build_nhqc(sqrtx), basis_density("g"), NoiseModel(delta=1e3 * sqrtx.omega), SimConfig(16))


def test_evolve_rejects_invalid_state(sqrtx):
    with pytest.raises(ValueError):
        evolve(build_nhqc(sqrtx), np.diag([0.5, 0.6, 0.0]))


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(steps_per_segment=8)
    with pytest.raises(ValueError):
        SimConfig(record_stride=0)


def test_propagator_unitary_and_matches_expm():
    seg = Segment(3e-5, 40 * KHZ, 1.1, 0.4, 0.2, 0.0)
    # constant Hamiltonian: exact propagator by matrix exponential
    h = drive_hamiltonian(PulseSchedule((seg,)), 0.0)
    u = propagator(PulseSchedule((seg,)))
    np.testing.assert_allclose(u, scipy.linalg.expm(-1j * h * seg.duration), atol=1e-9)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-8)


def test_segment_oracle_half_pi_pulse():
    om, phi1 = 50 * KHZ, 0.7
    seg = Segment(np.pi / om, om, 0.9, 0.3, phi1, 0.0)
    b = np.array([np.cos(0.45), np.exp(0.3j) * np.sin(0.45), 0])
    out = segment_oracle(seg) @ b
    np.testing.assert_allclose(out, [0, 0, -1j * np.exp(-1j * phi1)], atol=1e-12)


def test_segment_oracle_bnhqc_bright_phase(sqrtx):
    seg = build_bnhqc(sqrtx).segments[0]
    b = np.array([np.cos(np.pi / 4), np.sin(np.pi / 4), 0])
    d = np.array([-np.sin(np.pi / 4), np.cos(np.pi / 4), 0])
    u = segment_oracle(seg)
    np.testing.assert_allclose(u @ b, np.exp(-1j * sqrtx.gamma) * b, atol=1e-12)
    np.testing.assert_allclose(u @ d, d, atol=1e-12)


def test_segment_oracle_zero_drive():
    seg = Segment(1e-5, 0.0, 0.5, 0.0, 0.3, 2e4)
    # no coupling: the ramp only relabels the frame, the lab propagator is diagonal (identity)
    u = segment_oracle(seg)
    np.testing.assert_allclose(u, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(propagator(PulseSchedule((seg,))), u, atol=1e-12)


def test_channel_superoperator_agrees_with_evolve(sqrtx):
    n = NoiseModel(kappa=2e4, delta_omega=0.05)
    cfg = SimConfig(300)
    s = build_cbnhqc(sqrtx)
    rho0 = embed_qubit(projector(ket(1, -1j)))
    sup = channel_superoperator(s, n, cfg)
    np.testing.assert_allclose((sup @ rho0.reshape(9)).reshape(3, 3),
                               evolve(s, rho0, n, cfg).final_state, atol=1e-13)


def test_accumulated_population_trapezoid():
    t = np.linspace(0, 2.0, 5)
    states = np.zeros((5, 3, 3), complex)
    states[:, A, A] = t / 2
    assert accumulated_excited_population(Trajectory(t, states)) == pytest.approx(1.0)


@pytest.mark.parametrize("proto, analytic", [
    (Protocol.NHQC, lambda s: s.total_duration / 4),
    (Protocol.BNHQC, lambda s: 3 * s.total_duration / 16),
    (Protocol.CBNHQC, lambda s: 7 * s.segments[0].duration / 32),
])
def test_accumulated_population_analytic(sqrtx, proto, analytic):
    s = build_schedule(proto, sqrtx)
    res = evolve(s, basis_density("g"))
    assert res.accumulated_pa == pytest.approx(analytic(s), rel=1e-4)


def test_schedule_oracle_matches_rk4():
    p = GateParams(1.0, 2.0, 4.0, 25 * KHZ)
    for proto in Protocol:
        s = build_schedule(proto, p)
        np.testing.assert_allclose(propagator(s), schedule_oracle(s), atol=1e-7)
