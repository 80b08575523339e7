import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holosim.engine import propagator
from holosim.linalg import A, E, G, unitary_infidelity_up_to_phase
from holosim.protocols import (
    GateParams, Protocol, Segment, PulseSchedule, build_bnhqc, build_cbnhqc, build_nhqc,
    build_schedule, bnhqc_duration, drive_hamiltonian, protocol_duration, target_unitary,
)

from conftest import KHZ, random_params

F_FIG1 = 47.1e3


def test_target_unitary_sqrtx(sqrtx):
    expected = np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2)
    np.testing.assert_allclose(target_unitary(sqrtx), expected, atol=1e-15)


def test_target_unitary_tgate_and_identity_limit():
    u = target_unitary(GateParams(0, 0, np.pi / 4, KHZ))
    np.testing.assert_allclose(u, np.diag([np.exp(-1j * np.pi / 8), np.exp(1j * np.pi / 8)]), atol=1e-15)
    np.testing.assert_allclose(target_unitary(GateParams(0, 0, 1e-9, KHZ)), np.eye(2), atol=1e-9)


@pytest.mark.parametrize("kwargs", [
    dict(theta=-0.1, phi=0, gamma=1, omega=1),
    dict(theta=0, phi=0, gamma=0, omega=1),
    dict(theta=0, phi=0, gamma=2 * np.pi, omega=1),
    dict(theta=0, phi=0, gamma=1, omega=0),
    dict(theta=0, phi=np.nan, gamma=1, omega=1),
])
def test_gate_params_validation(kwargs):
    with pytest.raises(ValueError):
        GateParams(**kwargs)


def test_nhqc_structure(sqrtx):
    s = build_nhqc(sqrtx)
    assert len(s.segments) == 2
    assert s.total_duration * 1e6 == pytest.approx(21.231422505307854, rel=1e-12)
    assert [seg.phi1_offset for seg in s.segments] == [0.0, np.pi / 2]
    assert all(seg.phi1_slope == 0 for seg in s.segments)
    # literal jump equals corrected one at gamma = pi/2
    assert build_nhqc(sqrtx, literal_jump=True).segments[1].phi1_offset == pytest.approx(np.pi / 2)


def test_nhqc_tgate_jump():
    s = build_nhqc(GateParams(0, 0, np.pi / 4, KHZ))
    assert s.segments[1].phi1_offset == pytest.approx(3 * np.pi / 4)


def test_bnhqc_durations(sqrtx):
    s = build_bnhqc(sqrtx)
    assert len(s.segments) == 1
    assert s.total_duration == pytest.approx(np.sqrt(3) * np.pi / sqrtx.omega, rel=1e-12)
    assert s.total_duration * 1e6 == pytest.approx(18.386951248077253, rel=1e-12)
    t = build_bnhqc(GateParams(0, 0, np.pi / 4, 47.1 * KHZ))
    assert t.total_duration * 1e6 == pytest.approx(14.043265982296127, rel=1e-12)
    assert bnhqc_duration(np.pi, 1.0) == pytest.approx(2 * np.pi)
    with pytest.raises(ValueError):
        bnhqc_duration(2 * np.pi, 1.0)


def test_cbnhqc_structure(sqrtx):
    s = build_cbnhqc(sqrtx)
    first, second = s.segments
    assert s.total_duration == pytest.approx(np.sqrt(7) * np.pi / sqrtx.omega, rel=1e-12)
    assert first.duration == pytest.approx(
        build_bnhqc(GateParams(np.pi / 2, 0, np.pi / 4, sqrtx.omega)).total_duration, rel=1e-12)
    # phase jumps by exactly pi across the midpoint
    end_first = first.phi1(first.duration)
    assert second.phi1(0.0) - end_first == pytest.approx(np.pi)


def test_cbnhqc_literal_slope_is_not_cyclic(sqrtx):
    u = propagator(build_cbnhqc(sqrtx, literal_slope=True))
    assert np.linalg.norm(u[A, :2]) ** 2 > 1e-3


def test_literal_nhqc_realizes_complementary_angle():
    p = GateParams(0.7, 0.3, np.pi / 4, 30 * KHZ)
    u = propagator(build_nhqc(p, literal_jump=True))
    comp = target_unitary(GateParams(p.theta, p.phi, np.pi - p.gamma, p.omega))
    assert unitary_infidelity_up_to_phase(u[:2, :2], comp) < 1e-9
    assert unitary_infidelity_up_to_phase(u[:2, :2], target_unitary(p)) > 1e-2


def test_drive_hamiltonian_sqrtx_t0(sqrtx):
    h = drive_hamiltonian(build_nhqc(sqrtx), 0.0)
    half = sqrtx.omega / 2
    expected = np.zeros((3, 3), complex)
    expected[E, A] = expected[A, E] = half * np.cos(np.pi / 4)
    expected[G, A] = expected[A, G] = half * np.sin(np.pi / 4)
    np.testing.assert_allclose(h, expected, atol=1e-9)


def test_drive_hamiltonian_boundary_uses_later_segment(sqrtx):
    s = build_nhqc(sqrtx)
    h = drive_hamiltonian(s, s.segments[0].duration)
    assert np.angle(h[E, A]) == pytest.approx(np.pi / 2)
    with pytest.raises(ValueError):
        drive_hamiltonian(s, s.total_duration * 1.001)
    with pytest.raises(ValueError):
        drive_hamiltonian(s, -1e-9)


def test_tgate_single_tone():
    s = build_bnhqc(GateParams(0, 0, np.pi / 4, KHZ))
    for t in np.linspace(0, s.total_duration, 7):
        assert drive_hamiltonian(s, t)[G, A] == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_duration_closed_forms_and_hamiltonian_shape(seed):
    rng = np.random.default_rng(seed)
    (p,) = random_params(rng, 1)
    expected = {
        Protocol.NHQC: 2 * np.pi / p.omega,
        Protocol.BNHQC: 2 * np.sqrt(np.pi**2 - (np.pi - p.gamma) ** 2) / p.omega,
        Protocol.CBNHQC: 4 * np.sqrt(np.pi**2 - (np.pi - p.gamma / 2) ** 2) / p.omega,
    }
    for proto, tau in expected.items():
        s = build_schedule(proto, p)
        assert abs(s.total_duration - tau) <= 1e-12 * tau
        assert protocol_duration(proto, p) == pytest.approx(tau, rel=1e-12)
        h = drive_hamiltonian(s, rng.uniform(0, s.total_duration))
        np.testing.assert_array_equal(np.diag(h), 0)
        assert h[E, G] == 0 and h[G, E] == 0
        np.testing.assert_array_equal(h, h.conj().T)


def test_bnhqc_duration_monotone_in_gamma():
    gammas = np.linspace(1e-3, np.pi, 400)
    taus = [bnhqc_duration(g, 1.0) for g in gammas]
    assert np.all(np.diff(taus) > 0)


def test_ratio_at_sqrtx(sqrtx):
    tn = build_nhqc(sqrtx).total_duration
    assert build_bnhqc(sqrtx).total_duration / tn == pytest.approx(np.sqrt(3) / 2, rel=1e-12)
    assert build_cbnhqc(sqrtx).total_duration / tn == pytest.approx(np.sqrt(7) / 2, rel=1e-12)


def test_segment_and_schedule_validation():
    with pytest.raises(ValueError):
        Segment(0.0, 1.0, 0, 0)
    with pytest.raises(ValueError):
        Segment(1.0, -1.0, 0, 0)
    assert PulseSchedule(()).total_duration == 0.0


def test_holonomy_random_params():
    rng = np.random.default_rng(7)
    for p in random_params(rng, 10):
        for proto in Protocol:
            u = propagator(build_schedule(proto, p))
            assert unitary_infidelity_up_to_phase(u[:2, :2], target_unitary(p)) < 1e-6
            assert np.linalg.norm(u[A, :2]) ** 2 < 1e-6
