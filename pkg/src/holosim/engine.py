"""Lindblad integration of pulse schedules on the Lambda system.

The master equation is linear in rho, so one fixed RK4 step with the
Hamiltonian sampled at ``t``, ``t + dt/2`` and ``t + dt`` is a fixed 9x9
matrix acting on ``vec(rho)`` (row-major).  Step matrices are built in
batches per segment and applied in order; the arithmetic is exactly that
of classic RK4, just organised for numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import A, E, G, check_density
from .protocols import PulseSchedule, Segment, segment_couplings, segment_hamiltonians

DIVERGENCE_TOL = 1e-6

_I3 = np.eye(3, dtype=complex)
_I9 = np.eye(9, dtype=complex)


class IntegrationError(RuntimeError):
    """Raised when trace, positivity or unitarity drift beyond tolerance."""


class DetuningMode(str, Enum):
    COMMON = "common"
    DIFFERENTIAL = "differential"


@dataclass(frozen=True)
class NoiseModel:
    """Auxiliary-state decay plus systematic control errors.

    Attributes
    ----------
    kappa : float
        Total decay rate of ``|a>`` in 1/s.
    branching_g_over_e : float
        Ratio ``kappa_g / kappa_e`` of the two decay channels.
    delta : float
        Detuning error in rad/s.  In ``common`` mode a positive value is a
        blue-detuned carrier and enters as ``-delta |a><a|``; in
        ``differential`` mode it enters as ``(delta/2)(|e><e| - |g><g|)``.
    delta_omega : float
        Fractional Rabi-frequency error; the drive is scaled by ``1 + delta_omega``.
    """

    kappa: float = 0.0
    branching_g_over_e: float = 3 / 22
    delta: float = 0.0
    delta_omega: float = 0.0
    detuning_mode: DetuningMode = DetuningMode.COMMON

    def __post_init__(self):
        object.__setattr__(self, "detuning_mode", DetuningMode(self.detuning_mode))
        if not self.kappa >= 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if not self.branching_g_over_e > 0:
            raise ValueError("branching ratio must be positive")
        if not self.delta_omega > -1 - 1e-15:
            raise ValueError("delta_omega must exceed -1")
        if not np.isfinite(self.delta):
            raise ValueError("delta must be finite")

    @property
    def kappa_g(self) -> float:
        r = self.branching_g_over_e
        return self.kappa * r / (1 + r)

    @property
    def kappa_e(self) -> float:
        return self.kappa / (1 + self.branching_g_over_e)

    def static_hamiltonian(self) -> np.ndarray:
        h = np.zeros((3, 3), dtype=complex)
        if self.detuning_mode is DetuningMode.COMMON:
            h[A, A] = -self.delta
        else:
            h[E, E] = self.delta / 2
            h[G, G] = -self.delta / 2
        return h


NOISELESS = NoiseModel()


@dataclass(frozen=True)
class SimConfig:
    steps_per_segment: int = 2000
    record_stride: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.steps_per_segment < 16:
            raise ValueError("steps_per_segment must be at least 16")
        if self.record_stride < 1:
            raise ValueError("record_stride must be at least 1")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray       # seconds, shape (n,)
    states: np.ndarray      # shape (n, 3, 3)

    def populations(self) -> np.ndarray:
        """Columns (p_e, p_g, p_a)."""
        return np.real(np.diagonal(self.states, axis1=1, axis2=2))


@dataclass(frozen=True)
class SimResult:
    final_state: np.ndarray
    trajectory: Trajectory
    accumulated_pa: float   # seconds
    final_leakage: float


def total_hamiltonian(schedule: PulseSchedule, noise: NoiseModel, t: float) -> np.ndarray:
    """Drive with Rabi error applied, plus the detuning term."""
    k, t_local = schedule.locate(t)
    h = segment_hamiltonians(schedule.segments[k], t_local, 1 + noise.delta_omega)[0]
    return h + noise.static_hamiltonian()


def _jump_operators(noise: NoiseModel):
    l_g = np.zeros((3, 3), dtype=complex)
    l_e = np.zeros((3, 3), dtype=complex)
    l_g[G, A] = 1.0
    l_e[E, A] = 1.0
    return ((noise.kappa_g, l_g), (noise.kappa_e, l_e))


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, noise: NoiseModel) -> np.ndarray:
    """``-i[H, rho]`` plus the two decay channels ``|a> -> |g>`` and ``|a> -> |e>``."""
    out = -1j * (h @ rho - rho @ h)
    for rate, l in _jump_operators(noise):
        if rate:
            ldl = l.conj().T @ l
            out += rate * (l @ rho @ l.conj().T - 0.5 * (ldl @ rho + rho @ ldl))
    return out


def _dissipator_superop(noise: NoiseModel) -> np.ndarray:
    d = np.zeros((9, 9), dtype=complex)
    for rate, l in _jump_operators(noise):
        ldl = l.conj().T @ l
        d += rate * (np.kron(l, l.conj()) - 0.5 * np.kron(ldl, _I3) - 0.5 * np.kron(_I3, ldl.T))
    return d


def liouvillian(h: np.ndarray, noise: NoiseModel) -> np.ndarray:
    """Row-major superoperators for a stack of Hamiltonians, shape (..., 9, 9)."""
    h = np.asarray(h, dtype=complex)
    left = np.einsum("...ij,kl->...ikjl", h, _I3)
    right = np.einsum("ij,...kl->...iljk", _I3, h)
    shape = h.shape[:-2] + (9, 9)
    return -1j * (left - right).reshape(shape) + _dissipator_superop(noise)


def _rk4_step_matrices(gen0, genh, gen1, dt: float) -> np.ndarray:
    """Exact RK4 step operator for ``y' = L(t) y`` given L at t, t+dt/2, t+dt."""
    eye = np.eye(gen0.shape[-1], dtype=complex)
    k2 = genh @ (eye + 0.5 * dt * gen0)
    k3 = genh @ (eye + 0.5 * dt * k2)
    k4 = gen1 @ (eye + dt * k3)
    return eye + (dt / 6.0) * (gen0 + 2 * k2 + 2 * k3 + k4)


def _segment_times(seg: Segment, steps: int):
    dt = seg.duration / steps
    nodes = np.arange(2 * steps + 1) * (0.5 * dt)
    return dt, nodes


def _segment_generators(seg, steps, noise, dissipative):
    # H(t) = H_static + exp(i phi1) C + exp(-i phi1) C^dagger, so the generator
    # is a fixed combination of three matrices weighted by the ramp phase.
    dt, nodes = _segment_times(seg, steps)
    c_e, c_g = segment_couplings(seg, 1 + noise.delta_omega)
    c = np.zeros((3, 3), dtype=complex)
    c[E, A], c[G, A] = c_e, c_g
    parts = np.stack([noise.static_hamiltonian(), c, c.conj().T])
    if dissipative:
        gens = liouvillian(parts, NOISELESS)
        gens[0] += _dissipator_superop(noise)
    else:
        gens = -1j * parts
    ph = np.exp(1j * seg.phi1(nodes))[:, None, None]
    gen = gens[0] + ph * gens[1] + ph.conj() * gens[2]
    return dt, gen[0:-1:2], gen[1::2], gen[2::2]


def step_operators(schedule: PulseSchedule, noise: NoiseModel, config: SimConfig):
    """Yield ``(t_start, dt, step_matrices)`` for each segment of the schedule."""
    for k, seg in enumerate(schedule.segments):
        dt, g0, gh, g1 = _segment_generators(seg, config.steps_per_segment, noise, True)
        yield schedule.boundaries[k], dt, _rk4_step_matrices(g0, gh, g1, dt)


def _check_states(states: np.ndarray, times: np.ndarray) -> None:
    traces = np.real(np.trace(states, axis1=1, axis2=2))
    drift = np.abs(traces - 1.0)
    if drift.max() > DIVERGENCE_TOL:
        i = int(drift.argmax())
        raise IntegrationError(f"trace drift {drift[i]:.3e} at t={times[i]:.6e} s")
    herm = 0.5 * (states + np.conj(np.swapaxes(states, 1, 2)))
    lam = np.linalg.eigvalsh(herm)[:, 0]
    if lam.min() < -DIVERGENCE_TOL:
        i = int(lam.argmin())
        raise IntegrationError(f"negative eigenvalue {lam[i]:.3e} at t={times[i]:.6e} s")


def evolve(schedule: PulseSchedule, rho0: np.ndarray, noise: NoiseModel = NOISELESS,
           config: SimConfig = SimConfig()) -> SimResult:
    """Integrate the master equation over ``schedule`` starting from ``rho0``.

    Every step is checked for trace drift and negative eigenvalues; the
    trajectory keeps every ``record_stride``-th step plus both ends of each
    segment.

    Raises
    ------
    IntegrationError
        If the trace drifts or an eigenvalue drops below ``-1e-6``.
    """
    rho0 = check_density(rho0)
    y = rho0.reshape(9).copy()
    times = [0.0]
    states = [y.copy()]
    keep_t, keep_s = [0.0], [y.copy()]
    stride = config.record_stride
    for t0, dt, steps in step_operators(schedule, noise, config):
        n = steps.shape[0]
        for i in range(n):
            y = steps[i] @ y
            t = t0 + (i + 1) * dt
            times.append(t)
            states.append(y)
            if (i + 1) % stride == 0 or i == n - 1:
                keep_t.append(t)
                keep_s.append(y)
    all_states = np.array(states).reshape(-1, 3, 3)
    _check_states(all_states, np.array(times))
    traj = Trajectory(np.array(keep_t), np.array(keep_s).reshape(-1, 3, 3))
    final = all_states[-1]
    return SimResult(
        final_state=final,
        trajectory=traj,
        accumulated_pa=accumulated_excited_population(traj),
        final_leakage=float(final[A, A].real),
    )


def channel_superoperator(schedule: PulseSchedule, noise: NoiseModel = NOISELESS,
                          config: SimConfig = SimConfig()) -> np.ndarray:
    """Row-major 9x9 map ``vec(rho(0)) -> vec(rho(tau))`` of the full schedule."""
    total = _I9.copy()
    for _, _, steps in step_operators(schedule, noise, config):
        for m in steps:
            total = m @ total
    return total


def propagator(schedule: PulseSchedule, config: SimConfig = SimConfig(),
               noise: NoiseModel = NOISELESS) -> np.ndarray:
    """Schrodinger propagator ``U(tau)`` with no dissipation.

    Control errors in ``noise`` are honoured; ``kappa`` is ignored.
    """
    u = _I3.copy()
    for seg in schedule.segments:
        dt, g0, gh, g1 = _segment_generators(seg, config.steps_per_segment, noise, False)
        for m in _rk4_step_matrices(g0, gh, g1, dt):
            u = m @ u
    drift = np.abs(u.conj().T @ u - _I3).max()
    if drift > DIVERGENCE_TOL:
        raise IntegrationError(f"unitarity drift {drift:.3e}")
    return u


def segment_oracle(seg: Segment) -> np.ndarray:
    """Closed-form noise-free propagator of one segment.

    In the frame ``|a> -> exp(-i phi1(t)) |a>`` the drive is a constant Rabi
    problem between the bright state and ``|a>`` with detuning
    ``-phi1_slope``; the dark state is untouched.
    """
    b = np.array([np.cos(seg.theta / 2), np.exp(1j * seg.phi) * np.sin(seg.theta / 2), 0])
    d = np.array([-np.exp(-1j * seg.phi) * np.sin(seg.theta / 2), np.cos(seg.theta / 2), 0])
    a = np.array([0, 0, 1], dtype=complex)
    basis = np.column_stack([d, b, a])

    om, al, tau = seg.omega, seg.phi1_slope, seg.duration
    rabi = np.hypot(om, al)
    half = 0.5 * rabi * tau
    # sin(rabi tau/2)/rabi, finite as rabi -> 0
    sin_over = 0.5 * tau * np.sinc(half / np.pi)
    rot = np.exp(0.5j * al * tau) * (
        np.cos(half) * np.eye(2) - 1j * sin_over * np.array([[al, om], [om, -al]])
    )
    frame = np.zeros((3, 3), dtype=complex)
    frame[0, 0] = 1.0
    frame[1:, 1:] = rot
    u_rot = basis @ frame @ basis.conj().T

    def w(t):
        return np.diag([1.0, 1.0, np.exp(-1j * seg.phi1(t))])

    return w(tau) @ u_rot @ w(0.0).conj()


def schedule_oracle(schedule: PulseSchedule) -> np.ndarray:
    u = _I3.copy()
    for seg in schedule.segments:
        u = segment_oracle(seg) @ u
    return u


def accumulated_excited_population(traj: Trajectory) -> float:
    """Trapezoid integral of ``rho_aa(t)`` over the record, in seconds."""
    p_a = np.real(traj.states[:, A, A])
    return float(np.trapezoid(p_a, traj.times)) if len(traj.times) > 1 else 0.0
