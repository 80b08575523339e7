"""Pulse schedules for the three holonomic gate constructions.

A schedule is a list of segments.  Each segment drives the Lambda system
with a constant Rabi frequency, fixed mixing angle ``theta`` and relative
phase ``phi``, and a common phase ``phi1`` that ramps linearly in the
segment's local time.  Discontinuities (the NHQC phase jump, the CBNHQC
pi offset) therefore always sit on segment boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .linalg import A, E, G, I2, SIGMA_X, SIGMA_Y, SIGMA_Z


class Protocol(str, Enum):
    NHQC = "NHQC"
    BNHQC = "BNHQC"
    CBNHQC = "CBNHQC"


@dataclass(frozen=True)
class GateParams:
    """Holonomy parameters: rotation axis (theta, phi), angle gamma, Rabi omega [rad/s]."""

    theta: float
    phi: float
    gamma: float
    omega: float

    def __post_init__(self):
        vals = (self.theta, self.phi, self.gamma, self.omega)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("gate parameters must be finite")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not 0.0 < self.gamma < 2 * np.pi:
            raise ValueError(f"gamma must lie in (0, 2pi), got {self.gamma}")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")

    @property
    def axis(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])


@dataclass(frozen=True)
class Segment:
    duration: float
    omega: float
    theta: float
    phi: float
    phi1_offset: float = 0.0
    phi1_slope: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.duration) and self.duration > 0):
            raise ValueError(f"segment duration must be finite and positive, got {self.duration}")
        if self.omega < 0:
            raise ValueError("segment omega must be non-negative")

    def phi1(self, t_local):
        return self.phi1_offset + self.phi1_slope * np.asarray(t_local)


@dataclass(frozen=True)
class PulseSchedule:
    segments: tuple[Segment, ...]
    protocol: Protocol | None = None
    params: GateParams | None = None
    boundaries: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        edges = np.concatenate([[0.0], np.cumsum([s.duration for s in self.segments])])
        object.__setattr__(self, "boundaries", edges)

    @property
    def total_duration(self) -> float:
        return float(self.boundaries[-1])

    def locate(self, t: float) -> tuple[int, float]:
        """Segment index and local time for ``t``; boundaries belong to the later segment."""
        if not self.segments:
            raise ValueError("empty schedule has no drive")
        if not 0.0 <= t <= self.total_duration:
            raise ValueError(f"time {t} outside schedule [0, {self.total_duration}]")
        k = int(np.searchsorted(self.boundaries, t, side="right")) - 1
        k = min(k, len(self.segments) - 1)
        return k, t - self.boundaries[k]


def nhqc_duration(omega: float) -> float:
    return 2 * np.pi / omega


def bnhqc_duration(gamma: float, omega: float) -> float:
    if not 0.0 < gamma < 2 * np.pi:
        raise ValueError(f"gamma must lie in (0, 2pi), got {gamma}")
    return 2 * np.sqrt(np.pi**2 - (np.pi - gamma) ** 2) / omega


def cbnhqc_duration(gamma: float, omega: float) -> float:
    return 2 * bnhqc_duration(gamma / 2, omega)


def target_unitary(p: GateParams) -> np.ndarray:
    """``exp(-i gamma/2 n.sigma)`` in the qubit basis (|e>, |g>)."""
    nx, ny, nz = p.axis
    n_sigma = nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z
    return np.cos(p.gamma / 2) * I2 - 1j * np.sin(p.gamma / 2) * n_sigma


def build_nhqc(p: GateParams, *, literal_jump: bool = False) -> PulseSchedule:
    """Two resonant pi-area halves with a phase jump at the midpoint.

    The second half uses ``phi1 = pi - gamma`` so the bright state picks up
    ``exp(-i gamma)``.  ``literal_jump=True`` uses ``phi1 = gamma`` instead,
    which realizes rotation angle ``pi - gamma`` (identical only at
    ``gamma = pi/2``).
    """
    half = np.pi / p.omega
    jump = p.gamma if literal_jump else np.pi - p.gamma
    segs = (
        Segment(half, p.omega, p.theta, p.phi, 0.0, 0.0),
        Segment(half, p.omega, p.theta, p.phi, jump, 0.0),
    )
    return PulseSchedule(segs, Protocol.NHQC, p)


def build_bnhqc(p: GateParams) -> PulseSchedule:
    """Single time-optimal segment with a linear ramp ``phi1 = 2(pi - gamma) t / tau``."""
    tau = bnhqc_duration(p.gamma, p.omega)
    slope = 2 * (np.pi - p.gamma) / tau
    return PulseSchedule((Segment(tau, p.omega, p.theta, p.phi, 0.0, slope),), Protocol.BNHQC, p)


def build_cbnhqc(p: GateParams, *, literal_slope: bool = False) -> PulseSchedule:
    """Two half-angle BNHQC segments, the second shifted by pi.

    Each segment lasts ``tau_C / 2`` and ramps at ``2(pi - gamma/2) / (tau_C/2)``
    so that it completes a full generalized Rabi cycle.  With
    ``literal_slope=True`` the ramp uses the full duration ``tau_C`` in the
    denominator; that schedule is not cyclic and is kept for comparison only.
    """
    tau = cbnhqc_duration(p.gamma, p.omega)
    seg_t = tau / 2
    slope = 2 * (np.pi - p.gamma / 2) / (tau if literal_slope else seg_t)
    segs = (
        Segment(seg_t, p.omega, p.theta, p.phi, 0.0, slope),
        Segment(seg_t, p.omega, p.theta, p.phi, np.pi + slope * seg_t, slope),
    )
    return PulseSchedule(segs, Protocol.CBNHQC, p)


_BUILDERS = {
    Protocol.NHQC: build_nhqc,
    Protocol.BNHQC: build_bnhqc,
    Protocol.CBNHQC: build_cbnhqc,
}


def build_schedule(protocol, p: GateParams) -> PulseSchedule:
    return _BUILDERS[Protocol(protocol)](p)


def protocol_duration(protocol, p: GateParams) -> float:
    """Closed-form gate time of ``protocol``."""
    protocol = Protocol(protocol)
    if protocol is Protocol.NHQC:
        return nhqc_duration(p.omega)
    if protocol is Protocol.BNHQC:
        return bnhqc_duration(p.gamma, p.omega)
    return cbnhqc_duration(p.gamma, p.omega)


def segment_couplings(seg: Segment, omega_scale: float = 1.0) -> tuple[complex, complex]:
    """Static parts of ``H[e,a]`` and ``H[g,a]`` before the ``exp(i phi1)`` factor."""
    half = 0.5 * seg.omega * omega_scale
    return half * np.cos(seg.theta / 2), half * np.exp(1j * seg.phi) * np.sin(seg.theta / 2)


def segment_hamiltonians(seg: Segment, t_local, omega_scale: float = 1.0) -> np.ndarray:
    """Drive Hamiltonians of one segment at an array of local times, shape (n, 3, 3)."""
    t_local = np.atleast_1d(np.asarray(t_local, dtype=float))
    c_e, c_g = segment_couplings(seg, omega_scale)
    ph = np.exp(1j * seg.phi1(t_local))
    h = np.zeros((t_local.size, 3, 3), dtype=complex)
    h[:, E, A] = c_e * ph
    h[:, G, A] = c_g * ph
    h[:, A, E] = np.conj(h[:, E, A])
    h[:, A, G] = np.conj(h[:, G, A])
    return h


def drive_hamiltonian(schedule: PulseSchedule, t: float) -> np.ndarray:
    """Lambda-system drive at time ``t`` in basis (|e>, |g>, |a>)."""
    k, t_local = schedule.locate(t)
    return segment_hamiltonians(schedule.segments[k], t_local)[0]
