"""Simulation and benchmarking of nonadiabatic holonomic single-qubit gates
(NHQC, brachistochrone BNHQC and composite CBNHQC) on a dissipative
Lambda-type three-level system."""

from .engine import (
    IntegrationError, NoiseModel, SimConfig, SimResult, Trajectory, accumulated_excited_population,
    channel_superoperator, evolve, lindblad_rhs, propagator, segment_oracle, total_hamiltonian,
)
from .linalg import (
    BlochVector, density_from_stokes, pauli, project_qubit, state_fidelity,
    unitary_infidelity_up_to_phase,
)
from .protocols import (
    GateParams, Protocol, PulseSchedule, Segment, build_bnhqc, build_cbnhqc, build_nhqc,
    build_schedule, drive_hamiltonian, target_unitary,
)
from .tomography import (
    MeasurementRecord, TOMO_INPUTS, ideal_chi, process_fidelity, process_tomography,
    reconstruct_state, simulate_measurement, stokes_from_record,
)

__version__ = "0.1.0"
