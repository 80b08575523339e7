"""Stokes-parameter state tomography and four-input process tomography."""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from .linalg import (
    E, G, PAULI_LABELS, BlochVector, density_from_stokes, embed_qubit, ket, pauli, projector,
)

# Probe states in basis (|e>, |g>); |g>_x and |g>_y are the analysis projections.
TOMO_INPUTS = {
    "g": ket(0, 1),
    "e": ket(1, 0),
    "gx": ket(1, -1),
    "gy": ket(1, -1j),
}

_PAULI_OPS = [pauli(k) for k in PAULI_LABELS]


@dataclass(frozen=True)
class MeasurementRecord:
    """Measured probabilities of |g>, |e>, |g>_x, |g>_y; ``shots=0`` means exact."""

    p_g: float
    p_e: float
    p_x: float
    p_y: float
    shots: int = 0

    def as_dict(self) -> dict:
        return {"p_g": self.p_g, "p_e": self.p_e, "p_x": self.p_x, "p_y": self.p_y,
                "shots": self.shots}


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def simulate_measurement(rho: np.ndarray, shots: int = 0, seed=0) -> MeasurementRecord:
    """Exact or binomially sampled populations of a qutrit (or qubit) state.

    Each of the four probabilities comes from its own run of ``shots``
    repetitions, so the sampled ``p_g + p_e`` need not stay below one.
    """
    if shots < 0:
        raise ValueError("shots must be non-negative")
    rho = np.asarray(rho, dtype=complex)
    block = rho[:2, :2]
    exact = np.array([
        block[G, G].real,
        block[E, E].real,
        np.vdot(TOMO_INPUTS["gx"], block @ TOMO_INPUTS["gx"]).real,
        np.vdot(TOMO_INPUTS["gy"], block @ TOMO_INPUTS["gy"]).real,
    ])
    exact = np.clip(exact, 0.0, 1.0)
    if shots == 0:
        return MeasurementRecord(*map(float, exact), shots=0)
    counts = _rng(seed).binomial(shots, exact)
    return MeasurementRecord(*map(float, counts / shots), shots=shots)


def stokes_from_record(m: MeasurementRecord, *, leakage_consistent: bool = False) -> BlochVector:
    """Bloch components ``s_x = s0 - 2 P_x``, ``s_y = 1 - 2 P_y``, ``s_z = 1 - 2 P_g``.

    With ``leakage_consistent`` the constant 1 in ``s_y`` and ``s_z`` is
    replaced by ``s0 = P_g + P_e``.
    """
    s0 = m.p_g + m.p_e
    ref = s0 if leakage_consistent else 1.0
    return BlochVector(s0 - 2 * m.p_x, ref - 2 * m.p_y, ref - 2 * m.p_g, s0)


def project_physical(rho_q: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues to zero, restoring the original trace."""
    rho_q = 0.5 * (rho_q + rho_q.conj().T)
    tr = np.trace(rho_q).real
    w, v = np.linalg.eigh(rho_q)
    w = np.clip(w, 0.0, None)
    if w.sum() > 0:
        w *= tr / w.sum()
    return (v * w) @ v.conj().T


def reconstruct_state(m: MeasurementRecord, project: bool = False, *,
                      leakage_consistent: bool = False) -> np.ndarray:
    """Qubit density matrix from a record via ``(I + s . sigma) / 2``."""
    s = stokes_from_record(m, leakage_consistent=leakage_consistent)
    rho = density_from_stokes(s, scale_identity=leakage_consistent)
    return project_physical(rho) if project else rho


def _chi_coefficients() -> np.ndarray:
    # row (k, i, j), column (m, n): [E_m P_k E_n^dagger]_ij
    rows = []
    for pk in _PAULI_OPS:
        block = np.empty((4, 16), dtype=complex)
        for m_idx, em in enumerate(_PAULI_OPS):
            for n_idx, en in enumerate(_PAULI_OPS):
                block[:, 4 * m_idx + n_idx] = (em @ pk @ en.conj().T).reshape(4)
        rows.append(block)
    return np.vstack(rows)


CHI_COEFFICIENTS = _chi_coefficients()


def chi_from_outputs(outputs: Mapping[str, np.ndarray]) -> np.ndarray:
    """Linear inversion of the 4x4 chi matrix from the four reconstructed outputs."""
    r_e, r_g, r_x, r_y = (np.asarray(outputs[k], dtype=complex) for k in ("e", "g", "gx", "gy"))
    images = [r_e + r_g, r_e + r_g - 2 * r_x, r_e + r_g - 2 * r_y, r_e - r_g]
    rhs = np.concatenate([im.reshape(4) for im in images])
    try:
        chi = np.linalg.solve(CHI_COEFFICIENTS, rhs).reshape(4, 4)
    except np.linalg.LinAlgError as exc:
        raise ValueError("process tomography system is singular") from exc
    return 0.5 * (chi + chi.conj().T)


def process_tomography(channel: Callable[[np.ndarray], MeasurementRecord] | Mapping[str, MeasurementRecord],
                       *, leakage_consistent: bool = False, project: bool = False) -> np.ndarray:
    """Reconstruct chi (Pauli basis I, X, Y, Z) from the four probe inputs.

    ``channel`` is either a callable taking a qutrit input state and returning
    a :class:`MeasurementRecord`, or a mapping from the input labels
    ``'g', 'e', 'gx', 'gy'`` to records.
    """
    if callable(channel):
        records = {k: channel(embed_qubit(projector(v))) for k, v in TOMO_INPUTS.items()}
    else:
        records = dict(channel)
    outputs = {
        k: reconstruct_state(records[k], project, leakage_consistent=leakage_consistent)
        for k in TOMO_INPUTS
    }
    return chi_from_outputs(outputs)


def ideal_chi(u: np.ndarray) -> np.ndarray:
    """Rank-one chi of a unitary: ``a a^dagger`` with ``a_m = Tr(E_m^dagger U) / 2``."""
    a = np.array([np.trace(p.conj().T @ u) / 2 for p in _PAULI_OPS])
    return np.outer(a, a.conj())


def process_fidelity(chi_exp: np.ndarray, chi_id: np.ndarray) -> float:
    """``sqrt(Tr[chi_exp chi_id])``; note the square root."""
    overlap = np.trace(np.asarray(chi_exp) @ np.asarray(chi_id)).real
    if overlap < -1e-9:
        raise ValueError(f"negative chi overlap {overlap}")
    return float(np.sqrt(max(overlap, 0.0)))
