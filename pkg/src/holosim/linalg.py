"""Matrix primitives, basis conventions and fidelity metrics.

Basis order is fixed throughout the package::

    qutrit:  |e> -> 0, |g> -> 1, |a> -> 2
    qubit:   |e> -> 0, |g> -> 1

so that ``Z |e> = +|e>``.  Density matrices and operators are plain
``numpy`` complex arrays; the helpers below validate them on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

E, G, A = 0, 1, 2

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULIS = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}
PAULI_LABELS = ("I", "X", "Y", "Z")


@dataclass(frozen=True)
class Tolerances:
    """Default absolute tolerances used by the validators."""

    hermitian: float = 1e-10
    trace: float = 1e-9
    eigenvalue: float = 1e-9
    unitary: float = 1e-8


_tolerances = Tolerances()


def get_tolerances() -> Tolerances:
    return _tolerances


def set_tolerances(**changes) -> Tolerances:
    """Replace one or more default tolerances; returns the previous set."""
    global _tolerances
    previous = _tolerances
    _tolerances = replace(_tolerances, **changes)
    return previous


class DensityMatrixError(ValueError):
    """Raised when a matrix fails a physicality check."""


class BlochVector(NamedTuple):
    """Stokes components plus total qubit population ``s0``."""

    s_x: float
    s_y: float
    s_z: float
    s_0: float = 1.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.s_x, self.s_y, self.s_z])


def pauli(axis: str) -> np.ndarray:
    """Return the Pauli matrix for ``axis`` in {'I', 'X', 'Y', 'Z'}."""
    try:
        return _PAULIS[axis.upper()].copy()
    except (KeyError, AttributeError):
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def ket(*amplitudes) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex)
    return v / np.linalg.norm(v)


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def basis_density(label: str) -> np.ndarray:
    """Qutrit density matrix of one basis state, ``label`` in 'e', 'g', 'a'."""
    rho = np.zeros((3, 3), dtype=complex)
    idx = {"e": E, "g": G, "a": A}[label]
    rho[idx, idx] = 1.0
    return rho


def embed_qubit(rho_q: np.ndarray) -> np.ndarray:
    """Place a 2x2 qubit density matrix into the qutrit space."""
    rho = np.zeros((3, 3), dtype=complex)
    rho[:2, :2] = rho_q
    return rho


def is_hermitian(m: np.ndarray, atol: float | None = None) -> bool:
    atol = _tolerances.hermitian if atol is None else atol
    return bool(np.allclose(m, m.conj().T, rtol=0.0, atol=atol))


def check_density(rho: np.ndarray, *, allow_subnormalized: bool = False) -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    Parameters
    ----------
    rho : array_like
        Square matrix of dimension 2 or 3.
    allow_subnormalized : bool
        Accept ``0 < Tr rho <= 1`` (qubit blocks of leaked states).

    Raises
    ------
    DensityMatrixError
        On non-finite entries, non-Hermiticity, wrong trace or a negative
        eigenvalue beyond the configured tolerance.
    """
    rho = np.asarray(rho, dtype=complex)
    tol = _tolerances
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 3):
        raise DensityMatrixError(f"expected a 2x2 or 3x3 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise DensityMatrixError("density matrix has non-finite entries")
    if not is_hermitian(rho):
        raise DensityMatrixError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if allow_subnormalized:
        if not 0.0 < tr <= 1.0 + tol.trace:
            raise DensityMatrixError(f"trace {tr} outside (0, 1]")
    elif abs(tr - 1.0) > tol.trace:
        raise DensityMatrixError(f"trace {tr} differs from 1")
    lam = np.linalg.eigvalsh(rho).min()
    if lam < -tol.eigenvalue:
        raise DensityMatrixError(f"negative eigenvalue {lam}")
    return rho


def density_from_stokes(s: BlochVector, *, scale_identity: bool = False) -> np.ndarray:
    """Raw qubit reconstruction ``(I + s . sigma) / 2``.

    No positivity is enforced.  With ``scale_identity`` the identity term is
    weighted by ``s_0`` instead of 1, so a leaked state keeps its reduced
    trace.
    """
    weight = s.s_0 if scale_identity else 1.0
    return 0.5 * (weight * I2 + s.s_x * SIGMA_X + s.s_y * SIGMA_Y + s.s_z * SIGMA_Z)


def bloch_from_density(rho_q: np.ndarray) -> BlochVector:
    rho_q = np.asarray(rho_q)
    return BlochVector(
        float(np.trace(rho_q @ SIGMA_X).real),
        float(np.trace(rho_q @ SIGMA_Y).real),
        float(np.trace(rho_q @ SIGMA_Z).real),
        float(np.trace(rho_q).real),
    )


def project_qubit(rho: np.ndarray) -> tuple[np.ndarray, float]:
    """Split a qutrit state into its (unnormalized) qubit block and leakage."""
    rho = np.asarray(rho, dtype=complex)
    return rho[:2, :2].copy(), float(rho[A, A].real)


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix, clipping eigenvalues at 0."""
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _require_psd(m: np.ndarray, name: str) -> None:
    if not is_hermitian(m):
        raise DensityMatrixError(f"{name} is not Hermitian")
    lam = np.linalg.eigvalsh(m).min()
    if lam < -_tolerances.eigenvalue:
        raise DensityMatrixError(f"{name} has negative eigenvalue {lam}")


def state_fidelity(rho: np.ndarray, sigma: np.ndarray, method: str = "auto") -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` (not squared).

    For 2x2 inputs the closed form
    ``sqrt(Tr(rho sigma) + 2 sqrt(det rho det sigma))`` is used unless
    ``method='eig'``.  Inputs may be subnormalized (leaked qubit blocks).
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    _require_psd(rho, "rho")
    _require_psd(sigma, "sigma")
    if method not in ("auto", "closed", "eig"):
        raise ValueError(f"unknown method {method!r}")
    if rho.shape == (2, 2) and method != "eig":
        overlap = np.trace(rho @ sigma).real
        dets = max(np.linalg.det(rho).real, 0.0) * max(np.linalg.det(sigma).real, 0.0)
        return float(np.sqrt(max(overlap + 2.0 * np.sqrt(dets), 0.0)))
    sr = sqrtm_psd(rho)
    inner = sr @ sigma @ sr
    inner = 0.5 * (inner + inner.conj().T)
    return float(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0.0, None)).sum())


def check_unitary(u: np.ndarray, atol: float | None = None) -> np.ndarray:
    atol = _tolerances.unitary if atol is None else atol
    u = np.asarray(u, dtype=complex)
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0.0, atol=atol):
        raise ValueError("matrix is not unitary")
    return u


def unitary_infidelity_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    """``1 - |Tr(U^dagger V)| / d``; zero iff ``V = exp(i alpha) U``."""
    u = check_unitary(u)
    v = check_unitary(v)
    return float(max(0.0, 1.0 - abs(np.trace(u.conj().T @ v)) / u.shape[0]))
