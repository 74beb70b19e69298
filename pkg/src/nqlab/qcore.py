"""Qubit and d-level state algebra.

States are plain numpy arrays: a state vector is a 1-D complex array, a
density matrix a 2-D complex array. The ``as_*`` helpers validate and return
read-only copies; every other function is a pure function of its inputs.
Units are natural (hbar = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

CONSTRUCTION_TOL = 1e-12
DRIFT_TOL = 1e-10

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)


class InvalidStateError(ValueError):
    """Raised when an array violates a state invariant."""


class DimensionMismatchError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def as_state_vector(amplitudes, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise InvalidStateError(f"state vector must be a non-empty 1-D array, got shape {psi.shape}")
    norm_sq = float(np.vdot(psi, psi).real)
    if abs(norm_sq - 1.0) > tol:
        raise InvalidStateError(f"state vector squared norm {norm_sq!r} differs from 1")
    return _frozen(psi)


def normalize(amplitudes) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidStateError("cannot normalize the zero vector")
    return _frozen(psi / norm)


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise InvalidStateError("dimension-zero matrix")


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def as_density_matrix(elements, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    """Validate ``elements`` as a density matrix and return a read-only copy.

    ``tol`` bounds the Hermiticity and trace residuals; eigenvalues may dip
    to -1e-10 to absorb round-off.
    """
    rho = np.asarray(elements, dtype=complex)
    _check_square(rho)
    herr = hermiticity_error(rho)
    if herr > tol:
        raise InvalidStateError(f"not Hermitian (max deviation {herr:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace {tr.real:.15g} differs from 1")
    lam_min = float(np.linalg.eigvalsh(rho).min())
    if lam_min < -DRIFT_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam_min:.3e}")
    return _frozen(rho)


def is_projector(p, tol: float = CONSTRUCTION_TOL) -> bool:
    p = np.asarray(p, dtype=complex)
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] == 0:
        return False
    return hermiticity_error(p) <= tol and float(np.max(np.abs(p @ p - p))) <= tol


def as_projector(p, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    if not is_projector(p, tol):
        raise InvalidStateError("matrix is not a Hermitian idempotent")
    return _frozen(p)


def check_weight(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {p}")
    return p


def projector_onto(psi) -> np.ndarray:
    """|psi><psi| for a (normalized) vector."""
    psi = np.asarray(psi, dtype=complex)
    return _frozen(np.outer(psi, psi.conj()))


def maximally_mixed(dim: int) -> np.ndarray:
    return _frozen(np.eye(dim, dtype=complex) / dim)


def purity(rho) -> float:
    """Tr[rho^2]."""
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    # Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def _clipped_spectrum(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam, vecs = np.linalg.eigh(rho)
    if lam.min() < -DRIFT_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    return lam / lam.sum(), vecs


def von_neumann_entropy(rho) -> float:
    """-sum lambda ln lambda with 0 ln 0 = 0 (natural log)."""
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    lam, _ = _clipped_spectrum(rho)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def overlap_sq(psi, phi) -> float:
    """|<psi|phi>|^2."""
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"{psi.shape} vs {phi.shape}")
    return float(abs(np.vdot(psi, phi)) ** 2)


def mixture(rho1, rho2, p: float) -> np.ndarray:
    """p rho1 + (1 - p) rho2."""
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise DimensionMismatchError(f"{rho1.shape} vs {rho2.shape}")
    p = check_weight(p)
    if p == 1.0:
        return _frozen(rho1)
    if p == 0.0:
        return _frozen(rho2)
    return _frozen(p * rho1 + (1.0 - p) * rho2)


class SpectralTerm(NamedTuple):
    weight: float
    vector: np.ndarray


def spectral_decompose(rho, cutoff: float = 1e-14) -> list[SpectralTerm]:
    """Orthonormal ensemble ``[(p_j, psi_j)]`` with rho = sum p_j |psi_j><psi_j|.

    Weights at or below ``cutoff`` are dropped; the rest are returned in
    non-increasing order. Within a degenerate eigenspace the basis is
    whatever the eigensolver returns.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    lam, vecs = _clipped_spectrum(rho)
    order = np.argsort(lam, kind="stable")[::-1]
    terms = [SpectralTerm(float(lam[j]), _frozen(vecs[:, j])) for j in order if lam[j] > cutoff]
    return terms


def reconstruct(terms: Sequence[SpectralTerm]) -> np.ndarray:
    return sum(w * np.outer(v, v.conj()) for w, v in terms)


@dataclass(frozen=True)
class BlochVector:
    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        if self.norm() > 1.0 + CONSTRUCTION_TOL:
            raise InvalidStateError(f"Bloch vector norm {self.norm():.15g} exceeds 1")

    @classmethod
    def from_array(cls, s) -> "BlochVector":
        s1, s2, s3 = (float(c) for c in s)
        return cls(s1, s2, s3)

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])

    def norm(self) -> float:
        return float(np.sqrt(self.s1**2 + self.s2**2 + self.s3**2))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.norm() - 1.0) <= tol


def bloch_to_density(s: BlochVector) -> np.ndarray:
    """(I + s . Sigma) / 2."""
    rho = 0.5 * (SIGMA_0 + s.s1 * SIGMA_1 + s.s2 * SIGMA_2 + s.s3 * SIGMA_3)
    return _frozen(rho)


def density_to_bloch(rho) -> BlochVector:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionMismatchError(f"Bloch vectors describe qubits only, got shape {rho.shape}")
    s = [float(np.trace(sig @ rho).real) for sig in PAULI]
    norm = float(np.linalg.norm(s))
    if 1.0 < norm <= 1.0 + DRIFT_TOL:
        s = [c / norm for c in s]
    return BlochVector(*s)


def expectation(obs, rho) -> float:
    """Tr[obs rho] for a Hermitian observable."""
    obs = np.asarray(obs, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if obs.shape != rho.shape:
        raise DimensionMismatchError(f"{obs.shape} vs {rho.shape}")
    if hermiticity_error(obs) > CONSTRUCTION_TOL:
        raise InvalidStateError("observable is not Hermitian")
    value = np.trace(obs @ rho)
    if abs(value.imag) > DRIFT_TOL:
        raise InvalidStateError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def trace_distance(rho, sigma) -> float:
    """Half the sum of absolute eigenvalues of ``rho - sigma``."""
    diff = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def partial_trace(rho, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Reduce a bipartite matrix on ``dims = (d0, d1)`` (index = i0 * d1 + i1).

    ``keep`` selects the surviving factor, 0 or 1.
    """
    d0, d1 = dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d0 * d1, d0 * d1):
        raise DimensionMismatchError(f"shape {rho.shape} does not match dims {dims}")
    t = rho.reshape(d0, d1, d0, d1)
    if keep == 0:
        return _frozen(np.einsum("ajbj->ab", t))
    if keep == 1:
        return _frozen(np.einsum("iaib->ab", t))
    raise ValueError("keep must be 0 or 1")


def random_state_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Normalized vector of i.i.d. standard-normal complex amplitudes."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return normalize(z)


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """w |psi><psi| + (1 - w) I/d with w uniform on [0, 1]."""
    psi = random_state_vector(rng, dim)
    w = rng.uniform()
    return _frozen(w * np.outer(psi, psi.conj()) + (1.0 - w) * np.eye(dim) / dim)


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return _frozen(scale * 0.5 * (a + a.conj().T))
