"""Qubit and two-qubit density matrices: Pauli codecs and entanglement."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dissipator import unit_vector
from .errors import DomainError, HermiticityError, PositivityError, ShapeError

STATE_TOL = 1e-12

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)

# PAULI4[mu, nu] = sigma_mu (x) sigma_nu
PAULI4 = np.array([[np.kron(PAULI[m], PAULI[v]) for v in range(4)] for m in range(4)])

SPIN_FLIP = np.kron(SIGMA2, SIGMA2)


def _check_density(rho: np.ndarray, dim: int, tol: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ShapeError(f"expected a {dim}x{dim} matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise HermiticityError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-12:
        raise DomainError(f"density matrix has trace {np.trace(rho).real}")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -tol:
        raise PositivityError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def min_eigenvalue(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])


# ---------------------------------------------------------------------------
# single qubit

def bloch_vector(r, tol: float = STATE_TOL) -> np.ndarray:
    """Validate a Bloch vector: finite, three components, norm at most one."""
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise ShapeError(f"expected a finite 3-vector, got {r!r}")
    if np.linalg.norm(r) > 1.0 + tol:
        raise PositivityError(f"|r| = {np.linalg.norm(r):.15g} exceeds 1")
    return r


def bloch_encode(r) -> np.ndarray:
    """``rho = (1 + r . sigma) / 2``."""
    r = bloch_vector(r)
    return 0.5 * (SIGMA0 + r[0] * SIGMA1 + r[1] * SIGMA2 + r[2] * SIGMA3)


def bloch_decode(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Components ``r_i = Tr[rho sigma_i]``."""
    rho = _check_density(rho, 2, tol)
    return np.array([np.trace(rho @ s).real for s in PAULI[1:]])


def gibbs_state(omega: float, n, beta: float) -> np.ndarray:
    """Thermal state of ``H = (omega/2) n . sigma`` at inverse temperature ``beta``.

    Computed in the eigenbasis of ``H``: the Bloch vector is
    ``-tanh(beta omega / 2) n``.  ``beta = inf`` gives the ground state.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    n = unit_vector(n)
    p_up = 0.5 * (SIGMA0 + sum(n[i] * PAULI[i + 1] for i in range(3)))
    p_down = SIGMA0 - p_up
    # populations e^{-beta E} / Z with E = +-omega/2, written to avoid overflow
    w_up = 0.5 * (1.0 - np.tanh(0.5 * beta * omega))
    return w_up * p_up + (1.0 - w_up) * p_down


# ---------------------------------------------------------------------------
# two qubits

@dataclass(frozen=True)
class TwoAtomState:
    """Real Pauli components of a two-qubit state.

    ``rho = (1/4)[1(x)1 + sum v0i 1(x)s_i + sum vi0 s_i(x)1 + sum vij s_i(x)s_j]``.
    """

    v0i: np.ndarray
    vi0: np.ndarray
    vij: np.ndarray

    def __post_init__(self):
        v0i = np.asarray(self.v0i, dtype=float).reshape(3)
        vi0 = np.asarray(self.vi0, dtype=float).reshape(3)
        vij = np.asarray(self.vij, dtype=float).reshape(3, 3)
        object.__setattr__(self, "v0i", v0i)
        object.__setattr__(self, "vi0", vi0)
        object.__setattr__(self, "vij", vij)

    @property
    def tau(self) -> float:
        return float(np.trace(self.vij))

    def components(self) -> np.ndarray:
        """4x4 array ``c[mu, nu] = Tr[rho s_mu (x) s_nu]`` with ``c[0, 0] = 1``."""
        c = np.empty((4, 4))
        c[0, 0] = 1.0
        c[0, 1:] = self.v0i
        c[1:, 0] = self.vi0
        c[1:, 1:] = self.vij
        return c

    def to_vector(self) -> np.ndarray:
        """Ordering ``(1, v0i, vi0, vij row-major)``."""
        return np.concatenate([[1.0], self.v0i, self.vi0, self.vij.ravel()])

    @classmethod
    def from_vector(cls, x) -> "TwoAtomState":
        x = np.asarray(x, dtype=float)
        if x.shape != (16,):
            raise ShapeError(f"component vector must have 16 entries, got {x.shape}")
        return cls(x[1:4], x[4:7], x[7:].reshape(3, 3))

    @classmethod
    def from_components(cls, c) -> "TwoAtomState":
        c = np.asarray(c, dtype=float)
        return cls(c[0, 1:], c[1:, 0], c[1:, 1:])

    @classmethod
    def singlet(cls) -> "TwoAtomState":
        return cls(np.zeros(3), np.zeros(3), -np.eye(3))

    @classmethod
    def product(cls, r1, r2) -> "TwoAtomState":
        """``rho_1 (x) rho_2`` for Bloch vectors ``r1`` (first atom) and ``r2``."""
        r1, r2 = bloch_vector(r1), bloch_vector(r2)
        return cls(r2, r1, np.outer(r1, r2))


def pauli4_encode(s: TwoAtomState, tol: float = 1e-10, check: bool = True) -> np.ndarray:
    """Density matrix from Pauli components.

    Raises :class:`PositivityError` when the components do not describe a
    positive matrix (eigenvalue below ``-tol``), unless ``check`` is off.
    """
    rho = 0.25 * np.einsum("mv,mvij->ij", s.components(), PAULI4)
    if check:
        lo = min_eigenvalue(rho)
        if lo < -tol:
            raise PositivityError(f"components give a non-positive matrix (min eigenvalue {lo:.3e})")
    return rho


def pauli4_decode(rho, tol: float = STATE_TOL) -> TwoAtomState:
    rho = _check_density(rho, 4, tol)
    c = np.einsum("ij,mvji->mv", rho, PAULI4).real
    return TwoAtomState.from_components(c)


def partial_trace(rho, subsystem: str = "second") -> np.ndarray:
    """Trace out ``subsystem`` (``"first"`` or ``"second"``) of a 4x4 state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 matrix, got {rho.shape}")
    r = rho.reshape(2, 2, 2, 2)
    if subsystem == "second":
        return np.einsum("ajbj->ab", r)
    if subsystem == "first":
        return np.einsum("jajb->ab", r)
    raise DomainError(f"subsystem must be 'first' or 'second', got {subsystem!r}")


def _psd_sqrt(m: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues below ``floor`` are dropped."""
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence(rho, clamp: float = STATE_TOL) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots, in decreasing order, of the
    eigenvalues of ``rho rho~`` with ``rho~ = (s2 (x) s2) rho^T (s2 (x) s2)``.
    They are obtained as the singular values of ``sqrt(rho) sqrt(rho~)``,
    which avoids squaring.  Eigenvalues of ``rho`` with magnitude below
    ``clamp`` are set to zero before the square root: for rank-deficient
    states roundoff of order 1e-16 would otherwise enter the ``l_i`` as its
    square root.  Eigenvalues below ``-clamp`` raise.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 matrix, got {rho.shape}")
    lo = min_eigenvalue(rho)
    if lo < -clamp:
        raise PositivityError(f"state has a negative eigenvalue {lo:.3e}")
    sq = _psd_sqrt(rho, floor=clamp)
    sq_tilde = SPIN_FLIP @ sq.conj() @ SPIN_FLIP
    lam = np.linalg.svd(sq @ sq_tilde, compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(max(0.0, c))
