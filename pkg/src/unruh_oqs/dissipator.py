"""Kossakowski matrices for a two-level atom coupled to a scalar bath.

Three builders are provided:

* :func:`kossakowski_general` assembles the matrix (and the Lamb vector)
  from arbitrary environment transforms by projecting onto the eigen-
  spaces of the free Hamiltonian ``(omega/2) n.sigma``;
* :func:`kossakowski_scalar` is the closed form obtained when the field
  correlations are diagonal, ``a = A 1 - i B [n]_x + C n n^T``;
* :func:`kossakowski_large_acceleration` drops ``C`` and replaces ``A`` by
  its high temperature value ``1 / (2 pi beta_u)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import DomainError, HermiticityError, PositivityError, ShapeError
from .field_correlations import fourier_g

POSITIVITY_TOL = 1e-12
HERMITICITY_TOL = 1e-14

# Levi-Civita symbol, eps[i, j, k]
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0

XI_LABELS = ("0", "+", "-")


def unit_vector(v, normalize: bool = True, tol: float = 1e-12) -> np.ndarray:
    """Return ``v`` as a float unit 3-vector.

    With ``normalize=False`` vectors whose norm differs from one by more
    than ``tol`` are rejected instead of rescaled.
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ShapeError(f"expected a finite 3-vector, got {v!r}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise DomainError("the zero vector has no direction")
    if abs(norm - 1.0) > tol:
        if not normalize:
            raise DomainError(f"vector norm {norm} is not 1")
        v = v / norm
    return v


def cross_matrix(n) -> np.ndarray:
    """Real antisymmetric matrix ``M[i, j] = eps_ijk n_k``."""
    return np.einsum("ijk,k->ij", LEVI_CIVITA, np.asarray(n, dtype=float))


@dataclass(frozen=True)
class PsiProjectors:
    psi0: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray

    def __getitem__(self, xi: str) -> np.ndarray:
        return {"0": self.psi0, "+": self.psi_plus, "-": self.psi_minus}[xi]


def psi_matrices(n) -> PsiProjectors:
    """Spectral projectors of the Bloch rotation generated by ``n.sigma``.

    ``psi0 = n n^T`` and ``psi(+/-) = (1 - n n^T +/- i [n]_x) / 2``.  They
    resolve the identity and satisfy ``conj(psi+) = psi-``.
    """
    n = unit_vector(n)
    nn = np.outer(n, n)
    transverse = np.eye(3) - nn
    cx = cross_matrix(n)
    return PsiProjectors(
        psi0=nn.astype(complex),
        psi_plus=0.5 * (transverse + 1j * cx),
        psi_minus=0.5 * (transverse - 1j * cx),
    )


@dataclass(frozen=True)
class KossakowskiMatrix:
    """Hermitian 3x3 dissipation matrix.

    ``A``, ``B``, ``C`` are set when the matrix has the structured form
    ``A 1 - i B [n]_x + C n n^T`` and ``n`` records the axis used.
    """

    a: np.ndarray
    A: Optional[float] = None
    B: Optional[float] = None
    C: Optional[float] = None
    n: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        if a.shape != (3, 3):
            raise ShapeError(f"Kossakowski matrix must be 3x3, got {a.shape}")
        if np.max(np.abs(a - a.conj().T)) > HERMITICITY_TOL * max(1.0, np.max(np.abs(a))):
            raise HermiticityError("Kossakowski matrix is not Hermitian")
        object.__setattr__(self, "a", a)

    @property
    def ratio(self) -> float:
        """``R = B / A``."""
        if self.A is None or self.B is None:
            raise DomainError("ratio is only defined for structured matrices")
        return self.B / self.A

    def eigenvalues(self) -> np.ndarray:
        return check_positivity(self, raise_on_failure=False)[0]


def kossakowski_from_coefficients(A: float, B: float, C: float, n) -> KossakowskiMatrix:
    """``a_ij = A delta_ij - i B eps_ijk n_k + C n_i n_j``."""
    n = unit_vector(n)
    a = A * np.eye(3) - 1j * B * cross_matrix(n) + C * np.outer(n, n)
    return KossakowskiMatrix(a, float(A), float(B), float(C), n)


def kossakowski_scalar(omega: float, beta_u: float, n) -> KossakowskiMatrix:
    """Kossakowski matrix for diagonal scalar-field correlations.

    ``A = (G(w) + G(-w))/2``, ``B = (G(w) - G(-w))/2 = w/(4 pi)`` and
    ``C = G(0) - A`` where ``G`` is :func:`fourier_g`.  Its eigenvalues are
    ``G(w)``, ``G(-w)`` (transverse) and ``G(0)`` (along ``n``).
    """
    if not (omega > 0 and beta_u > 0):
        raise DomainError(f"omega and beta_u must be positive, got {omega!r}, {beta_u!r}")
    g_plus = fourier_g(omega, beta_u)
    g_minus = fourier_g(-omega, beta_u)
    g_zero = fourier_g(0.0, beta_u)
    A = 0.5 * (g_plus + g_minus)
    B = omega / (4.0 * math.pi)
    C = g_zero - A
    return kossakowski_from_coefficients(A, B, C, n)


def kossakowski_large_acceleration(omega: float, beta_u: float, n) -> KossakowskiMatrix:
    """High temperature form ``A = 1/(2 pi beta_u)``, ``B = w/(4 pi)``, ``C = 0``.

    Positivity needs ``B <= A``, i.e. ``beta_u * omega <= 2``; larger
    values raise :class:`PositivityError`.
    """
    if not (omega > 0 and beta_u > 0):
        raise DomainError(f"omega and beta_u must be positive, got {omega!r}, {beta_u!r}")
    if beta_u * omega > 2.0:
        raise PositivityError(
            f"beta_u * omega = {beta_u * omega:g} > 2: large-acceleration matrix is not positive"
        )
    return kossakowski_from_coefficients(1.0 / (2.0 * math.pi * beta_u), omega / (4.0 * math.pi), 0.0, n)


def check_positivity(k: KossakowskiMatrix, tol: float = POSITIVITY_TOL,
                     raise_on_failure: bool = False) -> Tuple[np.ndarray, bool]:
    """Eigenvalues of ``k`` in ascending order and a positivity flag.

    Structured matrices use the closed form ``{A - B, A + B, A + C}``; a
    dense Hermitian solve is used otherwise (and cross-checked against
    the closed form when both are available).
    """
    a = k.a if isinstance(k, KossakowskiMatrix) else KossakowskiMatrix(k).a
    dense = np.linalg.eigvalsh(a)
    if isinstance(k, KossakowskiMatrix) and k.A is not None:
        closed = np.sort([k.A - abs(k.B), k.A + abs(k.B), k.A + k.C])
        scale = max(1.0, float(np.max(np.abs(closed))))
        if np.max(np.abs(closed - dense)) > 1e-10 * scale:
            raise DomainError("matrix entries are inconsistent with its A, B, C coefficients")
        evals = closed
    else:
        evals = dense
    ok = bool(evals[0] >= -tol)
    if raise_on_failure and not ok:
        raise PositivityError(f"Kossakowski matrix has negative eigenvalue {evals[0]:.3e}")
    return evals, ok


@dataclass(frozen=True)
class CorrelationTransforms:
    """Fourier (``alpha``) and Hilbert (``beta``) transforms of the bath
    correlations at the Bohr frequencies ``0, +omega, -omega``.

    Each entry is a complex 4x4 matrix indexed by ``mu, nu = 0..3``;
    ``alpha[xi]`` must be Hermitian and ``beta[xi]`` anti-Hermitian.
    """

    alpha: Dict[str, np.ndarray]
    beta: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        alpha = {xi: np.asarray(self.alpha.get(xi, np.zeros((4, 4))), dtype=complex) for xi in XI_LABELS}
        beta = {xi: np.asarray(self.beta.get(xi, np.zeros((4, 4))), dtype=complex) for xi in XI_LABELS}
        for name, mats, sign in (("alpha", alpha, 1.0), ("beta", beta, -1.0)):
            for xi, m in mats.items():
                if m.shape != (4, 4):
                    raise ShapeError(f"{name}[{xi}] must be 4x4, got {m.shape}")
                if not np.all(np.isfinite(m)):
                    raise DomainError(f"{name}[{xi}] has non-finite entries")
                if np.max(np.abs(m - sign * m.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
                    kind = "Hermitian" if sign > 0 else "anti-Hermitian"
                    raise HermiticityError(f"{name}[{xi}] is not {kind}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def scalar_field(cls, omega: float, beta_u: float) -> "CorrelationTransforms":
        """Diagonal correlations ``alpha[xi] = G(xi omega) 1`` with no Hilbert part."""
        alpha = {
            "0": fourier_g(0.0, beta_u) * np.eye(4),
            "+": fourier_g(omega, beta_u) * np.eye(4),
            "-": fourier_g(-omega, beta_u) * np.eye(4),
        }
        return cls(alpha)


_OPPOSITE = {"0": "0", "+": "-", "-": "+"}


def kossakowski_general(corr: CorrelationTransforms, n) -> Tuple[KossakowskiMatrix, np.ndarray]:
    """Kossakowski matrix and Lamb vector from generic bath transforms.

    ``a_ij = sum_xi sum_kl alpha[xi]_kl psi[xi]_ki psi[-xi]_lj`` and

        b_i = i sum_j (alpha0_0j - alpha0_j0 - beta0_0j - beta0_j0) n_j n_i
              + sum_jk eps_ijk sum_xi sum_lm beta[xi]_lm psi[xi]_lj psi[-xi]_mk

    The transforms must already be finite; no renormalization is attempted.
    Positivity of ``a`` is not enforced here, use :func:`check_positivity`.
    """
    n = unit_vector(n)
    psi = psi_matrices(n)
    a = np.zeros((3, 3), dtype=complex)
    x = np.zeros((3, 3), dtype=complex)
    for xi in XI_LABELS:
        p, q = psi[xi], psi[_OPPOSITE[xi]]
        a += p.T @ corr.alpha[xi][1:, 1:] @ q
        x += p.T @ corr.beta[xi][1:, 1:] @ q
    al0, be0 = corr.alpha["0"], corr.beta["0"]
    mixed = al0[0, 1:] - al0[1:, 0] - be0[0, 1:] - be0[1:, 0]
    b = 1j * (mixed @ n) * n + np.einsum("ijk,jk->i", LEVI_CIVITA, x)
    if np.max(np.abs(b.imag)) > 1e-12 * max(1.0, np.max(np.abs(b))):
        raise HermiticityError("Lamb vector has an imaginary part; check beta anti-Hermiticity")
    return KossakowskiMatrix(a, n=n), b.real
