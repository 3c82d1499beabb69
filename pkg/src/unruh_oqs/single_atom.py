"""Bloch-vector dynamics of a single accelerated two-level atom.

With ``rho = (1 + r.sigma)/2`` the master equation becomes the affine
equation ``dr/dt = -2 H r + eta`` where ``H`` collects the Hamiltonian
rotation (frequency ``omega_eff`` about ``n``) and the real part of the
Kossakowski matrix, and ``eta = -4 B n`` comes from its imaginary part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import ode_engine
from .dissipator import (KossakowskiMatrix, cross_matrix, kossakowski_large_acceleration,
                         kossakowski_scalar, unit_vector)
from .errors import DegenerateSpectrumError, DomainError, PositivityError, SingularGeneratorError
from .field_correlations import QuadratureConfig, hilbert_k_acc
from .qstate import STATE_TOL, bloch_vector

DEGENERACY_TOL = 1e-14


@dataclass(frozen=True)
class SingleAtomParams:
    """Parameters of the single-atom generator.

    ``omega_eff`` is the (renormalized) rotation frequency and defaults to
    the bare gap ``omega``.  ``beta_u`` is only needed by
    :func:`excitation_rate`; the dynamics depends on ``A, B, C`` alone.
    """

    omega: float
    n: np.ndarray
    A: float
    B: float
    C: float
    omega_eff: Optional[float] = None
    beta_u: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "n", unit_vector(self.n))
        if self.omega_eff is None:
            object.__setattr__(self, "omega_eff", float(self.omega))
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if self.A < abs(self.B) - 1e-15 or self.A + self.C < -1e-15:
            raise PositivityError(
                f"A={self.A:g}, B={self.B:g}, C={self.C:g} violate A >= |B|, A + C >= 0"
            )

    @classmethod
    def from_kossakowski(cls, k: KossakowskiMatrix, omega: float, omega_eff: Optional[float] = None,
                         beta_u: Optional[float] = None) -> "SingleAtomParams":
        if k.A is None or k.n is None:
            raise DomainError("need a structured Kossakowski matrix (A, B, C and n set)")
        return cls(omega, k.n, k.A, k.B, k.C, omega_eff, beta_u)

    @classmethod
    def scalar(cls, omega: float, beta_u: float, n, omega_eff: Optional[float] = None) -> "SingleAtomParams":
        """Scalar-bath coefficients at inverse temperature ``beta_u``."""
        return cls.from_kossakowski(kossakowski_scalar(omega, beta_u, n), omega, omega_eff, beta_u)

    @classmethod
    def large_acceleration(cls, omega: float, beta_u: float, n,
                           omega_eff: Optional[float] = None) -> "SingleAtomParams":
        k = kossakowski_large_acceleration(omega, beta_u, n)
        return cls.from_kossakowski(k, omega, omega_eff, beta_u)


@dataclass(frozen=True)
class BlochGenerator:
    H: np.ndarray
    eta: np.ndarray

    def system(self) -> ode_engine.LinearSystem:
        """The affine system ``dr/dt = -2 H r + eta``."""
        return ode_engine.LinearSystem(-2.0 * self.H, self.eta)


def build_bloch_generator(p: SingleAtomParams) -> BlochGenerator:
    """Assemble ``H`` and ``eta``.

    ``H = 2A 1 + C (1 - n n^T) + (omega_eff/2) [n]_x`` (so that the diagonal
    reads ``2A + C(1 - n_i^2)``, off-diagonals ``-C n_i n_j +/- omega_eff n_k/2``)
    and ``eta = -4 B n``.  Eigenvalues: ``2A`` and ``2A + C +/- i omega_eff/2``.
    """
    n = p.n
    H = (2.0 * p.A) * np.eye(3) + p.C * (np.eye(3) - np.outer(n, n)) + 0.5 * p.omega_eff * cross_matrix(n)
    return BlochGenerator(H, -4.0 * p.B * n)


def _lambda_matrices(p: SingleAtomParams, H: np.ndarray):
    A, C, Om = p.A, p.C, p.omega_eff
    I = np.eye(3)
    H2 = H @ H
    g = 2.0 * A + C
    lam1 = (g * g + Om * Om / 4.0) * I - 2.0 * g * H + H2
    lam2 = -2.0 * A * (A + C) * I + g * H - 0.5 * H2
    lam3 = (2.0 * A * (Om * Om / 4.0 - C * g) * I
            + (C * (4.0 * A + C) - Om * Om / 4.0) * H - C * H2)
    return lam1, lam2, lam3


def propagator_closed_form(p: SingleAtomParams, t: float) -> np.ndarray:
    """``M(t) = exp(-2 H t)`` from the cubic characteristic polynomial of ``H``.

        M(t) = 4/(W^2 + 4C^2) { e^{-4At} L1
                                + 2 e^{-2(2A+C)t} [L2 cos(W t) + L3 sin(W t)/W] }

    with ``W = omega_eff``.  Raises :class:`DegenerateSpectrumError` when
    ``W^2 + 4 C^2`` vanishes (the real eigenvalue then coincides with the
    real part of the complex pair and the expansion breaks down).
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    Om, C, A = p.omega_eff, p.C, p.A
    denom = Om * Om + 4.0 * C * C
    if denom < DEGENERACY_TOL:
        raise DegenerateSpectrumError(f"omega_eff^2 + 4 C^2 = {denom:.3e}")
    H = build_bloch_generator(p).H
    lam1, lam2, lam3 = _lambda_matrices(p, H)
    sin_over = t * np.sinc(Om * t / math.pi)  # sin(W t)/W, finite at W = 0
    return (4.0 / denom) * (
        math.exp(-4.0 * A * t) * lam1
        + 2.0 * math.exp(-2.0 * (2.0 * A + C) * t) * (lam2 * math.cos(Om * t) + lam3 * sin_over)
    )


def asymptotic_state(p: SingleAtomParams) -> np.ndarray:
    """Stationary Bloch vector ``H^{-1} eta / 2``; equals ``-(B/A) n``,
    i.e. ``-tanh(beta_u omega/2) n`` for the scalar bath."""
    if p.A == 0.0:
        raise SingularGeneratorError("A = 0: the Bloch generator is not invertible")
    gen = build_bloch_generator(p)
    return 0.5 * np.linalg.solve(gen.H, gen.eta)


def _to_ball(r: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + STATE_TOL:
        raise PositivityError(f"evolved Bloch vector has norm {norm:.15g} > 1")
    return r / norm if norm > 1.0 else r


def evolve_state(p: SingleAtomParams, r0, t: float, fallback: bool = True) -> np.ndarray:
    """``r(t) = M(t) r0 + (1 - M(t)) r_inf``.

    Uses the closed-form propagator; on a degenerate spectrum the numerical
    exponential is used instead, or the error is re-raised when
    ``fallback`` is false.
    """
    r0 = bloch_vector(r0)
    try:
        M = propagator_closed_form(p, t)
    except DegenerateSpectrumError:
        if not fallback:
            raise
        M = ode_engine.expm(-2.0 * build_bloch_generator(p).H * t)
    r_inf = asymptotic_state(p)
    return _to_ball(M @ r0 + r_inf - M @ r_inf)


def transition_probability(p: SingleAtomParams, ri, rf, t: float) -> float:
    """Probability of finding the state ``rf`` at time ``t`` starting from ``ri``.

    Closed form of ``(1 + rf . r(t))/2``:

        P = 1/2 { 1 - (rf.n)(1 - e^{-4At}) B/A + e^{-4At}(ri.n)(rf.n)
                  + e^{-2(2A+C)t} ( [ri.rf - (ri.n)(rf.n)] cos(W t)
                                    + n.(ri x rf) sin(W t) ) }

    For the scalar bath ``B/A = tanh(beta_u omega/2)``.  For a mixed
    ``rf`` the value is the mean of the observable ``rho_f``.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    ri, rf = bloch_vector(ri), bloch_vector(rf)
    n, A, C, Om = p.n, p.A, p.C, p.omega_eff
    ni, nf = float(ri @ n), float(rf @ n)
    decay_n = math.exp(-4.0 * A * t)
    decay_t = math.exp(-2.0 * (2.0 * A + C) * t)
    prob = 0.5 * (
        1.0
        - nf * (1.0 - decay_n) * (p.B / p.A)
        + decay_n * ni * nf
        + decay_t * ((float(ri @ rf) - ni * nf) * math.cos(Om * t)
                     + float(n @ np.cross(ri, rf)) * math.sin(Om * t))
    )
    return min(1.0, max(0.0, prob))


def excitation_rate(p: SingleAtomParams) -> float:
    """Ground-to-excited rate ``(omega/pi) / (exp(beta_u omega) - 1)``.

    Equal to ``4A / (1 + exp(beta_u omega))``, the initial slope of the
    ground-to-excited transition probability, for the scalar bath.
    """
    if p.beta_u is None:
        raise DomainError("excitation_rate needs beta_u")
    x = p.beta_u * p.omega
    if math.isinf(x) or x > 700.0:
        return 0.0
    return (p.omega / math.pi) / math.expm1(x)


def acceleration_frequency_shift(omega: float, beta_u: float,
                                 quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Acceleration dependent part of ``omega_eff - omega``, i.e.
    ``i[K(-omega) - K(omega)]`` restricted to the finite piece of ``K``.

    No default subtraction of the inertial part is applied anywhere; pass
    ``omega + shift + <your inertial correction>`` as ``omega_eff`` if wanted.
    """
    return hilbert_k_acc(-omega, beta_u, quad) - hilbert_k_acc(omega, beta_u, quad)
