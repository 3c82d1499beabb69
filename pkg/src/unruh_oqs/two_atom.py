"""Collective dynamics of two atoms sharing one scalar bath.

Both atoms couple through the collective operators
``S_i = s_i (x) 1 + 1 (x) s_i``, so the dissipator reads

    L[rho] = sum_ij a_ij ( S_j rho S_i - {S_i S_j, rho}/2 )

with the single-atom Kossakowski matrix ``a``.  The generator is
assembled numerically as a real 16x16 matrix acting on the Pauli
components ``(1, v0i, vi0, vij)`` of the state.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import ode_engine
from .dissipator import KossakowskiMatrix, check_positivity, unit_vector
from .errors import ConvergenceError, DomainError, PositivityError
from .qstate import PAULI, PAULI4, TwoAtomState, concurrence, min_eigenvalue, pauli4_encode

__all__ = [
    "TwoAtomState",
    "CollectiveLiouvillian",
    "build_collective_liouvillian",
    "evolve_two_atom",
    "asymptotic_two_atom",
    "stationary_components",
    "entanglement_threshold",
    "asymptotic_concurrence",
    "scenario_product",
    "scenario_werner",
    "evolve_two_atom_grid",
    "stationary_concurrence",
    "werner_state",
    "bell_diagonal",
    "tau_functional",
    "expanded_component_rhs",
    "TAU_INDEX",
]

# (mu, nu) label of each entry of TwoAtomState.to_vector()
COMPONENT_LABELS = ([(0, 0)] + [(0, i) for i in range(1, 4)] + [(i, 0) for i in range(1, 4)]
                    + [(i, j) for i in range(1, 4) for j in range(1, 4)])
TAU_INDEX = [COMPONENT_LABELS.index((i, i)) for i in range(1, 4)]
POSITIVITY_DRIFT_TOL = 1e-8
TAU_TOL = 1e-9

_BASIS = np.array([PAULI4[m, v] for m, v in COMPONENT_LABELS])
_COLLECTIVE = [np.kron(PAULI[i], PAULI[0]) + np.kron(PAULI[0], PAULI[i]) for i in range(1, 4)]


def tau_functional() -> np.ndarray:
    """Row vector extracting ``tau = trace(vij)`` from a component vector."""
    e = np.zeros(16)
    e[TAU_INDEX] = 1.0
    return e


def _identity_functional() -> np.ndarray:
    e = np.zeros(16)
    e[0] = 1.0
    return e


@dataclass(frozen=True)
class CollectiveLiouvillian:
    """Real generator ``dx/dt = L x`` on component vectors ``x``."""

    L: np.ndarray
    kossakowski: KossakowskiMatrix
    n: np.ndarray
    omega_eff: float = 0.0

    @property
    def rates(self) -> np.ndarray:
        """Eigenvalues of the Kossakowski matrix (``A-B, A+B, A+C`` when structured)."""
        return check_positivity(self.kossakowski)[0]

    @property
    def ratio(self) -> float:
        return self.kossakowski.ratio

    def system(self) -> ode_engine.LinearSystem:
        return ode_engine.LinearSystem(self.L)

    def apply(self, s: TwoAtomState) -> np.ndarray:
        return self.L @ s.to_vector()


def _dissipator(a: np.ndarray, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    for i in range(3):
        for j in range(3):
            if a[i, j] == 0:
                continue
            si, sj = _COLLECTIVE[i], _COLLECTIVE[j]
            sisj = si @ sj
            out += a[i, j] * (sj @ rho @ si - 0.5 * (sisj @ rho + rho @ sisj))
    return out


def build_collective_liouvillian(k: KossakowskiMatrix, n=None, omega_eff: float = 0.0) -> CollectiveLiouvillian:
    """Matrix of the collective generator in the Pauli component basis.

    Column ``q`` is obtained by applying the generator to ``P_q / 4`` and
    reading off ``Tr[P_p L(P_q/4)]``.  A collective Hamiltonian
    ``(omega_eff/2) n.S`` is added when ``omega_eff`` is nonzero; it is off
    by default because it cannot create correlations.

    Raises
    ------
    PositivityError
        If ``k`` is not positive semi-definite.
    """
    check_positivity(k, raise_on_failure=True)
    if n is None:
        if k.n is None:
            raise DomainError("n must be given for an unstructured Kossakowski matrix")
        n = k.n
    n = unit_vector(n)
    ham = 0.5 * omega_eff * sum(n[i] * _COLLECTIVE[i] for i in range(3))
    L = np.empty((16, 16))
    for q in range(16):
        rho = 0.25 * _BASIS[q]
        drho = _dissipator(k.a, rho) - 1j * (ham @ rho - rho @ ham)
        L[:, q] = np.einsum("pij,ji->p", _BASIS, drho).real
    return CollectiveLiouvillian(L, k, n, float(omega_eff))


def _checked_state(L: CollectiveLiouvillian, x: np.ndarray, tau0: float) -> TwoAtomState:
    s = TwoAtomState.from_vector(x)
    if abs(s.tau - tau0) > TAU_TOL:
        raise ConvergenceError(f"tau drifted from {tau0!r} to {s.tau!r}")
    lo = min_eigenvalue(pauli4_encode(s, check=False))
    if lo < -POSITIVITY_DRIFT_TOL:
        raise PositivityError(f"evolved state lost positivity (min eigenvalue {lo:.3e})")
    return s


def evolve_two_atom(L: CollectiveLiouvillian, s0: TwoAtomState, t: float,
                    tol: Optional[float] = None) -> TwoAtomState:
    """Propagate ``s0`` for a time ``t``.

    With ``tol=None`` the exact exponential ``expm(L t)`` is used; otherwise
    the adaptive Runge-Kutta integrator runs with ``rtol=tol`` and
    ``atol=tol/100``.  The result is checked for conservation of ``tau`` and
    for positivity (drift below ``-1e-8`` raises).
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    pauli4_encode(s0)  # validates positivity of the input
    x0 = s0.to_vector()
    if tol is None:
        x = ode_engine.expm(L.L * t) @ x0
    else:
        x = ode_engine.integrate(L.system(), x0, t, rtol=tol, atol=tol / 100.0)
    x[0] = 1.0
    return _checked_state(L, x, s0.tau)


def evolve_two_atom_grid(L: CollectiveLiouvillian, s0: TwoAtomState, times) -> list:
    """States on an increasing time grid, using one step propagator per gap."""
    pauli4_encode(s0)
    out = []
    x = s0.to_vector()
    t_prev = 0.0
    for t in times:
        if t < t_prev:
            raise DomainError("times must be non-decreasing and non-negative")
        x = ode_engine.expm(L.L * (t - t_prev)) @ x
        x[0] = 1.0
        t_prev = t
        out.append(_checked_state(L, x, s0.tau))
    return out


def _check_tau(tau: float) -> None:
    if not -3.0 - 1e-12 <= tau <= 1.0 + 1e-12:
        raise DomainError(f"tau must lie in [-3, 1], got {tau!r}")


def _check_ratio(R: float) -> None:
    if not -1e-12 <= R <= 1.0 + 1e-12:
        raise DomainError(f"R must lie in [0, 1], got {R!r}")


def bell_diagonal(tau: float) -> TwoAtomState:
    """Rotation-invariant state with ``vij = (tau/3) delta_ij``; physical for
    every admissible ``tau``."""
    _check_tau(tau)
    return TwoAtomState(np.zeros(3), np.zeros(3), (tau / 3.0) * np.eye(3))


def asymptotic_two_atom(L: CollectiveLiouvillian, tau: float, method: str = "null-space",
                        max_time: float = 1e6) -> TwoAtomState:
    """Stationary state in the sector of fixed ``tau``.

    ``"null-space"`` solves ``L x = 0`` with ``x[0] = 1`` and
    ``trace(vij) = tau`` by least squares (rank checked).
    ``"long-time"`` propagates a ``tau``-matched Bell-diagonal state with
    doubling horizons until successive states agree to 1e-13.
    """
    _check_tau(tau)
    if L.kossakowski.A is not None:
        _check_ratio(L.ratio)
    if method == "null-space":
        x = ode_engine.stationary_solve(
            L.system(), [(_identity_functional(), 1.0), (tau_functional(), tau)])
    elif method == "long-time":
        x = bell_diagonal(tau).to_vector()
        horizon = 1.0 / max(float(np.max(np.abs(L.L))), 1e-300)
        prev = ode_engine.expm(L.L * horizon) @ x
        while True:
            horizon *= 2.0
            if horizon > max_time:
                raise ConvergenceError("long-time propagation did not settle")
            cur = ode_engine.expm(L.L * horizon) @ x
            if np.max(np.abs(cur - prev)) < 1e-13:
                x = cur
                break
            prev = cur
    else:
        raise DomainError(f"unknown method {method!r}")
    x[0] = 1.0
    return TwoAtomState.from_vector(x)


def stationary_components(tau: float, R: float, n, sign: float = -1.0) -> TwoAtomState:
    """Closed-form stationary components

        v0i = vi0 = sign * R (tau + 3) n_i / (3 + R^2)
        vij = [(tau - R^2) delta_ij + R^2 (tau + 3) n_i n_j] / (3 + R^2)

    The dynamics built here selects ``sign = -1`` (local polarization
    along ``-n``, like the single-atom thermal state); ``sign = +1`` is the
    locally rotated partner with the same entanglement.
    """
    _check_tau(tau)
    _check_ratio(R)
    n = unit_vector(n)
    d = 3.0 + R * R
    v = sign * R * (tau + 3.0) / d * n
    vij = ((tau - R * R) * np.eye(3) + R * R * (tau + 3.0) * np.outer(n, n)) / d
    return TwoAtomState(v, v, vij)


def entanglement_threshold(R: float) -> float:
    """Largest ``tau`` for which the stationary state is still entangled,
    ``(5R^2 - 3)/(3 - R^2)``."""
    _check_ratio(R)
    return (5.0 * R * R - 3.0) / (3.0 - R * R)


def asymptotic_concurrence(tau: float, R: float) -> float:
    """Concurrence of the stationary state,
    ``max(0, (3 - R^2)/(2(3 + R^2)) * [tau* - tau])``."""
    _check_tau(tau)
    _check_ratio(R)
    c = (3.0 - R * R) / (2.0 * (3.0 + R * R)) * (entanglement_threshold(R) - tau)
    return c if c > 1e-12 else 0.0


def scenario_product(n_vec, m_vec) -> float:
    """``tau`` of the product of the pure states along ``n_vec`` and ``m_vec``."""
    return float(unit_vector(n_vec) @ unit_vector(m_vec))


def werner_state(epsilon: float) -> TwoAtomState:
    """``(1 - eps) singlet + eps * 1/4``."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    return TwoAtomState(np.zeros(3), np.zeros(3), -(1.0 - epsilon) * np.eye(3))


def scenario_werner(epsilon: float, R: float) -> Tuple[TwoAtomState, float, float]:
    """Singlet mixed with white noise: initial state, its concurrence
    ``max(0, 1 - 3 eps/2)`` and the asymptotic concurrence gain.

    For ``eps < 2/3`` the gain is ``3 R^2 eps / (3 + R^2)``.
    """
    s = werner_state(epsilon)
    c0 = max(0.0, 1.0 - 1.5 * epsilon)
    gain = asymptotic_concurrence(s.tau, R) - c0
    return s, c0, gain


def expanded_component_rhs(s: TwoAtomState, A: float, B: float, n) -> TwoAtomState:
    """Hand-expanded component equations, kept as a regression fixture.

    This expanded form is known to be faulty: the first equation does
    not annihilate the singlet (it leaves ``-3 B n``) and its constant drive
    ``B(1 + 2 tau) n`` disagrees with the ``-4 B n`` of the operator form.
    The dynamics in this package never uses it.
    """
    n = unit_vector(n)
    tau = s.tau
    v0i, vi0, vij = s.v0i, s.vi0, s.vij
    d0i = -4 * A * v0i + B * (1 + 2 * tau) * n - 2 * B * (vij @ n)
    di0 = -4 * A * vi0 + B * (1 + 2 * tau) * n - 2 * B * (vij.T @ n)
    dij = (-4 * A * (2 * vij + vij.T - tau * np.eye(3))
           + 4 * B * (np.outer(n, v0i) + np.outer(vi0, n))
           + 2 * B * (np.outer(n, vi0) + np.outer(v0i, n))
           - 2 * B * np.eye(3) * float(n @ (vi0 + v0i)))
    return TwoAtomState(d0i, di0, dij)


def stationary_concurrence(L: CollectiveLiouvillian, tau: float, method: str = "null-space") -> float:
    """Wootters concurrence of the numerically computed stationary state."""
    s = asymptotic_two_atom(L, tau, method)
    return concurrence(pauli4_encode(s))
