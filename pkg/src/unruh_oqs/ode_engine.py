"""Dense linear-ODE oracles for small generators.

Everything here works on affine systems ``dx/dt = G x + d`` with ``G`` a
real ``k x k`` matrix (``k = 3`` for a Bloch vector, ``k = 16`` for the
two-atom Pauli components).  The routines are deliberately independent of
the closed-form solutions they are used to check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, RankDeficiencyError, ShapeError, StepSizeError

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


@dataclass(frozen=True)
class LinearSystem:
    """Affine system ``dx/dt = generator @ x + drive``."""

    generator: np.ndarray
    drive: Optional[np.ndarray] = None

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeError(f"generator must be square, got shape {g.shape}")
        d = np.zeros(g.shape[0]) if self.drive is None else np.asarray(self.drive, dtype=float)
        if d.shape != (g.shape[0],):
            raise ShapeError(f"drive must have shape ({g.shape[0]},), got {d.shape}")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(d))):
            raise DomainError("system has non-finite entries")
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "drive", d)

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    def rhs(self, x: np.ndarray) -> np.ndarray:
        return self.generator @ x + self.drive


# ---------------------------------------------------------------------------
# matrix exponential

# Pade numerator coefficients b_0..b_m for degrees 3, 5, 7, 9, 13
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
# largest 1-norm for which degree m reaches double precision (Higham 2005)
_THETA = ((3, 1.495585217958292e-2), (5, 2.539398330063230e-1),
          (7, 9.504178996162932e-1), (9, 2.097847961257068e0))
_THETA13 = 5.371920351148152e0


def _pade_uv(A: np.ndarray, m: int) -> Tuple[np.ndarray, np.ndarray]:
    b = _PADE[m]
    ident = np.eye(A.shape[0])
    A2 = A @ A
    if m == 13:
        A4 = A2 @ A2
        A6 = A4 @ A2
        U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
                 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
        V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
             + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
        return U, V
    powers = [ident, A2]
    for _ in range(2, m // 2 + 1):
        powers.append(powers[-1] @ A2)
    U = A @ sum(b[2 * j + 1] * powers[j] for j in range(m // 2 + 1))
    V = sum(b[2 * j] * powers[j] for j in range(m // 2 + 1))
    return U, V


def expm(G) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a diagonal Pade
    approximant of degree 3 to 13, chosen from the 1-norm of ``G``."""
    A = np.asarray(G, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expm needs a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("expm input has non-finite entries")
    norm = float(np.max(np.sum(np.abs(A), axis=0))) if A.size else 0.0
    if norm == 0.0:
        return np.eye(A.shape[0])
    for m, theta in _THETA:
        if norm <= theta:
            U, V = _pade_uv(A, m)
            return np.linalg.solve(V - U, V + U)
    s = max(0, int(math.ceil(math.log2(norm / _THETA13))))
    if s > 1023:
        raise OverflowError("matrix norm too large for expm")
    U, V = _pade_uv(A / 2.0 ** s, 13)
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    if not np.all(np.isfinite(R)):
        raise OverflowError("expm overflowed")
    return R


def affine_flow(sys: LinearSystem, x0, t: float) -> np.ndarray:
    """Exact solution of the affine system at time ``t`` via an augmented
    ``(k+1) x (k+1)`` exponential."""
    k = sys.dim
    aug = np.zeros((k + 1, k + 1))
    aug[:k, :k] = sys.generator
    aug[:k, k] = sys.drive
    E = expm(aug * float(t))
    return E[:k, :k] @ np.asarray(x0, dtype=float) + E[:k, k]


# ---------------------------------------------------------------------------
# adaptive Runge-Kutta

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def integrate(sys: LinearSystem, x0, t: float, rtol: float = DEFAULT_RTOL,
              atol: float = DEFAULT_ATOL, max_steps: int = 200_000,
              h0: Optional[float] = None) -> np.ndarray:
    """Integrate ``dx/dt = G x + d`` from 0 to ``t`` with Dormand-Prince 5(4).

    The step size is controlled by a PI controller on the RMS-scaled local
    error.  The 5th-order solution is propagated (local extrapolation).
    Returns ``x0`` unchanged for ``t == 0``.

    Raises
    ------
    StepSizeError
        If the step size underflows or ``max_steps`` is exceeded.
    """
    if not (rtol > 0 and atol > 0):
        raise DomainError("tolerances must be positive")
    if t < 0:
        raise DomainError("integration time must be non-negative")
    x = np.array(x0, dtype=float)
    if x.shape != (sys.dim,):
        raise ShapeError(f"state has shape {x.shape}, system dimension is {sys.dim}")
    if t == 0:
        return x

    f = sys.rhs
    if h0 is None:
        scale = atol + rtol * np.abs(x)
        d0 = np.sqrt(np.mean((x / scale) ** 2))
        d1 = np.sqrt(np.mean((f(x) / scale) ** 2))
        h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(h0, t)
    tcur = 0.0
    k = np.empty((7, sys.dim))
    k[0] = f(x)
    err_prev = 1e-4
    safety, beta1, beta2 = 0.9, 0.7 / 5, 0.4 / 5
    steps = 0
    while tcur < t:
        if steps >= max_steps:
            raise StepSizeError(f"exceeded {max_steps} steps at t={tcur:g}")
        if h < 1e-14 * max(1.0, abs(tcur)):
            raise StepSizeError(f"step size underflow at t={tcur:g}")
        last = tcur + h >= t
        if last:
            h = t - tcur
        for s in range(1, 7):
            k[s] = f(x + h * (np.dot(_A[s], k[:s])))
        x_new = x + h * (_B5 @ k)
        err_vec = h * (_E @ k)
        scale = atol + rtol * np.maximum(np.abs(x), np.abs(x_new))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        steps += 1
        if err <= 1.0:
            tcur = t if last else tcur + h
            x = x_new
            k[0] = k[6]  # first-same-as-last
            if err == 0.0:
                factor = 5.0
            else:
                factor = safety * err ** -beta1 * err_prev ** beta2
                factor = min(5.0, max(0.2, factor))
            err_prev = max(err, 1e-4)
            h *= factor
        else:
            h *= max(0.2, safety * err ** -0.2)
    return x


def integrate_grid(sys: LinearSystem, x0, times: Sequence[float], **kw) -> np.ndarray:
    """States at each of the increasing ``times`` (first row is at ``times[0]``
    relative to ``x0`` at 0)."""
    out = []
    x = np.array(x0, dtype=float)
    t_prev = 0.0
    for tt in times:
        if tt < t_prev:
            raise DomainError("times must be non-decreasing and non-negative")
        x = integrate(sys, x, tt - t_prev, **kw)
        t_prev = tt
        out.append(x.copy())
    return np.array(out)


# ---------------------------------------------------------------------------
# stationary states

def stationary_solve(sys: LinearSystem, constraints: Iterable[Tuple[Sequence[float], float]] = (),
                     tol: float = 1e-10, return_residual: bool = False):
    """Solve ``G x + d = 0`` together with affine constraints ``c . x = v``.

    The stacked system is solved in the least-squares sense.  It must have
    full column rank, otherwise the stationary manifold is not pinned down
    by the constraints and :class:`RankDeficiencyError` is raised.  A
    residual above ``tol`` (relative to the size of the system) means the
    constraints are inconsistent with stationarity and also raises.
    """
    G, d = sys.generator, sys.drive
    rows = [G]
    rhs = [-d]
    for vec, val in constraints:
        vec = np.asarray(vec, dtype=float).reshape(1, -1)
        if vec.shape[1] != sys.dim:
            raise ShapeError("constraint vector has the wrong length")
        rows.append(vec)
        rhs.append(np.array([float(val)]))
    M = np.vstack(rows)
    b = np.concatenate(rhs)
    x, _, rank, sv = np.linalg.lstsq(M, b, rcond=None)
    if rank < sys.dim or sv[-1] <= 1e-12 * sv[0]:
        raise RankDeficiencyError(
            f"stationary system has rank {rank} < {sys.dim}; add constraints"
        )
    residual = float(np.linalg.norm(G @ x + d))
    cres = float(np.linalg.norm(M @ x - b))
    scale = max(1.0, float(np.max(np.abs(M))))
    if cres > tol * scale:
        raise RankDeficiencyError(f"constraints are inconsistent (residual {cres:.3e})")
    return (x, residual) if return_residual else x
