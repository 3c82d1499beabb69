"""Scalar vacuum correlations seen by a uniformly accelerated detector.

The detector follows the hyperbola ``x0 = sinh(a t)/a``, ``x1 = cosh(a t)/a``
in proper time ``t``.  For a massless scalar field the Wightman function
along that path is a function of ``t`` only, and its Fourier transform is a
Planck spectrum at the Unruh temperature ``T_U = a / 2pi``.

All quantities use natural units (hbar = c = k_B = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError

TWO_PI = 2.0 * math.pi

__all__ = [
    "TrajectoryParams",
    "QuadratureConfig",
    "wightman_along_trajectory",
    "fourier_g",
    "fourier_g_numeric",
    "hilbert_k_acc",
    "unruh_beta",
]


def unruh_beta(acceleration: float) -> float:
    """Inverse Unruh temperature ``2 pi / a``."""
    if not acceleration > 0:
        raise DomainError(f"acceleration must be positive, got {acceleration!r}")
    return TWO_PI / acceleration


@dataclass(frozen=True)
class TrajectoryParams:
    """Hyperbolic trajectory with proper acceleration ``acceleration``.

    ``epsilon`` is the regulator of the ``t - i epsilon`` prescription used
    when the Wightman function is evaluated in the time domain.
    """

    acceleration: float
    epsilon: float = 1e-3

    def __post_init__(self):
        if not (math.isfinite(self.acceleration) and self.acceleration > 0):
            raise DomainError(f"acceleration must be positive, got {self.acceleration!r}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise DomainError(f"epsilon must be positive, got {self.epsilon!r}")

    @classmethod
    def from_beta(cls, beta_u: float, epsilon: float = 1e-3) -> "TrajectoryParams":
        if not beta_u > 0:
            raise DomainError(f"beta_u must be positive, got {beta_u!r}")
        return cls(TWO_PI / beta_u, epsilon)

    @property
    def beta_u(self) -> float:
        return TWO_PI / self.acceleration


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the numerical transforms.

    Attributes
    ----------
    nodes : int
        Gauss-Legendre nodes per panel.
    cutoff : float or None
        Upper limit of the integration domain.  ``None`` picks a limit from
        the exponential decay of the integrand so the neglected tail is
        below ~1e-14.
    eps_ladder : sequence of float
        Regulator values used for the extrapolation ``epsilon -> 0``.
        Must be strictly decreasing and positive.
    pv_window : float
        Half-width of the principal-value exclusion window, as a fraction
        of the distance from the pole to the origin (0 < pv_window <= 1).
    tol : float
        Relative tolerance for the extrapolation residual and the
        node-refinement check.
    """

    nodes: int = 24
    cutoff: Optional[float] = None
    eps_ladder: Sequence[float] = (0.01, 0.005, 0.0025, 0.00125, 0.000625)
    pv_window: float = 0.5
    tol: float = 1e-9

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 16:
            raise DomainError(f"node count must be an integer >= 16, got {self.nodes!r}")
        if self.cutoff is not None and not self.cutoff > 0:
            raise DomainError(f"cutoff must be positive, got {self.cutoff!r}")
        ladder = tuple(float(e) for e in self.eps_ladder)
        if len(ladder) < 2:
            raise DomainError("eps_ladder needs at least two entries")
        if any(e <= 0 for e in ladder) or any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise DomainError(f"eps_ladder must be positive and strictly decreasing: {ladder}")
        object.__setattr__(self, "eps_ladder", ladder)
        if not 0 < self.pv_window <= 1:
            raise DomainError(f"pv_window must lie in (0, 1], got {self.pv_window!r}")
        if not self.tol > 0:
            raise DomainError("tol must be positive")


# ---------------------------------------------------------------------------
# time domain

def _inv_sinh_sq(z):
    # 1/sinh(z)^2 = 4 s / (1 - s)^2 with s = exp(-2|z|); no overflow for large |z|
    z = np.asarray(z, dtype=complex)
    z = np.where(z.real < 0, -z, z)
    s = np.exp(-2.0 * z)
    return 4.0 * s / np.expm1(-2.0 * z) ** 2


def wightman_along_trajectory(params: TrajectoryParams, t):
    """Wightman function ``<0|phi(x(t)) phi(x(0))|0>`` on the hyperbola.

    On the trajectory the invariant interval is
    ``(dx0)^2 - (dx1)^2 = (4/a^2) sinh^2(a t / 2)``, so the four-dimensional
    function ``-1/(4 pi^2) / ((x0 - i eps)^2 - |x|^2)`` becomes

        W(t) = -a^2 / (16 pi^2) / sinh^2(a (t - i eps) / 2)

    with the regulator attached to proper time.  Accepts scalars or arrays.
    """
    a = params.acceleration
    t = np.asarray(t, dtype=float)
    z = 0.5 * a * (t - 1j * params.epsilon)
    out = -(a * a) / (16.0 * math.pi ** 2) * _inv_sinh_sq(z)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# frequency domain

def fourier_g(lam, beta_u: float):
    """Planck spectrum ``lam / (2 pi (1 - exp(-beta_u lam)))``.

    At ``lam = 0`` the limit ``1 / (2 pi beta_u)`` is returned.  Accepts
    scalars or arrays; the result is strictly positive wherever it does not
    underflow.
    """
    if not (beta_u > 0 and math.isfinite(beta_u)):
        raise DomainError(f"beta_u must be positive, got {beta_u!r}")
    lam = np.asarray(lam, dtype=float)
    x = beta_u * lam
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        denom = -np.expm1(-x)
        out = np.where(x == 0.0, 1.0 / beta_u, lam / np.where(x == 0.0, 1.0, denom))
    out = out / TWO_PI
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=16)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_quad(f: Callable, edges, nodes: int):
    """Composite Gauss-Legendre rule over consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(nodes)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = f(pts)
    return np.sum(vals * w[None, :] * half[:, None])


def _graded_edges(start: float, stop: float, scale: float, h_max: float):
    """Panel edges from ``start`` to ``stop``: doubling widths beginning at
    ``scale``, capped at ``h_max``."""
    edges = [start]
    h = min(scale, h_max)
    while edges[-1] < stop:
        edges.append(min(edges[-1] + h, stop))
        h = min(2.0 * h, h_max)
    return edges


def _neville_at_zero(xs, ys):
    """Polynomial extrapolation to x = 0.

    Returns the full-order estimate and the difference to the estimate that
    drops the first (largest) abscissa.
    """
    xs = list(xs)
    p = list(ys)
    m = len(xs)
    prev_top = None
    for level in range(1, m):
        for i in range(m - level):
            j = i + level
            p[i] = (xs[j] * p[i] - xs[i] * p[i + 1]) / (xs[j] - xs[i])
        if level == m - 2:
            # p[1] holds the estimate built from xs[1:]
            prev_top = p[1]
    return p[0], abs(p[0] - prev_top)


def _auto_time_cutoff(a: float) -> float:
    # integrand tail ~ a/(4 pi^2) exp(-a t); push it below 1e-16
    return max(math.log(a / (4.0 * math.pi ** 2) * 1e16), 1.0) / a


def _regulated_transform(lam: float, a: float, eps: float, cutoff: float, nodes: int) -> float:
    params = TrajectoryParams(a, eps)
    h_max = 1.0 / max(a, abs(lam))

    def integrand(t):
        return np.exp(1j * lam * t) * wightman_along_trajectory(params, t)

    edges = _graded_edges(0.0, cutoff, eps, h_max)
    # integrand at -t is the conjugate of the integrand at +t
    return 2.0 * float(np.real(_panel_quad(integrand, edges, nodes)))


def fourier_g_numeric(lam: float, params: TrajectoryParams, quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Fourier transform of the trajectory Wightman function by quadrature.

    For each regulator in ``quad.eps_ladder`` the integral of
    ``exp(i lam t) W(t - i eps)`` over ``[-cutoff, cutoff]`` is evaluated with
    graded Gauss-Legendre panels; the sequence is then extrapolated to
    ``eps = 0`` by Neville's scheme.  ``params.epsilon`` is not used.

    Raises
    ------
    DomainError
        If a ladder regulator reaches the nearest pole of ``W`` in the
        complex plane (``eps * a >= pi``).
    ConvergenceError
        If the extrapolation residual exceeds ``quad.tol`` (relative).
    """
    a = params.acceleration
    lam = float(lam)
    if max(quad.eps_ladder) * a >= math.pi:
        raise DomainError("eps_ladder entries must satisfy eps * a < pi")
    cutoff = quad.cutoff if quad.cutoff is not None else _auto_time_cutoff(a)
    vals = [_regulated_transform(lam, a, e, cutoff, quad.nodes) for e in quad.eps_ladder]
    est, resid = _neville_at_zero(quad.eps_ladder, vals)
    if not np.isfinite(est) or resid > quad.tol * max(abs(est), 1e-300):
        raise ConvergenceError(
            f"epsilon extrapolation did not converge at lambda={lam}: residual {resid:.3e}"
        )
    return float(est)


# ---------------------------------------------------------------------------
# acceleration dependent Hilbert transform

def _planck_weight(z, beta_u: float):
    # z / (exp(beta z) - 1), with the z -> 0 limit 1/beta
    z = np.asarray(z, dtype=float)
    bz = beta_u * z
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = np.where(bz == 0.0, 1.0 / beta_u, z / np.expm1(np.where(bz == 0.0, 1.0, bz)))
    return out


def _cauchy_half_line(c: float, beta_u: float, quad: QuadratureConfig, nodes: int) -> float:
    """``P int_0^inf n(z) / (z - c) dz`` with ``n`` the Planck weight."""
    h_max = 1.0 / beta_u
    zmax = quad.cutoff if quad.cutoff is not None else abs(c) + 45.0 / beta_u

    def regular(z):
        return _planck_weight(z, beta_u) / (z - c)

    if c <= 0.0:
        if c == 0.0:
            raise DomainError("the half-line Cauchy integral diverges for c = 0")
        edges = _graded_edges(0.0, zmax, abs(c), h_max)
        return float(_panel_quad(regular, edges, nodes))

    w = quad.pv_window * c
    nc = float(_planck_weight(c, beta_u))

    def subtracted(z):
        return (_planck_weight(z, beta_u) - nc) / (z - c)

    w_left = w_right = w
    total = 0.0
    if c - w_left > 0.0:
        # panels refined toward the window edge, where the integrand peaks
        offsets = _graded_edges(0.0, c - w_left, w_left, h_max)
        left = [(c - w_left) - o for o in reversed(offsets)]
        left[0] = 0.0
        total += _panel_quad(regular, left, nodes)
    total += _panel_quad(subtracted, [c - w_left, c, c + w_right], nodes)
    # excluded singular part: n(c) * P int_{c-wl}^{c+wr} dz/(z-c)
    total += nc * math.log(w_right / w_left)
    if zmax > c + w_right:
        right = _graded_edges(c + w_right, zmax, w_right, h_max)
        total += _panel_quad(regular, right, nodes)
    return float(total)


def hilbert_k_acc(lam: float, beta_u: float, quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Finite, acceleration dependent piece of the Hilbert transform.

    Returns the real number ``k(lam) = i K_acc(lam)`` with

        K_acc(lam) = 1/(2 pi^2 i) P int_0^inf dz z/(1 - exp(beta_u z))
                     * [1/(z + lam) - 1/(z - lam)]

    so that ``k(lam) = 1/(2 pi^2) [P(lam) - P(-lam)]`` where
    ``P(c) = P int_0^inf n(z)/(z - c) dz`` and ``n(z) = z/(exp(beta_u z) - 1)``.
    The principal value uses a symmetric exclusion window around the pole
    with the Planck weight subtracted inside it.  The divergent inertial
    part of the transform is not computed.

    Raises
    ------
    ConvergenceError
        If doubling-plus-eight node refinement changes the result by more
        than ``quad.tol`` relative.
    """
    if not (beta_u > 0 and math.isfinite(beta_u)):
        raise DomainError(f"beta_u must be positive, got {beta_u!r}")
    lam = float(lam)
    if lam == 0.0:
        return 0.0

    def evaluate(nodes):
        return (_cauchy_half_line(lam, beta_u, quad, nodes)
                - _cauchy_half_line(-lam, beta_u, quad, nodes)) / (2.0 * math.pi ** 2)

    coarse = evaluate(quad.nodes)
    fine = evaluate(quad.nodes + 8)
    if not np.isfinite(fine) or abs(fine - coarse) > quad.tol * max(abs(fine), 1e-12):
        raise ConvergenceError(
            f"principal-value quadrature unstable at lambda={lam}: {coarse!r} vs {fine!r}"
        )
    return float(fine)
