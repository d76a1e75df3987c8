"""Closed-form Floquet machinery for planar limit cycles.

Everything follows from two scalar quadratures along the cycle:

    b(t) = exp( int_0^t div f(x0(s)) ds )
    a(t) = int_0^t [ f^T (A + A^T) f_perp / |f|^4 ] b(s) ds

from which the monodromy matrix [[1, a(T)], [0, b(T)]], the Floquet
exponents, the eigenvectors u1 = f and u2 = e^{-mu2 t}(alpha f + beta f_perp),
and the reciprocal covectors

    v1 = ( -alpha f_perp + beta f ) / b,      v2 = e^{mu2 t} f_perp / b

are evaluated in closed form (alpha = a(T)/(b(T)-1) + a, beta = b/|f|^2).
v1 is the perturbation projection vector: the T-periodic adjoint
solution normalized by v1^T f = 1.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import ode
from .errors import DegenerateCycleError, InternalInconsistencyError
from .models import perp

__all__ = [
    "DilibertoBasis",
    "FloquetSpectrum",
    "compute_a",
    "compute_b",
    "floquet_spectrum",
    "eigenvector_u1",
    "eigenvector_u2",
    "covector_v1",
    "covector_v2",
    "orthogonality_defect",
    "lie_bracket",
    "basis_to_csv",
]

log = logging.getLogger(__name__)

_DEGENERATE_TOL = 1e-12


def _quad_rhs(cycle):
    """Right-hand side of the (I_div, I_a) quadrature pair along the cycle."""
    model = cycle.model

    def rhs(s, q):
        x = cycle.point(s)
        F = model.field(x)
        A = model.jacobian(x)
        Fp = perp(F)
        n2 = F @ F
        c = (F @ ((A + A.T) @ Fp)) / n2 ** 2
        return np.array([model.divergence(x), c * np.exp(q[0])])

    return rhs


def _quad_solve(cycle, t_end, rtol=1e-12):
    return ode.integrate(_quad_rhs(cycle), [0.0, 0.0], 0.0, t_end,
                         rtol=rtol, atol=1e-14)


def _reduce(t, T):
    """Split t into (k, tau) with t = k*T + tau, tau in [0, T)."""
    t = np.asarray(t, dtype=float)
    k = np.floor(t / T)
    return k, t - k * T


def compute_b(cycle, t, rtol=1e-12):
    """Wronskian scalar b(t) = exp of the divergence quadrature from 0."""
    t = float(t)
    if t <= cycle.T:
        if t == 0.0:
            return 1.0
        traj = _quad_solve(cycle, t, rtol)
        return float(np.exp(traj.final[0]))
    bT = compute_b(cycle, cycle.T, rtol)
    k, tau = _reduce(t, cycle.T)
    return compute_b(cycle, float(tau), rtol) * bT ** int(k)


def compute_a(cycle, t, rtol=1e-12):
    """Skew scalar a(t); quasi-periodic: a(t+T) = a(t) b(T) + a(T)."""
    t = float(t)
    if t <= cycle.T:
        if t == 0.0:
            return 0.0
        traj = _quad_solve(cycle, t, rtol)
        return float(traj.final[1])
    full = _quad_solve(cycle, cycle.T, rtol)
    bT = float(np.exp(full.final[0]))
    aT = float(full.final[1])
    k, tau = _reduce(t, cycle.T)
    bk = bT ** int(k)
    return compute_a(cycle, float(tau), rtol) * bk + aT * (bk - 1.0) / (bT - 1.0)


@dataclass(frozen=True)
class FloquetSpectrum:
    """Multipliers, exponents and monodromy matrix in the Diliberto frame."""

    multipliers: tuple
    exponents: tuple
    monodromy: np.ndarray


def floquet_spectrum(cycle, rtol=1e-12):
    """Floquet data from the one-period quadratures: multipliers {1, b(T)}."""
    traj = _quad_solve(cycle, cycle.T, rtol)
    bT = float(np.exp(traj.final[0]))
    aT = float(traj.final[1])
    if bT <= 0.0:
        raise InternalInconsistencyError(
            f"b(T) = {bT} <= 0: quadrature blow-up")
    mu2 = np.log(bT) / cycle.T
    if bT >= 1.0:
        warnings.warn("second multiplier >= 1: cycle is not asymptotically "
                      "stable", stacklevel=2)
    monodromy = np.array([[1.0, aT], [0.0, bT]])
    return FloquetSpectrum(multipliers=(1.0, bT), exponents=(0.0, mu2),
                           monodromy=monodromy)


class DilibertoBasis:
    """Sampled + evaluable closed-form basis along a limit cycle.

    One augmented integration over [0, T] supplies dense a(t), b(t);
    all vectors are evaluated from the closed forms through that dense
    solution.  A uniform grid (default n=1024) with periodic cubic
    interpolants backs the fast evaluation path used by the phase and
    noise simulators.
    """

    def __init__(self, cycle, n=1024, rtol=1e-12):
        if n < 16:
            raise ValueError("grid too coarse")
        self.cycle = cycle
        self.n = n
        self._quad = _quad_solve(cycle, cycle.T, rtol)
        IT = self._quad.final
        self.b_T = float(np.exp(IT[0]))
        self.a_T = float(IT[1])
        if abs(self.b_T - 1.0) < _DEGENERATE_TOL:
            raise DegenerateCycleError(
                f"|b(T) - 1| = {abs(self.b_T - 1.0):.3e}: non-hyperbolic "
                "cycle, closed forms break down")
        self.mu2 = np.log(self.b_T) / cycle.T
        self.alpha0 = self.a_T / (self.b_T - 1.0)
        self.monodromy = np.array([[1.0, self.a_T], [0.0, self.b_T]])

        T = cycle.T
        self.ts = np.arange(n) * (T / n)
        self.a_grid = np.asarray([self._quad(float(t))[1] for t in self.ts])
        self.b_grid = np.exp(np.asarray(
            [self._quad(float(t))[0] for t in self.ts]))
        x = cycle.point(self.ts)
        F = cycle.model.field(x)
        Fp = perp(F)
        n2 = np.sum(F * F, axis=0)
        self.alpha_grid = self.alpha0 + self.a_grid
        self.beta_grid = self.b_grid / n2
        decay = np.exp(-self.mu2 * self.ts)
        self.u1_grid = F.T
        self.u2_grid = (decay * (self.alpha_grid * F + self.beta_grid * Fp)).T
        v1 = ((-self.alpha_grid * Fp + self.beta_grid * F) / self.b_grid).T
        self.v2_grid = ((np.exp(self.mu2 * self.ts) / self.b_grid) * Fp).T

        # enforce the normalization v1^T f = 1 against quadrature drift
        dots = np.sum(v1 * F.T, axis=1)
        self.normalization_defect = float(np.max(np.abs(dots - 1.0)))
        self._rescale = self.normalization_defect > 1e-9
        if self._rescale:
            log.warning("v1 normalization defect %.3e above 1e-9; "
                        "re-scaling pointwise", self.normalization_defect)
            v1 = v1 / dots[:, None]
        self.v1_grid = v1

        self._x0_spline = self._periodic_spline(x.T)
        self._v1_spline = self._periodic_spline(self.v1_grid)
        self._u2_spline = self._periodic_spline(self.u2_grid)
        self._v2_spline = self._periodic_spline(self.v2_grid)

    # -- construction helpers -------------------------------------------------

    def _periodic_spline(self, vals):
        ts = np.concatenate([self.ts, [self.cycle.T]])
        vv = np.vstack([vals, vals[:1]])
        return CubicSpline(ts, vv, axis=0, bc_type="periodic")

    # -- scalar factors -------------------------------------------------------

    def _ab(self, t):
        """Vectorized (a(t), b(t)) for arbitrary t via quasi-periodicity."""
        k, tau = _reduce(t, self.cycle.T)
        I = self._quad(tau)
        b_tau = np.exp(I[0])
        a_tau = I[1]
        bk = self.b_T ** k
        b = b_tau * bk
        a = a_tau * bk + self.a_T * (bk - 1.0) / (self.b_T - 1.0)
        return a, b

    def a(self, t):
        return self._ab(t)[0]

    def b(self, t):
        return self._ab(t)[1]

    def alpha(self, t):
        return self.alpha0 + self.a(t)

    def beta(self, t):
        x = self.cycle.point(t)
        F = self.cycle.model.field(x)
        return self.b(t) / np.sum(F * F, axis=0)

    # -- closed-form vectors (accurate path) ----------------------------------

    def _frame(self, t):
        x = self.cycle.point(t)
        F = self.cycle.model.field(x)
        return F, perp(F)

    def u1(self, t):
        F, _ = self._frame(t)
        return F

    def u2(self, t):
        a, b = self._ab(t)
        F, Fp = self._frame(t)
        alpha = self.alpha0 + a
        beta = b / np.sum(F * F, axis=0)
        return np.exp(-self.mu2 * np.asarray(t, dtype=float)) * (
            alpha * F + beta * Fp)

    def v1(self, t):
        a, b = self._ab(t)
        F, Fp = self._frame(t)
        alpha = self.alpha0 + a
        beta = b / np.sum(F * F, axis=0)
        v = (-alpha * Fp + beta * F) / b
        if self._rescale:
            v = v / np.sum(v * F, axis=0)
        return v

    def v2(self, t):
        _, b = self._ab(t)
        _, Fp = self._frame(t)
        return (np.exp(self.mu2 * np.asarray(t, dtype=float)) / b) * Fp

    # -- fast periodic-interpolant path (for simulation kernels) --------------

    def _wrap(self, t):
        return np.mod(t, self.cycle.T)

    def x0_fast(self, t):
        return self._x0_spline(self._wrap(t)).T

    def v1_fast(self, t):
        return self._v1_spline(self._wrap(t)).T

    def u2_fast(self, t):
        return self._u2_spline(self._wrap(t)).T

    def v2_fast(self, t):
        return self._v2_spline(self._wrap(t)).T

    @property
    def omega(self):
        return 2.0 * np.pi / self.cycle.T


# -- spec-level operation wrappers -------------------------------------------

def eigenvector_u1(basis, t):
    return basis.u1(t)


def eigenvector_u2(basis, t):
    return basis.u2(t)


def covector_v1(basis, t):
    return basis.v1(t)


def covector_v2(basis, t):
    return basis.v2(t)


def orthogonality_defect(basis):
    """Normalized max of |f^T (A+A^T) f_perp| along the grid.

    Near zero certifies that the tangent/isochron decomposition is
    orthogonal (and, equivalently, that [f, f_perp] stays parallel to
    f_perp on the cycle).
    """
    model = basis.cycle.model
    worst = 0.0
    for t in basis.ts:
        x = basis.cycle.point(float(t))
        F = model.field(x)
        A = model.jacobian(x)
        w = (A + A.T) @ perp(F)
        denom = np.linalg.norm(F) * np.linalg.norm(w)
        if denom == 0.0:
            continue
        worst = max(worst, abs(F @ w) / denom)
    return worst


def lie_bracket(model, x):
    """[f, f_perp](x) via (div f) f_perp - (A + A^T) f_perp.

    The identity avoids second derivatives of the field.
    """
    F = model.field(x)
    A = model.jacobian(x)
    Fp = perp(F)
    return model.divergence(x) * Fp - (A + A.T) @ Fp


def basis_to_csv(basis, path):
    """Grid dump with 17 significant digits per value."""
    cols = ("t,a,b,alpha,beta,u1x,u1y,u2x,u2y,v1x,v1y,v2x,v2y")
    with open(path, "w", newline="") as fh:
        fh.write(cols + "\n")
        for i, t in enumerate(basis.ts):
            row = [t, basis.a_grid[i], basis.b_grid[i],
                   basis.alpha_grid[i], basis.beta_grid[i],
                   basis.u1_grid[i, 0], basis.u1_grid[i, 1],
                   basis.u2_grid[i, 0], basis.u2_grid[i, 1],
                   basis.v1_grid[i, 0], basis.v1_grid[i, 1],
                   basis.v2_grid[i, 0], basis.v2_grid[i, 1]]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
