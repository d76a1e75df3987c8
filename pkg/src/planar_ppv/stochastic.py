"""Noise-driven phase model: SDE ensembles and a Fokker-Planck solver.

The phase SDE is read in the Ito sense, dpsi = v(t+psi)^T dW with
v(t)^T = v1(t)^T G(x0(t)); the Fokker-Planck solver uses the matching
density equation dp/dt = d/dpsi[ (v dv^T/dpsi) p + (1/2) v^T v dp/dpsi ],
so ensemble statistics and densities agree by construction.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ArgumentError, InstabilityError

__all__ = ["NoiseModel", "PhaseEnsemble", "DensityField",
           "effective_noise_v", "simulate_sde_ensemble", "solve_fp",
           "diffusion_summary", "ensemble_to_csv", "density_to_csv"]


@dataclass(frozen=True)
class NoiseModel:
    """State-dependent noise input g = G(x) Gamma(t) with intensity sigma."""

    G: object  # callable x -> (2, m)
    m: int
    sigma: float
    label: str = "custom"

    def __post_init__(self):
        if self.sigma < 0:
            raise ArgumentError("sigma must be non-negative")

    @classmethod
    def isotropic(cls, sigma):
        """Additive isotropic noise, G = sigma * I, two channels."""
        s = float(sigma)
        return cls(G=lambda x: s * np.eye(2), m=2, sigma=s, label="isotropic")

    @classmethod
    def directional(cls, sigma, direction):
        """Single-channel noise along a fixed direction."""
        d = np.asarray(direction, dtype=float)
        nd = np.linalg.norm(d)
        if nd == 0:
            raise ArgumentError("zero noise direction")
        d = d / nd
        s = float(sigma)
        return cls(G=lambda x: (s * d)[:, None], m=1, sigma=s,
                   label="directional")


def effective_noise_v(basis, noise, t):
    """v(t)^T = v1(t)^T G(x0(t)); shape (m,) for scalar t, (m, N) batched."""
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        x = basis.cycle.point(float(t))
        return basis.v1(float(t)) @ noise.G(x)
    return np.stack([basis.v1(float(ti)) @ noise.G(basis.cycle.point(float(ti)))
                     for ti in t], axis=1)


def _v_spline(basis, noise):
    """Periodic cubic interpolant of the m effective-noise channels."""
    vals = np.empty((basis.n + 1, noise.m))
    for i, t in enumerate(basis.ts):
        x = basis.cycle.point(float(t))
        vals[i] = basis.v1_grid[i] @ noise.G(x)
    vals[-1] = vals[0]
    ts = np.concatenate([basis.ts, [basis.cycle.T]])
    return CubicSpline(ts, vals, axis=0, bc_type="periodic")


@dataclass(frozen=True)
class PhaseEnsemble:
    """Monte-Carlo mean/variance curves of the phase deviation."""

    ts: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    n_paths: int
    seed: int


def simulate_sde_ensemble(basis, noise, n_paths, t_end, dt, seed,
                          n_store=201):
    """Euler-Maruyama ensemble of dpsi = v(t+psi)^T dW, psi(0) = 0.

    Per-path Wiener substreams are keyed by (seed, path index), so
    growing the ensemble never reshuffles existing paths, and identical
    seeds give bit-identical statistics.
    """
    if n_paths < 1:
        raise ArgumentError("need n_paths >= 1")
    if dt <= 0:
        raise ArgumentError("dt must be positive")
    if dt > basis.cycle.T / 100.0:
        raise ArgumentError(
            f"dt = {dt} too large; need dt <= T/100 = {basis.cycle.T / 100:g}")
    n_steps = int(round(t_end / dt))
    spline = _v_spline(basis, noise)
    T = basis.cycle.T

    sq = np.sqrt(dt)
    dW = np.empty((n_paths, n_steps, noise.m))
    for i in range(n_paths):
        rng = np.random.default_rng([int(seed), i])
        dW[i] = sq * rng.standard_normal((n_steps, noise.m))

    stride = max(1, n_steps // (n_store - 1))
    store_idx = list(range(0, n_steps + 1, stride))
    if store_idx[-1] != n_steps:
        store_idx.append(n_steps)
    store_set = set(store_idx)

    psi = np.zeros(n_paths)
    ts_out, mean_out, var_out = [], [], []

    def record(j):
        ts_out.append(j * dt)
        mean_out.append(np.mean(psi))
        var_out.append(np.var(psi, ddof=1) if n_paths > 1 else 0.0)

    record(0)
    for j in range(n_steps):
        v = spline(np.mod(j * dt + psi, T))  # (n_paths, m)
        psi = psi + np.sum(v * dW[:, j, :], axis=1)
        if (j + 1) in store_set:
            record(j + 1)
    return PhaseEnsemble(ts=np.array(ts_out), mean=np.array(mean_out),
                         var=np.array(var_out), n_paths=n_paths,
                         seed=int(seed))


@dataclass(frozen=True)
class DensityField:
    """p(psi, t) snapshots on a uniform psi grid."""

    psi: np.ndarray
    ts: np.ndarray
    p: np.ndarray  # shape (n_times, n_psi)
    dpsi: float

    def mass(self):
        return np.sum(self.p, axis=1) * self.dpsi

    def mean(self):
        return (self.p @ self.psi) * self.dpsi

    def variance(self):
        mu = self.mean()
        return (self.p @ self.psi ** 2) * self.dpsi - mu ** 2


def solve_fp(basis, noise, psi_grid, t_end, dt, init_width=None,
             n_store=101):
    """Explicit conservative finite-difference Fokker-Planck solve.

    Drift coefficient v dv^T/dpsi comes from the analytic derivative of
    the periodic interpolant; diffusion is second-order central.  The
    initial condition is a narrow Gaussian at psi = 0; far boundaries
    are absorbing (place them >= 8 predicted standard deviations out).
    """
    psi = np.asarray(psi_grid, dtype=float)
    d = np.diff(psi)
    if psi.size < 8 or not np.allclose(d, d[0], rtol=1e-10, atol=0):
        raise ArgumentError("psi grid must be uniform")
    dpsi = float(d[0])
    T = basis.cycle.T

    spline = _v_spline(basis, noise)
    dspline = spline.derivative()
    vsq_max = float(np.max(np.sum(spline(basis.ts) ** 2, axis=1)))
    if vsq_max > 0 and dt > 0.4 * dpsi ** 2 / vsq_max:
        raise ArgumentError(
            f"CFL violation: dt = {dt} > {0.4 * dpsi ** 2 / vsq_max:g}")

    w = init_width if init_width is not None else 4.0 * dpsi
    p = np.exp(-0.5 * (psi / w) ** 2)
    p /= np.sum(p) * dpsi

    n_steps = int(round(t_end / dt))
    stride = max(1, n_steps // (n_store - 1))
    store_idx = set(range(0, n_steps + 1, stride))
    store_idx.add(n_steps)

    half = psi[:-1] + 0.5 * dpsi
    ts_out, p_out = [], []
    if 0 in store_idx:
        ts_out.append(0.0)
        p_out.append(p.copy())
    for j in range(n_steps):
        t = j * dt
        theta = np.mod(t + half, T)
        v = spline(theta)
        dv = dspline(theta)
        drift = np.sum(v * dv, axis=1)          # v . dv^T/dpsi at half points
        diff = 0.5 * np.sum(v * v, axis=1)      # (1/2) v^T v at half points
        # flux J_{i+1/2} = -[ drift * p_half + diff * dp/dpsi ]
        p_half = 0.5 * (p[:-1] + p[1:])
        J = -(drift * p_half + diff * (p[1:] - p[:-1]) / dpsi)
        p = p.copy()
        p[1:-1] += dt * (J[:-1] - J[1:]) / dpsi
        p[0] = 0.0   # absorbing far boundaries
        p[-1] = 0.0
        if (j + 1) in store_idx:
            if np.min(p) < -1e-12:
                raise InstabilityError(
                    f"negative density {np.min(p):.3e} at t = {t + dt:g}")
            ts_out.append((j + 1) * dt)
            p_out.append(p.copy())
    return DensityField(psi=psi, ts=np.array(ts_out),
                        p=np.array(p_out), dpsi=dpsi)


def diffusion_summary(basis, noise):
    """Period-averaged v^T v: the effective phase-diffusion rate."""
    spline = _v_spline(basis, noise)
    vals = spline(basis.ts)
    return float(np.mean(np.sum(vals * vals, axis=1)))


def ensemble_to_csv(ens, path):
    with open(path, "w", newline="") as fh:
        fh.write("t,mean_psi,var_psi,n_paths,seed\n")
        for t, m, v in zip(ens.ts, ens.mean, ens.var):
            fh.write(f"{t:.17g},{m:.17g},{v:.17g},{ens.n_paths},{ens.seed}\n")


def density_to_csv(dens, path):
    with open(path, "w", newline="") as fh:
        fh.write("t,psi,p\n")
        for i, t in enumerate(dens.ts):
            for x, pv in zip(dens.psi, dens.p[i]):
                fh.write(f"{t:.17g},{x:.17g},{pv:.17g}\n")
