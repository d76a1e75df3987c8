"""Deterministic phase macromodel.

The phase deviation obeys the scalar nonautonomous ODE
``dpsi/dt = eps * v1(t + psi)^T g(x0(t + psi), t)``; everything here
evaluates v1 and x0 through the basis interpolants, so one simulation
costs O(steps) regardless of how the cycle was obtained.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import ode
from .errors import ArgumentError, PerturbationKindError

__all__ = ["Perturbation", "PhasePath", "PPVSpectrum", "phase_rhs",
           "simulate_phase", "ppv_fourier", "injection_lock_scan",
           "LockMap", "spectrum_to_csv", "lockmap_to_csv"]

_LOCK_SLOPE_TOL = 1e-4


@dataclass(frozen=True)
class Perturbation:
    """Deterministic forcing g(x, t) with strength eps, or a noise tag.

    Noise-kind perturbations carry a :class:`~planar_ppv.stochastic.NoiseModel`
    and are only accepted by the stochastic module.
    """

    kind: str
    eps: float = 0.0
    g: object = None
    omega_inj: float = None
    noise: object = None
    amp: object = None       # set for additive sinusoidal injection
    phase_off: float = 0.0

    def __post_init__(self):
        if self.kind not in ("deterministic", "noise"):
            raise ArgumentError(f"unknown perturbation kind {self.kind!r}")
        if self.eps < 0:
            raise ArgumentError("eps must be non-negative")

    @classmethod
    def sinusoidal(cls, amp, omega_inj, eps, phase=0.0):
        """Additive injection g(x, t) = amp * cos(omega_inj t + phase)."""
        amp = np.asarray(amp, dtype=float)

        def g(x, t):
            return amp * np.cos(omega_inj * t + phase)

        return cls(kind="deterministic", eps=float(eps), g=g,
                   omega_inj=float(omega_inj), amp=amp, phase_off=float(phase))

    @classmethod
    def along_flow(cls, model, eps):
        """g = f: projects to exactly 1, so dpsi/dt = eps identically."""
        return cls(kind="deterministic", eps=float(eps),
                   g=lambda x, t: model.field(x))

    @classmethod
    def zero(cls):
        return cls(kind="deterministic", eps=0.0, g=lambda x, t: 0.0 * x)

    @classmethod
    def from_noise(cls, noise):
        return cls(kind="noise", eps=noise.sigma, noise=noise)


@dataclass(frozen=True)
class PhasePath:
    """psi(t) trajectory with final-window lock diagnostics."""

    ts: np.ndarray
    psi: np.ndarray
    locked: bool
    mean_slope: float
    omega: float
    detuning: float = None

    @property
    def mean_freq_shift(self):
        return self.omega * self.mean_slope

    @property
    def beat(self):
        """Residual beat frequency against the injected tone."""
        if self.detuning is None:
            return None
        return self.detuning - self.mean_freq_shift


def phase_rhs(basis, pert, psi, t):
    """Instantaneous phase slip eps * v1(t+psi)^T g(x0(t+psi), t)."""
    if pert.kind != "deterministic":
        raise PerturbationKindError(
            "noise perturbations belong to the stochastic module")
    tau = t + psi
    return pert.eps * float(basis.v1_fast(tau) @ np.asarray(
        pert.g(basis.x0_fast(tau), t), dtype=float))


def simulate_phase(basis, pert, t_end, rtol=1e-8, n_store=2000):
    """Integrate the phase-deviation ODE from psi(0) = 0."""
    if pert.kind != "deterministic":
        raise PerturbationKindError(
            "noise perturbations belong to the stochastic module")
    if t_end <= 0:
        raise ArgumentError("t_end must be positive")

    if pert.amp is not None:
        # additive injection: g is state-independent, so v1^T amp reduces
        # to one periodic scalar interpolant
        from scipy.interpolate import CubicSpline

        T = basis.cycle.T
        proj = basis.v1_grid @ pert.amp
        ts_ext = np.concatenate([basis.ts, [T]])
        pspl = CubicSpline(ts_ext, np.concatenate([proj, proj[:1]]),
                           bc_type="periodic")
        eps, w_inj, ph = pert.eps, pert.omega_inj, pert.phase_off

        def rhs(t, y):
            return [eps * np.cos(w_inj * t + ph)
                    * pspl(np.mod(t + y[0], T))]
    else:
        def rhs(t, y):
            return [phase_rhs(basis, pert, y[0], t)]

    traj = ode.integrate(rhs, [0.0], 0.0, t_end, rtol=rtol, atol=1e-12)
    ts = np.linspace(0.0, t_end, n_store)
    psi = traj(ts)[0]

    tail = ts >= 0.8 * t_end
    slope, _ = np.polyfit(ts[tail], psi[tail], 1)
    omega = basis.omega
    locked = False
    detuning = None
    if pert.omega_inj is not None:
        detuning = pert.omega_inj - omega
        locked = bool(abs(slope - detuning / omega) < _LOCK_SLOPE_TOL)
    return PhasePath(ts=ts, psi=psi, locked=locked,
                     mean_slope=float(slope), omega=omega, detuning=detuning)


@dataclass(frozen=True)
class PPVSpectrum:
    """Fourier coefficients V_k of v1(t) = sum_k V_k e^{i k omega t}."""

    ks: np.ndarray
    Vx: np.ndarray
    Vy: np.ndarray
    omega: float

    def coefficient(self, k):
        i = int(np.nonzero(self.ks == k)[0][0])
        return np.array([self.Vx[i], self.Vy[i]])

    def reconstruct(self, t):
        t = np.asarray(t, dtype=float)
        ph = np.exp(1j * np.outer(self.ks, self.omega * t))
        return np.real(np.stack([self.Vx @ ph, self.Vy @ ph]))

    def mass(self):
        """Parseval mass per harmonic index: |V_k|^2 summed over components."""
        return np.abs(self.Vx) ** 2 + np.abs(self.Vy) ** 2


def ppv_fourier(basis, K):
    """Spectral coefficients of v1 by FFT over the uniform basis grid."""
    n = basis.n
    if K < 1:
        raise ArgumentError("need K >= 1")
    if K > n // 2 - 1:
        raise ArgumentError(f"K = {K} beyond grid Nyquist ({n // 2 - 1})")
    cx = np.fft.fft(basis.v1_grid[:, 0]) / n
    cy = np.fft.fft(basis.v1_grid[:, 1]) / n
    ks = np.arange(-K, K + 1)
    return PPVSpectrum(ks=ks, Vx=cx[ks], Vy=cy[ks], omega=basis.omega)


@dataclass(frozen=True)
class LockMap:
    """Lock-scan results ordered by (eps, detuning) grid index."""

    rows: tuple  # (eps, delta_omega, locked, mean_freq_shift)
    boundaries: dict = dc_field(default_factory=dict)  # eps -> max locked |dw|


def injection_lock_scan(basis, amp, eps_list, detuning_grid, t_end=None,
                        rtol=1e-8):
    """Sweep sinusoidal injection over strength and detuning grids.

    Records the lock flag and mean frequency shift per grid point and an
    Arnold-tongue boundary estimate (largest locked |detuning|) per eps.
    """
    eps_list = list(eps_list)
    detuning_grid = list(detuning_grid)
    if not eps_list or not detuning_grid:
        raise ArgumentError("empty scan grid")
    omega = basis.omega
    rows = []
    boundaries = {}
    for eps in eps_list:
        horizon = t_end if t_end is not None else max(400.0, 8.0 / eps)
        best = 0.0
        for dw in detuning_grid:
            pert = Perturbation.sinusoidal(amp, omega + dw, eps)
            path = simulate_phase(basis, pert, horizon, rtol=rtol)
            rows.append((eps, dw, path.locked, path.mean_freq_shift))
            if path.locked:
                best = max(best, abs(dw))
        boundaries[eps] = best
    return LockMap(rows=tuple(rows), boundaries=boundaries)


def spectrum_to_csv(spec, path):
    with open(path, "w", newline="") as fh:
        fh.write("k,Re_Vkx,Im_Vkx,Re_Vky,Im_Vky\n")
        for k, vx, vy in zip(spec.ks, spec.Vx, spec.Vy):
            fh.write(f"{k:d},{vx.real:.17g},{vx.imag:.17g},"
                     f"{vy.real:.17g},{vy.imag:.17g}\n")


def lockmap_to_csv(lockmap, path):
    with open(path, "w", newline="") as fh:
        fh.write("eps,delta_omega,locked,mean_freq_shift\n")
        for eps, dw, locked, shift in lockmap.rows:
            fh.write(f"{eps:.17g},{dw:.17g},{int(locked)},{shift:.17g}\n")
