"""Mean-field evolution of the dark-polariton envelope.

Second-order (Strang) operator splitting on a periodic rectangular grid:
kinetic half-step in the spatial-frequency domain, exact local nonlinear
step, kinetic half-step. The kinetic phase uses the anisotropic mass
tensor; the imaginary longitudinal mass acts, when enabled, as damping of
high-k_z components with the sign chosen so that they always decay.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .kinetics import MeanFieldCoefficients
from .thermo import MassTensor


class StabilityViolation(RuntimeError):
    """Time step too large for the grid's maximal kinetic frequency."""


class NonFiniteField(RuntimeError):
    """The field developed a non-finite sample."""


@dataclass
class FieldState:
    """Complex envelope on a uniform periodic grid (1D, 2D or 3D).

    psi has shape (nx,), (nx, ny) or (nx, ny, nz) with the LAST axis always
    the propagation axis z; box holds the physical lengths per axis (m).
    """

    psi: np.ndarray
    box: tuple[float, ...]
    time: float = 0.0

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.ndim != len(self.box):
            raise ValueError("box must have one length per grid axis")
        if any(l <= 0 for l in self.box):
            raise ValueError("box lengths must be positive")

    @property
    def spacings(self) -> tuple[float, ...]:
        return tuple(l / n for l, n in zip(self.box, self.psi.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def particle_number(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.cell_volume)

    def k_axes(self) -> list[np.ndarray]:
        return [
            2.0 * np.pi * np.fft.fftfreq(n, d=dx)
            for n, dx in zip(self.psi.shape, self.spacings)
        ]

    def copy(self) -> "FieldState":
        return FieldState(psi=self.psi.copy(), box=self.box, time=self.time)


@dataclass
class EvolutionConfig:
    dt: float
    t_final: float = 0.0
    elastic: bool = True
    nonlinear_loss: bool = True
    dispersive_shift: bool = True
    high_k_absorption: bool = True
    release_time: float | None = None  # when the backward control switches off
    max_phase_per_step: float = 0.5    # rad; stability guard


def _kinetic_arrays(state: FieldState, mass: MassTensor, cfg: EvolutionConfig):
    """Angular frequency omega(k) and damping rate (1/s) on the grid.

    The last axis is longitudinal (mass Re(1/m_par)); the others are
    transverse (mass m_perp). A 1D grid is treated as longitudinal.
    """
    axes = state.k_axes()
    shape = state.psi.shape
    inv_mpar_re = float(mass.inv_m_par.real)
    inv_mpar_im = abs(float(mass.inv_m_par.imag))
    omega = np.zeros(shape)
    for i, k in enumerate(axes):
        k = k.reshape([-1 if j == i else 1 for j in range(len(axes))])
        inv_m = inv_mpar_re if i == len(axes) - 1 else 1.0 / mass.m_perp
        omega = omega + (HBAR / 2.0) * k**2 * inv_m
    kz = axes[-1].reshape([-1 if j == len(axes) - 1 else 1 for j in range(len(axes))])
    damping = (HBAR / 2.0) * kz**2 * inv_mpar_im
    return omega, np.broadcast_to(damping, shape)


def _check_stability(omega: np.ndarray, cfg: EvolutionConfig):
    max_phase = float(np.max(np.abs(omega))) * cfg.dt
    if max_phase >= cfg.max_phase_per_step:
        raise StabilityViolation(
            f"dt * max kinetic frequency = {max_phase:.3g} rad "
            f">= {cfg.max_phase_per_step} rad"
        )


def _nonlinear_update(psi, dt, u_elastic, coeffs: MeanFieldCoefficients,
                      cfg: EvolutionConfig):
    """Exact local solution over dt of
       d rho/dt   = -2 kappa rho^3            (cubic-density loss)
       d phase/dt = -(u rho/hbar + c_disp rho^2)
    with rho = |psi|^2, kappa = anticommutator coefficient."""
    rho0 = np.abs(psi) ** 2
    kappa = coeffs.anticommutator if cfg.nonlinear_loss else 0.0
    if kappa > 0:
        a = 4.0 * kappa * rho0**2
        growth = np.sqrt(1.0 + a * dt)
        rho_int = np.where(a > 0, (growth - 1.0) / (2.0 * kappa * np.maximum(rho0, 1e-300)), rho0 * dt)
        rho2_int = np.where(a > 0, np.log1p(a * dt) / np.maximum(a, 1e-300) * rho0**2, rho0**2 * dt)
        amp = 1.0 / np.sqrt(growth)
    else:
        rho_int = rho0 * dt
        rho2_int = rho0**2 * dt
        amp = 1.0
    phase = 0.0
    if cfg.elastic:
        phase = phase + (u_elastic / HBAR) * rho_int
    if cfg.dispersive_shift:
        phase = phase + coeffs.dispersive_cubic * rho2_int
    return psi * amp * np.exp(-1j * phase)


def step(
    state: FieldState,
    cfg: EvolutionConfig,
    coeffs: MeanFieldCoefficients,
    mass: MassTensor,
    u_elastic: float,
    n_steps: int = 1,
) -> FieldState:
    """Advance by n_steps Strang steps of size cfg.dt; returns a new state."""
    omega, damping = _kinetic_arrays(state, mass, cfg)
    _check_stability(omega, cfg)
    half = np.exp(-1j * omega * (cfg.dt / 2.0))
    if cfg.high_k_absorption:
        half = half * np.exp(-damping * (cfg.dt / 2.0))
    psi = state.psi
    for _ in range(n_steps):
        psi = np.fft.ifftn(np.fft.fftn(psi) * half)
        psi = _nonlinear_update(psi, cfg.dt, u_elastic, coeffs, cfg)
        psi = np.fft.ifftn(np.fft.fftn(psi) * half)
    if not np.all(np.isfinite(psi.view(float))):
        raise NonFiniteField("field developed non-finite samples")
    return FieldState(psi=psi, box=state.box, time=state.time + n_steps * cfg.dt)


@dataclass
class EmittedPulse:
    """Ballistic release model: the envelope leaves at v_gr along +-z with
    the transverse profile frozen at switch time."""

    times: np.ndarray            # s, arrival time of each z slice at the face
    intensity: np.ndarray        # |psi|^2 * v_gr per slice (flux), axes (..., t)
    transverse_profile: np.ndarray  # integral of |psi|^2 over z (1/m^2-like)
    total_quanta: float
    v_gr: float
    direction: int               # +1 or -1


def release(state: FieldState, v_gr: float, direction: int = +1,
            t0: float | None = None) -> EmittedPulse:
    """Convert the stored envelope into the time-resolved face intensity.

    Slice z_j arrives at the +z face (direction=+1) at
    t_j = t0 + (z_face - z_j)/v_gr; losses during release are neglected so
    the emitted quanta equal the particle number at switch time.
    """
    if direction not in (+1, -1):
        raise ValueError("direction must be +1 or -1")
    if v_gr <= 0:
        raise ValueError("v_gr must be positive")
    if t0 is None:
        t0 = state.time
    dz = state.spacings[-1]
    nz = state.psi.shape[-1]
    z = np.arange(nz) * dz
    if direction == +1:
        distance = state.box[-1] - z
        order = np.argsort(distance)
    else:
        distance = z + dz
        order = np.argsort(distance)
    times = t0 + distance[order] / v_gr
    density = np.abs(state.psi) ** 2
    intensity = density[..., order] * v_gr
    transverse = density.sum(axis=-1) * dz
    return EmittedPulse(
        times=times,
        intensity=intensity,
        transverse_profile=transverse,
        total_quanta=state.particle_number,
        v_gr=v_gr,
        direction=direction,
    )


@dataclass(frozen=True)
class Observables:
    norm: float
    rms_widths: tuple[float, ...]
    peak_density: float
    momentum_density: np.ndarray  # sums to norm


def observables(state: FieldState) -> Observables:
    density = np.abs(state.psi) ** 2
    dv = state.cell_volume
    norm = float(density.sum() * dv)
    widths = []
    for i, (n, dx) in enumerate(zip(state.psi.shape, state.spacings)):
        x = (np.arange(n) - n // 2) * dx
        marg = density.sum(axis=tuple(j for j in range(density.ndim) if j != i))
        total = marg.sum()
        if total == 0:
            widths.append(0.0)
            continue
        mean = float((x * marg).sum() / total)
        widths.append(float(np.sqrt(((x - mean) ** 2 * marg).sum() / total)))
    volume = float(np.prod(state.box))
    nk = np.abs(np.fft.fftn(state.psi) * dv) ** 2 / volume
    return Observables(
        norm=norm,
        rms_widths=tuple(widths),
        peak_density=float(density.max()),
        momentum_density=nk,
    )


def gaussian_state(box: tuple[float, ...], shape: tuple[int, ...],
                   sigma: float, amplitude: float = 1.0,
                   k0: float = 0.0) -> FieldState:
    """Centered Gaussian amplitude exp(-r^2/(4 sigma^2)) (density rms sigma
    per axis), optionally boosted by exp(i k0 z)."""
    axes = [
        (np.arange(n) - n // 2) * (l / n)
        for n, l in zip(shape, box)
    ]
    r2 = np.zeros(shape)
    for i, x in enumerate(axes):
        r2 = r2 + x.reshape([-1 if j == i else 1 for j in range(len(axes))]) ** 2
    psi = amplitude * np.exp(-r2 / (4.0 * sigma**2))
    if k0:
        z = axes[-1].reshape([-1 if j == len(axes) - 1 else 1 for j in range(len(axes))])
        psi = psi * np.exp(1j * k0 * z)
    return FieldState(psi=psi, box=box)


def uniform_state(box: tuple[float, ...], shape: tuple[int, ...],
                  density: float, k0: float = 0.0) -> FieldState:
    """Uniform |psi|^2 = density, optionally a plane wave exp(i k0 z) with
    k0 snapped to the nearest grid mode."""
    psi = np.full(shape, np.sqrt(density), dtype=complex)
    if k0:
        nz = shape[-1]
        dz = box[-1] / nz
        mode = round(k0 * box[-1] / (2.0 * np.pi))
        kz = 2.0 * np.pi * mode / box[-1]
        z = (np.arange(nz) * dz).reshape([1] * (len(shape) - 1) + [-1])
        psi = psi * np.exp(1j * kz * z)
    return FieldState(psi=psi, box=box)
