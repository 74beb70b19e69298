"""Split-step spectral solver for the logarithmic Schroedinger equation in 1-D.

    i dpsi/dt = [-(1/2m) d^2/dx^2 + V - b ln|psi|^2] psi

on a periodic grid. One step is a Strang splitting: half a step of the
local phase (potential plus logarithmic term), a full kinetic step applied
exactly in Fourier space, and a second half phase step.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
INSTABILITY_DRIFT = 1e-6


class InstabilityError(FloatingPointError):
    """Raised when the field blows up or its norm drifts beyond tolerance."""


@dataclass(frozen=True)
class Grid1D:
    n_points: int
    x_min: float
    x_max: float

    def __post_init__(self):
        n = self.n_points
        if n < 16 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 16, got {n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @classmethod
    def centered(cls, n_points: int, half_width: float) -> "Grid1D":
        return cls(n_points, -half_width, half_width)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @property
    def x(self) -> np.ndarray:
        # x_max is identified with x_min
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)


@dataclass(frozen=True)
class WaveField:
    grid: Grid1D
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (self.grid.n_points,):
            raise ValueError("amplitude count does not match grid")

    @classmethod
    def normalized(cls, grid: Grid1D, amplitudes) -> "WaveField":
        psi = np.asarray(amplitudes, dtype=complex)
        return cls(grid, psi / math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.density) * self.grid.dx)


@dataclass(frozen=True)
class LogNlseParams:
    mass: float = 1.0
    b: float = 0.0
    dt: float = 1e-3
    potential: np.ndarray | None = None
    log_floor: float = 1e-30

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if self.b < 0:
            raise ValueError("b must be non-negative")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.log_floor > 0:
            raise ValueError("log_floor must be positive")

    def potential_on(self, grid: Grid1D) -> np.ndarray:
        if self.potential is None:
            return np.zeros(grid.n_points)
        v = np.asarray(self.potential, dtype=float)
        if v.shape != (grid.n_points,):
            raise ValueError("potential does not match grid")
        return v


def harmonic_potential(grid: Grid1D, mass: float, omega: float, x0: float = 0.0) -> np.ndarray:
    return 0.5 * mass * omega**2 * (grid.x - x0) ** 2


def gaussian(grid: Grid1D, sigma0: float, x0: float = 0.0, k0: float = 0.0) -> WaveField:
    """Normalized Gaussian whose density has rms width ``sigma0``."""
    x = grid.x - x0
    return WaveField.normalized(grid, np.exp(-(x**2) / (4.0 * sigma0**2) + 1j * k0 * x))


def gausson_width_parameter(params: LogNlseParams) -> float:
    """a = m b: the Gaussian exp(-a x^2) whose density is stationary."""
    return params.mass * params.b


def make_gausson(params: LogNlseParams, grid: Grid1D, x0: float = 0.0) -> WaveField:
    if params.b <= 0:
        raise ValueError("a gausson needs b > 0")
    if params.potential is not None and np.any(params.potential_on(grid)):
        raise ValueError("a gausson needs V = 0")
    a = gausson_width_parameter(params)
    return WaveField.normalized(grid, np.exp(-a * (grid.x - x0) ** 2))


def gausson_frequency(params: LogNlseParams) -> float:
    """Phase rotation rate of the continuum gausson: psi ~ exp(-i w t).

    Substituting N exp(-a x^2) gives H psi = (a/m - b ln N^2) psi with
    N^2 = sqrt(2a/pi), so w = b (1 - ln N^2).
    """
    a = gausson_width_parameter(params)
    return params.b * (1.0 - 0.5 * math.log(2.0 * a / math.pi))


def width(psi: WaveField) -> float:
    """rms width sqrt(<x^2> - <x>^2) of |psi|^2."""
    w = psi.density * psi.grid.dx
    w = w / w.sum()
    x = psi.grid.x
    mean = np.sum(w * x)
    return float(math.sqrt(max(0.0, np.sum(w * (x - mean) ** 2))))


def free_gaussian_width(sigma0: float, mass: float, t):
    return sigma0 * np.sqrt(1.0 + (t / (2.0 * mass * sigma0**2)) ** 2)


def energy(params: LogNlseParams, psi: WaveField) -> float:
    """Integral of |psi'|^2/2m + V|psi|^2 - b|psi|^2(ln|psi|^2 - 1)."""
    grid = psi.grid
    dpsi = np.fft.ifft(1j * grid.k * np.fft.fft(psi.amplitudes))
    rho = psi.density
    log_rho = np.log(np.maximum(rho, params.log_floor))
    dens = (
        np.abs(dpsi) ** 2 / (2.0 * params.mass)
        + params.potential_on(grid) * rho
        - params.b * rho * (log_rho - 1.0)
    )
    return float(np.sum(dens) * grid.dx)


class _Stepper:
    """Caches the kinetic propagator and potential for a fixed (params, grid)."""

    def __init__(self, params: LogNlseParams, grid: Grid1D):
        self.params = params
        self.grid = grid
        self.v = params.potential_on(grid)
        self.kinetic = np.exp(-1j * params.dt * grid.k**2 / (2.0 * params.mass))
        self.half_dt = 0.5 * params.dt

    def _phase(self, psi: np.ndarray) -> np.ndarray:
        p = self.params
        rho = psi.real**2 + psi.imag**2
        local = self.v
        if p.b:
            local = local - p.b * np.log(np.maximum(rho, p.log_floor))
        return psi * np.exp(-1j * self.half_dt * local)

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        psi = self._phase(psi)
        psi = np.fft.ifft(self.kinetic * np.fft.fft(psi))
        psi = self._phase(psi)
        if not np.all(np.isfinite(psi)):
            raise InstabilityError("non-finite amplitudes after split step")
        return psi


def step(params: LogNlseParams, psi: WaveField) -> WaveField:
    return WaveField(psi.grid, _Stepper(params, psi.grid)(psi.amplitudes))


@dataclass
class Diagnostics:
    t: list[float] = field(default_factory=list)
    norm: list[float] = field(default_factory=list)
    width: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)

    COLUMNS = ("t", "norm", "width", "energy")

    def record(self, t: float, params: LogNlseParams, psi: WaveField) -> None:
        self.t.append(t)
        self.norm.append(psi.norm())
        self.width.append(width(psi))
        self.energy.append(energy(params, psi))

    def rows(self):
        return zip(self.t, self.norm, self.width, self.energy)

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {c: np.asarray(getattr(self, c)) for c in self.COLUMNS}


def evolve(
    params: LogNlseParams,
    psi0: WaveField,
    t_final: float,
    stride: int = 100,
    observer=None,
) -> tuple[WaveField, Diagnostics]:
    """Repeat ``step`` up to ``t_final``, sampling diagnostics every ``stride`` steps.

    ``observer(step_index, t, field)`` is called at each sample, if given.
    Raises InstabilityError if the norm drifts by more than 1e-6.
    """
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    # nearest whole number of steps; the run ends within dt/2 of t_final
    n_steps = int(round(t_final / params.dt))
    stepper = _Stepper(params, psi0.grid)
    norm0 = psi0.norm()
    diag = Diagnostics()
    diag.record(0.0, params, psi0)
    if observer:
        observer(0, 0.0, psi0)
    psi = psi0.amplitudes
    for i in range(1, n_steps + 1):
        psi = stepper(psi)
        if i % stride == 0 or i == n_steps:
            t = i * params.dt
            fld = WaveField(psi0.grid, psi)
            diag.record(t, params, fld)
            drift = abs(diag.norm[-1] - norm0)
            if drift > INSTABILITY_DRIFT:
                raise InstabilityError(f"norm drift {drift:.3e} at t={t:.6g} (step {i})")
            if observer:
                observer(i, t, fld)
    logger.debug("evolved %d steps to t=%g", n_steps, t_final)
    return WaveField(psi0.grid, psi), diag
