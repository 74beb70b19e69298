"""State-dependent spin Hamiltonian H = eps <Sigma_3> Sigma_3.

The mean values obey

    d<S1>/dt = -2 eps <S3> <S2>
    d<S2>/dt =  2 eps <S3> <S1>
    d<S3>/dt =  0

i.e. precession about z at angular frequency 2 eps <S3>, a rate that depends
on the state. Mixed states evolve through their Bloch vector of mean values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import SIGMA_3, BlochVector, bloch_to_density, density_to_bloch


@dataclass(frozen=True)
class WeinbergParams:
    epsilon: float

    def __post_init__(self):
        if not math.isfinite(self.epsilon):
            raise ValueError(f"epsilon must be finite, got {self.epsilon}")

    def default_dt(self) -> float:
        return 1e-3 / abs(self.epsilon) if self.epsilon else 1e-3


@dataclass(frozen=True)
class SpinTrajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 3): s1, s2, s3

    def __len__(self) -> int:
        return len(self.times)

    def final(self) -> BlochVector:
        return BlochVector.from_array(self.states[-1])

    def bloch(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.states[i])


def hamiltonian_of_state(params: WeinbergParams, s: BlochVector) -> np.ndarray:
    return params.epsilon * s.s3 * SIGMA_3


def closed_form(params: WeinbergParams, s0: BlochVector, t: float) -> BlochVector:
    angle = 2.0 * params.epsilon * s0.s3 * t
    c, s = math.cos(angle), math.sin(angle)
    return BlochVector(s0.s1 * c - s0.s2 * s, s0.s2 * c + s0.s1 * s, s0.s3)


def _rhs(eps: float, s1: float, s2: float, s3: float) -> tuple[float, float]:
    w = 2.0 * eps * s3
    return -w * s2, w * s1


def evolve_numeric(
    params: WeinbergParams,
    s0: BlochVector,
    t_final: float,
    dt: float | None = None,
    stride: int = 1,
) -> SpinTrajectory:
    """Fixed-step classical RK4 on the mean-value equations.

    The step is shrunk so an integer number of steps lands exactly on
    ``t_final``. Every ``stride``-th state is recorded, plus the final one.
    """
    if dt is None:
        dt = params.default_dt()
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_final < 0:
        raise ValueError(f"t_final must be non-negative, got {t_final}")
    n_steps = max(1, math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / n_steps if n_steps else 0.0

    eps = params.epsilon
    s1, s2, s3 = s0.s1, s0.s2, s0.s3
    times = [0.0]
    states = [(s1, s2, s3)]
    for i in range(1, n_steps + 1):
        # d<S3>/dt = 0, so s3 is carried through untouched
        k1a, k1b = _rhs(eps, s1, s2, s3)
        k2a, k2b = _rhs(eps, s1 + 0.5 * h * k1a, s2 + 0.5 * h * k1b, s3)
        k3a, k3b = _rhs(eps, s1 + 0.5 * h * k2a, s2 + 0.5 * h * k2b, s3)
        k4a, k4b = _rhs(eps, s1 + h * k3a, s2 + h * k3b, s3)
        s1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        s2 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        if i % stride == 0 or i == n_steps:
            times.append(i * h)
            states.append((s1, s2, s3))
    return SpinTrajectory(np.array(times), np.array(states))


def weinberg_density_map(params: WeinbergParams, rho, t: float) -> np.ndarray:
    """Evolve a qubit density matrix through its Bloch vector."""
    s = density_to_bloch(rho)
    return bloch_to_density(closed_form(params, s, t))


def zero_crossing_period(times: np.ndarray, values: np.ndarray) -> float:
    """Mean full period from linearly interpolated upward zero crossings."""
    v0, v1 = values[:-1], values[1:]
    idx = np.nonzero((v0 < 0) & (v1 >= 0))[0]
    if len(idx) < 2:
        raise ValueError("need at least two upward zero crossings")
    t0, t1 = times[idx], times[idx + 1]
    crossings = t0 - v0[idx] * (t1 - t0) / (v1[idx] - v0[idx])
    return float(np.mean(np.diff(crossings)))
