"""System-plus-environment states, the spin singlet, and the EPR signaling scenario.

Bipartite matrices use the basis index ``s * dim_R + r`` with the system S
as the first factor. For the singlet, S is Alice's spin and R is Bob's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import qcore
from .linearity import DynamicalMap, WeinbergFlow, apply, mean_value_rate, default_fd_step
from .qcore import BlochVector


@dataclass(frozen=True, eq=False)
class BipartiteState:
    dim_s: int
    dim_r: int
    matrix: np.ndarray

    def __post_init__(self):
        m = qcore.as_density_matrix(self.matrix, tol=qcore.DRIFT_TOL)
        if m.shape != (self.dim_s * self.dim_r,) * 2:
            raise qcore.DimensionMismatchError(
                f"matrix shape {m.shape} does not match dims ({self.dim_s}, {self.dim_r})"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_s, self.dim_r

    def reduced_s(self) -> np.ndarray:
        return qcore.partial_trace(self.matrix, self.dims, keep=0)

    def reduced_r(self) -> np.ndarray:
        return qcore.partial_trace(self.matrix, self.dims, keep=1)


@dataclass(frozen=True)
class EnvironmentFlags:
    alpha_index: int = 0
    beta_index: int = 1

    def check(self, dim_r: int) -> None:
        if self.alpha_index == self.beta_index:
            raise ValueError("alpha and beta must be distinct environment states")
        for i in (self.alpha_index, self.beta_index):
            if not 0 <= i < dim_r:
                raise ValueError(f"environment index {i} outside 0..{dim_r - 1}")


def _env_projector(dim_r: int, index: int) -> np.ndarray:
    e = np.zeros((dim_r, dim_r), dtype=complex)
    e[index, index] = 1.0
    return e


def make_correlated(rho1, rho2, p: float, flags: EnvironmentFlags = EnvironmentFlags(), dim_r: int = 2) -> BipartiteState:
    """p rho1 (x) |alpha><alpha| + (1 - p) rho2 (x) |beta><beta|."""
    flags.check(dim_r)
    p = qcore.check_weight(p)
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise qcore.DimensionMismatchError(f"{rho1.shape} vs {rho2.shape}")
    m = p * np.kron(rho1, _env_projector(dim_r, flags.alpha_index)) + (1.0 - p) * np.kron(
        rho2, _env_projector(dim_r, flags.beta_index)
    )
    return BipartiteState(rho1.shape[0], dim_r, m)


def make_uncorrelated(rho, p: float, flags: EnvironmentFlags = EnvironmentFlags(), dim_r: int = 2) -> BipartiteState:
    """rho (x) [p |alpha><alpha| + (1 - p) |beta><beta|]."""
    flags.check(dim_r)
    p = qcore.check_weight(p)
    env = p * _env_projector(dim_r, flags.alpha_index) + (1.0 - p) * _env_projector(dim_r, flags.beta_index)
    rho = np.asarray(rho, dtype=complex)
    return BipartiteState(rho.shape[0], dim_r, np.kron(rho, env))


class Branch(NamedTuple):
    probability: float
    state: np.ndarray | None  # None when the branch has zero probability

    @property
    def empty(self) -> bool:
        return self.state is None


def _condition_on_env(state: BipartiteState, index: int) -> Branch:
    proj = np.kron(np.eye(state.dim_s), _env_projector(state.dim_r, index))
    joint = proj @ state.matrix @ proj
    prob = float(np.trace(joint).real)
    if prob <= 1e-15:
        return Branch(0.0, None)
    return Branch(prob, qcore.partial_trace(joint, state.dims, keep=0) / prob)


def conditional_states(state: BipartiteState, flags: EnvironmentFlags = EnvironmentFlags()) -> tuple[Branch, Branch]:
    """Outcome probabilities and conditional S states for a measurement of R."""
    flags.check(state.dim_r)
    return _condition_on_env(state, flags.alpha_index), _condition_on_env(state, flags.beta_index)


def joint_probability(state: BipartiteState, proj, env_index: int) -> float:
    """Tr[(P (x) |e><e|) state]."""
    op = np.kron(np.asarray(proj, dtype=complex), _env_projector(state.dim_r, env_index))
    return float(np.trace(op @ state.matrix).real)


def derivative_consistency_residual(
    dmap: DynamicalMap,
    rho1,
    rho2,
    p: float,
    proj,
    t: float,
    dt_fd: float | None = None,
    flags: EnvironmentFlags = EnvironmentFlags(),
) -> float:
    """Compare the rate of Tr[P rho] with the rate assembled from R's branches.

    ``rho`` is the reduced state of the correlated S+R state; the branch
    states and weights come from conditioning on R. Any difference means the
    dynamics of S depends on its situation in the larger system.
    """
    if dt_fd is None:
        dt_fd = default_fd_step(dmap)
    if not dt_fd > 0:
        raise ValueError("dt_fd must be positive")
    big = make_correlated(rho1, rho2, p, flags)
    rho = big.reduced_s()
    rate_whole = mean_value_rate(dmap, proj, rho, t, dt_fd)
    rate_branches = 0.0
    for branch in conditional_states(big, flags):
        if not branch.empty:
            rate_branches += branch.probability * mean_value_rate(dmap, proj, branch.state, t, dt_fd)
    return abs(rate_whole - rate_branches)


def singlet() -> BipartiteState:
    """(|+-> - |-+>)/sqrt(2), with |+> the Sigma_3 = +1 state."""
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    return BipartiteState(2, 2, np.outer(psi, psi.conj()))


def spin_projector(direction, sign: int = 1) -> np.ndarray:
    """(I + sign n . Sigma) / 2 for a unit vector n."""
    n = np.asarray(direction, dtype=float)
    return 0.5 * (qcore.SIGMA_0 + sign * sum(c * s for c, s in zip(n, qcore.PAULI)))


@dataclass(frozen=True)
class EprSetting:
    direction: tuple[float, float, float]

    def __post_init__(self):
        n = np.asarray(self.direction, dtype=float)
        if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError(f"setting must be a unit 3-vector, got {self.direction}")

    @classmethod
    def from_angle(cls, theta: float) -> "EprSetting":
        """Axis tilted by ``theta`` radians from z toward x."""
        return cls((math.sin(theta), 0.0, math.cos(theta)))

    @classmethod
    def z(cls) -> "EprSetting":
        return cls((0.0, 0.0, 1.0))

    @classmethod
    def tilted_45(cls) -> "EprSetting":
        r = 1.0 / math.sqrt(2.0)
        return cls((r, 0.0, r))


class EprBranch(NamedTuple):
    alice_outcome: int
    probability: float
    bob_initial: BlochVector
    bob_sigma2: float


class EprResult(NamedTuple):
    mean_sigma2: float
    branches: list[EprBranch]


def epr_scenario(setting: EprSetting, eps: float, t: float, dynamics: DynamicalMap | None = None) -> EprResult:
    """Bob's ensemble <Sigma_2> after Alice measures along ``setting``.

    Alice's outcome probabilities and Bob's conditional states come from
    projecting the singlet. Each of Bob's branch states is then evolved for
    time ``t`` (by the spin flow with strength ``eps`` unless ``dynamics``
    is given) and the branch values of <Sigma_2> are averaged.
    """
    if dynamics is None:
        dynamics = WeinbergFlow.with_epsilon(eps)
    pair = singlet()
    branches = []
    mean = 0.0
    for sign in (1, -1):
        op = np.kron(spin_projector(setting.direction, sign), qcore.SIGMA_0)
        joint = op @ pair.matrix @ op
        prob = float(np.trace(joint).real)
        bob = qcore.partial_trace(joint, pair.dims, keep=1) / prob
        evolved = apply(dynamics, bob, t)
        s2 = qcore.expectation(qcore.SIGMA_2, evolved)
        branches.append(EprBranch(sign, prob, qcore.density_to_bloch(bob), s2))
        mean += prob * s2
    return EprResult(mean, branches)


def signaling_statistic(eps: float, t: float, dynamics: DynamicalMap | None = None) -> float:
    """|<Sigma_2>_Bob(45 deg setting) - <Sigma_2>_Bob(z setting)|."""
    tilted = epr_scenario(EprSetting.tilted_45(), eps, t, dynamics).mean_sigma2
    straight = epr_scenario(EprSetting.z(), eps, t, dynamics).mean_sigma2
    return abs(tilted - straight)


def tilted_sigma2_curve(eps: float, t):
    """(1/sqrt 2) sin(sqrt 2 eps t), Bob's <Sigma_2> for the tilted setting."""
    return np.sin(math.sqrt(2.0) * eps * np.asarray(t)) / math.sqrt(2.0)
