"""Black-box tests of linearity for dynamical maps on density matrices.

A dynamical map takes (rho, t) to a density matrix. Three kinds are
provided: unitary evolution under a fixed Hamiltonian, the state-dependent
spin flow of :mod:`nqlab.weinberg`, and a Kraus channel applied once. The
checks below probe mixture linearity, purity and overlap preservation,
entropy monotonicity, and linearity of mean-value rates.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Union

import numpy as np

from . import qcore
from .qcore import CONSTRUCTION_TOL, DRIFT_TOL, DimensionMismatchError
from .weinberg import WeinbergParams, weinberg_density_map


class NotPurePreservingError(ValueError):
    """The map sent a pure state to a mixed one."""


@dataclass(frozen=True, eq=False)
class UnitaryGenerator:
    hamiltonian: np.ndarray

    def __post_init__(self):
        h = np.array(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("Hamiltonian must be square")
        if qcore.hermiticity_error(h) > CONSTRUCTION_TOL:
            raise ValueError("Hamiltonian is not Hermitian")
        h.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        lam, vecs = np.linalg.eigh(h)
        object.__setattr__(self, "_eig", (lam, vecs))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def propagator(self, t: float) -> np.ndarray:
        lam, vecs = self._eig
        return (vecs * np.exp(-1j * lam * t)) @ vecs.conj().T

    def __call__(self, rho: np.ndarray, t: float) -> np.ndarray:
        u = self.propagator(t)
        return u @ rho @ u.conj().T


@dataclass(frozen=True)
class WeinbergFlow:
    params: WeinbergParams

    dim = 2

    @classmethod
    def with_epsilon(cls, epsilon: float) -> "WeinbergFlow":
        return cls(WeinbergParams(epsilon))

    def __call__(self, rho: np.ndarray, t: float) -> np.ndarray:
        return np.array(weinberg_density_map(self.params, rho, t))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """rho -> sum K rho K^dagger, applied once regardless of t."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        d = ops[0].shape[0]
        if any(k.shape != (d, d) for k in ops):
            raise ValueError("Kraus operators must be square with equal dimension")
        completeness = sum(k.conj().T @ k for k in ops)
        err = float(np.max(np.abs(completeness - np.eye(d))))
        if err > DRIFT_TOL:
            raise ValueError(f"Kraus operators are not complete (deviation {err:.3e})")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __call__(self, rho: np.ndarray, t: float) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.operators)


DynamicalMap = Union[UnitaryGenerator, WeinbergFlow, KrausChannel]


def depolarizing(q: float) -> KrausChannel:
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    a = math.sqrt(1.0 - q)
    b = math.sqrt(q / 3.0)
    return KrausChannel((a * qcore.SIGMA_0, b * qcore.SIGMA_1, b * qcore.SIGMA_2, b * qcore.SIGMA_3))


def amplitude_damping(gamma: float) -> KrausChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]])
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]])
    return KrausChannel((k0, k1))


def apply(dmap: DynamicalMap, rho, t: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dmap.dim, dmap.dim):
        raise DimensionMismatchError(f"map acts on dim {dmap.dim}, state has shape {rho.shape}")
    out = dmap(rho, t)
    out = 0.5 * (out + out.conj().T)
    out.setflags(write=False)
    return out


def mixture_linearity_residual(dmap: DynamicalMap, rho1, rho2, p: float, t: float) -> float:
    """Trace distance between map(mixture) and mixture(map outputs)."""
    evolved_mix = apply(dmap, qcore.mixture(rho1, rho2, p), t)
    mixed_evolved = qcore.mixture(apply(dmap, rho1, t), apply(dmap, rho2, t), p)
    return qcore.trace_distance(evolved_mix, mixed_evolved)


class PurityPair(NamedTuple):
    purity_in: float
    purity_out: float


def purity_chain_check(dmap: DynamicalMap, rho, t: float) -> PurityPair:
    return PurityPair(qcore.purity(rho), qcore.purity(apply(dmap, rho, t)))


class EntropyPair(NamedTuple):
    entropy_in: float
    entropy_out: float

    @property
    def decreased(self) -> bool:
        return self.entropy_out < self.entropy_in - DRIFT_TOL


def entropy_monotonicity_check(dmap: DynamicalMap, rho, t: float) -> EntropyPair:
    return EntropyPair(
        qcore.von_neumann_entropy(rho), qcore.von_neumann_entropy(apply(dmap, rho, t))
    )


def overlap_preservation_residual(dmap: DynamicalMap, psi, phi, t: float) -> float:
    """| |<psi'|phi'>|^2 - |<psi|phi>|^2 | recovered from purities.

    Each pure state is evolved on its own. The equal mixture of the two
    projectors has purity 1/2 + |<psi|phi>|^2 / 2 before and after, so the
    overlaps are read off as 2 Tr[rho^2] - 1.
    """
    psi = qcore.as_state_vector(psi, tol=1e-10)
    phi = qcore.as_state_vector(phi, tol=1e-10)
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"{psi.shape} vs {phi.shape}")
    outs = []
    for v in (psi, phi):
        out = apply(dmap, qcore.projector_onto(v), t)
        if qcore.purity(out) < 1.0 - 1e-8:
            raise NotPurePreservingError(
                f"pure input mapped to purity {qcore.purity(out):.6g}"
            )
        outs.append(out)
    before = 2.0 * qcore.purity(qcore.mixture(qcore.projector_onto(psi), qcore.projector_onto(phi), 0.5)) - 1.0
    after = 2.0 * qcore.purity(qcore.mixture(outs[0], outs[1], 0.5)) - 1.0
    return abs(after - before)


def default_fd_step(dmap: DynamicalMap) -> float:
    if isinstance(dmap, WeinbergFlow) and dmap.params.epsilon:
        return 1e-4 / abs(dmap.params.epsilon)
    return 1e-4


def mean_value_rate(dmap: DynamicalMap, obs, rho, t: float, dt_fd: float) -> float:
    """Central difference of d/dt Tr[obs map(rho, t)]."""
    up = qcore.expectation(obs, apply(dmap, rho, t + dt_fd))
    down = qcore.expectation(obs, apply(dmap, rho, t - dt_fd))
    return (up - down) / (2.0 * dt_fd)


def mean_value_linearity_residual(
    dmap: DynamicalMap, proj, rho1, rho2, p: float, t: float, dt_fd: float | None = None
) -> float:
    """|rate(mixture) - [p rate(rho1) + (1-p) rate(rho2)]| for the mean of ``proj``."""
    if dt_fd is None:
        dt_fd = default_fd_step(dmap)
    if not dt_fd > 0:
        raise ValueError("dt_fd must be positive")
    p = qcore.check_weight(p)
    mixed = mean_value_rate(dmap, proj, qcore.mixture(rho1, rho2, p), t, dt_fd)
    branches = p * mean_value_rate(dmap, proj, rho1, t, dt_fd)
    if p < 1.0:
        branches += (1.0 - p) * mean_value_rate(dmap, proj, rho2, t, dt_fd)
    return abs(mixed - branches)


MIXTURE_TOL = 1e-10
PURITY_TOL = 1e-10
OVERLAP_TOL = 1e-8
MEAN_VALUE_TOL = 1e-6
INJECTIVITY_RATIO = 1e-8


@dataclass
class LinearityReport:
    """Worst-case residuals over the sampled states and per-property verdicts.

    ``injective`` is sampled evidence only: distinct sampled inputs stayed
    distinct, which cannot certify that the map is one-to-one.
    """

    map_kind: str
    dim: int
    t: float
    samples: int
    seed: int
    mixture_residual: float
    purity_before: float
    purity_after: float
    max_purity_change: float
    overlap_residual: float | None
    entropy_change: float
    mean_value_residual: float
    min_distance_ratio: float
    verdicts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["injectivity_note"] = "sampled evidence only"
        return d


def _kind(dmap: DynamicalMap) -> str:
    return {UnitaryGenerator: "unitary", WeinbergFlow: "weinberg", KrausChannel: "kraus"}[type(dmap)]


def classify(dmap: DynamicalMap, sample_count: int, rng_seed: int, t: float = 1.0) -> LinearityReport:
    """Run every check on ``sample_count`` seeded random samples."""
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(rng_seed)
    d = dmap.dim
    dt_fd = default_fd_step(dmap)

    mix_res, mv_res = [], []
    purity_rows = []
    overlap_res: list[float] = []
    pure_to_pure = True
    entropy_changes = []
    ratios = []
    for _ in range(sample_count):
        rho1 = qcore.random_density_matrix(rng, d)
        rho2 = qcore.random_density_matrix(rng, d)
        p = float(rng.uniform())
        psi = qcore.random_state_vector(rng, d)
        phi = qcore.random_state_vector(rng, d)
        proj = qcore.projector_onto(qcore.random_state_vector(rng, d))

        mix_res.append(mixture_linearity_residual(dmap, rho1, rho2, p, t))
        purity_rows.append(purity_chain_check(dmap, rho1, t))
        ent = entropy_monotonicity_check(dmap, rho1, t)
        entropy_changes.append(ent.entropy_out - ent.entropy_in)
        mv_res.append(mean_value_linearity_residual(dmap, proj, rho1, rho2, p, t, dt_fd))

        if pure_to_pure:
            try:
                overlap_res.append(overlap_preservation_residual(dmap, psi, phi, t))
            except NotPurePreservingError:
                pure_to_pure = False

        d_in = qcore.trace_distance(rho1, rho2)
        if d_in > 1e-12:
            d_out = qcore.trace_distance(apply(dmap, rho1, t), apply(dmap, rho2, t))
            ratios.append(d_out / d_in)

    purity_changes = [abs(r.purity_out - r.purity_in) for r in purity_rows]
    worst = int(np.argmax(purity_changes))
    max_purity_change = purity_changes[worst]
    overlap = max(overlap_res) if pure_to_pure else None
    entropy_change = max(entropy_changes, key=abs)
    min_ratio = min(ratios) if ratios else math.inf

    verdicts = {
        "mixture_linear": max(mix_res) <= MIXTURE_TOL,
        "purity_preserving": max_purity_change <= PURITY_TOL,
        "pure_to_pure": pure_to_pure,
        "overlap_preserving": pure_to_pure and overlap <= OVERLAP_TOL,
        "entropy_nondecreasing": min(entropy_changes) >= -DRIFT_TOL,
        "mean_value_linear": max(mv_res) <= MEAN_VALUE_TOL,
        "injective": min_ratio > INJECTIVITY_RATIO,
    }
    # linear, one-to-one, and pure-state preserving: the premises from which
    # overlap preservation follows
    verdicts["linear_one_to_one"] = verdicts["mixture_linear"] and verdicts["injective"]
    verdicts["all_linear"] = verdicts["mixture_linear"] and verdicts["mean_value_linear"]

    return LinearityReport(
        map_kind=_kind(dmap),
        dim=d,
        t=float(t),
        samples=sample_count,
        seed=rng_seed,
        mixture_residual=float(max(mix_res)),
        purity_before=float(purity_rows[worst].purity_in),
        purity_after=float(purity_rows[worst].purity_out),
        max_purity_change=float(max_purity_change),
        overlap_residual=None if overlap is None else float(overlap),
        entropy_change=float(entropy_change),
        mean_value_residual=float(max(mv_res)),
        min_distance_ratio=float(min_ratio),
        verdicts=verdicts,
    )
