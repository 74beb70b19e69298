"""Named scenario configurations shipped with the package."""

import math

_R2 = 1.0 / math.sqrt(2.0)

# Published experimental limits; reported as labeled constants only.
EXPERIMENTAL_BOUNDS = [
    {
        "quantity": "b (logarithmic nonlinearity)",
        "bound_eV": 3.4e-13,
        "relation": "<",
        "method": "neutron two-slit interferometry",
        "citation": "C. G. Shull, D. K. Atwood, J. Arthur, M. A. Horne, Phys. Rev. Lett. 44, 765 (1980)",
    },
    {
        "quantity": "b (logarithmic nonlinearity)",
        "bound_eV": 3.3e-15,
        "relation": "<",
        "method": "neutron Fresnel diffraction",
        "citation": "R. Gaehler, A. G. Klein, A. Zeilinger, Phys. Rev. A 23, 1611 (1981)",
    },
    {
        "quantity": "|epsilon| (state-dependent spin Hamiltonian)",
        "bound_eV": 1.6e-20,
        "relation": "<",
        "method": "atomic and nuclear spin precession spectroscopy",
        "note": "also quoted as < 2e-27 of the binding energy per nucleon",
        "citation": (
            "J. J. Bollinger et al., Phys. Rev. Lett. 63, 1031 (1989); "
            "T. E. Chupp, R. J. Hoare, Phys. Rev. Lett. 64, 2261 (1990); "
            "R. L. Walsworth et al., Phys. Rev. Lett. 64, 2599 (1990); "
            "P. K. Majumder et al., Phys. Rev. Lett. 65, 2931 (1990)"
        ),
    },
]

PRESETS = {
    "spin-oracle": {
        "description": "RK4 spin precession vs the closed-form rotation, eps=1, t in [0, 10], dt=1e-3",
        "config": {"scenario": "spin", "eps": 1.0, "s0": [_R2, 0.0, _R2], "t_final": 10.0, "dt": 1e-3, "stride": 100},
    },
    "spin-stationary": {
        "description": "<S3> = +1 initial state: mean values stay at (0, 0, 1)",
        "config": {"scenario": "spin", "eps": 1.0, "s0": [0.0, 0.0, 1.0], "t_final": 10.0, "dt": 1e-3, "stride": 100},
    },
    "eq13-sweep": {
        "description": "Bob's <Sigma_2>(t) for Alice's z and 45-degree settings, 100-point sweep",
        "config": {"scenario": "epr", "eps": 1.0, "t_final": 10.0, "n_t": 100, "angle_deg": 45.0},
    },
    "signal-max": {
        "description": "signaling statistic at sqrt(2) eps t = pi/2, where it peaks at 1/sqrt(2)",
        "config": {
            "scenario": "epr",
            "eps": 1.0,
            "t_final": math.pi / (2.0 * math.sqrt(2.0)),
            "n_t": 51,
            "angle_deg": 45.0,
            "expect_peak": _R2,
        },
    },
    "epr-linear-control": {
        "description": "the same sweep under the linear Hamiltonian eps Sigma_3: no signal",
        "config": {"scenario": "epr", "eps": 1.0, "t_final": 10.0, "n_t": 100, "angle_deg": 45.0, "dynamics": "linear"},
    },
    "proof-chain-unitary": {
        "description": "all linearity checks on a fixed qubit Hamiltonian",
        "config": {
            "scenario": "linearity",
            "map": {"type": "unitary", "pauli": [0.3, -0.7, 1.1]},
            "samples": 100,
            "t": 1.0,
            "seed": 7,
            "expect": {
                "mixture_linear": True,
                "purity_preserving": True,
                "overlap_preserving": True,
                "entropy_nondecreasing": True,
                "mean_value_linear": True,
            },
        },
    },
    "weinberg-witness": {
        "description": "state-dependent spin flow at eps t = 1: mixtures are not preserved, purity is",
        "config": {
            "scenario": "linearity",
            "map": {"type": "weinberg", "eps": 1.0},
            "samples": 100,
            "t": 1.0,
            "seed": 7,
            "expect": {"mixture_linear": False, "purity_preserving": True, "mean_value_linear": False},
        },
    },
    "depolarizing": {
        "description": "depolarizing channel q=0.1: linear but not purity preserving",
        "config": {
            "scenario": "linearity",
            "map": {"type": "depolarizing", "q": 0.1},
            "samples": 100,
            "t": 1.0,
            "seed": 7,
            "expect": {"mixture_linear": True, "purity_preserving": False, "pure_to_pure": False},
        },
    },
    "larger-system": {
        "description": "system-plus-environment decomposition and rate consistency",
        "config": {"scenario": "bipartite", "eps": 1.0, "samples": 100, "seed": 11},
    },
    "gausson-hold": {
        "description": "gausson on n=1024, +-10 widths, m=b=1, held for t in [0, 10]",
        "config": {
            "scenario": "nlse",
            "b": 1.0,
            "m": 1.0,
            "initial": "gausson",
            "n_points": 1024,
            "half_width": 5.0,
            "t_final": 10.0,
            "dt": 1e-3,
            "stride": 100,
        },
    },
    "free-spread": {
        "description": "the gausson's profile with b=0 spreading to t = 8 m sigma0^2 on a padded domain",
        "config": {
            "scenario": "nlse",
            "b": 0.0,
            "m": 1.0,
            "initial": "gaussian",
            "sigma0": 0.5,
            "n_points": 1024,
            "half_width": 25.0,
            "t_final": 2.0,
            "dt": 1e-3,
            "stride": 50,
        },
    },
    "coherent-hold": {
        "description": "harmonic-oscillator ground-state Gaussian, b=0, over one period",
        "config": {
            "scenario": "nlse",
            "b": 0.0,
            "m": 1.0,
            "initial": "gaussian",
            "sigma0": _R2,
            "potential": "harmonic",
            "omega": 1.0,
            "n_points": 512,
            "half_width": 10.0,
            "t_final": 2.0 * math.pi,
            "dt": math.pi / 2000.0,
            "stride": 100,
        },
    },
    "bounds-doc": {
        "description": "print the experimental limits on b and epsilon (no computation)",
        "config": {"scenario": "bounds"},
    },
}
