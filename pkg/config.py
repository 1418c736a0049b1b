# -*- coding: utf-8 -*-

# Physical constants of the network (SI units). Omitted scenario params
# fall back to these values.
PARAM_DEFAULTS = {
    "tau": 2.0,  # slot duration, s
    "alpha": 0.95,  # safety factor
    "kappa": 5e-4,  # UAV-energy weight
    "v0": 20.0,  # S-UAV cruise speed, m/s
    "h_s": 100.0,  # S-UAV altitude, m
    "h_e": 100.0,  # E-UAV altitude, m
    "M_max": 4,  # connections per S-UAV
    "p0": 2.0,  # GU transmit power, W
    "p_jam": 20.0,  # jammer power, W
    "n0": 10 ** (-174 / 10) * 1e-3,  # -174 dBm/Hz in W/Hz
    "B0": 10e6,  # bandwidth, Hz
    "g0": 10 ** (-50 / 10),  # -50 dB reference gain
    "f_g": 1e8,  # GU CPU, cycles/s
    "f_u": 1e9,  # UAV CPU, cycles/s
    "eps_g": 1e-28,
    "eps_u": 1e-28,
    "P1": 79.85,  # blade-profile hover power, W
    "P2": 88.63,  # induced hover power, W
    "v_bla": 120.0,  # blade tip speed, m/s
    "v_rot": 4.03,  # mean rotor induced velocity, m/s
    "drag_g": 0.6,
    "rho_air": 1.225,  # kg/m^3
    "s0": 0.05,
    "a0": 0.503,  # m^2
    "X_min": 0.0,
    "X_max": 1000.0,
    "Y_min": 0.0,
    "Y_max": 1000.0,
    "zeta": 1e-2,  # BCD convergence accuracy, J
    "sca_tol": 1e-3,  # SCA tolerance, J
    "solver_tol": 1e-8,  # conic duality-gap tolerance
}

# Task streams drawn per (i, t) when the scenario gives ranges instead of arrays
TASK_DEFAULTS = {
    "T": 20,
    "L_mbits": [1.0, 10.0],  # 1 Mbit = 1e6 bit
    "c_bar": [10.0, 100.0],  # cycles/bit
    "mu": 0.0,
    "sigma_ratio": 0.01,  # sigma = ratio * c_bar
}

BITS_PER_MBIT = 1e6

# Desk scenario of the simulation section: 1000 m square, jammer in the
# centre, three S-UAVs crossing the area west to east.
DESK_SCENARIO = {
    "gu_count": 10,
    "jammer": [500.0, 500.0],
    "uavs": [
        {"start": [100.0, 250.0], "end": [800.0, 250.0]},
        {"start": [100.0, 500.0], "end": [800.0, 500.0]},
        {"start": [100.0, 750.0], "end": [800.0, 750.0]},
    ],
    "eavesdropper": {"start": [200.0, 900.0], "end": [800.0, 900.0]},
    "seed": 2024,
}

# Conic solver configuration
SOLVER_CONFIG = {
    "tol": 1e-8,
    "max_iter": 200,
    "backend": "CLARABEL",
    "inner_tol_factor": 0.1,  # backend runs tighter than the certificate tol
    "loose_accept": 1e3,  # max_iter iterates usable within tol * loose_accept
    "z_floor": 1e-9,
    "margin": 1e-9,
}

# Block-coordinate-descent driver configuration
DRIVER_CONFIG = {
    "max_rounds": 30,
    "max_sca_iters": 30,
    "rho_snap": 1e-7,  # ratios below this are treated as zero
    "speed_tol": 1e-6,  # m, slack on the per-slot distance bound
    "decision_tol": 1e-6,
}

# Monte-Carlo validation defaults
VALIDATION_CONFIG = {
    "samples": 10_000,
    "sampler": "gaussian",
    "seed": 7,
    "oracle_tol": 1e-4,  # largest relative CVaR disagreement the oracle accepts
}

# Logging configuration
LOG_CONFIG = {
    "log_file": "uav_offload.log",
    "log_format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "level": "INFO",
}

# Output files of an experiment directory
CSV_COLUMNS = {
    "results": [
        "axis",
        "axis_value",
        "seed",
        "status",
        "ideal_status",
        "robust_gamma",
        "ideal_gamma",
        "fixed_gamma",
        "offloaded_bits",
        "ideal_offloaded_bits",
        "e_local",
        "e_tx",
        "e_edge",
        "e_fly",
        "rounds",
        "max_violation",
        "wall_time",
    ],
    "trajectories": ["axis_value", "seed", "kind", "m", "t", "x", "y"],
    "violations": ["axis_value", "seed", "mode", "sampler", "i", "t", "local", "edge"],
    "summary": [
        "axis_value",
        "runs",
        "robust_gamma",
        "ideal_gamma",
        "ratio",
        "offloaded_bits",
        "ideal_offloaded_bits",
        "rounds",
    ],
}

# Values of each sweep axis at the reference setting
REFERENCE_AXIS_VALUES = {
    "sigma_multiplier": 1.0,
    "alpha": 0.95,
    "p0": 2.0,
    "f_g": 1e8,
    "L_scale": 1.0,
}

HEADLINE = {"target_ratio": 1.02, "band": [1.00, 1.10]}

EXIT_CODES = {
    "success": 0,
    "validation": 1,
    "infeasible": 2,
    "internal": 3,
}

# Built-in sweep presets (one axis each)
PRESETS = {
    "sigma": {"axis": "sigma_multiplier", "values": [0.5, 1.0, 2.0, 4.0], "seeds": [0, 1, 2]},
    "alpha": {"axis": "alpha", "values": [0.80, 0.90, 0.95, 0.99], "seeds": [0, 1, 2]},
    "p0": {"axis": "p0", "values": [1.0, 2.0, 4.0], "seeds": [0, 1, 2]},
    "f_g": {"axis": "f_g", "values": [0.5e8, 1e8, 2e8], "seeds": [0, 1, 2]},
    "data": {"axis": "L_scale", "values": [0.5, 0.75, 1.0], "seeds": [0, 1, 2]},
    "reference": {"axis": "sigma_multiplier", "values": [1.0, 2.0], "seeds": list(range(10))},
}

EXPERIMENT_CONFIG = {
    "runs_dir": "runs",
    "samplers": ["gaussian", "uniform", "two_point"],
    "with_fixed_trajectory": False,
}
