# -*- coding: utf-8 -*-
"""
Scenario definition, loading and validation.
A scenario is the immutable world the optimizer works on: ground users,
S-UAV endpoints, jammer and eavesdropper geometry, task streams and the
physical constants. Documents are JSON; omitted constants take the
defaults of config.PARAM_DEFAULTS.
"""
import json
import logging
import math
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Optional

import numpy as np

from config import BITS_PER_MBIT, DESK_SCENARIO, DRIVER_CONFIG, PARAM_DEFAULTS, TASK_DEFAULTS
from errors import ScenarioParseError, ScenarioValidationError

logger = logging.getLogger(__name__)

SECTIONS = ("params", "gus", "uavs", "jammer", "eavesdropper", "tasks", "seed")
AUX_FIELDS = ("beta", "e", "q", "z", "s")


def _frozen_array(value, shape=None, dtype=float) -> np.ndarray:
    arr = np.array(value, dtype=dtype)
    if shape is not None:
        arr = np.broadcast_to(arr, shape).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class NetworkParams:
    """Physical constants of the network, SI units throughout."""

    tau: float = PARAM_DEFAULTS["tau"]
    alpha: float = PARAM_DEFAULTS["alpha"]
    kappa: float = PARAM_DEFAULTS["kappa"]
    v0: float = PARAM_DEFAULTS["v0"]
    h_s: float = PARAM_DEFAULTS["h_s"]
    h_e: float = PARAM_DEFAULTS["h_e"]
    M_max: int = PARAM_DEFAULTS["M_max"]
    p0: float = PARAM_DEFAULTS["p0"]
    p_jam: float = PARAM_DEFAULTS["p_jam"]
    n0: float = PARAM_DEFAULTS["n0"]
    B0: float = PARAM_DEFAULTS["B0"]
    g0: float = PARAM_DEFAULTS["g0"]
    f_g: float = PARAM_DEFAULTS["f_g"]
    f_u: float = PARAM_DEFAULTS["f_u"]
    eps_g: float = PARAM_DEFAULTS["eps_g"]
    eps_u: float = PARAM_DEFAULTS["eps_u"]
    P1: float = PARAM_DEFAULTS["P1"]
    P2: float = PARAM_DEFAULTS["P2"]
    v_bla: float = PARAM_DEFAULTS["v_bla"]
    v_rot: float = PARAM_DEFAULTS["v_rot"]
    drag_g: float = PARAM_DEFAULTS["drag_g"]
    rho_air: float = PARAM_DEFAULTS["rho_air"]
    s0: float = PARAM_DEFAULTS["s0"]
    a0: float = PARAM_DEFAULTS["a0"]
    X_min: float = PARAM_DEFAULTS["X_min"]
    X_max: float = PARAM_DEFAULTS["X_max"]
    Y_min: float = PARAM_DEFAULTS["Y_min"]
    Y_max: float = PARAM_DEFAULTS["Y_max"]
    zeta: float = PARAM_DEFAULTS["zeta"]
    sca_tol: float = PARAM_DEFAULTS["sca_tol"]
    solver_tol: float = PARAM_DEFAULTS["solver_tol"]

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ScenarioValidationError("alpha must lie in (0,1)")
        if not float(self.M_max).is_integer() or self.M_max < 1:
            raise ScenarioValidationError("M_max must be an integer >= 1")
        object.__setattr__(self, "M_max", int(self.M_max))
        for name in (
            "tau", "v0", "h_s", "h_e", "p0", "n0", "B0", "g0", "f_g", "f_u",
            "eps_g", "eps_u", "P1", "P2", "v_bla", "v_rot", "sca_tol", "solver_tol",
        ):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ScenarioValidationError(f"{name} must be strictly positive, got {value}")
        for name in ("p_jam", "kappa", "drag_g", "rho_air", "s0", "a0", "zeta"):
            if getattr(self, name) < 0.0:
                raise ScenarioValidationError(f"{name} must be non-negative")
        if not self.X_min < self.X_max:
            raise ScenarioValidationError("X_min must be below X_max")
        if not self.Y_min < self.Y_max:
            raise ScenarioValidationError("Y_min must be below Y_max")

    @property
    def noise_power(self) -> float:
        """n0 * B0, the receiver noise power in W."""
        return self.n0 * self.B0

    @property
    def risk_factor(self) -> float:
        """sqrt(alpha / (1 - alpha)), the worst-case CVaR multiplier of sigma."""
        return math.sqrt(self.alpha / (1.0 - self.alpha))

    @property
    def max_step(self) -> float:
        """Longest horizontal move within one slot (m)."""
        return self.v0 * self.tau

    def in_area(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return (
            (pts[:, 0] >= self.X_min)
            & (pts[:, 0] <= self.X_max)
            & (pts[:, 1] >= self.Y_min)
            & (pts[:, 1] <= self.Y_max)
        )

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "NetworkParams":
        """Builds parameters from a document section; unit aliases are converted."""
        values = dict(raw or {})
        if "n0_dbm_hz" in values:
            if "n0" in values:
                raise ScenarioParseError("give either n0 or n0_dbm_hz, not both")
            values["n0"] = 10 ** (float(values.pop("n0_dbm_hz")) / 10.0) * 1e-3
        if "g0_db" in values:
            if "g0" in values:
                raise ScenarioParseError("give either g0 or g0_db, not both")
            values["g0"] = 10 ** (float(values.pop("g0_db")) / 10.0)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ScenarioParseError(f"unknown params: {', '.join(unknown)}")
        try:
            values = {k: float(v) for k, v in values.items()}
        except (TypeError, ValueError) as e:
            raise ScenarioParseError(f"non-numeric parameter: {e}")
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True, eq=False)
class TaskSpec:
    """Per-(i, t) task streams: data length (bits), estimated complexity and
    the first two moments of the complexity error (cycles/bit)."""

    L: np.ndarray
    c_bar: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        L = _frozen_array(self.L)
        if L.ndim != 2:
            raise ScenarioValidationError("tasks.L must be an I x T array")
        for name, value in (("L", L), ("c_bar", self.c_bar), ("mu", self.mu), ("sigma", self.sigma)):
            try:
                object.__setattr__(self, name, _frozen_array(value, L.shape))
            except ValueError:
                raise ScenarioValidationError(f"tasks.{name} does not match the I x T shape {L.shape}")
        if not np.all(self.L > 0):
            raise ScenarioValidationError("tasks.L must be > 0")
        if not np.all(self.c_bar > 0):
            raise ScenarioValidationError("tasks.c_bar must be > 0")
        if not np.all(self.sigma >= 0):
            raise ScenarioValidationError("tasks.sigma must be >= 0")
        if not np.all(self.c_bar + self.mu > 0):
            raise ScenarioValidationError("tasks.c_bar + tasks.mu must be > 0")

    @property
    def shape(self):
        return self.L.shape

    def __eq__(self, other):
        if not isinstance(other, TaskSpec):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in ("L", "c_bar", "mu", "sigma")
        )


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable world description shared by every optimizer component."""

    gus: np.ndarray  # (I, 2)
    jammer: np.ndarray  # (2,)
    eav_path: np.ndarray  # (T, 2)
    uav_endpoints: np.ndarray  # (M, 2, 2): [w_ini, w_fin]
    tasks: TaskSpec
    params: NetworkParams = field(default_factory=NetworkParams)
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "gus", _frozen_array(self.gus))
        object.__setattr__(self, "jammer", _frozen_array(self.jammer))
        object.__setattr__(self, "eav_path", _frozen_array(self.eav_path))
        object.__setattr__(self, "uav_endpoints", _frozen_array(self.uav_endpoints))
        validate_scenario(self)

    @property
    def I(self) -> int:
        return self.gus.shape[0]

    @property
    def M(self) -> int:
        return self.uav_endpoints.shape[0]

    @property
    def T(self) -> int:
        return self.eav_path.shape[0]

    def with_params(self, **changes) -> "Scenario":
        return replace(self, params=replace(self.params, **changes))

    def with_tasks(self, **changes) -> "Scenario":
        values = {n: getattr(self.tasks, n) for n in ("L", "c_bar", "mu", "sigma")}
        values.update(changes)
        return replace(self, tasks=TaskSpec(**values))

    def deterministic(self) -> "Scenario":
        """Same world with the complexity error removed (Δ = 0)."""
        zeros = np.zeros(self.tasks.shape)
        return self.with_tasks(mu=zeros, sigma=zeros)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            np.array_equal(self.gus, other.gus)
            and np.array_equal(self.jammer, other.jammer)
            and np.array_equal(self.eav_path, other.eav_path)
            and np.array_equal(self.uav_endpoints, other.uav_endpoints)
            and self.tasks == other.tasks
            and self.params == other.params
            and self.seed == other.seed
        )


def validate_scenario(s: Scenario) -> None:
    """Checks every scenario invariant; raises naming the first violated one."""
    p = s.params
    if s.gus.ndim != 2 or s.gus.shape[1] != 2 or s.I < 1:
        raise ScenarioValidationError("gus must be a non-empty list of (x, y) positions")
    if s.jammer.shape != (2,):
        raise ScenarioValidationError("jammer must be one (x, y) position")
    if s.eav_path.ndim != 2 or s.eav_path.shape[1] != 2 or s.T < 1:
        raise ScenarioValidationError("eav_path must be a list of (x, y) positions")
    if s.uav_endpoints.ndim != 3 or s.uav_endpoints.shape[1:] != (2, 2) or s.M < 1:
        raise ScenarioValidationError("uavs must be a non-empty list of (start, end) pairs")
    if s.tasks.shape != (s.I, s.T):
        raise ScenarioValidationError(
            f"tasks are indexed {s.tasks.shape} but the scenario has I={s.I}, T={s.T} "
            "(eav_path must have exactly T entries)"
        )
    if not np.all(p.in_area(s.gus)):
        raise ScenarioValidationError("every GU must lie inside the area bounds")
    if not np.all(p.in_area(s.jammer)):
        raise ScenarioValidationError("the jammer must lie inside the area bounds")
    if not np.all(p.in_area(s.eav_path)):
        raise ScenarioValidationError("the E-UAV path must lie inside the area bounds")
    if not np.all(p.in_area(s.uav_endpoints.reshape(-1, 2))):
        raise ScenarioValidationError("every S-UAV endpoint must lie inside the area bounds")
    reach = (s.T - 1) * p.max_step
    for m in range(s.M):
        gap = float(np.linalg.norm(s.uav_endpoints[m, 1] - s.uav_endpoints[m, 0]))
        if gap > reach * (1.0 + 1e-12) + 1e-9:
            raise ScenarioValidationError(
                f"S-UAV {m} endpoints are unreachable: {gap:.3f} m > (T-1)*v0*tau = {reach:.3f} m"
            )


@dataclass
class Decision:
    """The optimization variables: trajectories, assignment, offload ratios
    and the CVaR auxiliaries (beta, e, q, z, s) of the local (aux1) and
    edge (aux2) chance constraints."""

    w_s: np.ndarray  # (M, T, 2)
    lam: np.ndarray  # (I, M, T) in {0, 1}
    rho: np.ndarray  # (I, T)
    aux1: np.ndarray  # (I, T, 5)
    aux2: np.ndarray  # (I, T, 5)

    def copy(self) -> "Decision":
        return Decision(
            self.w_s.copy(), self.lam.copy(), self.rho.copy(), self.aux1.copy(), self.aux2.copy()
        )

    def assigned(self) -> np.ndarray:
        """(I, T) number of UAVs each GU is connected to."""
        return self.lam.sum(axis=1)

    def serving_uav(self) -> np.ndarray:
        """(I, T) index of the serving UAV, -1 when unassigned."""
        idx = np.argmax(self.lam, axis=1)
        return np.where(self.lam.sum(axis=1) > 0, idx, -1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "w_s": self.w_s.tolist(),
            "lambda": self.lam.astype(int).tolist(),
            "rho": self.rho.tolist(),
            "aux1": self.aux1.tolist(),
            "aux2": self.aux2.tolist(),
        }


def check_decision(s: Scenario, d: Decision, tol: Optional[float] = None) -> List[str]:
    """Returns the list of violated Decision invariants (empty when valid)."""
    tol = DRIVER_CONFIG["decision_tol"] if tol is None else tol
    p = s.params
    problems = []
    if d.w_s.shape != (s.M, s.T, 2):
        return [f"w_s has shape {d.w_s.shape}, expected {(s.M, s.T, 2)}"]
    if d.lam.shape != (s.I, s.M, s.T) or d.rho.shape != (s.I, s.T):
        return ["lambda/rho shapes do not match the scenario"]
    if not np.all((d.lam == 0) | (d.lam == 1)):
        problems.append("lambda must be binary")
    if np.any(d.lam.sum(axis=1) > 1):
        problems.append("a GU is connected to more than one S-UAV in a slot")
    if np.any(d.lam.sum(axis=0) > p.M_max):
        problems.append(f"an S-UAV serves more than M_max={p.M_max} GUs in a slot")
    if np.any(d.rho < -tol) or np.any(d.rho > 1 + tol):
        problems.append("rho must lie in [0, 1]")
    if np.any(d.rho > d.lam.sum(axis=1) + tol):
        problems.append("rho > 0 for a GU without an S-UAV")
    if s.T > 1:
        steps = np.linalg.norm(np.diff(d.w_s, axis=1), axis=2)
        if np.any(steps > p.max_step + max(tol, DRIVER_CONFIG["speed_tol"])):
            problems.append(f"a per-slot move exceeds v0*tau={p.max_step} m")
    if not np.allclose(d.w_s[:, 0], s.uav_endpoints[:, 0], atol=tol, rtol=0):
        problems.append("w_s[m, 1] must equal w_ini")
    if not np.allclose(d.w_s[:, -1], s.uav_endpoints[:, 1], atol=tol, rtol=0):
        problems.append("w_s[m, T] must equal w_fin")
    x, y = d.w_s[..., 0], d.w_s[..., 1]
    if np.any(x < p.X_min - tol) or np.any(x > p.X_max + tol):
        problems.append("an S-UAV leaves [X_min, X_max]")
    if np.any(y < p.Y_min - tol) or np.any(y > p.Y_max + tol):
        problems.append("an S-UAV leaves [Y_min, Y_max]")
    return problems


def straight_line_init(s: Scenario) -> Decision:
    """Trajectories interpolated from w_ini to w_fin in T-1 equal steps,
    nothing assigned, nothing offloaded."""
    if s.T == 1:
        frac = np.zeros(1)
    else:
        frac = np.linspace(0.0, 1.0, s.T)
    start = s.uav_endpoints[:, 0][:, None, :]
    end = s.uav_endpoints[:, 1][:, None, :]
    w_s = start + frac[None, :, None] * (end - start)
    w_s[:, 0] = s.uav_endpoints[:, 0]
    w_s[:, -1] = s.uav_endpoints[:, 1]
    return Decision(
        w_s=w_s,
        lam=np.zeros((s.I, s.M, s.T), dtype=np.int8),
        rho=np.zeros((s.I, s.T)),
        aux1=np.zeros((s.I, s.T, len(AUX_FIELDS))),
        aux2=np.zeros((s.I, s.T, len(AUX_FIELDS))),
    )


def generate_tasks(
    rng: np.random.Generator,
    I: int,
    T: int,
    L_mbits=TASK_DEFAULTS["L_mbits"],
    c_bar=TASK_DEFAULTS["c_bar"],
    mu: float = TASK_DEFAULTS["mu"],
    sigma_ratio: float = TASK_DEFAULTS["sigma_ratio"],
) -> TaskSpec:
    """Draws L and c_bar uniformly from their ranges; sigma = ratio * c_bar."""
    L = rng.uniform(L_mbits[0], L_mbits[1], size=(I, T)) * BITS_PER_MBIT
    c = rng.uniform(c_bar[0], c_bar[1], size=(I, T))
    return TaskSpec(L=L, c_bar=c, mu=np.full((I, T), float(mu)), sigma=sigma_ratio * c)


def _point(value, what: str) -> List[float]:
    try:
        pt = [float(v) for v in value]
    except (TypeError, ValueError):
        raise ScenarioParseError(f"{what} must be an [x, y] pair")
    if len(pt) != 2:
        raise ScenarioParseError(f"{what} must be an [x, y] pair")
    return pt


def _default_eavesdropper(params: NetworkParams, jammer) -> List[float]:
    """Point reflection of the jammer through the area centre."""
    centre = np.array([(params.X_min + params.X_max) / 2, (params.Y_min + params.Y_max) / 2])
    opposite = np.clip(
        2 * centre - np.asarray(jammer),
        [params.X_min, params.Y_min],
        [params.X_max, params.Y_max],
    )
    return opposite.tolist()


def build_scenario(raw: Dict[str, Any]) -> Scenario:
    """Builds a validated Scenario from a parsed document."""
    if not isinstance(raw, dict):
        raise ScenarioParseError("the scenario document must be a JSON object")
    unknown = sorted(set(raw) - set(SECTIONS))
    if unknown:
        raise ScenarioParseError(f"unknown sections: {', '.join(unknown)}")
    for section in ("gus", "uavs", "jammer"):
        if section not in raw:
            raise ScenarioParseError(f"missing section [{section}]")

    params = NetworkParams.from_dict(raw.get("params", {}))
    seed = raw.get("seed")
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        raise ScenarioParseError("seed must be a non-negative integer")
    rng = np.random.default_rng(seed)

    gus_raw = raw["gus"]
    if isinstance(gus_raw, dict):
        count = int(gus_raw.get("count", 0))
        if count < 1:
            raise ScenarioParseError("gus.count must be >= 1")
        gus = np.column_stack(
            [
                rng.uniform(params.X_min, params.X_max, count),
                rng.uniform(params.Y_min, params.Y_max, count),
            ]
        )
    else:
        gus = np.array([_point(g, "gus entry") for g in gus_raw])

    try:
        endpoints = [
            [_point(u["start"], "uav start"), _point(u["end"], "uav end")] for u in raw["uavs"]
        ]
    except (KeyError, TypeError):
        raise ScenarioParseError("uavs entries need 'start' and 'end'")
    jammer = _point(raw["jammer"], "jammer")

    tasks_raw = dict(raw.get("tasks", {}))
    T = int(tasks_raw.get("T", TASK_DEFAULTS["T"]))
    if T < 1:
        raise ScenarioParseError("tasks.T must be >= 1")
    I = gus.shape[0]
    if "L" in tasks_raw:
        tasks = _explicit_tasks(tasks_raw, I, T)
    elif _is_matrix(tasks_raw.get("c_bar")):
        raise ScenarioParseError("explicit c_bar arrays need explicit L arrays")
    else:
        tasks = generate_tasks(
            rng,
            I,
            T,
            L_mbits=tasks_raw.get("L_mbits", TASK_DEFAULTS["L_mbits"]),
            c_bar=tasks_raw.get("c_bar", TASK_DEFAULTS["c_bar"]),
            mu=tasks_raw.get("mu", TASK_DEFAULTS["mu"]),
            sigma_ratio=tasks_raw.get("sigma_ratio", TASK_DEFAULTS["sigma_ratio"]),
        )

    eav_raw = raw.get("eavesdropper")
    if eav_raw is None:
        eav_path = np.tile(_default_eavesdropper(params, jammer), (T, 1))
    elif "path" in eav_raw:
        eav_path = np.array([_point(pt, "eavesdropper path entry") for pt in eav_raw["path"]])
    elif "position" in eav_raw:
        eav_path = np.tile(_point(eav_raw["position"], "eavesdropper position"), (T, 1))
    elif "start" in eav_raw and "end" in eav_raw:
        a = np.array(_point(eav_raw["start"], "eavesdropper start"))
        b = np.array(_point(eav_raw["end"], "eavesdropper end"))
        frac = np.linspace(0.0, 1.0, T) if T > 1 else np.zeros(1)
        eav_path = a + frac[:, None] * (b - a)
    else:
        raise ScenarioParseError("eavesdropper needs 'path', 'position' or 'start'/'end'")

    return Scenario(
        gus=gus,
        jammer=jammer,
        eav_path=eav_path,
        uav_endpoints=np.array(endpoints).reshape(-1, 2, 2),
        tasks=tasks,
        params=params,
        seed=seed,
    )


def _is_matrix(value) -> bool:
    return isinstance(value, list) and len(value) > 0 and isinstance(value[0], list)


def _explicit_tasks(tasks_raw: Dict[str, Any], I: int, T: int) -> TaskSpec:
    if "L" not in tasks_raw or "c_bar" not in tasks_raw:
        raise ScenarioParseError("explicit tasks need both L and c_bar")
    try:
        L = np.array(tasks_raw["L"], dtype=float)
        c = np.array(tasks_raw["c_bar"], dtype=float)
        mu = np.array(tasks_raw.get("mu", TASK_DEFAULTS["mu"]), dtype=float)
        if "sigma" in tasks_raw:
            sigma = np.array(tasks_raw["sigma"], dtype=float)
        else:
            sigma = tasks_raw.get("sigma_ratio", TASK_DEFAULTS["sigma_ratio"]) * c
    except (TypeError, ValueError) as e:
        raise ScenarioParseError(f"task arrays must be numeric: {e}")
    L = np.broadcast_to(L, (I, T)) if L.ndim < 2 else L
    if L.shape != (I, T):
        raise ScenarioValidationError(f"tasks are indexed {L.shape}, expected I x T = {(I, T)}")
    return TaskSpec(L=L, c_bar=c, mu=mu, sigma=sigma)


def load_scenario(config_text: str) -> Scenario:
    """Parses and validates a scenario document."""
    try:
        raw = json.loads(config_text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"malformed scenario document: {e}")
    return build_scenario(raw)


def dump_scenario(s: Scenario) -> str:
    """Fully explicit document; load_scenario(dump_scenario(s)) == s."""
    doc = {
        "params": s.params.to_dict(),
        "gus": s.gus.tolist(),
        "uavs": [
            {"start": s.uav_endpoints[m, 0].tolist(), "end": s.uav_endpoints[m, 1].tolist()}
            for m in range(s.M)
        ],
        "jammer": s.jammer.tolist(),
        "eavesdropper": {"path": s.eav_path.tolist()},
        "tasks": {
            "T": s.T,
            "L": s.tasks.L.tolist(),
            "c_bar": s.tasks.c_bar.tolist(),
            "mu": s.tasks.mu.tolist(),
            "sigma": s.tasks.sigma.tolist(),
        },
        "seed": s.seed,
    }
    return json.dumps(doc, indent=2)


def load_scenario_file(path: str) -> Scenario:
    """Loads a scenario document from disk."""
    if not os.path.isfile(path):
        raise ScenarioParseError(f"scenario file '{path}' does not exist")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    scenario = load_scenario(text)
    logger.info(f"Loaded scenario {path}: I={scenario.I}, M={scenario.M}, T={scenario.T}")
    return scenario


def save_scenario_file(s: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_scenario(s))


def desk_config(seed: Optional[int] = None) -> Dict[str, Any]:
    """Document of the reference desk scenario (I=10, M=3, T=20)."""
    return {
        "params": {},
        "gus": {"count": DESK_SCENARIO["gu_count"]},
        "uavs": [dict(u) for u in DESK_SCENARIO["uavs"]],
        "jammer": list(DESK_SCENARIO["jammer"]),
        "eavesdropper": dict(DESK_SCENARIO["eavesdropper"]),
        "tasks": {"T": TASK_DEFAULTS["T"]},
        "seed": DESK_SCENARIO["seed"] if seed is None else seed,
    }


def desk_scenario(seed: Optional[int] = None) -> Scenario:
    return build_scenario(desk_config(seed))
