"""Fixed-step RK4 simulation of the switched feedback-linearized quadrotor.

Each step: the supervisor (or a fixed policy) picks the active law, that
law computes the virtual input once, and the input is held constant over
one classical Runge-Kutta step.  Runs end at ``t_final`` or earlier when the
decoupling matrix is singular or the state diverges.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from .control import GainSet, ReferenceSet, fl_law, tracking_error
from .decoupling import COND_MAX, DET_REL_MIN, Mode
from .errors import ConfigError, DomainError, SingularMatrix
from .model import (EPS_PHI, EPS_THETA, IDX, STATE_FIELDS, QuadParams, State14, as_input_array,
                    as_state_array, state_derivative)
from .supervisor import ZoneSpec, step_mode, classify


class Termination(Enum):
    CONVERGED = "CONVERGED"
    COMPLETED = "COMPLETED"
    SINGULAR = "SINGULAR"
    DIVERGED = "DIVERGED"


@dataclass(frozen=True)
class FixedMode:
    mode: Mode


@dataclass(frozen=True)
class Switching:
    zone: ZoneSpec = field(default_factory=ZoneSpec)


def rk4_step(s, u, p: QuadParams, dt: float, eps_theta: float = EPS_THETA):
    """One classical RK4 step with the input held constant over the step."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    x = as_state_array(s)
    uu = as_input_array(u)
    k1 = state_derivative(x, uu, p, eps_theta)
    k2 = state_derivative(x + 0.5 * dt * k1, uu, p, eps_theta)
    k3 = state_derivative(x + 0.5 * dt * k2, uu, p, eps_theta)
    k4 = state_derivative(x + dt * k3, uu, p, eps_theta)
    out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return State14.from_array(out) if isinstance(s, State14) else out


@dataclass(frozen=True)
class Scenario:
    params: QuadParams
    initial: State14
    policy: FixedMode | Switching
    refs: ReferenceSet
    gains: GainSet
    dt: float = 1e-3
    t_final: float = 10.0
    log_every: int = 1
    converge_tol: float = 1e-3
    diverge_bound: float = 1e6
    cond_max: float = COND_MAX
    det_rel_min: float = DET_REL_MIN
    description: str = ""

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ConfigError("dt must be positive")
        if not self.t_final >= self.dt:
            raise ConfigError("t_final must be at least dt")
        if int(self.log_every) < 1:
            raise ConfigError("log_every must be >= 1")
        if self.initial.zeta == 0:
            raise ConfigError("initial zeta must be nonzero: both laws need thrust to invert")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        try:
            return cls._from_dict(data)
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid scenario: {exc}") from exc

    @classmethod
    def _from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a JSON object")
        params = QuadParams(**data.get("params", {}))
        init = data["initial_state"]
        if len(init) != 14:
            raise ConfigError("initial_state must have 14 entries")
        initial = State14.from_array(init)

        zone = ZoneSpec(**data.get("zone", {}))
        pol = data.get("policy", "switching")
        if isinstance(pol, str):
            pol = {"type": pol}
        if pol.get("type") == "switching":
            policy = Switching(zone)
        elif pol.get("type") == "fixed":
            policy = FixedMode(Mode.coerce(pol["mode"]))
        else:
            raise ConfigError(f"unknown policy {pol!r}")

        r = data.get("refs", {})
        refs = ReferenceSet(tuple(r.get("yaw_position", (0, 0, 0, 0))),
                            tuple(r.get("attitude_altitude", (0, 0, 0, 0))))
        if "gains" in data and "poles" in data:
            raise ConfigError("give either gains or poles, not both")
        if "gains" in data:
            gains = GainSet(dict(data["gains"]))
        else:
            poles = data.get("poles", {})
            gains = GainSet.from_poles(poles.get("deg4", (-2.0,) * 4), poles.get("deg2", (-2.0,) * 2))

        known = {"params", "initial_state", "policy", "zone", "refs", "poles", "gains",
                 "dt", "t_final", "log_every", "converge_tol", "diverge_bound", "cond_max",
                 "det_rel_min", "description"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown scenario keys: {sorted(extra)}")
        opts = {k: data[k] for k in ("dt", "t_final", "log_every", "converge_tol",
                                     "diverge_bound", "cond_max", "det_rel_min", "description")
                if k in data}
        return cls(params, initial, policy, refs, gains, **opts)

    @classmethod
    def from_json(cls, path) -> "Scenario":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"scenario file is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        if isinstance(self.policy, Switching):
            policy = {"type": "switching"}
            zone = self.policy.zone.to_dict()
        else:
            policy = {"type": "fixed", "mode": self.policy.mode.value}
            zone = ZoneSpec().to_dict()
        return {
            "description": self.description,
            "params": self.params.to_dict(),
            "initial_state": self.initial.to_array().tolist(),
            "policy": policy,
            "zone": zone,
            "refs": {"yaw_position": list(self.refs.yaw_position),
                     "attitude_altitude": list(self.refs.attitude_altitude)},
            "gains": {k: list(v) for k, v in self.gains.chains.items()},
            "dt": self.dt,
            "t_final": self.t_final,
            "log_every": self.log_every,
            "converge_tol": self.converge_tol,
            "diverge_bound": self.diverge_bound,
            "cond_max": self.cond_max,
            "det_rel_min": self.det_rel_min,
        }


def bundled_scenario(name: str) -> Scenario:
    """Load one of the scenario files shipped with the package, e.g. ``"experiment1"``."""
    fname = name if name.endswith(".json") else f"{name}.json"
    ref = resources.files("singzone") / "scenarios" / fname
    if not ref.is_file():
        raise ConfigError(f"no bundled scenario named {name!r}")
    with resources.as_file(ref) as path:
        return Scenario.from_json(path)


@dataclass
class TimeSeries:
    t: np.ndarray
    states: np.ndarray
    modes: list
    inputs: np.ndarray
    det: np.ndarray
    cond: np.ndarray
    events: list
    termination: Termination

    @property
    def switch_count(self) -> int:
        return sum(1 for e in self.events if e[1] == "switch")

    @property
    def final_state(self) -> State14:
        return State14.from_array(self.states[-1])

    @property
    def final_mode(self) -> Mode:
        return self.modes[-1]

    def column(self, name: str) -> np.ndarray:
        return self.states[:, IDX[name]]

    def summary(self) -> str:
        fs = self.states[-1]
        return (f"termination={self.termination.value} switches={self.switch_count} "
                f"final_mode={self.final_mode.value} t_end={self.t[-1]:.6g} "
                f"phi={fs[IDX['phi']]:.6g} theta={fs[IDX['theta']]:.6g}")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", *STATE_FIELDS, "mode", "u1b", "u2b", "u3b", "u4b", "det"])
            for t, x, m, u, d in zip(self.t, self.states, self.modes, self.inputs, self.det):
                w.writerow([_fmt(t), *(_fmt(v) for v in x), m.value, *(_fmt(v) for v in u), _fmt(d)])

    def events_to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "kind", "detail"])
            for t, kind, detail in self.events:
                w.writerow([_fmt(t), kind, detail])


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _in_domain(x) -> bool:
    return (abs(x[IDX["theta"]]) < np.pi / 2 - EPS_THETA
            and abs(x[IDX["phi"]]) < np.pi / 2 - EPS_PHI)


def run_scenario(sc: Scenario) -> TimeSeries:
    p = sc.params
    x = sc.initial.to_array()
    if isinstance(sc.policy, FixedMode):
        mode = sc.policy.mode
    else:
        mode = classify(x[IDX["theta"]], x[IDX["phi"]], sc.policy.zone, Mode.YAW_POSITION)

    ts, xs, modes, us, dets, conds = [], [], [], [], [], []
    events = [(0.0, "start", mode.value)]

    def log(t, u, det, cond):
        ts.append(t)
        xs.append(x.copy())
        modes.append(mode)
        us.append(u)
        dets.append(det)
        conds.append(cond)

    cause, detail = None, ""
    n = sc.n_steps
    for k in range(n + 1):
        t = k * sc.dt
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > sc.diverge_bound:
            cause, detail = Termination.DIVERGED, "state magnitude bound exceeded"
        elif not _in_domain(x):
            cause, detail = Termination.DIVERGED, "attitude left the Euler domain"
        if cause is not None:
            log(t, np.full(4, np.nan), np.nan, np.nan)
            break

        if isinstance(sc.policy, Switching):
            new, switched = step_mode(x, sc.policy.zone, mode)
            if switched:
                events.append((t, "switch", f"{mode.value}->{new.value}"))
                mode = new

        try:
            u, dsys = fl_law(x, p, sc.refs, sc.gains, mode, sc.cond_max, sc.det_rel_min,
                             return_system=True)
        except SingularMatrix as exc:
            cause, detail = Termination.SINGULAR, str(exc)
            log(t, np.full(4, np.nan), exc.det, exc.cond)
            break
        u = u.to_array()

        last = k == n
        if last or k % sc.log_every == 0:
            log(t, u, dsys.det, dsys.cond)
        if last:
            err = tracking_error(x, p, sc.refs, mode)
            converged = float(np.max(np.abs(err))) <= sc.converge_tol
            cause = Termination.CONVERGED if converged else Termination.COMPLETED
            detail = f"max tracking error {np.max(np.abs(err)):.3g}"
            break
        try:
            x = rk4_step(x, u, p, sc.dt)
        except DomainError:
            t_next = (k + 1) * sc.dt
            cause, detail = Termination.DIVERGED, "attitude left the Euler domain"
            events.append((t_next, "termination", f"{cause.value}: {detail}"))
            return _series(ts, xs, modes, us, dets, conds, events, cause)

    events.append((ts[-1], "termination", f"{cause.value}: {detail}"))
    return _series(ts, xs, modes, us, dets, conds, events, cause)


def _series(ts, xs, modes, us, dets, conds, events, cause) -> TimeSeries:
    return TimeSeries(np.array(ts), np.array(xs), modes, np.array(us), np.array(dets),
                      np.array(conds), events, cause)


def scenario_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (for documentation and the CLI)."""
    fname = name if name.endswith(".json") else f"{name}.json"
    return Path(str(resources.files("singzone") / "scenarios" / fname))
