"""Run configuration, sweep execution and the summary report."""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigInvalid
from .model import ModelParams
from .trajectory import compute_trajectory, heat_coherence_alignment, time_grid
from .witness import backflow_intervals

log = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
SYSTEM_ENERGY_TOL = 1e-10
TRACE_DISTANCE_TOL = 1e-10
BLOCK_TOL = 1e-8
REDUCED_STATE_TOL = 1e-10
AUTO_ORACLE_MAX_N = 5


@dataclass
class RunConfig:
    n_spins: int = 7
    g: float = 0.5
    jz: float = 1.0
    hz: float = None  # default -5|jz|
    beta: float = None  # default 1/|jz|
    t_max: float = 20.0
    samples: int = 2001
    sweep_n: tuple = None
    sweep_g: tuple = None
    oracle: str = "auto"
    out_dir: str = "results"
    emit: str = "all"
    fig: str = "all"

    def __post_init__(self):
        if self.hz is None:
            self.hz = -5.0 * abs(self.jz)
        if self.beta is None and self.jz != 0:
            self.beta = 1.0 / abs(self.jz)
        self.validate()

    def validate(self):
        bad = {}
        if not isinstance(self.n_spins, int) or self.n_spins < 1:
            bad["n_spins"] = "must be an integer >= 1"
        for name in ("g", "jz", "hz", "t_max"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                bad[name] = "must be a finite number"
        if self.beta is None:
            bad["beta"] = "required when jz = 0"
        elif not isinstance(self.beta, (int, float)) or not (self.beta > 0 and math.isfinite(self.beta)):
            bad["beta"] = "must be a finite number > 0"
        if "t_max" not in bad and not self.t_max > 0:
            bad["t_max"] = "must be > 0"
        if not isinstance(self.samples, int) or self.samples < 3:
            bad["samples"] = "must be an integer >= 3"
        if self.sweep_n is not None:
            if len(self.sweep_n) == 0:
                bad["sweep_n"] = "must not be empty"
            elif any(not isinstance(n, int) or n < 1 for n in self.sweep_n):
                bad["sweep_n"] = "entries must be integers >= 1"
        if self.sweep_g is not None:
            if len(self.sweep_g) == 0:
                bad["sweep_g"] = "must not be empty"
            elif any(not math.isfinite(g) for g in self.sweep_g):
                bad["sweep_g"] = "entries must be finite"
        if self.oracle not in ("on", "off", "auto"):
            bad["oracle"] = "must be one of on, off, auto"
        if self.emit not in ("csv", "svg", "all"):
            bad["emit"] = "must be one of csv, svg, all"
        if str(self.fig) not in ("2", "3", "4", "5", "all"):
            bad["fig"] = "must be one of 2, 3, 4, 5, all"
        if bad:
            raise ConfigInvalid(bad)

    @property
    def n_values(self):
        return tuple(self.sweep_n) if self.sweep_n else (self.n_spins,)

    @property
    def g_values(self):
        return tuple(self.sweep_g) if self.sweep_g else (self.g,)

    def model(self, n_spins=None, g=None):
        n = self.n_spins if n_spins is None else n_spins
        g = self.g if g is None else g
        return ModelParams(n_spins=n, j_z=self.jz, h_z=self.hz, g0=g, g1=g, beta=self.beta)

    def oracle_for(self, n_spins):
        if self.oracle == "auto":
            return n_spins <= AUTO_ORACLE_MAX_N
        return self.oracle == "on"

    def times(self):
        return time_grid(self.t_max, self.samples)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _scale(traj):
    return max(1.0, float(np.abs(traj.q_mean).max()))


def trajectory_checks(traj):
    """Pass/fail assertions that apply to one trajectory."""
    tag = f"N={traj.n_spins} g={traj.g:g}"
    tol = IDENTITY_TOL * _scale(traj)
    res = float(traj.identity_residual.max())
    wq = float(np.abs(traj.w_mean - traj.q_mean).max())
    dus = float(np.abs(traj.u_s_delta).max())
    dut = float(np.abs(traj.u_total_delta).max())
    dd = float(np.abs(traj.trace_distance - traj.abs_gamma).max())
    ag = traj.abs_gamma
    inner = traj.backflow[1:-1]
    rising = (ag[2:] - ag[:-2]) > 0
    sign_ok = bool(np.all(rising[inner])) if inner.size else True
    align = heat_coherence_alignment(traj)
    checks = [
        Check(f"heat = coherent energy ({tag})", res < tol, f"max |Q - C| = {res:.3e} < {tol:.1e}"),
        Check(f"first law W = Q ({tag})", wq < tol, f"max |W - Q| = {wq:.3e} < {tol:.1e}"),
        Check(f"system energy conserved ({tag})", dus < SYSTEM_ENERGY_TOL, f"max |dU_S| = {dus:.3e}"),
        Check(
            f"total energy conserved ({tag})",
            dut < IDENTITY_TOL * traj.h_total_scale,
            f"max |dU_SE| = {dut:.3e} < {IDENTITY_TOL * traj.h_total_scale:.1e}",
        ),
        Check(f"trace distance = |Gamma| ({tag})", dd < TRACE_DISTANCE_TOL, f"max dev = {dd:.3e}"),
        Check(f"backflow <=> rising coherence ({tag})", sign_ok,
              f"{int(inner.sum())} interior backflow samples"),
        Check(
            f"heat maxima at coherence minima ({tag})", align.ok,
            f"{len(align.pairs)} heat maxima, worst gap "
            f"{max((p[2] for p in align.pairs), default=0)} steps, {len(align.orphans)} unmatched minima",
        ),
    ]
    if traj.oracle:
        blk = float(traj.oracle["block_unitary"].max())
        red = float(max(traj.oracle["reduced_system"].max(), traj.oracle["reduced_env"].max()))
        checks.append(Check(f"block = full propagator ({tag})", blk < BLOCK_TOL, f"max dev = {blk:.3e}"))
        checks.append(Check(f"reduced states agree ({tag})", red < REDUCED_STATE_TOL, f"max dev = {red:.3e}"))
    return checks


def sweep_checks(trajs):
    """min_t |Gamma| must not increase with N (at fixed g) nor with g (fixed N)."""
    by_g, by_n = {}, {}
    for tr in trajs:
        by_g.setdefault(tr.g, []).append(tr)
        by_n.setdefault(tr.n_spins, []).append(tr)
    checks = []
    for g, group in sorted(by_g.items()):
        if len(group) > 1:
            group = sorted(group, key=lambda t: t.n_spins)
            mins = [float(t.abs_gamma.min()) for t in group]
            ok = all(b <= a for a, b in zip(mins, mins[1:]))
            desc = ", ".join(f"N={t.n_spins}: {m:.6f}" for t, m in zip(group, mins))
            checks.append(Check(f"min |Gamma| non-increasing in N (g={g:g})", ok, desc))
    for n, group in sorted(by_n.items()):
        if len(group) > 1:
            group = sorted(group, key=lambda t: t.g)
            mins = [float(t.abs_gamma.min()) for t in group]
            ok = all(b <= a for a, b in zip(mins, mins[1:]))
            desc = ", ".join(f"g={t.g:g}: {m:.6f}" for t, m in zip(group, mins))
            checks.append(Check(f"min |Gamma| non-increasing in g (N={n})", ok, desc))
    return checks


def trajectory_summary(traj):
    align = heat_coherence_alignment(traj)
    return {
        "n_spins": traj.n_spins,
        "g": traj.g,
        "samples": len(traj),
        "min_abs_gamma": float(traj.abs_gamma.min()),
        "max_q_mean": float(traj.q_mean.max()),
        "max_identity_residual": float(traj.identity_residual.max()),
        "blp": traj.blp,
        "backflow_intervals": len(backflow_intervals(traj.backflow)),
        "h_i_final": float(traj.h_i_final[-1]),
        "heat_max_vs_coherence_min": [
            {"t_heat_max": a, "t_coherence_extremum": b, "gap_steps": gap, "is_minimum": m}
            for a, b, gap, m in align.pairs
        ],
    }


@dataclass
class RunResult:
    config: RunConfig
    trajectories: list
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def summary(self):
        return {
            "trajectories": [trajectory_summary(t) for t in self.trajectories],
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "passed": self.passed,
        }


def run(config):
    """One trajectory per (N, g) pair of the configured sweep, plus checks."""
    trajs = []
    times = config.times()
    for n in config.n_values:
        for g in config.g_values:
            log.info("evolving N=%d g=%g (%d samples)", n, g, times.size)
            trajs.append(compute_trajectory(config.model(n, g), times, oracle=config.oracle_for(n)))
    checks = []
    for tr in trajs:
        checks.extend(trajectory_checks(tr))
    checks.extend(sweep_checks(trajs))
    return RunResult(config, trajs, checks)
