"""CSV tables and SVG figures for trajectories."""
import os

import numpy as np

from .errors import MissingSeries
from .trajectory import CSV_COLUMNS


def _fmt(x):
    # 17 significant digits round-trips every double
    return format(float(x), ".16e")


def export_csv(traj, path):
    """Write one row per sample; header-only when ``traj`` is empty/None."""
    cols = traj.columns() if traj is not None and len(traj) else None
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        if cols is None:
            return path
        data = np.column_stack([cols[name] for name in CSV_COLUMNS])
        for row in data:
            fh.write(",".join(_fmt(x) for x in row) + "\n")
    return path


def read_csv(path):
    """Parse a file written by :func:`export_csv` into ``{column: array}``."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [list(map(float, line.rstrip("\n").split(","))) for line in fh if line.strip()]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------

FIG_KINDS = ("fig2", "fig3", "fig4", "fig5")
_TIME_LABEL = r"$J_z\,t$"


def _padded(lo, hi, frac=0.05):
    if not (np.isfinite(lo) and np.isfinite(hi)):
        return -1.0, 1.0
    if hi - lo <= 1e-15 * max(1.0, abs(lo), abs(hi)):
        pad = max(abs(lo), 1.0) * 0.05
        return lo - pad, hi + pad
    pad = (hi - lo) * frac
    return lo - pad, hi + pad


def _scaled_time(traj):
    return traj.t * abs(traj.params.j_z)


def _as_list(data):
    if data is None:
        return []
    if isinstance(data, (list, tuple)):
        return [d for d in data if d is not None]
    return [data]


def export_svg(data, kind, path):
    """Render ``kind`` (fig2..fig5) to an SVG file at ``path``.

    fig2/fig3 take a sequence of trajectories (a sweep) and overlay ``|Gamma|``;
    fig4 and fig5 take a single trajectory.
    """
    import matplotlib

    matplotlib.use("Agg", force=False)
    from matplotlib.figure import Figure

    kind = {"2": "fig2", "3": "fig3", "4": "fig4", "5": "fig5"}.get(str(kind), str(kind))
    if kind not in FIG_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}")
    trajs = _as_list(data)
    if not trajs or any(len(t) == 0 for t in trajs):
        raise MissingSeries(f"{kind} needs at least one non-empty trajectory")
    if kind in ("fig4", "fig5") and len(trajs) != 1:
        raise ValueError(f"{kind} plots a single trajectory")

    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.add_subplot()
    ax.set_xlabel(_TIME_LABEL)

    if kind in ("fig2", "fig3"):
        lo, hi = np.inf, -np.inf
        for tr in trajs:
            label = f"N = {tr.n_spins}" if kind == "fig2" else f"g = {tr.g:g}|J_z|"
            ax.plot(_scaled_time(tr), tr.abs_gamma, label=label, lw=1.2)
            lo, hi = min(lo, tr.abs_gamma.min()), max(hi, tr.abs_gamma.max())
        ax.set_ylim(*_padded(lo, hi))
        ax.set_ylabel(r"$|\Gamma(t)|$")
        ax.legend(loc="lower right", frameon=False)
    elif kind == "fig4":
        tr = trajs[0]
        ax.plot(_scaled_time(tr), tr.abs_gamma, "-", color="C0", lw=1.2)
        ax.set_ylim(*_padded(tr.abs_gamma.min(), tr.abs_gamma.max()))
        ax.set_ylabel(r"$|\Gamma(t)|$", color="C0")
        ax2 = ax.twinx()
        ax2.plot(_scaled_time(tr), tr.sigma, "--", color="C3", lw=1.2)
        ax2.axhline(0.0, color="0.6", lw=0.6)
        ax2.set_ylim(*_padded(tr.sigma.min(), tr.sigma.max()))
        ax2.set_ylabel(r"$\sigma_S(t)$", color="C3")
    else:
        tr = trajs[0]
        ax.plot(_scaled_time(tr), tr.q_mean, "-", color="C3", lw=1.2, label=r"$\langle Q\rangle$")
        ax.set_ylim(*_padded(tr.q_mean.min(), tr.q_mean.max()))
        ax.set_ylabel(r"$\langle Q\rangle$", color="C3")
        ax2 = ax.twinx()
        ax2.plot(_scaled_time(tr), tr.abs_gamma, "--", color="C0", lw=1.2, label=r"$|\Gamma(t)|$")
        ax2.set_ylim(*_padded(tr.abs_gamma.min(), tr.abs_gamma.max()))
        ax2.set_ylabel(r"$|\Gamma(t)|$", color="C0")

    t_all = np.concatenate([_scaled_time(t) for t in trajs])
    ax.set_xlim(*_padded(t_all.min(), t_all.max(), frac=0.0))
    if kind in ("fig4", "fig5"):
        tr = trajs[0]
        ax.set_title(f"N = {tr.n_spins}, g = {tr.g:g}|J_z|")
    fig.tight_layout()

    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "qdephase", "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path
