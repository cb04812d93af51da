"""Command-line entry point.

Settings come from defaults, then an optional ``key = value`` config file,
then command-line flags (highest precedence). Config keys are the flag names
without leading dashes and with ``_`` for ``-``.

Exit codes: 0 all checks pass, 2 bad configuration, 3 numeric failure,
4 a check failed (outputs are still written).
"""
import argparse
import json
import logging
import os
import sys

from .errors import ConfigInvalid, NumericError
from .export import export_csv, export_svg
from .runner import RunConfig, run

log = logging.getLogger("qdephase")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_FAIL = 0, 2, 3, 4


def _int_list(text):
    return tuple(int(x) for x in _split(text))


def _float_list(text):
    return tuple(float(x) for x in _split(text))


def _split(text):
    items = [x for x in str(text).replace(",", " ").split() if x]
    if not items:
        raise ValueError("empty list")
    return items


# config key -> (converter, help text)
KEYS = {
    "n_spins": (int, "number of ring spins N"),
    "g": (float, "coupling g0 = g1 = g, in units of |J_z|"),
    "jz": (float, "Ising coupling J_z (sets the energy unit)"),
    "hz": (float, "longitudinal field h_z (default -5|J_z|)"),
    "beta": (float, "inverse temperature (default 1/|J_z|)"),
    "t_max": (float, "time horizon in units of 1/|J_z|"),
    "samples": (int, "number of grid points, ends included"),
    "sweep_n": (_int_list, "list of N values, e.g. 3,5,7"),
    "sweep_g": (_float_list, "list of g values, e.g. 0.1,0.3,0.5"),
    "oracle": (str, "joint-unitary cross-check: on, off or auto (N <= 5)"),
    "out_dir": (str, "output directory"),
    "emit": (str, "csv, svg or all"),
    "fig": (str, "2, 3, 4, 5 or all"),
}


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    problems = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigInvalid({"config": f"cannot read {path}: {exc.strerror}"}) from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems[f"line {lineno}"] = f"expected 'key = value', got {line!r}"
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            problems[key or f"line {lineno}"] = "unknown key"
            continue
        values[key] = value
    if problems:
        raise ConfigInvalid(problems)
    return values


def build_config(raw):
    """Convert string settings to a validated ``RunConfig``."""
    kwargs, problems = {}, {}
    for key, text in raw.items():
        conv = KEYS[key][0]
        try:
            kwargs[key] = conv(text)
        except (TypeError, ValueError):
            problems[key] = f"cannot parse {text!r}"
    if problems:
        raise ConfigInvalid(problems)
    return RunConfig(**kwargs)


def make_parser():
    p = argparse.ArgumentParser(
        prog="qdephase",
        description="Exact dephasing dynamics of a qubit on a thermal Ising ring: "
        "coherence, heat, coherent energy and trace-distance backflow.",
    )
    p.add_argument("--config", metavar="FILE", help="key = value settings file")
    for key, (_, help_text) in KEYS.items():
        p.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=help_text)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress")
    return p


def write_outputs(result):
    cfg = result.config
    os.makedirs(cfg.out_dir, exist_ok=True)
    written = []
    if cfg.emit in ("csv", "all"):
        for tr in result.trajectories:
            path = os.path.join(cfg.out_dir, f"traj_N{tr.n_spins}_g{tr.g:g}.csv")
            written.append(export_csv(tr, path))
    if cfg.emit in ("svg", "all"):
        figs = ("2", "3", "4", "5") if cfg.fig == "all" else (str(cfg.fig),)
        trajs = result.trajectories
        if "2" in figs:
            for g in sorted({t.g for t in trajs}):
                group = sorted((t for t in trajs if t.g == g), key=lambda t: t.n_spins)
                tag = "-".join(str(t.n_spins) for t in group)
                written.append(export_svg(group, "fig2", os.path.join(cfg.out_dir, f"fig2_N{tag}_g{g:g}.svg")))
        if "3" in figs:
            for n in sorted({t.n_spins for t in trajs}):
                group = sorted((t for t in trajs if t.n_spins == n), key=lambda t: t.g)
                tag = "-".join(f"{t.g:g}" for t in group)
                written.append(export_svg(group, "fig3", os.path.join(cfg.out_dir, f"fig3_N{n}_g{tag}.svg")))
        for k in ("4", "5"):
            if k in figs:
                for tr in trajs:
                    name = f"fig{k}_N{tr.n_spins}_g{tr.g:g}.svg"
                    written.append(export_svg(tr, "fig" + k, os.path.join(cfg.out_dir, name)))
    summary_path = os.path.join(cfg.out_dir, "summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(result.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(summary_path)
    return written


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        raw = read_config_file(args.config) if args.config else {}
        raw.update({k: v for k, v in vars(args).items() if k in KEYS and v is not None})
        config = build_config(raw)
    except ConfigInvalid as exc:
        for field_name, msg in exc.problems.items():
            print(f"config error: {field_name}: {msg}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run(config)
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    for path in write_outputs(result):
        log.info("wrote %s", path)
    for s in result.summary()["trajectories"]:
        print(
            f"N={s['n_spins']} g={s['g']:g}: min|Gamma|={s['min_abs_gamma']:.6f} "
            f"max<Q>={s['max_q_mean']:.6e} BLP={s['blp']:.6f} "
            f"backflow intervals={s['backflow_intervals']} "
            f"max|Q-C|={s['max_identity_residual']:.2e}"
        )
    for c in result.checks:
        print(c.line())
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
