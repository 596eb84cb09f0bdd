"""Command-line entry point.

``oaspmdp --scenario walls`` runs the wall-change scenario with the standard
hyperparameters; every default can be overridden by flags or a ``key = value``
config file (flags win).  Outputs land in ``<out>/<scenario>/``: the metric
curves CSV, the final oASP program dump of trial 0 and one ASCII map per
phase.
"""

import argparse
import os
import sys
from dataclasses import dataclass

from .experiment import aggregate, run_scenario, scenario_spec, write_csv
from .qlearn import LearnParams

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    episodes: int = 3000
    trials: int = 30
    seed: int = 0
    alpha: float = 0.2
    gamma: float = 0.9
    epsilon: float = 0.1
    max_steps: int = 1000
    out: str = "out"
    width: int = 10
    height: int = 10
    wall_ratios: tuple = None
    probs: tuple = None
    changes: tuple = (1000, 2000)
    jobs: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _int_list(text):
    return tuple(int(p) for p in text.split(","))


def _float_list(text):
    return tuple(float(p) for p in text.split(","))


def _grid(text):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ConfigError(f"malformed grid size {text!r}, expected WxH")


def _build_parser():
    parser = _Parser(prog="oaspmdp", add_help=True,
                     description="Run the non-stationary grid-world "
                                 "experiments.")
    parser.add_argument("--scenario", choices=("walls", "probs"))
    parser.add_argument("--episodes", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--max-steps", type=int, dest="max_steps")
    parser.add_argument("--out")
    parser.add_argument("--grid", type=_grid, metavar="WxH")
    parser.add_argument("--wall-ratios", type=_float_list, dest="wall_ratios",
                        metavar="r0,r1,r2")
    parser.add_argument("--probs", type=_float_list, metavar="p0,p1,p2")
    parser.add_argument("--changes", type=_int_list, metavar="e1,e2")
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--config", dest="config_path", metavar="PATH")
    return parser


_FILE_PARSERS = {
    "scenario": str, "episodes": int, "trials": int, "seed": int,
    "alpha": float, "gamma": float, "epsilon": float, "max_steps": int,
    "out": str, "grid": _grid, "wall_ratios": _float_list,
    "probs": _float_list, "changes": _int_list, "jobs": int,
}


def _read_config_file(path):
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FILE_PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _FILE_PARSERS[key](value)
        except (ValueError, ConfigError):
            raise ConfigError(f"{path}:{lineno}: malformed value for {key}")
    return values


def parse_args(argv):
    """Resolve flags over config-file values over built-in defaults."""
    namespace = _build_parser().parse_args(argv)
    values = {}
    if namespace.config_path:
        values.update(_read_config_file(namespace.config_path))
    for key in _FILE_PARSERS:
        flag_value = getattr(namespace, key, None)
        if flag_value is not None:
            values[key] = flag_value
    if "grid" in values:
        values["width"], values["height"] = values.pop("grid")
    if "out" not in values:
        values["out"] = os.environ.get("OASPMDP_OUT", "out")
    if "scenario" not in values:
        raise ConfigError("--scenario is required (walls or probs)")
    if values["scenario"] not in ("walls", "probs"):
        raise ConfigError(f"unknown scenario {values['scenario']!r}")
    config = RunConfig(**values)
    _validate(config)
    return config


def _validate(config):
    try:
        LearnParams(config.alpha, config.gamma, config.epsilon,
                    config.max_steps)
    except ValueError as exc:
        raise ConfigError(str(exc))
    if config.episodes < 1:
        raise ConfigError("episodes must be positive")
    if config.trials < 1:
        raise ConfigError("trials must be positive")
    if config.jobs < 1:
        raise ConfigError("jobs must be positive")
    if config.width < 2 or config.height < 2:
        raise ConfigError("grid must be at least 2x2")
    for ratio in config.wall_ratios or ():
        if not 0.0 <= ratio < 1.0:
            raise ConfigError("wall ratios must lie in [0, 1)")
    for p in config.probs or ():
        if not 0.0 < p <= 1.0:
            raise ConfigError("probabilities must lie in (0, 1]")


def main(config):
    """Run the configured scenario and write its outputs; returns 0."""
    params = LearnParams(config.alpha, config.gamma, config.epsilon,
                         config.max_steps)
    spec = scenario_spec(config.scenario, episodes=config.episodes,
                         trials=config.trials, params=params,
                         width=config.width, height=config.height,
                         wall_ratios=config.wall_ratios,
                         p_intended=config.probs, changes=config.changes)
    results = run_scenario(spec, config.seed, jobs=config.jobs)
    rows = aggregate(results)

    out_dir = os.path.join(config.out, config.scenario)
    os.makedirs(out_dir, exist_ok=True)
    write_csv(rows, os.path.join(out_dir, "curves.csv"))
    program_dir = os.path.join(out_dir, "programs")
    os.makedirs(program_dir, exist_ok=True)
    for name, text in results[0].final_programs.items():
        with open(os.path.join(program_dir, f"{name}.lp"), "w",
                  newline="\n") as fh:
            fh.write(text)
    for k, ascii_map in enumerate(results[0].phase_maps):
        with open(os.path.join(out_dir, f"grid_phase{k}.txt"), "w",
                  newline="\n") as fh:
            fh.write(ascii_map)

    window = min(100, spec.episodes)
    first = spec.episodes - window
    for agent in ("baseline", "oasp"):
        tail = [row for row in rows if row[0] >= first and row[1] == agent]
        steps = sum(row[4] for row in tail) / len(tail)
        ret = sum(row[3] for row in tail) / len(tail)
        print(f"{agent}: last {window} episodes mean steps = {steps:.2f}, "
              f"mean return = {ret:.2f}")
    return EXIT_OK


def cli_main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("usage: oaspmdp --scenario {walls|probs} [options]; "
              "see --help", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        return main(config)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def console_entry():
    raise SystemExit(cli_main())
