"""Non-stationary grid-world experiments.

Drives the baseline Q-Learning agent and the oASP agent through identical
schedules (same wall layouts, same transition probabilities per trial),
records per-episode metrics, aggregates across trials and writes CSV.

Scenario ``walls``: 10x10, probabilities 0.9/0.05, wall ratios
0 -> 10% -> 25% at episodes 0/1000/2000 (fresh layout per phase).
Scenario ``probs``: 10x10, one fixed 25%-wall layout, intended-direction
probabilities 0.5 -> 0.75 -> 0.9 at the same change episodes.

The baseline's table is reset at every change episode; the oASP agent
receives no signal and keeps everything it has learnt.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .agent import BaselineAgent, OaspAgent, run_episode, state_atom
from .asp import render_program
from .gridworld import Cell, GridConfig, Schedule, config_at, dump_ascii, \
    generate_walls, optimal_steps, phase_index
from .metrics import EpisodeRecord, rmsd  # re-exported  # noqa: F401
from .qlearn import LearnParams
from .seeding import TAG_BASELINE_ACT, TAG_BASELINE_ENV, TAG_OASP_ACT, \
    TAG_OASP_ENV, TAG_WALLS, derive_rng

DEFAULT_PARAMS = LearnParams(alpha=0.2, gamma=0.9, epsilon=0.1, max_steps=1000)

CSV_HEADER = "episode,agent,rmsd,return,steps,pairs,ref_steps,ref_return"


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    width: int = 10
    height: int = 10
    episodes: int = 3000
    trials: int = 30
    params: LearnParams = DEFAULT_PARAMS
    wall_ratios: tuple = (0.0, 0.10, 0.25)
    p_intended: tuple = (0.9, 0.9, 0.9)
    changes: tuple = (1000, 2000)
    resample_walls: bool = True

    def __post_init__(self):
        phases = len(self.changes) + 1
        if len(self.wall_ratios) != phases or len(self.p_intended) != phases:
            raise ValueError("need one wall ratio and probability per phase")
        if any(b <= a for a, b in zip((0,) + self.changes, self.changes)):
            raise ValueError("change episodes must be strictly increasing")
        if self.changes and self.episodes <= self.changes[-1]:
            raise ValueError("episodes must exceed the last change episode")
        if self.episodes < 1 or self.trials < 1:
            raise ValueError("episodes and trials must be positive")


def scenario_spec(name, *, episodes=3000, trials=30, params=DEFAULT_PARAMS,
                  width=10, height=10, wall_ratios=None, p_intended=None,
                  changes=(1000, 2000)):
    """Build a ScenarioSpec with the standard defaults for ``walls``/``probs``,
    dropping change episodes the episode budget never reaches."""
    if name == "walls":
        ratios = (0.0, 0.10, 0.25)
        probs = (0.9, 0.9, 0.9)
        resample = True
    elif name == "probs":
        ratios = (0.25, 0.25, 0.25)
        probs = (0.5, 0.75, 0.9)
        resample = False
    else:
        raise ValueError(f"unknown scenario {name!r}")
    if wall_ratios is not None:
        ratios = tuple(wall_ratios)
    if p_intended is not None:
        probs = tuple(p_intended)
    changes = tuple(changes)
    if len(ratios) != len(changes) + 1 or len(probs) != len(changes) + 1:
        raise ValueError("need one wall ratio and probability per phase")
    keep = sum(1 for c in changes if c < episodes)
    return ScenarioSpec(name=name, width=width, height=height,
                        episodes=episodes, trials=trials, params=params,
                        wall_ratios=ratios[:keep + 1],
                        p_intended=probs[:keep + 1],
                        changes=changes[:keep],
                        resample_walls=resample)


@dataclass
class TrialResult:
    trial: int
    records: list  # EpisodeRecord, baseline/oasp interleaved per episode
    ref_steps: tuple
    ref_return: tuple
    changes: tuple
    final_programs: dict = field(default_factory=dict)
    phase_maps: tuple = ()


def build_schedule(spec, base_seed, trial):
    start = Cell(0, 0)
    goal = Cell(spec.width - 1, spec.height - 1)
    starts = (0,) + spec.changes
    phases = []
    walls = None
    for k, (ratio, p) in enumerate(zip(spec.wall_ratios, spec.p_intended)):
        if walls is None or spec.resample_walls:
            rng = derive_rng(base_seed, trial, TAG_WALLS, k)
            walls = generate_walls(spec.width, spec.height, ratio, start,
                                   goal, rng)
        config = GridConfig(spec.width, spec.height, walls, start, goal,
                            p, (1.0 - p) / 2.0)
        phases.append((starts[k], config))
    return Schedule(tuple(phases))


def run_trial(spec, base_seed, trial):
    schedule = build_schedule(spec, base_seed, trial)
    configs = [config for _, config in schedule.phases]
    baseline = BaselineAgent(spec.width, spec.height, spec.params)
    oasp = OaspAgent(spec.params)
    streams = {
        "baseline": (derive_rng(base_seed, trial, TAG_BASELINE_ACT),
                     derive_rng(base_seed, trial, TAG_BASELINE_ENV)),
        "oasp": (derive_rng(base_seed, trial, TAG_OASP_ACT),
                 derive_rng(base_seed, trial, TAG_OASP_ENV)),
    }
    records = []
    for episode in range(spec.episodes):
        config = config_at(schedule, episode)
        if episode in spec.changes:
            baseline.reset()
        for agent in (baseline, oasp):
            rng_act, rng_env = streams[agent.kind]
            records.append(run_episode(agent, config, episode, rng_act,
                                       rng_env))
    ref_steps = tuple(optimal_steps(c) for c in configs)
    ref_return = tuple(100.0 - r for r in ref_steps)
    final_programs = {state_atom(cell).name: render_program(program)
                      for cell, program in sorted(oasp.programs.items())}
    phase_maps = tuple(dump_ascii(c) for c in configs)
    return TrialResult(trial, records, ref_steps, ref_return, spec.changes,
                       final_programs, phase_maps)


def _run_trial_args(args):
    return run_trial(*args)


def run_scenario(spec, base_seed, jobs=1):
    """All trials of a scenario; deterministic regardless of ``jobs``."""
    args = [(spec, base_seed, trial) for trial in range(spec.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_trial_args, args))
    return [run_trial(*a) for a in args]


def aggregate(results):
    """Per-episode arithmetic mean of every metric per agent kind.

    Returns rows ``(episode, agent, rmsd, return, steps, pairs, ref_steps,
    ref_return)`` ordered by episode then agent name.
    """
    if not results:
        return []
    episode_counts = {max(r.episode for r in t.records) for t in results}
    if len(episode_counts) != 1:
        raise ValueError("trials have unequal episode counts")
    episodes = episode_counts.pop() + 1
    changes = results[0].changes
    sums = {}
    for trial in results:
        for rec in trial.records:
            key = (rec.episode, rec.agent_kind)
            acc = sums.setdefault(key, [0.0, 0.0, 0.0, 0.0])
            acc[0] += rec.rmsd
            acc[1] += rec.return_
            acc[2] += rec.steps
            acc[3] += rec.pair_count
    n = len(results)
    rows = []
    for episode in range(episodes):
        phase = sum(1 for c in changes if c <= episode)
        ref_s = sum(t.ref_steps[phase] for t in results) / n
        ref_r = sum(t.ref_return[phase] for t in results) / n
        for agent in ("baseline", "oasp"):
            acc = sums[(episode, agent)]
            rows.append((episode, agent, acc[0] / n, acc[1] / n, acc[2] / n,
                         acc[3] / n, ref_s, ref_r))
    return rows


def _fmt(value):
    if isinstance(value, int):
        return str(value)
    return format(value, ".6g")


def write_csv(rows, path):
    """Write aggregate rows with up to 6 significant digits and LF endings."""
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for episode, agent, *values in rows:
            fh.write(",".join([str(episode), agent]
                              + [_fmt(v) for v in values]) + "\n")


def read_csv(path):
    """Inverse of write_csv, for tests and tooling."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append((int(parts[0]), parts[1]) + tuple(float(p)
                                                      for p in parts[2:]))
    return rows


def phase_of(changes, episode):
    return sum(1 for c in changes if c <= episode)
