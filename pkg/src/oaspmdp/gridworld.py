"""Non-deterministic, non-stationary grid world.

Coordinates have their origin at the lower-left corner; ``Up`` increases y.
Actions succeed with probability ``p_intended`` and slip to each orthogonal
direction with probability ``p_orthogonal``.  Moving into a wall or off the
grid leaves the agent where it is.
"""

import math
from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple


class Cell(NamedTuple):
    x: int
    y: int


class Action(IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3

    @property
    def label(self):
        return self.name.lower()


ACTIONS = (Action.UP, Action.DOWN, Action.LEFT, Action.RIGHT)

_DELTA = {
    Action.UP: (0, 1),
    Action.DOWN: (0, -1),
    Action.LEFT: (-1, 0),
    Action.RIGHT: (1, 0),
}

# the two slip directions for each intended direction, in fixed order
_ORTHOGONAL = {
    Action.UP: (Action.LEFT, Action.RIGHT),
    Action.DOWN: (Action.LEFT, Action.RIGHT),
    Action.LEFT: (Action.UP, Action.DOWN),
    Action.RIGHT: (Action.UP, Action.DOWN),
}

STEP_REWARD = -1.0
GOAL_REWARD = 100.0


class GenerationError(Exception):
    """Wall generation could not produce a solvable layout."""


@dataclass(frozen=True)
class GridConfig:
    width: int
    height: int
    walls: frozenset
    start: Cell
    goal: Cell
    p_intended: float
    p_orthogonal: float

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if abs(self.p_intended + 2 * self.p_orthogonal - 1.0) > 1e-12:
            raise ValueError("p_intended + 2 * p_orthogonal must equal 1")
        if not (0.0 <= self.p_intended <= 1.0 and 0.0 <= self.p_orthogonal <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        for cell in (self.start, self.goal):
            if not self.in_bounds(cell):
                raise ValueError(f"cell {cell} outside the grid")
        if self.start in self.walls or self.goal in self.walls:
            raise ValueError("start and goal cells cannot be walls")

    def in_bounds(self, cell):
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height


class StepOutcome(NamedTuple):
    next: Cell
    reward: float
    terminal: bool


def make_config(width, height, walls, p_intended, start=None, goal=None):
    """Standard layout: start lower-left, goal upper-right."""
    if start is None:
        start = Cell(0, 0)
    if goal is None:
        goal = Cell(width - 1, height - 1)
    return GridConfig(width, height, frozenset(walls), start, goal,
                      p_intended, (1.0 - p_intended) / 2.0)


def step(config, s, a, rng):
    """Execute action ``a`` from cell ``s``; returns the realized outcome.

    Entering the goal from any other cell is terminal and pays the goal
    bonus on top of the step cost.  Steps taken from the goal itself (the
    episode's final bookkeeping action) pay the plain step cost.
    """
    if s in config.walls:
        raise ValueError(f"cannot step from wall cell {s}")
    r = rng.random()
    if r < config.p_intended:
        direction = a
    elif r < config.p_intended + config.p_orthogonal:
        direction = _ORTHOGONAL[a][0]
    else:
        direction = _ORTHOGONAL[a][1]
    dx, dy = _DELTA[direction]
    dest = Cell(s[0] + dx, s[1] + dy)
    if not config.in_bounds(dest) or dest in config.walls:
        dest = s
    terminal = dest == config.goal and s != config.goal
    reward = STEP_REWARD + (GOAL_REWARD if terminal else 0.0)
    return StepOutcome(dest, reward, terminal)


def _neighbors(config, cell):
    for dx, dy in _DELTA.values():
        n = Cell(cell[0] + dx, cell[1] + dy)
        if config.in_bounds(n) and n not in config.walls:
            yield n


def reachable_cells(config):
    """Cells the agent can occupy: breadth-first closure from the start over
    non-wall 4-neighbors.  The goal is absorbing (episodes end there), so the
    search never expands through it; cells lying behind the goal only are
    unreachable."""
    seen = {config.start}
    frontier = deque([config.start])
    while frontier:
        cell = frontier.popleft()
        if cell == config.goal:
            continue
        for n in _neighbors(config, cell):
            if n not in seen:
                seen.add(n)
                frontier.append(n)
    return seen


def optimal_steps(config):
    """Shortest path length start -> goal by breadth-first search."""
    if config.start == config.goal:
        return 0
    dist = {config.start: 0}
    frontier = deque([config.start])
    while frontier:
        cell = frontier.popleft()
        for n in _neighbors(config, cell):
            if n not in dist:
                dist[n] = dist[cell] + 1
                if n == config.goal:
                    return dist[n]
                frontier.append(n)
    raise GenerationError("goal unreachable from start")


def _is_reachable(width, height, walls, start, goal):
    probe = GridConfig(width, height, frozenset(walls), start, goal, 1.0, 0.0)
    return goal in reachable_cells(probe)


def generate_walls(width, height, ratio, start, goal, rng, max_tries=10000):
    """Sample ``floor(ratio * width * height)`` wall cells uniformly, avoiding
    start/goal, rejecting layouts with an unreachable goal."""
    if not 0.0 <= ratio < 1.0:
        raise ValueError("wall ratio must lie in [0, 1)")
    count = math.floor(ratio * width * height)
    candidates = [Cell(x, y) for y in range(height) for x in range(width)
                  if Cell(x, y) not in (start, goal)]
    if count > len(candidates):
        raise GenerationError("wall ratio leaves no room for start and goal")
    for _ in range(max_tries):
        walls = frozenset(rng.sample(candidates, count))
        if _is_reachable(width, height, walls, start, goal):
            return walls
    raise GenerationError(f"no solvable layout found in {max_tries} tries")


@dataclass(frozen=True)
class Schedule:
    phases: tuple  # ordered (start_episode, GridConfig) pairs

    def __post_init__(self):
        if not self.phases:
            raise ValueError("schedule needs at least one phase")
        starts = [start for start, _ in self.phases]
        if starts[0] != 0:
            raise ValueError("first phase must start at episode 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("phase start episodes must strictly increase")


def config_at(schedule, episode):
    """The config of the latest phase whose start episode is <= episode."""
    if episode < 0:
        raise ValueError("episode must be non-negative")
    current = schedule.phases[0][1]
    for start, config in schedule.phases:
        if start > episode:
            break
        current = config
    return current


def phase_index(schedule, episode):
    index = 0
    for k, (start, _) in enumerate(schedule.phases):
        if start > episode:
            break
        index = k
    return index


# ---------------------------------------------------------------------------
# ASCII maps (top row first)

def dump_ascii(config):
    rows = []
    for y in range(config.height - 1, -1, -1):
        row = []
        for x in range(config.width):
            cell = Cell(x, y)
            if cell == config.start:
                row.append("S")
            elif cell == config.goal:
                row.append("G")
            elif cell in config.walls:
                row.append("W")
            else:
                row.append(".")
        rows.append("".join(row))
    return "\n".join(rows) + "\n"


def load_ascii(text, p_intended):
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise ValueError("empty map")
    height = len(lines)
    width = len(lines[0])
    if any(len(line) != width for line in lines):
        raise ValueError("ragged map rows")
    walls, start, goal = set(), None, None
    for row_index, line in enumerate(lines):
        y = height - 1 - row_index
        for x, ch in enumerate(line):
            cell = Cell(x, y)
            if ch == "W":
                walls.add(cell)
            elif ch == "S":
                start = cell
            elif ch == "G":
                goal = cell
            elif ch != ".":
                raise ValueError(f"unknown map character {ch!r}")
    if start is None or goal is None:
        raise ValueError("map must contain S and G")
    return GridConfig(width, height, frozenset(walls), start, goal,
                      p_intended, (1.0 - p_intended) / 2.0)
