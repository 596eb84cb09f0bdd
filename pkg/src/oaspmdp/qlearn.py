"""Tabular Q-Learning: sparse table, update rule, epsilon-greedy selection."""

import math
from dataclasses import dataclass

from .gridworld import ACTIONS, Cell


@dataclass(frozen=True)
class LearnParams:
    alpha: float = 0.2
    gamma: float = 0.9
    epsilon: float = 0.1
    max_steps: int = 1000

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


class QTable:
    """Sparse map (cell, action) -> value; absent entries read 0."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        self.entries = dict(entries) if entries else {}

    def get(self, s, a):
        return self.entries.get((s, a), 0.0)

    def max_value(self, s):
        e = self.entries
        return max(e.get((s, a), 0.0) for a in ACTIONS)

    def snapshot(self):
        return dict(self.entries)

    @classmethod
    def dense(cls, width, height):
        """Zero-filled table over every cell and action, walls included.

        Mirrors the fixed tabular layout the baseline learner owns, so the
        entry key set (and hence the RMSD domain) stays constant."""
        entries = {}
        for x in range(width):
            for y in range(height):
                for a in ACTIONS:
                    entries[(Cell(x, y), a)] = 0.0
        return cls(entries)


def q_update(q, s, a, r, s_next, params, terminal=False):
    """One Q-Learning backup; mutates and returns ``q``.

    The max ranges over all four actions with absent entries read as 0; the
    bootstrap term is dropped on terminal transitions.
    """
    if not math.isfinite(r):
        raise ValueError("reward must be finite")
    e = q.entries
    bootstrap = 0.0 if terminal else max(
        e.get((s_next, 0), 0.0), e.get((s_next, 1), 0.0),
        e.get((s_next, 2), 0.0), e.get((s_next, 3), 0.0))
    key = (s, a)
    current = e.get(key, 0.0)
    e[key] = current + params.alpha * (r + params.gamma * bootstrap - current)
    return q


def select_epsilon_greedy(q, s, params, rng):
    """Random action with probability epsilon, else argmax with uniform
    tie-breaking among maximizers."""
    if rng.random() < params.epsilon:
        return ACTIONS[rng.randrange(4)]
    e = q.entries
    values = [e.get((s, a), 0.0) for a in ACTIONS]
    best = max(values)
    maximizers = [a for a, v in zip(ACTIONS, values) if v == best]
    if len(maximizers) == 1:
        return maximizers[0]
    return maximizers[rng.randrange(len(maximizers))]


def greedy_policy(q, states):
    """Per-state argmax with fixed-order tie-break (Up < Down < Left < Right)."""
    policy = {}
    for s in states:
        best_action, best_value = ACTIONS[0], q.get(s, ACTIONS[0])
        for a in ACTIONS[1:]:
            v = q.get(s, a)
            if v > best_value:
                best_action, best_value = a, v
        policy[s] = best_action
    return policy


def reset(q):
    """Fresh empty table (all values read 0)."""
    return QTable()


def dump_csv(q, path):
    """Write the table as ``state_x,state_y,action,value`` rows."""
    lines = ["state_x,state_y,action,value"]
    for (s, a), v in sorted(q.entries.items(),
                            key=lambda kv: (kv[0][0], int(kv[0][1]))):
        lines.append(f"{s[0]},{s[1]},{a.label},{v!r}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
