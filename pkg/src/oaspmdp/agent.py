"""Learning agents and the shared episode driver.

The oASP agent discovers the state set online: the first visit to a state
takes a random action; every observed transition is recorded as a choice-rule
head in that state's logic program, and answer-set enumeration of the mutated
program seeds the Q-table entries for the discovered pairs.  In known states
the agent defers entirely to epsilon-greedy Q-Learning, so it adds no bias to
the underlying value updates.

An episode ends after the iteration in which the goal is the current state
(or at the step cap), so every state the agent can occupy, the goal
included, eventually records all four of its actions.
"""

import os

from .asp import Atom, Program, add_transition_head, enumerate_answer_sets, \
    parse_program, render_program
from .gridworld import ACTIONS, Action, Cell, step
from .metrics import EpisodeRecord, rmsd
from .qlearn import QTable, q_update, select_epsilon_greedy

_STATE_ATOMS = {}
_ACTION_ATOMS = {a: Atom(f"a_{a.label}") for a in ACTIONS}


def state_atom(cell):
    atom = _STATE_ATOMS.get(cell)
    if atom is None:
        atom = Atom(f"s_{cell[0]}_{cell[1]}")
        _STATE_ATOMS[cell] = atom
    return atom


def action_atom(a):
    return _ACTION_ATOMS[a]


def cell_of_state_atom(atom):
    _, x, y = atom.name.split("_")
    return Cell(int(x), int(y))


class OaspAgent:
    kind = "oasp"

    def __init__(self, params):
        self.params = params
        self.observed = set()
        self.programs = {}
        self.pairs = set()
        self.q = QTable()

    def choose(self, s, rng):
        if s not in self.observed:
            self.observed.add(s)
            self.programs[s] = Program(facts={state_atom(s)})
            return ACTIONS[rng.randrange(4)]
        # actions with no recorded transition yet are tried first; once the
        # state's program covers all four, selection is plain epsilon-greedy
        untried = [a for a in ACTIONS if (s, a) not in self.pairs]
        if untried:
            return untried[rng.randrange(len(untried))]
        return select_epsilon_greedy(self.q, s, self.params, rng)

    def record(self, s, a, s_next):
        """Record the observed transition in s's program; on mutation,
        re-enumerate the answer sets for (s, a) and seed Q entries."""
        self.pairs.add((s, a))
        program = self.programs[s]
        body = (state_atom(s), action_atom(a))
        if add_transition_head(program, body, state_atom(s_next)):
            self._seed_entries(s, a)

    def _seed_entries(self, s, a):
        query = Program(facts={state_atom(s), action_atom(a)},
                        choice_rules=self.programs[s].choice_rules,
                        constraints=self.programs[s].constraints)
        answer_sets = enumerate_answer_sets(query)
        if answer_sets:
            self.q.entries.setdefault((s, a), 0.0)
        return answer_sets

    def known_pairs(self):
        return sum(len(p.choice_rules) for p in self.programs.values())


class BaselineAgent:
    """Plain Q-Learning over a fixed dense table."""

    kind = "baseline"

    def __init__(self, width, height, params):
        self.width = width
        self.height = height
        self.params = params
        self.q = QTable.dense(width, height)

    def choose(self, s, rng):
        return select_epsilon_greedy(self.q, s, self.params, rng)

    def record(self, s, a, s_next):
        pass

    def reset(self):
        self.q = QTable.dense(self.width, self.height)

    def known_pairs(self):
        return 4 * self.width * self.height


def run_episode(agent, config, episode_index, rng_act, rng_env):
    """One episode of the shared driver; returns the metrics record.

    The loop acts once more after reaching the goal (from the goal cell
    itself) before terminating, which keeps the recorded transition set
    complete while preserving return = 100 - steps on success.
    """
    q_prev = agent.q.snapshot()
    params = agent.params
    s = config.start
    steps = 0
    total = 0.0
    while steps < params.max_steps:
        at_goal = s == config.goal
        a = agent.choose(s, rng_act)
        outcome = step(config, s, a, rng_env)
        agent.record(s, a, outcome.next)
        q_update(agent.q, s, a, outcome.reward, outcome.next, params,
                 terminal=outcome.terminal)
        total += outcome.reward
        steps += 1
        if at_goal:
            break
        s = outcome.next
    return EpisodeRecord(episode_index, rmsd(q_prev, agent.q), total, steps,
                         agent.known_pairs(), agent.kind)


# ---------------------------------------------------------------------------
# program snapshots

def dump_programs(agent, directory):
    """One ``<state>.lp`` file per observed state, in canonical syntax."""
    os.makedirs(directory, exist_ok=True)
    for cell, program in agent.programs.items():
        path = os.path.join(directory, f"{state_atom(cell).name}.lp")
        with open(path, "w", newline="\n") as fh:
            fh.write(render_program(program))


def load_programs(directory):
    programs = {}
    for name in os.listdir(directory):
        if not name.endswith(".lp"):
            continue
        cell = cell_of_state_atom(Atom(name[:-3]))
        with open(os.path.join(directory, name)) as fh:
            programs[cell] = parse_program(fh.read())
    return programs
