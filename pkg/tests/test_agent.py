import random

import pytest

from oaspmdp.agent import (
    BaselineAgent,
    OaspAgent,
    action_atom,
    cell_of_state_atom,
    dump_programs,
    load_programs,
    run_episode,
    state_atom,
)
from oaspmdp.asp import Program, enumerate_answer_sets, render_program
from oaspmdp.gridworld import ACTIONS, Action, Cell, generate_walls, \
    make_config, reachable_cells
from oaspmdp.qlearn import LearnParams

PARAMS = LearnParams(alpha=0.2, gamma=0.9, epsilon=0.1, max_steps=1000)


def full_exploration(config, episodes, seed=0):
    agent = OaspAgent(LearnParams(epsilon=1.0))
    rng_act = random.Random(seed)
    rng_env = random.Random(seed + 1)
    for episode in range(episodes):
        run_episode(agent, config, episode, rng_act, rng_env)
    return agent


class TestAtoms:
    def test_state_atom_names(self):
        assert state_atom(Cell(0, 0)).name == "s_0_0"
        assert state_atom(Cell(3, 7)).name == "s_3_7"

    def test_action_atom_names(self):
        assert [action_atom(a).name for a in ACTIONS] == [
            "a_up", "a_down", "a_left", "a_right"]

    def test_cell_roundtrip(self):
        for cell in (Cell(0, 0), Cell(9, 9), Cell(12, 3)):
            assert cell_of_state_atom(state_atom(cell)) == cell


class TestWorkedExample:
    """The four-step walkthrough: start at s0=(0,0), go up to s1=(0,1),
    bounce off the top at s1, come back down, then slip right to s2=(1,0)."""

    def trace(self):
        agent = OaspAgent(PARAMS)
        rng = random.Random(0)
        s0, s1, s2 = Cell(0, 0), Cell(0, 1), Cell(1, 0)
        agent.choose(s0, rng)
        agent.record(s0, Action.UP, s1)
        agent.choose(s1, rng)
        agent.record(s1, Action.UP, s1)
        agent.record(s1, Action.DOWN, s0)
        agent.record(s0, Action.UP, s2)
        return agent, s0, s1, s2

    def test_first_transition_program_and_answer_set(self):
        agent = OaspAgent(PARAMS)
        agent.choose(Cell(0, 0), random.Random(0))
        agent.record(Cell(0, 0), Action.UP, Cell(0, 1))
        assert render_program(agent.programs[Cell(0, 0)]) == (
            "s_0_0.\n1{ s_0_1 }1 :- a_up, s_0_0.\n")
        query = Program(facts={state_atom(Cell(0, 0)), action_atom(Action.UP)},
                        choice_rules=agent.programs[Cell(0, 0)].choice_rules)
        models = enumerate_answer_sets(query)
        assert [sorted(a.name for a in m.atoms) for m in models] == [
            ["a_up", "s_0_0", "s_0_1"]]
        assert (Cell(0, 0), Action.UP) in agent.q.entries

    def test_programs_after_four_steps(self):
        agent, s0, s1, _ = self.trace()
        assert render_program(agent.programs[s0]) == (
            "s_0_0.\n1{ s_0_1; s_1_0 }1 :- a_up, s_0_0.\n")
        assert render_program(agent.programs[s1]) == (
            "s_0_1.\n"
            "1{ s_0_1 }1 :- a_up, s_0_1.\n"
            "1{ s_0_0 }1 :- a_down, s_0_1.\n")

    def test_two_answer_sets_after_slip(self):
        agent, s0, _, _ = self.trace()
        query = Program(facts={state_atom(s0), action_atom(Action.UP)},
                        choice_rules=agent.programs[s0].choice_rules)
        models = {frozenset(a.name for a in m.atoms)
                  for m in enumerate_answer_sets(query)}
        assert models == {frozenset({"s_0_0", "a_up", "s_0_1"}),
                          frozenset({"s_0_0", "a_up", "s_1_0"})}

    def test_known_pairs_counts_choice_rules(self):
        agent, *_ = self.trace()
        assert agent.known_pairs() == 3
        assert agent.known_pairs() == sum(
            len(p.choice_rules) for p in agent.programs.values())


class TestOaspAgent:
    def test_fresh_agent(self):
        agent = OaspAgent(PARAMS)
        assert agent.known_pairs() == 0
        assert agent.observed == set()
        assert agent.q.entries == {}

    def test_first_visit_takes_some_action_and_registers(self):
        agent = OaspAgent(PARAMS)
        a = agent.choose(Cell(2, 2), random.Random(0))
        assert a in ACTIONS
        assert Cell(2, 2) in agent.observed
        assert agent.programs[Cell(2, 2)].facts == {state_atom(Cell(2, 2))}

    def test_q_entries_match_rule_bodies(self):
        config = make_config(6, 6, set(), 0.9)
        agent = OaspAgent(PARAMS)
        rng_act, rng_env = random.Random(1), random.Random(2)
        for episode in range(30):
            run_episode(agent, config, episode, rng_act, rng_env)
        bodies = {(cell, a) for cell, p in agent.programs.items()
                  for rule in p.choice_rules
                  for a in ACTIONS if action_atom(a) in rule.body}
        assert bodies == set(agent.q.entries)

    def test_full_exploration_empty_grid_reaches_400(self):
        config = make_config(10, 10, set(), 0.9)
        agent = full_exploration(config, 60)
        assert agent.known_pairs() == 400

    def test_full_exploration_excludes_unreachable(self):
        rng = random.Random(13)
        walls = generate_walls(10, 10, 0.25, Cell(0, 0), Cell(9, 9), rng)
        config = make_config(10, 10, walls, 0.9)
        agent = full_exploration(config, 150)
        assert agent.known_pairs() == 4 * len(reachable_cells(config))
        assert not agent.observed & config.walls

    def test_pair_count_monotone_and_bounded(self):
        config = make_config(8, 8, set(), 0.9)
        agent = OaspAgent(PARAMS)
        rng_act, rng_env = random.Random(3), random.Random(4)
        previous = 0
        for episode in range(40):
            record = run_episode(agent, config, episode, rng_act, rng_env)
            assert record.pair_count >= previous
            assert record.pair_count <= 4 * 8 * 8
            previous = record.pair_count


class TestBaselineAgent:
    def test_fixed_pair_count(self):
        agent = BaselineAgent(10, 10, PARAMS)
        assert agent.known_pairs() == 400
        assert len(agent.q.entries) == 400

    def test_reset_zeroes_table(self):
        agent = BaselineAgent(5, 5, PARAMS)
        agent.q.entries[(Cell(1, 1), Action.UP)] = 9.0
        agent.reset()
        assert all(v == 0.0 for v in agent.q.entries.values())
        assert len(agent.q.entries) == 100


class TestRunEpisode:
    def test_return_is_100_minus_steps_on_success(self):
        config = make_config(4, 4, set(), 1.0)
        agent = BaselineAgent(4, 4, PARAMS)
        for episode in range(50):
            record = run_episode(agent, config, episode, random.Random(episode),
                                 random.Random(episode + 100))
            assert record.steps <= PARAMS.max_steps
            assert record.return_ == pytest.approx(100.0 - record.steps)

    def test_step_cap_yields_negative_return(self):
        config = make_config(10, 10, set(), 0.9)
        params = LearnParams(max_steps=5)
        agent = BaselineAgent(10, 10, params)
        record = run_episode(agent, config, 0, random.Random(0),
                             random.Random(1))
        assert record.steps == 5
        assert record.return_ == pytest.approx(-5.0)

    def test_deterministic_given_seeds(self):
        config = make_config(6, 6, set(), 0.9)
        traces = []
        for _ in range(2):
            agent = OaspAgent(PARAMS)
            rng_act, rng_env = random.Random(42), random.Random(43)
            traces.append([run_episode(agent, config, e, rng_act, rng_env)
                           for e in range(20)])
        assert traces[0] == traces[1]


class TestDumpLoad:
    def test_fresh_agent_dumps_nothing(self, tmp_path):
        dump_programs(OaspAgent(PARAMS), tmp_path / "programs")
        assert list((tmp_path / "programs").iterdir()) == []

    def test_roundtrip_on_trained_agent(self, tmp_path):
        config = make_config(7, 7, {Cell(3, 3), Cell(2, 5)}, 0.9)
        agent = OaspAgent(PARAMS)
        rng_act, rng_env = random.Random(8), random.Random(9)
        for episode in range(40):
            run_episode(agent, config, episode, rng_act, rng_env)
        dump_programs(agent, tmp_path / "programs")
        loaded = load_programs(tmp_path / "programs")
        assert loaded == agent.programs
