import random

from oaspmdp.asp import Atom, ChoiceRule, IntegrityConstraint, Program


def random_fragment_program(rng: random.Random) -> Program:
    """Random valid fragment program with a brute-forceable atom universe.

    Atoms are partitioned into facts, head candidates and junk body atoms so
    generated bodies never reference non-fact choice heads.
    """
    n_facts = rng.randint(0, 8)
    n_heads = rng.randint(1, 8)
    n_junk = rng.randint(0, 3)
    facts = [Atom(f"f{i}") for i in range(n_facts)]
    head_pool = [Atom(f"h{i}") for i in range(n_heads)]
    junk = [Atom(f"j{i}") for i in range(n_junk)]

    rules = []
    for _ in range(rng.randint(0, 5)):
        pool = head_pool + facts
        heads = rng.sample(pool, rng.randint(1, min(4, len(pool))))
        body_pool = facts + junk
        if not body_pool:
            continue
        body = rng.sample(body_pool, rng.randint(1, min(3, len(body_pool))))
        rules.append(ChoiceRule(heads, body))

    constraints = []
    universe = facts + head_pool + junk
    for _ in range(rng.randint(0, 3)):
        body = rng.sample(universe, rng.randint(1, min(3, len(universe))))
        constraints.append(IntegrityConstraint(body))

    return Program(facts=facts, choice_rules=rules, constraints=constraints)
