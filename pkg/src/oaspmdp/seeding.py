"""Deterministic named substreams.

Every stochastic consumer (wall generation, environment steps, action
selection) owns a stream derived from the base seed plus integer tags, so
results do not depend on execution order or trial parallelism.
"""

import random

TAG_WALLS = 1
TAG_BASELINE_ACT = 2
TAG_BASELINE_ENV = 3
TAG_OASP_ACT = 4
TAG_OASP_ENV = 5

_MASK = (1 << 64) - 1


def derive_seed(*parts):
    h = 0x345678
    for p in parts:
        h = (h * 1000003 + p + 0x9E3779B9) & _MASK
    return h


def derive_rng(*parts):
    return random.Random(derive_seed(*parts))
