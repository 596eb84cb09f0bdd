"""Per-episode metrics shared by the agents and the experiment driver."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class EpisodeRecord:
    episode: int
    rmsd: float
    return_: float
    steps: int
    pair_count: int
    agent_kind: str  # "baseline" | "oasp"


def rmsd(q_prev, q_curr):
    """Root-mean-square deviation over the union of both tables' keys,
    absent entries read as 0; empty union yields 0."""
    prev = q_prev if isinstance(q_prev, dict) else q_prev.entries
    curr = q_curr if isinstance(q_curr, dict) else q_curr.entries
    keys = prev.keys() | curr.keys()
    if not keys:
        return 0.0
    total = 0.0
    for key in keys:
        d = curr.get(key, 0.0) - prev.get(key, 0.0)
        total += d * d
    return math.sqrt(total / len(keys))
