"""oaspmdp: online answer-set construction of MDP state sets around tabular
Q-Learning, with non-stationary grid-world experiments."""

__version__ = "0.1.0"
