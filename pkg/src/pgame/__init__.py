"""pgame: positional games on randomly perturbed graph boards.

A library and CLI for playing and empirically verifying Maker-Breaker and
Waiter-Client strategies (Hamiltonicity, k-vertex-connectivity, fixed-graph
targets) on boards of the form dense-graph union random-graph, together
with the exact graph oracles and density calculators the strategies rely
on.
"""

__version__ = "0.1.0"
