"""Strategy constants: the literal proof presets and the desk presets.

The "paper" preset keeps the source formulas (retained for documentation;
the constants are astronomically conservative and unusable at reachable
board sizes).  The "desk" preset is calibrated so the stage predicates pass
at n in [60, 200]; every desk value sits next to the formula it replaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log


@dataclass
class StrategyConstants:
    preset: str = "desk"
    # shared knobs
    degree_target: int = 16      # minimum-degree phase target
    sample_sets: int = 24        # implicit-family sample size per move
    audit_samples: int = 200     # post-stage audit sample count
    # Hamiltonicity, small bias
    beta_frac: float = 0.12      # F2 cut sets: |A|=|B|=beta*n   (paper: delta/1035)
    f1_small_frac: float = 0.10  # F1 small side as a fraction   (paper: n^0.5/n)
    f1_big_slack: float = 0.10   # F1 big side: (1-slack)|V_j|   (paper: alpha/10)
    minbox_quota: int = 5        # per-box degree quota cap      (paper: alpha*n/(200b))
    # Hamiltonicity, large bias
    eps_frac: float = 0.12       # expander parameter eps        (paper: < alpha^8 2^-81)
    booster_rounds: int = 0      # 0 means "up to n"
    # Waiter Hamiltonicity case B
    expansion_factor: int = 9    # property-(P) factor (structural)
    repair_rounds: int = 9
    # k-connectivity
    kconn_kappa_min: int = 2     # class connectivity floor      (paper: alpha^2 n/16)
    # H-games
    eta: float = 0.15            # dense-pair class size fraction
    drc_nu: float = 0.15
    balancer_eps: float = 0.1
    many_copies_rounds_frac: float = 0.45
    extras: dict = field(default_factory=dict)


def desk() -> StrategyConstants:
    return StrategyConstants()


def paper(alpha: float, n: int, b: int = 1) -> StrategyConstants:
    """The literal constants: delta = 1e-4*alpha, C = 1e8/delta^2,
    c = 1e-3*delta^2*alpha, beta = delta/1035, F1 small side n^0.5, MinBox
    gamma = 1/(8b) with D = alpha*n/25, expander eps < alpha^8 * 2^-81.
    Kept for reporting; games at desk n cannot satisfy them."""
    delta = 1e-4 * alpha
    c = StrategyConstants(
        preset="paper",
        degree_target=16,
        beta_frac=delta / 1035,
        f1_small_frac=(n ** 0.5) / n if n else 0.0,
        f1_big_slack=alpha / 10,
        minbox_quota=max(1, int(alpha * n / (200 * max(b, 1)))),
        eps_frac=alpha ** 8 * 2 ** -81,
        expansion_factor=9,
        repair_rounds=9,
        kconn_kappa_min=max(1, int(alpha * alpha * n / 16)),
        eta=1e-3,
        drc_nu=1e-3,
        balancer_eps=0.1,
    )
    c.extras["delta"] = delta
    c.extras["C_ham_small"] = 1e8 / delta ** 2
    c.extras["c_ham_small"] = 1e-3 * delta ** 2 * alpha
    return c


PRESETS = {"desk": desk, "paper": paper}
