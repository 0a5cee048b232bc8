"""Monte Carlo cross-check of the analytic pair supply and rates.

One heralding window drives ``blocks`` parallel generation slots for
(k/2 + 1) T0 seconds; each slot yields a raw pair with probability p0,
raw pairs are grouped into complete pump trees of 2^k, and each tree
survives the k pump rounds with the composite probability the analytic
rate prices (per-round success times the gate discount of the whole
tree).  Leftover pairs that cannot fill a tree within the window are
discarded, which is exactly the floor the estimator is allowed to show.

Streams use numpy's PCG64 via ``default_rng``; independent substreams
are split off one SeedSequence so results are reproducible per seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .pipeline import (
    ProtocolConfig,
    heralding_probability,
    pump_success_probability,
    timing,
    with_fidelity,
)

__all__ = [
    "McConfig",
    "WindowStats",
    "RateEstimate",
    "simulate_window",
    "required_blocks",
    "simulate_rate",
]


@dataclass(frozen=True)
class McConfig:
    """Sampling plan: p0 per slot, ``blocks`` slots, k pump rounds, trials."""

    p0: float
    blocks: int
    rounds: int
    trials: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.p0 <= 1.0:
            raise ValueError(f"p0 must lie in (0, 1], got {self.p0}")
        if not (isinstance(self.blocks, int) and self.blocks >= 1):
            raise ValueError(f"blocks must be an integer >= 1, got {self.blocks}")
        if not (isinstance(self.rounds, int) and self.rounds >= 0):
            raise ValueError(f"rounds must be an integer >= 0, got {self.rounds}")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trials must be an integer >= 1, got {self.trials}")


class WindowStats(NamedTuple):
    """Raw-supply statistics of one heralding window over many trials."""

    mean_pairs: float
    sem_pairs: float
    interval3: tuple[float, float]  # mean_pairs +/- 3 sem, covers blocks * p0
    mean_trees: float
    sem_trees: float


class RateEstimate(NamedTuple):
    """Estimated distribution rate per memory qubit with its 1 sigma error."""

    rate_per_memory_hz: float
    std_error_hz: float
    trials: int


def simulate_window(mc: McConfig) -> WindowStats:
    """Sample the raw-pair supply and the complete-tree count per window."""
    rng = np.random.default_rng(mc.seed)
    pairs = rng.binomial(mc.blocks, mc.p0, size=mc.trials)
    trees = pairs >> mc.rounds
    root_n = math.sqrt(mc.trials)
    mean_pairs = float(pairs.mean())
    sem_pairs = float(pairs.std(ddof=1) / root_n) if mc.trials > 1 else math.inf
    sem_trees = float(trees.std(ddof=1) / root_n) if mc.trials > 1 else math.inf
    return WindowStats(
        mean_pairs,
        sem_pairs,
        (mean_pairs - 3.0 * sem_pairs, mean_pairs + 3.0 * sem_pairs),
        float(trees.mean()),
        sem_trees,
    )


def required_blocks(p0: float, rounds: int, confidence: float) -> int:
    """Smallest slot count s with P[Binom(s, p0) >= 2^rounds] >= confidence.

    p0 = 0 can never fill a tree and is rejected.  The tail probability is
    monotone in s, so the boundary is found by doubling then bisection;
    tails are summed in log space to stay finite for large s.
    """
    if p0 == 0.0:
        raise ValueError("p0 = 0 can never supply a pump tree")
    if not 0.0 < p0 <= 1.0:
        raise ValueError(f"p0 must lie in (0, 1], got {p0}")
    if not (isinstance(rounds, int) and rounds >= 0):
        raise ValueError(f"rounds must be an integer >= 0, got {rounds}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    need = 2**rounds

    def tail_ok(s: int) -> bool:
        # P[X >= need] = 1 - sum_{j<need} C(s,j) p^j (1-p)^(s-j)
        if s < need:
            return False
        if p0 == 1.0:
            return True
        log_p = math.log(p0)
        log_q = math.log1p(-p0)
        cdf = 0.0
        for j in range(need):
            log_term = (
                math.lgamma(s + 1)
                - math.lgamma(j + 1)
                - math.lgamma(s - j + 1)
                + j * log_p
                + (s - j) * log_q
            )
            cdf += math.exp(log_term)
        return 1.0 - cdf >= confidence

    hi = need
    while not tail_ok(hi):
        hi *= 2
        if hi > 2**62:
            raise ArithmeticError("required block count overflows any practical window")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def simulate_rate(cfg: ProtocolConfig, fidelity: float, mc: McConfig) -> RateEstimate:
    """Monte Carlo estimate of the purified rate per memory qubit.

    Overrides the raw fidelity of ``cfg`` with ``fidelity``; p0, the pump
    depth, and the composite tree survival probability all come from the
    analytic pipeline, so the estimator measures exactly the process the
    closed-form rate prices.  mc.p0 and mc.rounds are ignored in favor of
    the config.  Two independent substreams drive supply and survival.
    """
    cfg = with_fidelity(cfg, fidelity)
    tm = timing(cfg)
    p0 = heralding_probability(cfg)
    k = cfg.rounds
    p_tree = pump_success_probability(cfg)
    window_s = (k / 2.0 + 1.0) * tm.t0_s

    ss = np.random.SeedSequence(mc.seed)
    supply_seed, survive_seed = ss.spawn(2)
    rng_supply = np.random.default_rng(supply_seed)
    rng_survive = np.random.default_rng(survive_seed)

    pairs = rng_supply.binomial(mc.blocks, p0, size=mc.trials)
    if k == 0:
        out = pairs
    else:
        trees = pairs >> k
        out = rng_survive.binomial(trees, p_tree)

    per_memory = out / (window_s * mc.blocks * cfg.code.n)
    rate = float(per_memory.mean())
    sem = float(per_memory.std(ddof=1) / math.sqrt(mc.trials)) if mc.trials > 1 else math.inf
    return RateEstimate(rate, sem, mc.trials)
