"""End-to-end fidelity and rate models for a nested repeater line.

A line of total length L is cut into N = L / L0 segments (N a power of two,
at least 2).  Raw pairs are generated per segment, pumped through k nested
purification rounds, and connected by log2(N) levels of entanglement
swapping (Briegel et al., PRL 81, 5932 (1998)).  Two storage strategies are
priced:

* repetition family: the Bell-diagonal state is tracked through the ideal
  purify/swap recursions and every noisy gate is charged as a worst-case
  multiplicative factor on the leading coefficient, so reported final
  fidelities and success probabilities are lower bounds;
* css family: purification is tracked with the exact imperfect-gate round,
  the surviving error budget is converted to an i.i.d. per-qubit rate, and
  the block code must digest it at every swap station, giving
  F_final = (1 - Q_n)^(2N).

Rates are quoted per memory qubit: R = P0 P_k / (n 2^k (k/2 + 1) T0).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

from .bell_algebra import (
    BellDiagonal,
    purify_ideal,
    purify_imperfect_exact,
    purify_k_rounds_lower,
    swap_ideal,
)
from .codes import (
    Code,
    css_effective_qubit_error,
    effective_coefficients,
    logical_error_prob,
    pair_no_error_prob,
)
from .core import (
    ATTENUATION_LENGTH_KM,
    ChannelParams,
    HardwareParams,
    memory_error_prob,
    success_probability,
    transmittance,
)

__all__ = [
    "ProtocolConfig",
    "Timing",
    "SweepResult",
    "OperatingPoint",
    "timing",
    "repetition_final_fidelity",
    "css_final_fidelity",
    "final_fidelity",
    "heralding_probability",
    "pump_success_probability",
    "rate_unpurified",
    "rate_purified",
    "evaluate",
    "with_fidelity",
    "operating_point",
    "sweep",
]

# bisection window for the raw operating fidelity
_F_LO = 0.5 + 1e-6
_F_HI = 1.0 - 1e-9
_F_TOL = 1e-4


@dataclass(frozen=True)
class ProtocolConfig:
    """One repeater operating point.

    The raw pair fidelity comes either from an explicit ``fidelity`` or
    from a ``channel`` (qubus strength and angle); exactly one must be
    given.  ``total_distance_km / segment_km`` must be a power of two >= 2.
    """

    total_distance_km: float
    segment_km: float
    code: Code
    rounds: int
    hardware: HardwareParams
    channel: ChannelParams | None = None
    fidelity: float | None = None
    attenuation_km: float = ATTENUATION_LENGTH_KM  # used only when channel is None

    def __post_init__(self) -> None:
        if not self.total_distance_km > 0.0:
            raise ValueError(f"total_distance_km must be > 0, got {self.total_distance_km}")
        if not self.segment_km > 0.0:
            raise ValueError(f"segment_km must be > 0, got {self.segment_km}")
        if not self.attenuation_km > 0.0:
            raise ValueError(f"attenuation_km must be > 0, got {self.attenuation_km}")
        if not (isinstance(self.rounds, int) and self.rounds >= 0):
            raise ValueError(f"rounds must be an integer >= 0, got {self.rounds}")
        if (self.channel is None) == (self.fidelity is None):
            raise ValueError("give exactly one of channel= or fidelity=")
        if self.fidelity is not None and not 0.5 < self.fidelity <= 1.0:
            raise ValueError(f"fidelity must lie in (1/2, 1], got {self.fidelity}")
        if self.channel is not None and self.channel.segment_length_km != self.segment_km:
            raise ValueError("channel.segment_length_km must equal segment_km")
        self.num_segments()  # validates the L / L0 ratio

    def num_segments(self) -> int:
        ratio = self.total_distance_km / self.segment_km
        n = round(ratio)
        if abs(ratio - n) > 1e-9 or n < 2 or n & (n - 1) != 0:
            raise ValueError(
                f"total_distance_km / segment_km must be a power of two >= 2, got {ratio}"
            )
        return n

    def raw_fidelity(self) -> float:
        if self.fidelity is not None:
            return self.fidelity
        return self.channel.fidelity()

    def segment_transmittance(self) -> float:
        if self.channel is not None:
            return self.channel.transmittance()
        return transmittance(self.segment_km, self.attenuation_km)


class Timing(NamedTuple):
    """Clock constants of one operating point (seconds, count)."""

    t0_s: float          # heralding round trip 2 L0 / c
    t_purify_s: float    # pump window t_k = (k/2 + 1) T0
    t_half_s: float      # css storage window t'_k = (k + 1) T0 / 2
    num_segments: int


@dataclass(frozen=True)
class SweepResult:
    """One evaluated grid point; ``error`` is set instead of raising."""

    code_label: str
    family: str
    rounds: int
    tau_c_s: float
    one_minus_t: float
    total_distance_km: float
    segment_km: float
    f: float = math.nan
    f_final: float = math.nan
    p0: float = math.nan
    p_k: float = math.nan
    rate_per_memory_hz: float = math.nan
    t_wait_s: float = math.nan
    error: str | None = None


@dataclass(frozen=True)
class OperatingPoint:
    """Smallest raw fidelity meeting a final-fidelity target, if any."""

    feasible: bool
    operating_fidelity: float | None
    result: SweepResult
    max_f_final: float


def timing(cfg: ProtocolConfig) -> Timing:
    """Heralding and storage windows of the nested protocol.

    T0 = 2 L0 / c is one generation attempt (emission plus heralding);
    pumping k rounds keeps memories busy for t_k = (k/2 + 1) T0, and the
    per-level storage window entering the css budget is t'_k = (k+1) T0/2.
    """
    t0 = 2.0 * cfg.segment_km * 1e3 / cfg.hardware.fiber_speed_m_per_s
    t_k = (cfg.rounds / 2.0 + 1.0) * t0
    t_half = (cfg.rounds + 1.0) * t0 / 2.0
    return Timing(t0, t_k, t_half, cfg.num_segments())


def _gate_factor(q_g: float, n: int, num_swaps: int, k: int) -> float:
    # 2n noisy-gate qubits per swap, 4n per purification merge (2^k - 1 merges)
    return (1.0 - q_g) ** (2 * n * (num_swaps + 2 * (2**k - 1)))


def repetition_final_fidelity(cfg: ProtocolConfig) -> float:
    """Lower bound on the end-to-end fidelity for the repetition family.

    The stored pair accumulates memory dephasing over the pump window,
    decoded per block to a pair flip budget; the resulting Bell-diagonal
    state runs through k ideal pump rounds and log2(N) ideal swap levels,
    and every noisy gate in the tree discounts the leading coefficient.
    """
    if cfg.code.family != "repetition":
        raise ValueError(f"code family must be repetition, got {cfg.code.family}")
    tm = timing(cfg)
    q_g = cfg.hardware.gate_error()
    q_mem = memory_error_prob(tm.t_purify_s / 2.0, cfg.hardware.memory_coherence_s)
    q_logical = logical_error_prob(cfg.code, q_mem)
    state = effective_coefficients(cfg.raw_fidelity(), pair_no_error_prob(q_logical))
    for _ in range(cfg.rounds):
        state = purify_ideal(state).state
    levels = int(math.log2(tm.num_segments))
    for _ in range(levels):
        state = swap_ideal(state)
    return state.a * _gate_factor(q_g, cfg.code.n, tm.num_segments - 1, cfg.rounds)


def _css_purified(cfg: ProtocolConfig) -> tuple[float, float]:
    """(F_k, P_k) of the exact imperfect pump chain on the raw pair."""
    q_g = cfg.hardware.gate_error()
    f = cfg.raw_fidelity()
    state = BellDiagonal(f, 1.0 - f, 0.0, 0.0)
    p_chain = 1.0
    for _ in range(cfg.rounds):
        out = purify_imperfect_exact(state, q_g)
        state = out.state
        p_chain *= out.success_prob
    return state.a, p_chain


def css_final_fidelity(cfg: ProtocolConfig) -> float:
    """End-to-end fidelity for the css family.

    The purified pair fidelity F_k, two noisy gates, and three memory
    half-windows per stored qubit make up an i.i.d. error budget q_eff;
    each of the 2N encoded blocks along the line must decode it:

        F_final = (1 - Q_n(q_eff))^(2N).
    """
    if cfg.code.family != "css":
        raise ValueError(f"code family must be css, got {cfg.code.family}")
    tm = timing(cfg)
    q_g = cfg.hardware.gate_error()
    f_k, _ = _css_purified(cfg)
    q_mem = memory_error_prob(tm.t_half_s / 2.0, cfg.hardware.memory_coherence_s)
    q_eff, _clamped = css_effective_qubit_error(q_mem, q_g, f_k)
    q_logical = logical_error_prob(cfg.code, q_eff)
    return (1.0 - q_logical) ** (2 * tm.num_segments)


def final_fidelity(cfg: ProtocolConfig) -> float:
    """Family dispatch of the end-to-end fidelity."""
    if cfg.code.family == "repetition":
        return repetition_final_fidelity(cfg)
    return css_final_fidelity(cfg)


def heralding_probability(cfg: ProtocolConfig) -> float:
    """Per-attempt success probability P0 of raw pair generation."""
    return success_probability(cfg.raw_fidelity(), cfg.segment_transmittance())


def rate_unpurified(cfg: ProtocolConfig) -> float:
    """Raw pair rate per memory qubit, R = P0 / (n T0)."""
    tm = timing(cfg)
    return heralding_probability(cfg) / (cfg.code.n * tm.t0_s)


def pump_success_probability(cfg: ProtocolConfig) -> float:
    """Success probability of the whole k-round pump tree (1 for k = 0)."""
    if cfg.rounds == 0:
        return 1.0
    q_g = cfg.hardware.gate_error()
    if cfg.code.family == "repetition":
        tm = timing(cfg)
        q_mem = memory_error_prob(tm.t_purify_s / 2.0, cfg.hardware.memory_coherence_s)
        q_logical = logical_error_prob(cfg.code, q_mem)
        state = effective_coefficients(cfg.raw_fidelity(), pair_no_error_prob(q_logical))
        return purify_k_rounds_lower(state, q_g, cfg.code.n, cfg.rounds).success_prob
    _, p_chain = _css_purified(cfg)
    return p_chain


def rate_purified(cfg: ProtocolConfig) -> float:
    """Purified pair rate per memory qubit.

    Pumping k rounds consumes 2^k raw pairs over a window (k/2 + 1) T0 and
    succeeds with probability P_k, so

        R = P0 P_k / (n 2^k (k/2 + 1) T0).

    k = 0 is rejected: there is no pump tree to price, use
    :func:`rate_unpurified`.
    """
    if cfg.rounds == 0:
        raise ValueError("rounds = 0 has no purification step; use rate_unpurified")
    tm = timing(cfg)
    denom = cfg.code.n * 2**cfg.rounds * (cfg.rounds / 2.0 + 1.0) * tm.t0_s
    return heralding_probability(cfg) * pump_success_probability(cfg) / denom


def evaluate(cfg: ProtocolConfig) -> SweepResult:
    """Evaluate one grid point, capturing failures in the row."""
    tm = timing(cfg)
    base = SweepResult(
        code_label=cfg.code.label,
        family=cfg.code.family,
        rounds=cfg.rounds,
        tau_c_s=cfg.hardware.memory_coherence_s,
        one_minus_t=1.0 - cfg.hardware.local_transmission,
        total_distance_km=cfg.total_distance_km,
        segment_km=cfg.segment_km,
        t_wait_s=tm.t_purify_s if cfg.code.family == "repetition" else tm.t_half_s,
    )
    try:
        f = cfg.raw_fidelity()
        f_final = final_fidelity(cfg)
        p0 = heralding_probability(cfg)
        p_k = pump_success_probability(cfg)
        rate = rate_purified(cfg) if cfg.rounds > 0 else rate_unpurified(cfg)
    except (ValueError, ArithmeticError) as exc:
        return replace(base, error=str(exc))
    return replace(base, f=f, f_final=f_final, p0=p0, p_k=p_k, rate_per_memory_hz=rate)


def with_fidelity(cfg: ProtocolConfig, f: float) -> ProtocolConfig:
    """Copy of ``cfg`` pinned to a direct raw fidelity, channel geometry kept."""
    att = cfg.channel.attenuation_length_km if cfg.channel is not None else cfg.attenuation_km
    return replace(cfg, fidelity=f, channel=None, attenuation_km=att)


def operating_point(cfg: ProtocolConfig, target_f_final: float) -> OperatingPoint:
    """Smallest raw fidelity whose final fidelity meets the target.

    F_final is monotone in the raw F, so bisection over (1/2, 1) to an
    absolute tolerance of 1e-4 finds the boundary.  When even F -> 1 misses
    the target, the point is infeasible and the best achievable final
    fidelity is reported instead.
    """
    if not 0.0 < target_f_final < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target_f_final}")
    hi = _F_HI
    f_at_hi = final_fidelity(with_fidelity(cfg, hi))
    if f_at_hi < target_f_final:
        return OperatingPoint(False, None, evaluate(with_fidelity(cfg, hi)), f_at_hi)
    lo = _F_LO
    if final_fidelity(with_fidelity(cfg, lo)) >= target_f_final:
        hi = lo
    while hi - lo > _F_TOL:
        mid = 0.5 * (lo + hi)
        if final_fidelity(with_fidelity(cfg, mid)) >= target_f_final:
            hi = mid
        else:
            lo = mid
    return OperatingPoint(True, hi, evaluate(with_fidelity(cfg, hi)), f_at_hi)


def sweep(configs: Sequence[ProtocolConfig], max_workers: int | None = None) -> list[SweepResult]:
    """Evaluate a grid of operating points, order-preserving.

    ``max_workers`` > 1 fans the grid out over a thread pool; results are
    merged back by index so the output order never depends on scheduling.
    """
    configs = list(configs)
    if max_workers is not None and max_workers > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(evaluate, configs))
    return [evaluate(c) for c in configs]
