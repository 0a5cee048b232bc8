"""Elementary channel and hardware error models for a hybrid quantum repeater.

Entanglement between neighboring stations is generated by a bright coherent
probe (a "qubus") that interacts dispersively with one memory qubit at each
end and is measured homodyne after the lossy fiber (Ladd et al., New J. Phys.
8, 184 (2006); van Loock et al., PRL 96, 240501 (2006)).  Fiber loss turns
the probe into a dephasing channel on the pair, which sets both the raw
fidelity of the distributed state and the heralding probability.

All probabilities returned here are plain floats; structured parameters are
frozen dataclasses validated on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ChannelParams",
    "HardwareParams",
    "transmittance",
    "initial_fidelity",
    "success_probability",
    "gate_error_prob",
    "memory_error_prob",
]

#: Default fiber attenuation length in km (0.17 dB/km telecom fiber).
ATTENUATION_LENGTH_KM = 25.5

#: Default signal velocity in fiber, m/s.
FIBER_SPEED_M_PER_S = 2.0e8


@dataclass(frozen=True)
class ChannelParams:
    """Optical channel between two neighboring repeater stations.

    Attributes
    ----------
    segment_length_km
        Station spacing l > 0.
    attenuation_length_km
        Fiber attenuation length, default 25.5 km.
    qubus_strength
        Coherent probe amplitude alpha >= 0.
    interaction_angle_rad
        Dispersive interaction angle theta in (0, pi).
    """

    segment_length_km: float
    qubus_strength: float
    interaction_angle_rad: float
    attenuation_length_km: float = ATTENUATION_LENGTH_KM

    def __post_init__(self) -> None:
        if not self.segment_length_km > 0.0:
            raise ValueError(f"segment_length_km must be > 0, got {self.segment_length_km}")
        if not self.attenuation_length_km > 0.0:
            raise ValueError(f"attenuation_length_km must be > 0, got {self.attenuation_length_km}")
        if self.qubus_strength < 0.0:
            raise ValueError(f"qubus_strength must be >= 0, got {self.qubus_strength}")
        if not 0.0 < self.interaction_angle_rad < math.pi:
            raise ValueError(
                f"interaction_angle_rad must lie in (0, pi), got {self.interaction_angle_rad}"
            )

    def transmittance(self) -> float:
        return transmittance(self.segment_length_km, self.attenuation_length_km)

    def fidelity(self) -> float:
        return initial_fidelity(
            self.qubus_strength, self.interaction_angle_rad, self.transmittance()
        )


@dataclass(frozen=True)
class HardwareParams:
    """Station-local hardware quality.

    Attributes
    ----------
    local_transmission
        Transmission T in (0, 1] of the local gate interface; T = 1 is a
        perfect gate.
    memory_coherence_s
        Memory dephasing time tau_c > 0 in seconds.  math.inf is accepted
        and gives vanishing memory error.
    fiber_speed_m_per_s
        Classical/quantum signal velocity, default 2e8 m/s.
    """

    local_transmission: float
    memory_coherence_s: float
    fiber_speed_m_per_s: float = FIBER_SPEED_M_PER_S

    def __post_init__(self) -> None:
        if not 0.0 < self.local_transmission <= 1.0:
            raise ValueError(f"local_transmission must lie in (0, 1], got {self.local_transmission}")
        if not self.memory_coherence_s > 0.0:
            raise ValueError(f"memory_coherence_s must be > 0, got {self.memory_coherence_s}")
        if not self.fiber_speed_m_per_s > 0.0:
            raise ValueError(f"fiber_speed_m_per_s must be > 0, got {self.fiber_speed_m_per_s}")

    def gate_error(self) -> float:
        return gate_error_prob(self.local_transmission)


def transmittance(length_km: float, attenuation_length_km: float = ATTENUATION_LENGTH_KM) -> float:
    """Fiber transmittance eta = exp(-l / L_att) over ``length_km``."""
    if length_km < 0.0:
        raise ValueError(f"length_km must be >= 0, got {length_km}")
    if not attenuation_length_km > 0.0:
        raise ValueError(f"attenuation_length_km must be > 0, got {attenuation_length_km}")
    return math.exp(-length_km / attenuation_length_km)

def initial_fidelity(alpha: float, theta_rad: float, eta: float) -> float:
    """Raw fidelity of one heralded entangled pair.

    Loss of the probe (transmittance eta) dephases the two-qubit state; the
    surviving coherence is exp(-(1 - eta) alpha^2 (1 - cos theta)), so

        F = (1 + exp(-(1 - eta) alpha^2 (1 - cos theta))) / 2.

    F = 1 exactly when nothing leaks: alpha = 0 or eta = 1.
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    return 0.5 * (1.0 + math.exp(-(1.0 - eta) * alpha * alpha * (1.0 - math.cos(theta_rad))))


def success_probability(fidelity: float, eta: float) -> float:
    """Heralding probability P0 of the dispersive entangling measurement.

    The unambiguous-discrimination window of the homodyne measurement gives

        P0 = 1 - (2F - 1)^(eta / (1 - eta)).

    Valid for F in (1/2, 1] and eta in (0, 1); a lossless channel (eta = 1)
    has no finite exponent and is rejected.
    """
    if not 0.5 < fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in (1/2, 1], got {fidelity}")
    if eta == 1.0:
        raise ValueError("eta = 1 is the lossless limit; P0 is undefined by this formula")
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1) for heralding, got {eta}")
    return 1.0 - (2.0 * fidelity - 1.0) ** (eta / (1.0 - eta))


def gate_error_prob(local_transmission: float) -> float:
    """Two-qubit gate error probability q_g from interface transmission T.

    The controlled-phase gate is implemented by the same dispersive probe
    run locally; imperfect transmission T of that loop dephases the gate:

        q_g = (1 - exp(-x)) / 2,   x = (pi / 2) (1 - T^2) / (sqrt(T) (1 + T)).

    T = 1 gives q_g = 0; q_g < 1/2 always.
    """
    t = local_transmission
    if not 0.0 < t <= 1.0:
        raise ValueError(f"local_transmission must lie in (0, 1], got {t}")
    x = 0.5 * math.pi * (1.0 - t * t) / (math.sqrt(t) * (1.0 + t))
    return 0.5 * (1.0 - math.exp(-x))


def memory_error_prob(elapsed_s: float, coherence_s: float) -> float:
    """Memory dephasing probability q_m(t) = (1 - exp(-t / tau_c)) / 2.

    Each stored qubit waits half of any classical-communication window, so
    callers price a window of length t as q_m(t / 2) per qubit; the two
    halves compose exactly:

        1 - q_m(t) = (1 - q_m(t/2))^2 + q_m(t/2)^2.
    """
    if elapsed_s < 0.0:
        raise ValueError(f"elapsed_s must be >= 0, got {elapsed_s}")
    if not coherence_s > 0.0:
        raise ValueError(f"coherence_s must be > 0, got {coherence_s}")
    return 0.5 * (1.0 - math.exp(-elapsed_s / coherence_s))
