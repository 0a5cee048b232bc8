"""Phase ledgers for multi-atom qubus encoding and homodyne readout.

A bright probe |beta> picks up a conditional phase from each atom it
visits: an atom in |0> rotates it by +theta_j/2, an atom in |1> by
-theta_j/2, where theta_j is the per-atom coupling angle.  Choosing the
angles makes the final probe phase a function of the atomic bit pattern;
a pattern ledger is "feasible" when every pattern is distinguishable
except the intended codeword pair (all zeros vs all ones), which must
stay degenerate so the measurement prepares the encoded superposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "QubusPlan",
    "Feasibility",
    "single_qubus_phases",
    "chained_qubus_phases",
    "feasibility",
    "phases_distinct",
    "homodyne_error",
    "min_beta",
]

_ENUM_LIMIT = 16   # exhaustive pattern enumeration cap
_PHASE_TOL = 1e-9  # phases closer than this (mod 2 pi) count as colliding


@dataclass(frozen=True)
class QubusPlan:
    """Probe-phase ledger of an n-atom encoding step.

    ``per_state_phases`` is a dict mapping the n-bit pattern string
    (leftmost char is atom 1) to the accumulated probe phase for the
    "single" scheme, or a list of n - 1 dicts keyed by the local two-bit
    pattern (b_j, b_j+1) for the "chained" scheme.
    """

    n: int
    theta_rad: float
    scheme: str
    per_state_phases: dict[str, float] | list[dict[str, float]]

    def __post_init__(self) -> None:
        if self.scheme not in ("single", "chained"):
            raise ValueError(f"scheme must be 'single' or 'chained', got {self.scheme!r}")
        # the codeword branch must stay unrotated
        if self.scheme == "single":
            for codeword in ("0" * self.n, "1" * self.n):
                if abs(self.per_state_phases[codeword]) > 1e-12:
                    raise ValueError(f"codeword {codeword} must carry phase 0")
        else:
            for ledger in self.per_state_phases:
                if abs(ledger["00"]) > 1e-12 or abs(ledger["11"]) > 1e-12:
                    raise ValueError("equal adjacent bits must carry phase 0")


class Feasibility(NamedTuple):
    """Single-qubus ledger verdict and its extreme accumulated phase."""

    feasible: bool
    max_phase_rad: float


def _check_n_theta(n: int, theta_rad: float) -> None:
    if not (isinstance(n, int) and n >= 2):
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if not theta_rad > 0.0:
        raise ValueError(f"theta_rad must be > 0, got {theta_rad}")


def _sgn(bit: str) -> int:
    return 1 if bit == "0" else -1


def single_qubus_phases(n: int, theta_rad: float) -> QubusPlan:
    """One probe visiting all n atoms with binary-weighted angles.

    Atom j < n couples with angle 2^(j-1) theta, atom n with angle
    -(2^(n-1) - 1) theta, so a pattern b accumulates

        phase(b) = (theta / 2) [sum_{j<n} sgn(b_j) 2^(j-1)
                                - sgn(b_n) (2^(n-1) - 1)]

    with sgn(0) = +1, sgn(1) = -1.  The two codewords 00...0 and 11...1
    land on phase 0 by construction.  Explicit ledgers are built for
    n <= 16 only.
    """
    _check_n_theta(n, theta_rad)
    if n > _ENUM_LIMIT:
        raise ValueError(f"explicit ledger limited to n <= {_ENUM_LIMIT}, got {n}")
    phases: dict[str, float] = {}
    for idx in range(2**n):
        b = format(idx, f"0{n}b")
        coeff = sum(_sgn(b[j]) * 2**j for j in range(n - 1))
        coeff -= _sgn(b[n - 1]) * (2 ** (n - 1) - 1)
        phases[b] = 0.5 * theta_rad * coeff
    return QubusPlan(n, theta_rad, "single", phases)


def chained_qubus_phases(n: int, theta_rad: float) -> QubusPlan:
    """n - 1 probes, each visiting one neighboring atom pair.

    Probe j couples atom j with angle (-1)^(j-1) theta and atom j+1 with
    the opposite angle, so its phase depends only on the local pattern:
    0 for equal neighbors, +/- theta for unequal ones.  The tuple of all
    probe phases separates every pattern except all-zeros vs all-ones.
    """
    _check_n_theta(n, theta_rad)
    ledgers: list[dict[str, float]] = []
    for j in range(1, n):
        angle = theta_rad if j % 2 == 1 else -theta_rad
        ledgers.append(
            {
                "00": 0.0,
                "01": angle,
                "10": -angle,
                "11": 0.0,
            }
        )
    return QubusPlan(n, theta_rad, "chained", ledgers)


def phases_distinct(n: int, theta_rad: float) -> bool:
    """Distinctness mod 2 pi of the single-qubus phases, codeword pair aside.

    Exhaustive for n <= 16.  Beyond that the verdict is analytic: every
    phase is an even multiple of theta/2 bounded by max_phase, so below the
    branch cut (max_phase < pi) distinct integer coefficients cannot wrap
    onto each other, while at max_phase = pi the two extreme patterns meet
    at +/- pi.
    """
    _check_n_theta(n, theta_rad)
    max_phase = (2 ** (n - 1) - 1) * theta_rad
    if n > _ENUM_LIMIT:
        return max_phase < math.pi
    phases = single_qubus_phases(n, theta_rad).per_state_phases
    two_pi = 2.0 * math.pi
    buckets: dict[int, list[str]] = {}
    modulus = int(round(two_pi / _PHASE_TOL))
    for pattern, phase in phases.items():
        key = int(round((phase % two_pi) / _PHASE_TOL)) % modulus
        buckets.setdefault(key, []).append(pattern)
    codewords = {"0" * n, "1" * n}
    for group in buckets.values():
        if len(group) > 1 and set(group) != codewords:
            return False
    return True


def feasibility(n: int, theta_rad: float) -> Feasibility:
    """Whether the single-qubus readout can work at all.

    Two conditions: the extreme accumulated phase
    max_phase = (2^(n-1) - 1) theta must not exceed pi (beyond that the
    probe wraps around phase space), and all non-codeword patterns must
    land on pairwise distinct phases mod 2 pi.  n = 2 with theta = pi is
    the textbook collision: max_phase equals pi yet the two middle
    patterns coincide at the branch cut.
    """
    _check_n_theta(n, theta_rad)
    max_phase = (2 ** (n - 1) - 1) * theta_rad
    feasible = max_phase <= math.pi and phases_distinct(n, theta_rad)
    return Feasibility(feasible, max_phase)


def homodyne_error(beta: float, theta_rad: float) -> float:
    """Misassignment probability of the x-quadrature phase readout.

    Neighboring probe states |beta e^(i phi)> differing by the minimal
    angle theta are separated in x = (a + a^dagger)/2 by at least
    beta (1 - cos theta) with quadrature spread 1/2, so thresholding
    midway errs with probability

        0.5 erfc(beta (1 - cos theta) / sqrt(2)).
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be > 0, got {beta}")
    if not theta_rad > 0.0:
        raise ValueError(f"theta_rad must be > 0, got {theta_rad}")
    return 0.5 * math.erfc(beta * (1.0 - math.cos(theta_rad)) / math.sqrt(2.0))


def min_beta(theta_rad: float, target_error: float) -> float:
    """Smallest probe amplitude with homodyne_error <= target_error.

    homodyne_error is strictly decreasing in beta from 1/2 toward 0, so
    the boundary is found by doubling then bisection (relative tolerance
    1e-9).
    """
    if not 0.0 < target_error < 0.5:
        raise ValueError(f"target_error must lie in (0, 1/2), got {target_error}")
    if not theta_rad > 0.0:
        raise ValueError(f"theta_rad must be > 0, got {theta_rad}")
    hi = 1.0
    while homodyne_error(hi, theta_rad) > target_error:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("no finite amplitude reaches the target error")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    while hi - lo > 1e-9 * hi:
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or homodyne_error(mid, theta_rad) > target_error:
            lo = mid
        else:
            hi = mid
    return hi
