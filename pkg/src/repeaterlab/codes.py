"""Error-correction layer: logical error rates of the memory encoding.

Each half of a distributed pair is stored in an [n, 1, d] block code and
the dominant noise is dephasing, so decoding reduces to a classical
majority-style vote: a block decodes wrongly when more than (d - 1)/2 of
its qubits have flipped.  Supported families are bit-repetition codes
(d = n) and CSS codes (Steane 1996; Bacon 2006; the Golay code, 1949).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bell_algebra import BellDiagonal

__all__ = [
    "Code",
    "code_catalog",
    "logical_error_prob",
    "pair_no_error_prob",
    "effective_coefficients",
    "css_effective_qubit_error",
]


@dataclass(frozen=True)
class Code:
    """An [n, k, d] block code protecting one logical qubit (k = 1)."""

    n: int
    k: int
    d: int
    family: str  # "repetition" or "css"

    def __post_init__(self) -> None:
        if self.k != 1:
            raise ValueError(f"only single-logical-qubit codes are supported, got k={self.k}")
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got n={self.n}, d={self.d}")
        if self.d % 2 == 0:
            raise ValueError(f"majority decoding needs odd d, got d={self.d}")
        if self.family not in ("repetition", "css"):
            raise ValueError(f"unknown code family {self.family!r}")
        if self.family == "repetition" and self.d != self.n:
            raise ValueError(f"repetition codes have d = n, got n={self.n}, d={self.d}")

    @property
    def label(self) -> str:
        return f"[{self.n},{self.k},{self.d}]"

    @property
    def t(self) -> int:
        """Number of correctable errors per block."""
        return (self.d - 1) // 2


def code_catalog() -> tuple[Code, ...]:
    """All supported codes, unencoded memory first."""
    return (
        Code(1, 1, 1, "repetition"),
        Code(3, 1, 3, "repetition"),
        Code(7, 1, 7, "repetition"),
        Code(51, 1, 51, "repetition"),
        Code(7, 1, 3, "css"),
        Code(25, 1, 5, "css"),
        Code(23, 1, 7, "css"),
    )


def logical_error_prob(code: Code, q_eff: float) -> float:
    """Block decoding failure probability Q_n.

    With i.i.d. qubit error probability q_eff, bounded-distance decoding
    fails when (d + 1)/2 or more qubits err:

        Q_n = sum_{j=(d+1)/2}^{n} C(n, j) q^j (1 - q)^(n - j).
    """
    if not 0.0 <= q_eff <= 1.0:
        raise ValueError(f"q_eff must lie in [0, 1], got {q_eff}")
    q = q_eff
    total = 0.0
    # sum smallest terms first: j near n is tiny for q < 1/2
    for j in range(code.n, (code.d + 1) // 2 - 1, -1):
        total += math.comb(code.n, j) * q**j * (1.0 - q) ** (code.n - j)
    return min(total, 1.0)


def pair_no_error_prob(q_logical: float) -> float:
    """Probability P_n that an encoded pair carries no net logical flip.

    Each half fails independently with probability Q; equal flips on both
    halves cancel on the pair, so P_n = (1 - Q)^2 + Q^2.
    """
    if not 0.0 <= q_logical <= 1.0:
        raise ValueError(f"q_logical must lie in [0, 1], got {q_logical}")
    return (1.0 - q_logical) ** 2 + q_logical**2


def effective_coefficients(fidelity: float, p_pair: float) -> BellDiagonal:
    """Bell-diagonal coefficients of a stored encoded pair.

    The raw pair is a phi+/psi+ mixture with weight ``fidelity`` on phi+;
    a net logical flip (probability 1 - p_pair) moves phi+ -> phi- and
    psi+ -> psi-:

        (a, b, c, d) = (P F, (1 - P) F, P (1 - F), (1 - P)(1 - F)).
    """
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {fidelity}")
    if not 0.0 <= p_pair <= 1.0:
        raise ValueError(f"p_pair must lie in [0, 1], got {p_pair}")
    f = fidelity
    p = p_pair
    return BellDiagonal(p * f, (1.0 - p) * f, p * (1.0 - f), (1.0 - p) * (1.0 - f))


def css_effective_qubit_error(q_m_half: float, q_g: float, f_k: float) -> tuple[float, bool]:
    """Per-qubit error rate feeding a CSS block, with saturation flag.

    Budget per stored qubit per swap level: three memory half-windows,
    two noisy gates, and the infidelity of the purified pair it rides on:

        q_eff = 3 q_m(t/2) + 2 q_g + (1 - F_k).

    The linear budget is a small-error estimate and can exceed 1 for poor
    parameters; it is then clamped to 1 and flagged.
    """
    if not 0.0 <= q_m_half <= 1.0:
        raise ValueError(f"q_m_half must lie in [0, 1], got {q_m_half}")
    if not 0.0 <= q_g <= 1.0:
        raise ValueError(f"q_g must lie in [0, 1], got {q_g}")
    if not 0.0 <= f_k <= 1.0:
        raise ValueError(f"f_k must lie in [0, 1], got {f_k}")
    q_eff = 3.0 * q_m_half + 2.0 * q_g + (1.0 - f_k)
    if q_eff > 1.0:
        return 1.0, True
    return q_eff, False
