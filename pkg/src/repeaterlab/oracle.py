"""Brute-force cross-checks for the Bell-diagonal recursions.

Nothing here shares code with the closed forms in :mod:`bell_algebra` or
:mod:`codes`: purification and swapping are simulated as explicit few-qubit
density-matrix circuits, and block decoding failure is summed by exhaustive
enumeration over error patterns.  Tests freeze values produced by this
module and hold the fast paths to them.

Qubit order is big-endian: qubit 0 is the most significant bit of the
computational index.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bell_algebra import BellDiagonal, PurifyOutcome, purify_imperfect_exact
from .codes import Code

__all__ = [
    "DensityMatrix",
    "GateErrorVariant",
    "VariantReport",
    "apply_dephasing",
    "apply_noisy_two_qubit_gate",
    "bell_diagonal_projection",
    "simulate_purification_round",
    "simulate_swapping",
    "enumerate_logical_error",
    "match_gate_variant",
]

_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIGENVALUE_FLOOR = -1e-10
_MATCH_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# sqrt(i X) rotations of the recurrence protocol (Deutsch et al. 1996):
# U on the source-A side, its conjugate on the source-B side.
_U_A = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=complex) / np.sqrt(2.0)
_U_B = _U_A.conj()

# columns: phi+, phi-, psi+, psi- in the big-endian computational basis
_BELL = np.array(
    [
        [1.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 1.0, -1.0],
        [1.0, -1.0, 0.0, 0.0],
    ],
    dtype=complex,
) / np.sqrt(2.0)


class GateErrorVariant(enum.Enum):
    """Placement and Pauli content of the two-qubit gate error channel."""

    ZZ_BEFORE = "zz_before"
    ZZ_AFTER = "zz_after"
    ZCXT_BEFORE = "z_control_x_target_before"
    ZCXT_AFTER = "z_control_x_target_after"


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix on at most four qubits.

    Construction asserts Hermiticity, unit trace, and an eigenvalue floor,
    so every channel application re-certifies physicality.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        dim = m.shape[0]
        if dim not in (2, 4, 8, 16):
            raise ValueError(f"dimension must be 2^m with m <= 4, got {dim}")
        if np.abs(m - m.conj().T).max() > _HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise ValueError(f"trace must be 1, got {np.trace(m)}")
        if np.linalg.eigvalsh(m).min() < _EIGENVALUE_FLOOR:
            raise ValueError(f"negative eigenvalue below floor: {np.linalg.eigvalsh(m).min()}")

    @property
    def num_qubits(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    @classmethod
    def from_bell_diagonal(cls, s: BellDiagonal) -> "DensityMatrix":
        """Two-qubit Bell-diagonal state; requires a normalized input."""
        if abs(s.total() - 1.0) > 1e-9:
            raise ValueError(f"state must be normalized, coefficients sum to {s.total()}")
        return cls(_BELL @ np.diag(s.as_tuple()).astype(complex) @ _BELL.conj().T)


def _single(op: np.ndarray, qubit: int, m: int) -> np.ndarray:
    """Embed a one-qubit operator at position ``qubit`` of an m-qubit register."""
    if not 0 <= qubit < m:
        raise ValueError(f"qubit index {qubit} out of range for {m} qubits")
    full = np.ones((1, 1), dtype=complex)
    for i in range(m):
        full = np.kron(full, op if i == qubit else _I2)
    return full


def _cnot(control: int, target: int, m: int) -> np.ndarray:
    dim = 2**m
    u = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        cbit = (j >> (m - 1 - control)) & 1
        jj = j ^ (cbit << (m - 1 - target))
        u[jj, j] = 1.0
    return u


def _cz(control: int, target: int, m: int) -> np.ndarray:
    dim = 2**m
    diag = np.ones(dim, dtype=complex)
    for j in range(dim):
        if (j >> (m - 1 - control)) & 1 and (j >> (m - 1 - target)) & 1:
            diag[j] = -1.0
    return np.diag(diag)


def _check_pair(control: int, target: int, m: int) -> None:
    if control == target:
        raise ValueError("control and target must differ")
    for name, idx in (("control", control), ("target", target)):
        if not 0 <= idx < m:
            raise ValueError(f"{name} index {idx} out of range for {m} qubits")


def _dephase_raw(rho: np.ndarray, qubit: int, q: float, m: int) -> np.ndarray:
    z = _single(_Z, qubit, m)
    return (1.0 - q) * rho + q * (z @ rho @ z)


def _pauli_pair_raw(
    rho: np.ndarray, control: int, target: int, q: float, m: int, variant: GateErrorVariant
) -> np.ndarray:
    # independent flips: Z on the control and (Z or X) on the target,
    # each with probability q
    if variant in (GateErrorVariant.ZZ_BEFORE, GateErrorVariant.ZZ_AFTER):
        kt = _single(_Z, target, m)
    else:
        kt = _single(_X, target, m)
    kc = _single(_Z, control, m)
    rho = (1.0 - q) * rho + q * (kc @ rho @ kc)
    return (1.0 - q) * rho + q * (kt @ rho @ kt)


def _noisy_gate_raw(
    rho: np.ndarray,
    control: int,
    target: int,
    q_g: float,
    gate: str,
    variant: GateErrorVariant,
    m: int,
) -> np.ndarray:
    if gate == "CNOT":
        u = _cnot(control, target, m)
    elif gate == "CZ":
        u = _cz(control, target, m)
    else:
        raise ValueError(f"gate must be 'CZ' or 'CNOT', got {gate!r}")
    before = variant in (GateErrorVariant.ZZ_BEFORE, GateErrorVariant.ZCXT_BEFORE)
    if before:
        rho = _pauli_pair_raw(rho, control, target, q_g, m, variant)
    rho = u @ rho @ u.conj().T
    if not before:
        rho = _pauli_pair_raw(rho, control, target, q_g, m, variant)
    return rho


def apply_dephasing(rho: DensityMatrix, qubit: int, q: float) -> DensityMatrix:
    """Phase-flip channel (1 - q) rho + q Z rho Z on one qubit."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    m = rho.num_qubits
    if not 0 <= qubit < m:
        raise ValueError(f"qubit index {qubit} out of range for {m} qubits")
    return DensityMatrix(_dephase_raw(rho.matrix, qubit, q, m))


def apply_noisy_two_qubit_gate(
    rho: DensityMatrix,
    control: int,
    target: int,
    q_g: float,
    gate: str = "CNOT",
    variant: GateErrorVariant = GateErrorVariant.ZCXT_AFTER,
) -> DensityMatrix:
    """Ideal CZ or CNOT composed with per-qubit Pauli error channels.

    Each participating qubit flips independently with probability q_g:
    Z on the control and, per the variant, Z or X on the target; the
    channel acts before or after the unitary as the variant name says.
    """
    if not 0.0 <= q_g < 0.5:
        raise ValueError(f"q_g must lie in [0, 1/2), got {q_g}")
    m = rho.num_qubits
    _check_pair(control, target, m)
    return DensityMatrix(_noisy_gate_raw(rho.matrix, control, target, q_g, gate, variant, m))


def _bell_project(rho4: np.ndarray) -> BellDiagonal:
    coeffs = np.real(np.diag(_BELL.conj().T @ rho4 @ _BELL))
    return BellDiagonal(*(float(x) for x in coeffs))


def bell_diagonal_projection(rho: DensityMatrix) -> tuple[BellDiagonal, float]:
    """Bell-basis diagonal of a two-qubit state plus the discarded weight.

    The twirl keeps the four diagonal coefficients in the (phi+, phi-,
    psi+, psi-) basis; the Frobenius norm of the off-diagonal residual is
    returned as a diagnostic (zero iff the state was already
    Bell-diagonal, so the projection is idempotent).
    """
    if rho.matrix.shape[0] != 4:
        raise ValueError("Bell projection needs a two-qubit state")
    in_bell = _BELL.conj().T @ rho.matrix @ _BELL
    residual = in_bell - np.diag(np.diag(in_bell))
    return _bell_project(rho.matrix), float(np.linalg.norm(residual))


def simulate_purification_round(
    s: BellDiagonal, q_g: float, variant: GateErrorVariant = GateErrorVariant.ZCXT_AFTER
) -> PurifyOutcome:
    """One purification round as an explicit 16x16 circuit.

    Two copies of ``s`` on pairs (0,1) and (2,3); sqrt(iX) rotations on the
    A side (qubits 0, 2), conjugate rotations on the B side (1, 3); noisy
    CNOTs 0 -> 2 and 1 -> 3; qubits 2 and 3 measured in the computational
    basis keeping the even-parity branches; surviving pair Bell-projected.
    """
    if not 0.0 <= q_g < 0.5:
        raise ValueError(f"q_g must lie in [0, 1/2), got {q_g}")
    pair = DensityMatrix.from_bell_diagonal(s).matrix
    rho = np.kron(pair, pair)

    for qubit, u2 in ((0, _U_A), (1, _U_B), (2, _U_A), (3, _U_B)):
        u = _single(u2, qubit, 4)
        rho = u @ rho @ u.conj().T
    rho = _noisy_gate_raw(rho, 0, 2, q_g, "CNOT", variant, 4)
    rho = _noisy_gate_raw(rho, 1, 3, q_g, "CNOT", variant, 4)

    kept = np.zeros((4, 4), dtype=complex)
    for b2, b3 in ((0, 0), (1, 1)):
        proj = _single(_projector(b2), 2, 4) @ _single(_projector(b3), 3, 4)
        branch = proj @ rho @ proj
        # trace out the measured pair (qubits 2, 3)
        kept += branch.reshape(4, 4, 4, 4).trace(axis1=1, axis2=3)
    p = float(np.trace(kept).real)
    if p <= 0.0:
        raise ArithmeticError("postselection kept zero weight")
    return PurifyOutcome(_bell_project(kept / p), p)


def _projector(bit: int) -> np.ndarray:
    v = np.zeros(2, dtype=complex)
    v[bit] = 1.0
    return np.outer(v, v)


def simulate_swapping(s: BellDiagonal) -> BellDiagonal:
    """Entanglement swapping of two copies of ``s`` as an explicit circuit.

    Pairs (0,1) and (2,3); the middle station holds qubits 1 and 2 and
    performs a Bell measurement (CNOT 1 -> 2, X-measure 1, Z-measure 2).
    Each outcome's Pauli correction is applied to qubit 3, the branches are
    averaged, and the remaining pair (0, 3) is Bell-projected.
    """
    pair = DensityMatrix.from_bell_diagonal(s).matrix
    rho = np.kron(pair, pair)
    u = _cnot(1, 2, 4)
    rho = u @ rho @ u.conj().T

    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    minus = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    x_proj = {0: np.outer(plus, plus.conj()), 1: np.outer(minus, minus.conj())}
    corrections = {
        (0, 0): _I2,
        (1, 0): _Z,
        (0, 1): _X,
        (1, 1): _Z @ _X,
    }

    out = np.zeros((4, 4), dtype=complex)
    for (xm, zm), corr in corrections.items():
        proj = _single(x_proj[xm], 1, 4) @ _single(_projector(zm), 2, 4)
        branch = proj @ rho @ proj.conj().T
        c = _single(corr, 3, 4)
        branch = c @ branch @ c.conj().T
        # trace out measured qubits 1 and 2
        r = branch.reshape(2, 2, 2, 2, 2, 2, 2, 2)
        out += np.einsum("amnibmnj->aibj", r).reshape(4, 4)
    return _bell_project(out)


def enumerate_logical_error(code: Code, q: float) -> float:
    """Decoding failure probability by exhaustive error-pattern enumeration.

    Walks all 2^n i.i.d. flip patterns and adds up those with more than
    (d - 1)/2 flips.  Refuses n > 15 (32768 patterns is the ceiling).
    """
    if code.n > 15:
        raise ValueError(f"enumeration is limited to n <= 15, got n={code.n}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    total = 0.0
    for pattern in range(2**code.n):
        w = pattern.bit_count()
        if w > code.t:
            total += q**w * (1.0 - q) ** (code.n - w)
    return total


@dataclass(frozen=True)
class VariantReport:
    """Deviation of each gate-error placement from the closed-form round."""

    rows: tuple[tuple[GateErrorVariant, float], ...]

    @property
    def matching(self) -> tuple[GateErrorVariant, ...]:
        return tuple(v for v, dev in self.rows if dev <= _MATCH_TOL)

    def __str__(self) -> str:
        lines = [f"{v.value:32s} max deviation {dev:.3e}" for v, dev in self.rows]
        lines.append("matching: " + (", ".join(v.value for v in self.matching) or "none"))
        return "\n".join(lines)


def _default_samples() -> list[tuple[BellDiagonal, float]]:
    states = [
        BellDiagonal(0.9, 0.05, 0.03, 0.02),
        BellDiagonal(0.75, 0.1, 0.1, 0.05),
        BellDiagonal(0.95, 0.0, 0.05, 0.0),
        BellDiagonal(0.6, 0.2, 0.15, 0.05),
    ]
    gates = [1e-3, 1e-2, 0.1, 0.3]
    return list(itertools.product(states, gates))


def match_gate_variant(
    samples: Sequence[tuple[BellDiagonal, float]] | None = None,
) -> VariantReport:
    """Identify which error placement reproduces the closed-form round.

    For every variant, simulate one purification round on each sample and
    record the worst absolute deviation of the output coefficients and the
    success probability from :func:`purify_imperfect_exact`.
    """
    pts: Iterable[tuple[BellDiagonal, float]] = samples if samples is not None else _default_samples()
    pts = list(pts)
    if not pts:
        raise ValueError("need at least one (state, q_g) sample")
    rows = []
    for variant in GateErrorVariant:
        worst = 0.0
        for s, q_g in pts:
            sim = simulate_purification_round(s, q_g, variant)
            ref = purify_imperfect_exact(s, q_g)
            dev = max(
                abs(x - y) for x, y in zip(sim.state.as_tuple(), ref.state.as_tuple())
            )
            dev = max(dev, abs(sim.success_prob - ref.success_prob))
            worst = max(worst, dev)
        rows.append((variant, worst))
    return VariantReport(tuple(rows))
