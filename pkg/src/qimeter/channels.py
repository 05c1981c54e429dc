"""Kraus channels for bit-flip and phase-flip decoherence.

A channel is a stack of Kraus operators E_l with sum_l E_l† E_l = 1; it
acts on a density matrix as rho -> sum_l E_l rho E_l†.  The layered error
channel places independent single-qubit Pauli errors (probability p) on a
chosen subset of qubits, which yields 2^n_f Kraus operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError
from .linalg import MAX_DIM

BITFLIP = "bitflip"
PHASEFLIP = "phaseflip"

# Kraus-operator count cap for layered channels.
MAX_ERROR_QUBITS = 20


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A finite stack of Kraus operators, shape (num_ops, dim, dim)."""

    ops: np.ndarray

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise ValueError(f"expected a stack of square operators, got {ops.shape}")
        if ops.shape[0] == 0:
            raise ValueError("a channel needs at least one Kraus operator")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops.shape[1]

    def __len__(self) -> int:
        return self.ops.shape[0]

    def completeness_defect(self) -> float:
        """Max entrywise deviation of sum_l E_l† E_l from the identity."""
        s = np.einsum("lki,lkj->ij", self.ops.conj(), self.ops)
        return float(np.max(np.abs(s - np.eye(self.dim))))


@dataclass(frozen=True)
class ErrorModel:
    """Single-qubit Pauli errors of probability ``p`` on ``affected`` qubits."""

    kind: str
    p: float
    affected: tuple

    def __post_init__(self):
        if self.kind not in (BITFLIP, PHASEFLIP):
            raise ValueError(f"unknown error kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"error probability {self.p} outside [0, 1]")
        affected = tuple(self.affected)
        object.__setattr__(self, "affected", affected)
        if len(set(affected)) != len(affected):
            raise ValueError(f"duplicate qubits in {affected}")


def pauli_error_kraus(kind: str, p: float) -> KrausChannel:
    """Single-qubit channel {sqrt(1-p) I, sqrt(p) sigma}; zero-weight ops dropped."""
    model = ErrorModel(kind, p, (0,))
    return layered_error_channel(1, model)


def layered_error_channel(n: int, model: ErrorModel) -> KrausChannel:
    """Independent Pauli errors on ``model.affected`` within an n-qubit register.

    The 2^n_f operators are enumerated in binary order of the error subset:
    bit b of the operator index set <=> qubit ``affected[b]`` hit by the
    error.  Operators with zero weight (p = 0 or 1) are dropped.
    """
    affected = model.affected
    if any(q < 0 or q >= n for q in affected):
        raise ValueError(f"affected qubits {affected} outside register of size {n}")
    if len(affected) > MAX_ERROR_QUBITS:
        raise SizeLimitError(
            f"{len(affected)} error qubits exceed the {MAX_ERROR_QUBITS}-qubit cap"
        )
    dim = 1 << n
    if dim > MAX_DIM:
        raise SizeLimitError(f"2^{n} exceeds the {MAX_DIM}-dimensional cap")

    idx = np.arange(dim)
    n_f = len(affected)
    ops = []
    for subset in range(1 << n_f):
        hit = [affected[b] for b in range(n_f) if (subset >> b) & 1]
        weight = model.p ** len(hit) * (1.0 - model.p) ** (n_f - len(hit))
        if weight == 0.0:
            continue
        mask = 0
        for q in hit:
            mask |= 1 << (n - 1 - q)
        op = np.zeros((dim, dim), dtype=complex)
        if model.kind == BITFLIP:
            op[idx ^ mask, idx] = np.sqrt(weight)
        else:
            signs = 1.0 - 2.0 * (_popcount(idx & mask) & 1)
            op[idx, idx] = np.sqrt(weight) * signs
        ops.append(op)
    return KrausChannel(np.array(ops))


def sandwich(ch: KrausChannel, pre: np.ndarray, post: np.ndarray) -> KrausChannel:
    """Compose unitaries around every Kraus operator: E_l -> post · E_l · pre."""
    pre = np.asarray(pre, dtype=complex)
    post = np.asarray(post, dtype=complex)
    if pre.shape != (ch.dim, ch.dim) or post.shape != (ch.dim, ch.dim):
        raise ValueError(
            f"dimension mismatch: channel {ch.dim}, pre {pre.shape}, post {post.shape}"
        )
    return KrausChannel(np.matmul(post, np.matmul(ch.ops, pre)))


def apply_channel(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """rho -> sum_l E_l rho E_l†, summed in fixed operator order."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"dimension mismatch: channel {ch.dim}, rho {rho.shape}")
    tmp = np.matmul(ch.ops, rho)
    return np.einsum("lik,ljk->ij", tmp, ch.ops.conj())


def _popcount(values: np.ndarray) -> np.ndarray:
    out = np.zeros(values.shape, dtype=np.int64)
    v = values.astype(np.int64)
    while np.any(v):
        out += v & 1
        v >>= 1
    return out
