"""The interference measure of quantum channels.

Three equivalent evaluation routes are provided:

* ``interference_superoperator`` - brute force on the N^2 x N^2 propagator
  P: value = sum_{i,k,l} |P[ii,kl]|^2 - sum_{i,k} |P[ii,kk]|^2.  Small-N
  test oracle.
* ``interference_kraus`` - operator-sum form.  The production path builds,
  for each row i, the Gram matrix G_i = V_i V_i† of the stacked Kraus rows
  (L x L instead of N x N), so the quartic term costs O(N^2 L^2) instead
  of O(N^3 L).  ``interference_kraus_naive`` keeps the literal triple sum
  as an independent oracle.
* ``interference_unitary`` - the unitary special case, N - sum |U|^4.

For channels of the form {U · E_l} with E_l a layered Pauli error
(diagonal sigma_z products or XOR-permutation sigma_x products), the
measure collapses to two O(N) dot products against row statistics of U
that are precomputed with fast Walsh-Hadamard transforms
(``pauli_noise_kernel`` / ``interference_noise_then_unitary``). That is
what makes the 12-qubit decoherence sweeps affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import BITFLIP, ErrorModel, KrausChannel
from .errors import SizeLimitError, ValidationError
from .linalg import UNITARY_ACCEPT_TOL, check_unitary

# floating-point cancellation guard: values in [-1e-9, 0] count as zero
NEGATIVE_CLAMP = -1e-9

# brute-force routes are capped at 6 qubits
ORACLE_MAX_DIM = 64

KRAUS_COMPLETENESS_TOL = 1e-6


def ibits(value: float) -> float:
    """Interference in logarithmic units, log2(value); 0 maps to -inf."""
    if value < NEGATIVE_CLAMP:
        raise ValueError(f"interference value {value} is negative")
    value = max(value, 0.0)
    return math.log2(value) if value > 0.0 else float("-inf")


@dataclass(frozen=True)
class InterferenceReport:
    value: float
    ibits: float

    @classmethod
    def from_value(cls, value: float) -> "InterferenceReport":
        return cls(value=float(value), ibits=ibits(float(value)))


def interference_unitary(u: np.ndarray, tol: float = UNITARY_ACCEPT_TOL) -> InterferenceReport:
    """Interference of a unitary propagator: N - sum_{i,k} |U[i,k]|^4."""
    u = np.asarray(u)
    if not check_unitary(u, tol):
        raise ValidationError("matrix is not unitary within tolerance")
    n = u.shape[0]
    a2 = np.abs(u) ** 2
    return InterferenceReport.from_value(n - float(np.sum(a2 * a2)))


def _require_complete(ch: KrausChannel) -> None:
    defect = ch.completeness_defect()
    if defect > KRAUS_COMPLETENESS_TOL:
        raise ValidationError(
            f"Kraus completeness defect {defect:.2e} exceeds {KRAUS_COMPLETENESS_TOL}"
        )


def interference_kraus(ch: KrausChannel) -> InterferenceReport:
    """Operator-sum interference via the row-Gram path.

    The quartic term sums trace(G_i^2) over rows i, where
    G_i = V_i V_i† and V_i stacks row i of every Kraus operator.
    """
    _require_complete(ch)
    ops = ch.ops
    num, dim = ops.shape[0], ch.dim
    t2 = float(np.sum(np.sum(np.abs(ops) ** 2, axis=0) ** 2))
    t1 = 0.0
    # chunk the row axis so row batches and Gram batches stay small
    chunk = max(1, (1 << 22) // max(1, num * max(dim, num)))
    rows = np.ascontiguousarray(ops.transpose(1, 0, 2))  # (dim, L, N)
    for lo in range(0, dim, chunk):
        v = rows[lo : lo + chunk]
        g = np.matmul(v, v.conj().transpose(0, 2, 1))
        t1 += float(np.sum(np.abs(g) ** 2))
    return InterferenceReport.from_value(t1 - t2)


def interference_kraus_naive(ch: KrausChannel) -> InterferenceReport:
    """Literal triple-sum evaluation of the operator-sum form (test oracle)."""
    if ch.dim > ORACLE_MAX_DIM:
        raise SizeLimitError(f"naive path capped at dimension {ORACLE_MAX_DIM}")
    _require_complete(ch)
    g = np.einsum("lik,lim->ikm", ch.ops, ch.ops.conj())
    t1 = float(np.sum(np.abs(g) ** 2))
    diag = np.einsum("ikk->ik", g).real
    t2 = float(np.sum(diag**2))
    return InterferenceReport.from_value(t1 - t2)


def superoperator_from_kraus(ch: KrausChannel) -> np.ndarray:
    """Dense propagator P = sum_l E_l (x) E_l*, acting on row-major vec(rho)."""
    if ch.dim > ORACLE_MAX_DIM:
        raise SizeLimitError(f"superoperator path capped at dimension {ORACLE_MAX_DIM}")
    p = np.zeros((ch.dim**2, ch.dim**2), dtype=complex)
    for op in ch.ops:
        p += np.kron(op, op.conj())
    return p


def apply_superoperator(p: np.ndarray, rho: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    return (p @ rho.reshape(-1)).reshape(dim, dim)


def interference_superoperator(p: np.ndarray) -> InterferenceReport:
    """Brute-force interference of a propagator given as an N^2 x N^2 array."""
    p = np.asarray(p)
    dim = math.isqrt(p.shape[0])
    if dim * dim != p.shape[0] or p.shape[0] != p.shape[1]:
        raise ValueError(f"expected an N^2 x N^2 array, got {p.shape}")
    if dim > ORACLE_MAX_DIM:
        raise SizeLimitError(f"superoperator path capped at dimension {ORACLE_MAX_DIM}")
    t = p.reshape(dim, dim, dim, dim)
    d = np.einsum("iikl->ikl", t)
    t1 = float(np.sum(np.abs(d) ** 2))
    diag = np.einsum("ikk->ik", d)
    t2 = float(np.sum(np.abs(diag) ** 2))
    return InterferenceReport.from_value(t1 - t2)


# ---------------------------------------------------------------------------
# structured fast path for layered Pauli noise followed by a fixed unitary


def _wht_last(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis."""
    dtype = complex if np.iscomplexobj(a) else float
    a = np.array(a, dtype=dtype, copy=True)
    shape = a.shape
    n = shape[-1]
    rows = a.reshape(-1, n)
    h = 1
    while h < n:
        # in-place butterflies on views of the owned buffer
        view = rows.reshape(rows.shape[0], n // (2 * h), 2, h)
        top = view[:, :, 0, :] + view[:, :, 1, :]
        view[:, :, 1, :] = view[:, :, 0, :] - view[:, :, 1, :]
        view[:, :, 0, :] = top
        h *= 2
    return rows.reshape(shape)


def _popcount(values: np.ndarray) -> np.ndarray:
    out = np.zeros(values.shape, dtype=np.int64)
    v = values.astype(np.int64)
    while np.any(v):
        out += v & 1
        v >>= 1
    return out


@dataclass(frozen=True, eq=False)
class PauliNoiseKernel:
    """Row statistics of a unitary U, precomputed for noise sweeps.

    With A = |U|^2 and row transforms taken over the XOR group:

    * ``fa2`` - sum_i WHT[A_i]^2, per frequency
    * ``autocorr`` - sum_i (XOR autocorrelation of A_i), per shift
    * ``q`` - WHT of sum_i |XOR autocorrelation of row U_i|^2
    * ``sum_a2`` - sum A^2 (the unitary's own quartic term)

    Every (error probability, qubit subset) evaluation is then a pair of
    O(N) dot products against these vectors.
    """

    dim: int
    sum_a2: float
    fa2: np.ndarray
    autocorr: np.ndarray
    q: np.ndarray


def pauli_noise_kernel(u: np.ndarray) -> PauliNoiseKernel:
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    a = np.abs(u) ** 2
    fa = _wht_last(a)
    fa2 = np.sum(fa * fa, axis=0)
    autocorr = _wht_last(fa2) / dim
    fb = _wht_last(u)
    cc = _wht_last(np.abs(fb) ** 2) / dim  # complex row autocorrelations are real
    q = _wht_last(np.sum(cc * cc, axis=0))
    return PauliNoiseKernel(
        dim=dim,
        sum_a2=float(np.sum(a * a)),
        fa2=fa2,
        autocorr=autocorr,
        q=q,
    )


def _error_mask(affected, n: int) -> int:
    mask = 0
    for q in affected:
        if q < 0 or q >= n:
            raise ValueError(f"affected qubit {q} outside register of size {n}")
        mask |= 1 << (n - 1 - q)
    return mask


def interference_noise_then_unitary(
    u: np.ndarray | None,
    model: ErrorModel,
    kernel: PauliNoiseKernel | None = None,
) -> InterferenceReport:
    """Interference of the channel {U · E_l}: layered Pauli errors, then U.

    Equals ``interference_kraus`` of ``sandwich(layered_error_channel(n,
    model), identity, U)`` but runs in O(N log N) after the one-off kernel
    precomputation (O(N^2 log N)).  Pass ``kernel=pauli_noise_kernel(u)``
    to amortize across many (p, subset) evaluations.
    """
    if kernel is None:
        if u is None:
            raise ValueError("need either the unitary or its precomputed kernel")
        kernel = pauli_noise_kernel(u)
    dim = kernel.dim
    n = dim.bit_length() - 1
    mask = _error_mask(model.affected, n)
    pc = _popcount(np.arange(dim) & mask)
    weights = ((1.0 - 2.0 * model.p) ** 2) ** pc
    if model.kind == BITFLIP:
        # sigma_x products act as XOR permutations of the input basis
        value = float(weights @ (kernel.q - kernel.fa2)) / dim
    else:
        # sigma_z products act as diagonal sign patterns
        value = float(weights @ kernel.autocorr) - kernel.sum_a2
    return InterferenceReport.from_value(value)
