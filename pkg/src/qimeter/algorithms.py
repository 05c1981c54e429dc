"""Grover search and Shor order-finding circuits, with error hooks.

Both algorithms open with a layer of Hadamard gates.  ``build_grover`` and
``build_shor`` return the full circuit together with the remainder after
that initial layer; the two views feed the "potentially available" versus
"actually used" interference measurements.  Decoherence strikes only the
initial layer: bit-flip or phase-flip errors after each of its Hadamard
gates, which keeps the Kraus-operator count at 2^n_f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import (
    BITFLIP,
    PHASEFLIP,
    ErrorModel,
    KrausChannel,
    apply_channel,
    layered_error_channel,
    sandwich,
)
from .gates import (
    Circuit,
    DiagonalPhaseGate,
    PermutationGate,
    PerturbedHadamard,
    circuit_apply,
    circuit_unitary,
    qft_circuit,
)
from .interference import (
    InterferenceReport,
    PauliNoiseKernel,
    interference_noise_then_unitary,
    pauli_noise_kernel,
)
from .linalg import basis_density, basis_state, identity


@dataclass(frozen=True)
class GroverSpec:
    """Search over n qubits for the single marked basis state ``alpha``."""

    n: int
    alpha: int
    k_override: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Grover search needs at least two qubits")
        if not 0 <= self.alpha < 1 << self.n:
            raise ValueError(f"marked item {self.alpha} outside 0..{(1 << self.n) - 1}")

    @property
    def iterations(self) -> int:
        return self.k_override if self.k_override is not None else grover_iteration_count(self.n)


@dataclass(frozen=True)
class ShorSpec:
    """Order finding for f(x) = a^x mod R on registers of 2L and L qubits."""

    L: int
    R: int
    a: int

    def __post_init__(self):
        if self.R < 2 or self.L != self.R.bit_length():
            raise ValueError(f"L={self.L} does not match floor(log2({self.R}))+1")
        if not 0 < self.a < self.R:
            raise ValueError(f"base a={self.a} outside 1..{self.R - 1}")
        if math.gcd(self.a, self.R) != 1:
            raise ValueError(f"base a={self.a} shares a factor with R={self.R}")

    @classmethod
    def for_modulus(cls, R: int, a: int) -> "ShorSpec":
        return cls(L=R.bit_length(), R=R, a=a)

    @property
    def n(self) -> int:
        return 3 * self.L

    @property
    def first_register(self) -> tuple:
        return tuple(range(2 * self.L))


def grover_iteration_count(n: int) -> int:
    """Optimal iteration count floor(pi / (4 arcsin(2^(-n/2))))."""
    if n < 2:
        raise ValueError("Grover search needs at least two qubits")
    return int(math.pi / (4.0 * math.asin(2.0 ** (-n / 2))))


def grover_oracle(n: int, alpha: int) -> DiagonalPhaseGate:
    """Sign flip of the marked item's amplitude."""
    signs = np.ones(1 << n, dtype=np.int64)
    signs[alpha] = -1
    return DiagonalPhaseGate(signs, tuple(range(n)))


def grover_zero_reflection(n: int) -> DiagonalPhaseGate:
    """Sign flip of the |0...0> amplitude."""
    signs = np.ones(1 << n, dtype=np.int64)
    signs[0] = -1
    return DiagonalPhaseGate(signs, tuple(range(n)))


def build_grover(
    spec: GroverSpec, hadamard_thetas: Sequence[float] | None = None
) -> tuple[Circuit, Circuit]:
    """Full Grover circuit and its remainder after the initial layer.

    The circuit is the initial Hadamard layer followed by ``k`` iterations
    of [oracle, layer, zero reflection, layer].  ``hadamard_thetas`` gives
    one angle per Hadamard position in that order (n + 2nk angles,
    default pi/4 everywhere).
    """
    n, k = spec.n, spec.iterations
    count = n + 2 * n * k
    if hadamard_thetas is None:
        hadamard_thetas = [math.pi / 4] * count
    hadamard_thetas = list(hadamard_thetas)
    if len(hadamard_thetas) != count:
        raise ValueError(
            f"expected {count} Hadamard angles (n + 2nk for n={n}, k={k}), "
            f"got {len(hadamard_thetas)}"
        )
    angles = iter(hadamard_thetas)

    def layer():
        return [PerturbedHadamard(next(angles), q) for q in range(n)]

    ops = layer()
    r1 = grover_oracle(n, spec.alpha)
    r2 = grover_zero_reflection(n)
    for _ in range(k):
        ops.append(r1)
        ops.extend(layer())
        ops.append(r2)
        ops.extend(layer())
    full = Circuit(n, tuple(ops))
    rest = Circuit(n, tuple(ops[n:]))
    return full, rest


def modexp_permutation(spec: ShorSpec) -> PermutationGate:
    """|x>|y> -> |x>|y XOR f(x)> with f(x) = a^x mod R."""
    L = spec.L
    table = np.empty(1 << spec.n, dtype=np.int64)
    f = np.array([pow(spec.a, x, spec.R) for x in range(1 << (2 * L))], dtype=np.int64)
    idx = np.arange(1 << spec.n, dtype=np.int64)
    x = idx >> L
    y = idx & ((1 << L) - 1)
    table[:] = (x << L) | (y ^ f[x])
    return PermutationGate(table, tuple(range(spec.n)))


def build_shor(
    spec: ShorSpec,
    hadamard_thetas: Sequence[float] | None = None,
    qft_phase_perturbations: Sequence[float] | None = None,
) -> tuple[Circuit, Circuit]:
    """Full Shor circuit and its remainder after the initial layer.

    Layout: Hadamard layer on the first register (2L gates), the modular
    exponentiation permutation, then the QFT on the first register.
    ``hadamard_thetas`` covers first the initial layer and then the QFT's
    own Hadamards (4L angles total); ``qft_phase_perturbations`` adds to
    the QFT's two-qubit phases (L(2L-1) values).
    """
    m = 2 * spec.L
    if hadamard_thetas is None:
        hadamard_thetas = [math.pi / 4] * (2 * m)
    hadamard_thetas = list(hadamard_thetas)
    if len(hadamard_thetas) != 2 * m:
        raise ValueError(f"expected {2 * m} Hadamard angles, got {len(hadamard_thetas)}")

    ops = [PerturbedHadamard(hadamard_thetas[q], q) for q in range(m)]
    ops.append(modexp_permutation(spec))
    qft = qft_circuit(m, qft_phase_perturbations, hadamard_thetas[m:])
    ops.extend(qft.ops)  # QFT targets 0..2L-1 embed directly
    full = Circuit(spec.n, tuple(ops))
    rest = Circuit(spec.n, tuple(ops[m:]))
    return full, rest


# ---------------------------------------------------------------------------
# decoherence during the initial Hadamard layer


@dataclass(frozen=True, eq=False)
class AlgorithmUnitaries:
    """Dense unitaries of an algorithm: full = rest @ walsh.

    ``walsh_qubits`` records which qubits received the initial Hadamards
    (all of them for Grover, the first register for Shor).
    """

    full: np.ndarray
    rest: np.ndarray
    walsh: np.ndarray
    walsh_qubits: tuple


@dataclass(frozen=True, eq=False)
class AlgorithmChannels:
    """Decohered algorithm: the two interference views plus the output state."""

    potentially_available: KrausChannel
    actually_used: KrausChannel
    final_state: np.ndarray


def grover_unitaries(
    spec: GroverSpec, hadamard_thetas: Sequence[float] | None = None
) -> AlgorithmUnitaries:
    full, rest = build_grover(spec, hadamard_thetas)
    walsh = Circuit(spec.n, full.ops[: spec.n])
    return AlgorithmUnitaries(
        full=circuit_unitary(full),
        rest=circuit_unitary(rest),
        walsh=circuit_unitary(walsh),
        walsh_qubits=tuple(range(spec.n)),
    )


def shor_unitaries(
    spec: ShorSpec,
    hadamard_thetas: Sequence[float] | None = None,
    qft_phase_perturbations: Sequence[float] | None = None,
) -> AlgorithmUnitaries:
    full, rest = build_shor(spec, hadamard_thetas, qft_phase_perturbations)
    walsh = Circuit(spec.n, full.ops[: 2 * spec.L])
    return AlgorithmUnitaries(
        full=circuit_unitary(full),
        rest=circuit_unitary(rest),
        walsh=circuit_unitary(walsh),
        walsh_qubits=spec.first_register,
    )


def decoherence_channels(unitaries: AlgorithmUnitaries, model: ErrorModel) -> AlgorithmChannels:
    """Explicit Kraus channels for errors striking the initial layer.

    Potentially available: walsh layer, then errors, then the remainder.
    Actually used: the same error operators and remainder, but without the
    initial Hadamards.  The final state is the PA channel applied to
    |0...0><0...0|.
    """
    if not set(model.affected) <= set(unitaries.walsh_qubits):
        raise ValueError(
            f"affected qubits {model.affected} outside the initial Hadamard layer "
            f"{unitaries.walsh_qubits}"
        )
    dim = unitaries.full.shape[0]
    n = dim.bit_length() - 1
    errors = layered_error_channel(n, model)
    pa = sandwich(errors, unitaries.walsh, unitaries.rest)
    au = sandwich(errors, identity(dim), unitaries.rest)
    final = apply_channel(pa, basis_density(dim))
    return AlgorithmChannels(potentially_available=pa, actually_used=au, final_state=final)


@dataclass(frozen=True, eq=False)
class DecoherencePoint:
    """One (p, affected-subset) evaluation of a decohered algorithm."""

    interference_pa: InterferenceReport
    interference_au: InterferenceReport
    probabilities: np.ndarray


def algorithm_noise_kernels(unitaries: AlgorithmUnitaries):
    """Precomputed row statistics of (full, rest) for decoherence sweeps."""
    return pauli_noise_kernel(unitaries.full), pauli_noise_kernel(unitaries.rest)


def decoherence_point(
    unitaries: AlgorithmUnitaries,
    model: ErrorModel,
    kernels: tuple[PauliNoiseKernel, PauliNoiseKernel] | None = None,
) -> DecoherencePoint:
    """Fast-path decoherence evaluation; requires an exact initial layer.

    Commuting each Pauli error through the exact Hadamard on its qubit
    turns the PA channel into noise-then-unitary form with the error kind
    swapped (sigma_z H = H sigma_x), so both measures reduce to
    ``interference_noise_then_unitary``.  Matches ``decoherence_channels``
    + ``interference_kraus`` to machine precision.
    """
    if not set(model.affected) <= set(unitaries.walsh_qubits):
        raise ValueError(
            f"affected qubits {model.affected} outside the initial Hadamard layer "
            f"{unitaries.walsh_qubits}"
        )
    k_full, k_rest = kernels if kernels is not None else algorithm_noise_kernels(unitaries)
    flipped = ErrorModel(
        BITFLIP if model.kind == PHASEFLIP else PHASEFLIP, model.p, model.affected
    )
    i_pa = interference_noise_then_unitary(None, flipped, kernel=k_full)
    i_au = interference_noise_then_unitary(None, model, kernel=k_rest)
    return DecoherencePoint(
        interference_pa=i_pa,
        interference_au=i_au,
        probabilities=decoherent_final_probabilities(unitaries.full, model),
    )


def decoherent_final_probabilities(u_full: np.ndarray, model: ErrorModel) -> np.ndarray:
    """Output distribution of the decohered algorithm started in |0...0>.

    Bit flips leave the post-layer state invariant, so the distribution is
    the exact algorithm's.  Phase flips turn it into a mixture over
    columns of the full unitary indexed by the flipped-qubit masks.
    """
    dim = u_full.shape[0]
    n = dim.bit_length() - 1
    if model.kind == BITFLIP:
        return np.abs(u_full[:, 0]) ** 2
    probs = np.zeros(dim)
    n_f = len(model.affected)
    for subset in range(1 << n_f):
        hit = [model.affected[b] for b in range(n_f) if (subset >> b) & 1]
        weight = model.p ** len(hit) * (1.0 - model.p) ** (n_f - len(hit))
        if weight == 0.0:
            continue
        column = 0
        for q in hit:
            column |= 1 << (n - 1 - q)
        probs += weight * np.abs(u_full[:, column]) ** 2
    return probs


# ---------------------------------------------------------------------------
# success probabilities


def grover_success(rho_f: np.ndarray, alpha: int) -> float:
    """Weight of the final state on the marked item, clipped to [0, 1]."""
    value = float(np.asarray(rho_f)[alpha, alpha].real)
    return min(max(value, 0.0), 1.0)


def shor_success(ideal: np.ndarray, observed: np.ndarray) -> float:
    """One minus half the total-variation distance between distributions."""
    ideal = np.asarray(ideal, dtype=float)
    observed = np.asarray(observed, dtype=float)
    if ideal.shape != observed.shape:
        raise ValueError(f"length mismatch: {ideal.shape} vs {observed.shape}")
    for name, dist in (("ideal", ideal), ("observed", observed)):
        total = float(np.sum(dist))
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"{name} distribution sums to {total}, not 1")
    value = 1.0 - 0.5 * float(np.sum(np.abs(ideal - observed)))
    return min(max(value, 0.0), 1.0)


def final_probabilities(circuit: Circuit) -> np.ndarray:
    """Computational-basis distribution of the circuit applied to |0...0>."""
    psi = circuit_apply(circuit, basis_state(1 << circuit.n))
    return np.abs(psi) ** 2


def register1_marginal(probabilities: np.ndarray, spec: ShorSpec) -> np.ndarray:
    """Distribution over the first register, summing out the second."""
    return probabilities.reshape(1 << (2 * spec.L), 1 << spec.L).sum(axis=1)
