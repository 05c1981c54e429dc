"""Declarative experiment sweeps over the error families.

A sweep is described by an ``ExperimentSpec`` (algorithm, error family,
averaging, master seed) and produces ``ResultRow`` records ready for CSV
or JSON emission.  Determinism contract: the same spec (including
``master_seed``) yields byte-identical output files at any degree of
parallelism; every random draw comes from a substream derived from
(master seed, experiment id, grid index, realization index), never from
scheduling order.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Sequence, Union

import numpy as np

from .algorithms import (
    GroverSpec,
    ShorSpec,
    algorithm_noise_kernels,
    build_grover,
    build_shor,
    decoherence_point,
    final_probabilities,
    grover_unitaries,
    shor_success,
    shor_unitaries,
)
from .channels import BITFLIP, PHASEFLIP, ErrorModel
from .errors import SizeLimitError
from .gates import circuit_apply, circuit_unitary
from .interference import ibits, interference_unitary
from .linalg import basis_state

PREFIX_SUBSETS = "prefix"
ALL_SUBSETS = "all"

# chunk size for parallel realization batches; fixed so that chunking (and
# therefore results) cannot depend on the worker count
REALIZATION_CHUNK = 32


def default_theta_grid() -> tuple:
    """Systematic sweep grid: [0, pi/2] with 65 points (pi/4 on-grid)."""
    return tuple(np.linspace(0.0, math.pi / 2, 65))


def default_epsilon_grid() -> tuple:
    """Random sweep grid: [0, pi] with 33 points."""
    return tuple(np.linspace(0.0, math.pi, 33))


def default_probability_grid() -> tuple:
    """Decoherence sweep grid: [0, 1] with 21 points (0.5 on-grid)."""
    return tuple(np.linspace(0.0, 1.0, 21))


def default_realizations(algorithm) -> int:
    if isinstance(algorithm, GroverSpec):
        return 1000 if algorithm.n == 4 else 100
    return {2: 5000, 3: 1000}.get(algorithm.L, 100)


@dataclass(frozen=True)
class SystematicErrors:
    """Every Hadamard angle set to the same theta, one value per grid point."""

    thetas: tuple

    def __post_init__(self):
        _check_grid(self.thetas, "theta")
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))


@dataclass(frozen=True)
class RandomErrors:
    """Angles drawn uniformly from pi/4 +/- eps/2 (QFT phase offsets from
    +/- eps/2), averaged over ``realizations`` independent draws."""

    epsilons: tuple
    realizations: int

    def __post_init__(self):
        _check_grid(self.epsilons, "epsilon")
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if self.realizations < 1:
            raise ValueError("need at least one realization")


@dataclass(frozen=True)
class DecoherenceErrors:
    """Bit- or phase-flip errors after the initial layer's Hadamard gates."""

    kind: str
    probabilities: tuple
    n_f_values: tuple
    subset_policy: str = ALL_SUBSETS

    def __post_init__(self):
        if self.kind not in (BITFLIP, PHASEFLIP):
            raise ValueError(f"unknown error kind {self.kind!r}")
        _check_grid(self.probabilities, "probability")
        object.__setattr__(
            self, "probabilities", tuple(float(p) for p in self.probabilities)
        )
        object.__setattr__(self, "n_f_values", tuple(int(v) for v in self.n_f_values))
        if not self.n_f_values or any(v < 1 for v in self.n_f_values):
            raise ValueError("n_f values must be positive")
        if self.subset_policy not in (PREFIX_SUBSETS, ALL_SUBSETS):
            raise ValueError(f"unknown subset policy {self.subset_policy!r}")


def _check_grid(grid, name):
    if len(grid) == 0:
        raise ValueError(f"empty {name} grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"{name} grid must be strictly increasing")


@dataclass(frozen=True)
class Outputs:
    pa: bool = True
    au: bool = True
    success: bool = True


@dataclass(frozen=True)
class ExperimentSpec:
    algorithm: Union[GroverSpec, ShorSpec]
    error_family: Union[SystematicErrors, RandomErrors, DecoherenceErrors]
    average_over_alpha: bool = False
    master_seed: int = 0
    outputs: Outputs = field(default_factory=Outputs)

    def __post_init__(self):
        if self.average_over_alpha and not isinstance(self.algorithm, GroverSpec):
            raise ValueError("alpha averaging only applies to Grover search")
        if self.average_over_alpha and isinstance(self.error_family, DecoherenceErrors):
            raise ValueError("decoherence sweeps run at a fixed marked item")
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master seed must fit in 64 bits")

    @property
    def n(self) -> int:
        return self.algorithm.n


@dataclass(frozen=True)
class ResultRow:
    """One sweep point.  ``n_samples`` counts the values averaged into the
    row (realizations, marked items, or qubit subsets); ``success_stderr``
    is the sample standard deviation over realizations divided by
    sqrt(n_samples) and zero for deterministic sweeps."""

    sweep_value: float
    n: int
    n_f: int | None
    interference_pa: float | None
    interference_au: float | None
    ibits_pa: float | None
    ibits_au: float | None
    success: float | None
    success_stderr: float
    n_samples: int
    seed: int


RESULT_COLUMNS = [f.name for f in fields(ResultRow)]


@dataclass(frozen=True)
class RandomAngleSampler:
    """Derives one independent RNG substream per (grid point, realization).

    The stream seed is (master_seed, sha256(experiment_id), grid_index,
    realization_index), so draws are independent of scheduling and worker
    count.  Within a realization the angles are drawn in circuit order:
    all Hadamard angles first, then (Shor only) the QFT phase offsets.
    """

    master_seed: int
    experiment_id: str

    def stream(self, grid_index: int, realization: int) -> np.random.Generator:
        digest = hashlib.sha256(self.experiment_id.encode()).digest()
        tag = int.from_bytes(digest[:8], "big")
        seq = np.random.SeedSequence(
            entropy=[self.master_seed, tag, grid_index, realization]
        )
        return np.random.default_rng(seq)


def _algorithm_id(algorithm) -> str:
    if isinstance(algorithm, GroverSpec):
        return f"grover:n={algorithm.n}:alpha={algorithm.alpha}:k={algorithm.iterations}"
    return f"shor:L={algorithm.L}:R={algorithm.R}:a={algorithm.a}"


# ---------------------------------------------------------------------------
# single-point evaluation shared by the systematic and random sweeps


def _grover_point(algorithm, thetas, alphas, outputs):
    """Mean interference/success over ``alphas`` at one angle assignment."""
    i_pa = i_au = success = None
    acc = {"pa": 0.0, "au": 0.0, "s": 0.0}
    for alpha in alphas:
        spec = replace(algorithm, alpha=alpha)
        full, rest = build_grover(spec, thetas)
        if outputs.pa:
            acc["pa"] += interference_unitary(circuit_unitary(full)).value
        if outputs.au:
            acc["au"] += interference_unitary(circuit_unitary(rest)).value
        if outputs.success:
            psi = circuit_apply(full, basis_state(1 << spec.n))
            acc["s"] += abs(psi[alpha]) ** 2
    count = len(alphas)
    if outputs.pa:
        i_pa = acc["pa"] / count
    if outputs.au:
        i_au = acc["au"] / count
    if outputs.success:
        success = acc["s"] / count
    return i_pa, i_au, success


def _shor_point(algorithm, thetas, deltas, ideal, outputs):
    full, rest = build_shor(algorithm, thetas, deltas)
    i_pa = i_au = success = None
    if outputs.pa:
        i_pa = interference_unitary(circuit_unitary(full)).value
    if outputs.au:
        i_au = interference_unitary(circuit_unitary(rest)).value
    if outputs.success:
        success = shor_success(ideal, final_probabilities(full))
    return i_pa, i_au, success


def _alphas(spec: ExperimentSpec):
    if not isinstance(spec.algorithm, GroverSpec):
        return ()
    if spec.average_over_alpha:
        return tuple(range(1 << spec.algorithm.n))
    return (spec.algorithm.alpha,)


def _shor_ideal(algorithm) -> np.ndarray:
    full, _ = build_shor(algorithm)
    return final_probabilities(full)


def _angle_counts(algorithm):
    if isinstance(algorithm, GroverSpec):
        n, k = algorithm.n, algorithm.iterations
        return n + 2 * n * k, 0
    m = 2 * algorithm.L
    return 2 * m, m * (m - 1) // 2


# ---------------------------------------------------------------------------
# systematic sweep


def _systematic_task(args):
    spec, theta = args
    algo = spec.algorithm
    n_thetas, _ = _angle_counts(algo)
    thetas = [theta] * n_thetas
    if isinstance(algo, GroverSpec):
        return _grover_point(algo, thetas, _alphas(spec), spec.outputs)
    ideal = _shor_ideal(algo) if spec.outputs.success else None
    return _shor_point(algo, thetas, None, ideal, spec.outputs)


def run_systematic_sweep(spec: ExperimentSpec, parallel: int = 1) -> list:
    """One row per theta; every Hadamard angle (Shor: QFT Hadamards too)
    is set to the grid value, QFT phases stay unperturbed."""
    family = spec.error_family
    if not isinstance(family, SystematicErrors):
        raise ValueError("spec does not describe a systematic sweep")
    tasks = [(spec, theta) for theta in family.thetas]
    results = _map_ordered(_systematic_task, tasks, parallel)
    n_samples = max(1, len(_alphas(spec)))
    return [
        _make_row(spec, theta, None, i_pa, i_au, success, 0.0, n_samples)
        for theta, (i_pa, i_au, success) in zip(family.thetas, results)
    ]


# ---------------------------------------------------------------------------
# random sweep


def _random_task(args):
    spec, grid_index, eps, lo, hi = args
    algo = spec.algorithm
    sampler = RandomAngleSampler(spec.master_seed, f"random:{_algorithm_id(algo)}")
    n_thetas, n_deltas = _angle_counts(algo)
    ideal = None
    if isinstance(algo, ShorSpec) and spec.outputs.success:
        ideal = _shor_ideal(algo)
    out = []
    for realization in range(lo, hi):
        rng = sampler.stream(grid_index, realization)
        thetas = rng.uniform(math.pi / 4 - eps / 2, math.pi / 4 + eps / 2, n_thetas)
        if isinstance(algo, GroverSpec):
            out.append(_grover_point(algo, thetas, _alphas(spec), spec.outputs))
        else:
            deltas = rng.uniform(-eps / 2, eps / 2, n_deltas)
            out.append(_shor_point(algo, thetas, deltas, ideal, spec.outputs))
    return out


def run_random_sweep(spec: ExperimentSpec, parallel: int = 1) -> list:
    """One row per epsilon, averaged over ``realizations`` random draws
    (each alpha-averaged first when requested)."""
    family = spec.error_family
    if not isinstance(family, RandomErrors):
        raise ValueError("spec does not describe a random-error sweep")
    n_r = family.realizations
    tasks = []
    for g, eps in enumerate(family.epsilons):
        for lo in range(0, n_r, REALIZATION_CHUNK):
            tasks.append((spec, g, eps, lo, min(lo + REALIZATION_CHUNK, n_r)))
    chunks = _map_ordered(_random_task, tasks, parallel)

    per_grid = [[] for _ in family.epsilons]
    for task, chunk in zip(tasks, chunks):
        per_grid[task[1]].extend(chunk)
    rows = []
    for eps, values in zip(family.epsilons, per_grid):
        i_pa = _mean_or_none([v[0] for v in values])
        i_au = _mean_or_none([v[1] for v in values])
        succ = _mean_or_none([v[2] for v in values])
        stderr = 0.0
        if succ is not None and n_r > 1:
            stderr = float(np.std([v[2] for v in values], ddof=1)) / math.sqrt(n_r)
        rows.append(_make_row(spec, eps, None, i_pa, i_au, succ, stderr, n_r))
    return rows


def _mean_or_none(values):
    return None if values[0] is None else float(np.mean(values))


# ---------------------------------------------------------------------------
# decoherence sweep


@functools.lru_cache(maxsize=1)
def _decoherence_setup(algorithm):
    """Exact unitaries plus noise kernels; cached so the n_f tasks of one
    sweep (and repeated sweeps over the same algorithm) share the setup."""
    if isinstance(algorithm, GroverSpec):
        unitaries = grover_unitaries(algorithm)
    else:
        unitaries = shor_unitaries(algorithm)
    return unitaries, algorithm_noise_kernels(unitaries)


def _decoherence_task(args):
    spec, n_f = args
    algo = spec.algorithm
    family = spec.error_family
    unitaries, kernels = _decoherence_setup(algo)
    ideal = None if isinstance(algo, GroverSpec) else np.abs(unitaries.full[:, 0]) ** 2
    walsh_qubits = unitaries.walsh_qubits
    if family.subset_policy == PREFIX_SUBSETS:
        subsets = [tuple(walsh_qubits[:n_f])]
    else:
        subsets = [tuple(c) for c in itertools.combinations(walsh_qubits, n_f)]

    outputs = spec.outputs
    per_p = []
    for p in family.probabilities:
        acc_pa, acc_au, acc_s = [], [], []
        for subset in subsets:
            point = decoherence_point(unitaries, ErrorModel(family.kind, p, subset), kernels)
            acc_pa.append(point.interference_pa.value)
            acc_au.append(point.interference_au.value)
            if outputs.success:
                if isinstance(algo, GroverSpec):
                    acc_s.append(float(point.probabilities[algo.alpha]))
                else:
                    acc_s.append(shor_success(ideal, point.probabilities))
        per_p.append(
            (
                float(np.mean(acc_pa)) if outputs.pa else None,
                float(np.mean(acc_au)) if outputs.au else None,
                float(np.mean(acc_s)) if outputs.success else None,
                len(subsets),
            )
        )
    return per_p


def run_decoherence_sweep(spec: ExperimentSpec, parallel: int = 1) -> list:
    """One row per (p, n_f).  Shor rows average over qubit subsets of the
    first register according to the subset policy; Grover uses the policy
    as given (prefix = first n_f qubits).

    Every worker process holds one cached (unitaries, kernels) setup of
    size O(4^n); budget memory accordingly when combining ``parallel``
    with 12-qubit instances."""
    family = spec.error_family
    if not isinstance(family, DecoherenceErrors):
        raise ValueError("spec does not describe a decoherence sweep")
    algo = spec.algorithm
    max_n_f = algo.n if isinstance(algo, GroverSpec) else 2 * algo.L
    if any(v > max_n_f for v in family.n_f_values):
        raise ValueError(
            f"n_f values {family.n_f_values} exceed the {max_n_f} qubits "
            "of the initial Hadamard layer"
        )
    tasks = [(spec, n_f) for n_f in family.n_f_values]
    results = _map_ordered(_decoherence_task, tasks, parallel)
    rows = []
    for ip, p in enumerate(family.probabilities):
        for n_f, per_p in zip(family.n_f_values, results):
            i_pa, i_au, succ, n_subsets = per_p[ip]
            rows.append(_make_row(spec, p, n_f, i_pa, i_au, succ, 0.0, n_subsets))
    return rows


# ---------------------------------------------------------------------------
# CUE baseline


@dataclass(frozen=True)
class SampleStatistics:
    mean: float
    stddev: float
    samples: int


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with the
    R-diagonal phases folded back in."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def cue_baseline(n: int, samples: int, seed: int = 0) -> SampleStatistics:
    """Mean and spread of the interference of Haar-random unitaries."""
    if n > 8:
        raise SizeLimitError("CUE baseline capped at 8 qubits")
    if samples < 10:
        raise ValueError("need at least 10 samples")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=[seed, 0xC0E]))
    values = [interference_unitary(haar_unitary(1 << n, rng)).value for _ in range(samples)]
    return SampleStatistics(
        mean=float(np.mean(values)), stddev=float(np.std(values, ddof=1)), samples=samples
    )


# ---------------------------------------------------------------------------
# result emission


def _make_row(spec, sweep_value, n_f, i_pa, i_au, success, stderr, n_samples):
    return ResultRow(
        sweep_value=float(sweep_value),
        n=spec.n,
        n_f=n_f,
        interference_pa=i_pa,
        interference_au=i_au,
        ibits_pa=None if i_pa is None else ibits(max(i_pa, 0.0)),
        ibits_au=None if i_au is None else ibits(max(i_au, 0.0)),
        success=success,
        success_stderr=float(stderr),
        n_samples=int(n_samples),
        seed=spec.master_seed,
    )


def _map_ordered(fn, tasks, parallel):
    if parallel <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(fn, tasks))


def _format_real(value) -> str:
    return "" if value is None else f"{value:.12g}"


def write_results(rows: Sequence[ResultRow], path, format: str = "csv") -> None:
    """Write rows as CSV (reals at 12 significant digits, missing fields
    empty) or as a JSON array of records with the same keys."""
    if format not in ("csv", "json"):
        raise ValueError(f"unknown output format {format!r}")
    if hasattr(path, "write"):
        _write_stream(rows, path, format)
        return
    with open(path, "w", newline="") as handle:
        _write_stream(rows, handle, format)


def _write_stream(rows, handle, format):
    if format == "csv":
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    _format_real(row.sweep_value),
                    row.n,
                    "" if row.n_f is None else row.n_f,
                    _format_real(row.interference_pa),
                    _format_real(row.interference_au),
                    _format_real(row.ibits_pa),
                    _format_real(row.ibits_au),
                    _format_real(row.success),
                    _format_real(row.success_stderr),
                    row.n_samples,
                    row.seed,
                ]
            )
    else:
        records = [
            {name: getattr(row, name) for name in RESULT_COLUMNS} for row in rows
        ]
        json.dump(records, handle, indent=1)
        handle.write("\n")


def read_results(path, format: str = "csv") -> list:
    """Parse a results file back into ``ResultRow`` records."""
    if format not in ("csv", "json"):
        raise ValueError(f"unknown output format {format!r}")
    with open(path, "r", newline="") as handle:
        if format == "json":
            records = json.load(handle)
            return [ResultRow(**record) for record in records]
        reader = csv.reader(handle)
        header = next(reader)
        if header != RESULT_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        rows = []
        for raw in reader:
            record = dict(zip(RESULT_COLUMNS, raw))
            rows.append(
                ResultRow(
                    sweep_value=float(record["sweep_value"]),
                    n=int(record["n"]),
                    n_f=None if record["n_f"] == "" else int(record["n_f"]),
                    interference_pa=_parse_real(record["interference_pa"]),
                    interference_au=_parse_real(record["interference_au"]),
                    ibits_pa=_parse_real(record["ibits_pa"]),
                    ibits_au=_parse_real(record["ibits_au"]),
                    success=_parse_real(record["success"]),
                    success_stderr=float(record["success_stderr"]),
                    n_samples=int(record["n_samples"]),
                    seed=int(record["seed"]),
                )
            )
        return rows


def _parse_real(text):
    return None if text == "" else float(text)
