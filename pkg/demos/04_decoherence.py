"""Bit-flip versus phase-flip decoherence during the first Hadamard layer.

Each affected qubit suffers a Pauli error with probability p right after
its initial Hadamard.  Two curiosities reproduced here:

* bit flips leave the uniform superposition invariant, so the success
  probability never moves - yet the measured interference can drop all
  the way to zero (the "working algorithm with zero potentially
  available interference");
* phase flips destroy the algorithm, and at p = 1 the (fully coherent)
  circuit interferes destructively: Grover's success lands *below* the
  classical 1/N guess.
"""

from qimeter import (
    DecoherenceErrors,
    ExperimentSpec,
    GroverSpec,
    ShorSpec,
    run_decoherence_sweep,
)

GRID = tuple(i / 10 for i in range(11))

print("== Grover n=4, alpha=2, all four qubits affected ==")
for kind in ("bitflip", "phaseflip"):
    spec = ExperimentSpec(
        GroverSpec(4, 2),
        DecoherenceErrors(kind, GRID, (4,), "prefix"),
    )
    rows = run_decoherence_sweep(spec)
    print(f"-- {kind} --")
    print(f"{'p':>5} {'I_pa':>8} {'I_au':>8} {'success':>9}")
    for row in rows:
        print(
            f"{row.sweep_value:5.2f} {row.interference_pa:8.4f} "
            f"{row.interference_au:8.4f} {row.success:9.6f}"
        )
print("classical baseline for n=4 is 1/16 = 0.0625; note phaseflip S(p=1) below it.")
print()

print("== Shor R=3 (n=6), errors on the first register, averaged over subsets ==")
for kind in ("bitflip", "phaseflip"):
    spec = ExperimentSpec(
        ShorSpec.for_modulus(3, 2),
        DecoherenceErrors(kind, (0.0, 0.25, 0.5), (2, 4), "all"),
    )
    rows = run_decoherence_sweep(spec)
    print(f"-- {kind} --")
    print(f"{'p':>5} {'n_f':>4} {'I_pa':>9} {'I_au':>9} {'success':>9}")
    for row in rows:
        print(
            f"{row.sweep_value:5.2f} {row.n_f:4d} {row.interference_pa:9.4f} "
            f"{row.interference_au:9.4f} {row.success:9.6f}"
        )
print("bit flips: success pinned at 1 while interference drops (but never to 0);")
print("phase flips on the whole first register drive I_au to exactly 0 at p = 1/2.")
print()

print("== number theory matters: R=7 at n=9, phase flips on all six layer qubits ==")
for a in (3, 6):
    period = next(r for r in range(1, 7) if pow(a, r, 7) == 1)
    spec = ExperimentSpec(
        ShorSpec.for_modulus(7, a),
        DecoherenceErrors("phaseflip", tuple(i / 5 for i in range(6)), (6,), "all"),
    )
    rows = run_decoherence_sweep(spec)
    divides = "divides" if (1 << 6) % period == 0 else "does not divide"
    print(f"a={a} (period {period} {divides} 64):",
          "  ".join(f"S({r.sweep_value:.1f})={r.success:.3f}" for r in rows))
print("a broad-peaked reference overlaps the scrambled output, so success")
print("rebounds at large p; a delta-peaked reference decays to zero instead.")
