import math

import numpy as np
import pytest

from qimeter.algorithms import (
    GroverSpec,
    ShorSpec,
    build_grover,
    build_shor,
    decoherence_channels,
    decoherence_point,
    final_probabilities,
    grover_iteration_count,
    grover_oracle,
    grover_success,
    grover_unitaries,
    grover_zero_reflection,
    modexp_permutation,
    register1_marginal,
    shor_success,
    shor_unitaries,
)
from qimeter.channels import BITFLIP, PHASEFLIP, ErrorModel, apply_channel, layered_error_channel
from qimeter.gates import Circuit, circuit_apply, circuit_unitary
from qimeter.interference import interference_kraus, interference_unitary
from qimeter.linalg import basis_density, basis_state, check_unitary, density_from_state


class TestGroverIterationCount:
    @pytest.mark.parametrize("n, k", [(2, 1), (4, 3), (10, 25)])
    def test_known_counts(self, n, k):
        assert grover_iteration_count(n) == k

    def test_small_register_rejected(self):
        with pytest.raises(ValueError):
            grover_iteration_count(1)


class TestReflections:
    def test_oracle_diagonal(self):
        gate = grover_oracle(2, 3)
        np.testing.assert_array_equal(gate.signs, [1, 1, 1, -1])

    def test_oracle_single_qubit(self):
        np.testing.assert_array_equal(grover_oracle(1, 0).signs, [-1, 1])

    def test_zero_reflection_diagonal(self):
        np.testing.assert_array_equal(grover_zero_reflection(2).signs, [-1, 1, 1, 1])

    def test_involutions(self):
        for gate in (grover_oracle(2, 3), grover_zero_reflection(2)):
            u = circuit_unitary(Circuit(2, (gate, gate)))
            np.testing.assert_allclose(u, np.eye(4), atol=1e-15)


class TestBuildGrover:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_success_matches_closed_form(self, n):
        k = grover_iteration_count(n)
        closed = math.sin((2 * k + 1) * math.asin(2.0 ** (-n / 2))) ** 2
        for alpha in range(1 << n):
            full, _ = build_grover(GroverSpec(n, alpha))
            psi = circuit_apply(full, basis_state(1 << n))
            assert abs(abs(psi[alpha]) ** 2 - closed) < 1e-9

    def test_full_is_unitary(self):
        full, rest = build_grover(GroverSpec(4, 2))
        assert check_unitary(circuit_unitary(full), 1e-10)
        assert check_unitary(circuit_unitary(rest), 1e-10)

    def test_rest_excludes_initial_layer(self):
        spec = GroverSpec(3, 5)
        full, rest = build_grover(spec)
        assert len(full.ops) == len(rest.ops) + spec.n
        assert full.ops[spec.n :] == rest.ops

    def test_actually_used_interference_frozen_values(self):
        # frozen from two independent constructions (gate-wise application
        # and dense np.linalg.matrix_power); sits above the rough "about 4"
        # figure-level summary
        _, rest = build_grover(GroverSpec(4, 2))
        value = interference_unitary(circuit_unitary(rest)).value
        assert abs(value - 4.656615257263) < 1e-9

    def test_one_iteration_peak(self):
        _, rest = build_grover(GroverSpec(4, 2, k_override=1))
        value = interference_unitary(circuit_unitary(rest)).value
        target = 8 - 24 / 16
        assert abs(value - target) <= 0.05 * target
        assert abs(value - 6.5625) < 1e-12

    def test_interference_independent_of_alpha(self):
        values = []
        for alpha in range(8):
            full, _ = build_grover(GroverSpec(3, alpha))
            values.append(interference_unitary(circuit_unitary(full)).value)
        assert max(values) - min(values) < 1e-10

    def test_wrong_angle_count_rejected(self):
        with pytest.raises(ValueError):
            build_grover(GroverSpec(3, 0), [math.pi / 4] * 5)

    def test_marked_item_validated(self):
        with pytest.raises(ValueError):
            GroverSpec(2, 4)


class TestModexpPermutation:
    def test_period_two_function(self):
        spec = ShorSpec.for_modulus(3, 2)
        values = [pow(2, x, 3) for x in range(4)]
        assert values == [1, 2, 1, 2]
        gate = modexp_permutation(spec)
        for x in range(4):
            src = x << spec.L  # |x>|0>
            assert gate.table[src] == (x << spec.L) | values[x % 4]

    def test_factoring_fifteen_values(self):
        spec = ShorSpec.for_modulus(15, 7)
        f = [pow(7, x, 15) for x in range(4)]
        assert f == [1, 7, 4, 13]
        gate = modexp_permutation(spec)
        for x in range(4):
            assert gate.table[x << spec.L] == (x << spec.L) | f[x]

    def test_period_not_dividing_dimension(self):
        # order of 3 mod 7 is 6, which does not divide 2^6
        order = next(r for r in range(1, 7) if pow(3, r, 7) == 1)
        assert order == 6
        assert (1 << 6) % order != 0

    def test_xor_extension_is_involution_on_y(self):
        spec = ShorSpec.for_modulus(3, 2)
        gate = modexp_permutation(spec)
        np.testing.assert_array_equal(gate.table[gate.table], np.arange(1 << spec.n))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ShorSpec(L=3, R=3, a=2)
        with pytest.raises(ValueError):
            ShorSpec.for_modulus(15, 6)  # gcd(6, 15) != 1


class TestBuildShor:
    def test_l2_register_distribution(self):
        spec = ShorSpec.for_modulus(3, 2)
        full, _ = build_shor(spec)
        probs = final_probabilities(full)
        assert abs(probs.sum() - 1.0) < 1e-9
        reg1 = register1_marginal(probs, spec)
        expected = np.zeros(16)
        expected[0] = expected[8] = 0.5
        np.testing.assert_allclose(reg1, expected, atol=1e-9)

    def test_full_is_unitary(self):
        full, rest = build_shor(ShorSpec.for_modulus(3, 2))
        assert check_unitary(circuit_unitary(full), 1e-10)
        assert check_unitary(circuit_unitary(rest), 1e-10)

    def test_register_distribution_ignores_register_phases(self):
        spec = ShorSpec.for_modulus(3, 2)
        full, _ = build_shor(spec)
        psi = circuit_apply(full, basis_state(1 << spec.n))
        rng = np.random.default_rng(6)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 1 << (2 * spec.L)))
        shifted = psi * np.repeat(phases, 1 << spec.L)
        np.testing.assert_allclose(
            register1_marginal(np.abs(shifted) ** 2, spec),
            register1_marginal(np.abs(psi) ** 2, spec),
            atol=1e-12,
        )

    def test_actually_used_interference_grows(self):
        _, rest2 = build_shor(ShorSpec.for_modulus(3, 2))
        _, rest3 = build_shor(ShorSpec.for_modulus(7, 3))
        au2 = interference_unitary(circuit_unitary(rest2)).value
        au3 = interference_unitary(circuit_unitary(rest3)).value
        # QFT (x) identity after a permutation: I = N - 2^L exactly
        assert abs(au2 - 60.0) < 1e-9
        assert abs(au3 - 504.0) < 1e-9
        assert au3 > au2

    def test_wrong_parameter_lengths_rejected(self):
        spec = ShorSpec.for_modulus(3, 2)
        with pytest.raises(ValueError):
            build_shor(spec, [math.pi / 4] * 3)
        with pytest.raises(ValueError):
            build_shor(spec, None, [0.0] * 5)


class TestDecoherenceChannels:
    def test_zero_probability_single_kraus(self):
        uni = grover_unitaries(GroverSpec(3, 1))
        chans = decoherence_channels(uni, ErrorModel(BITFLIP, 0.0, (0, 1, 2)))
        assert len(chans.potentially_available) == 1
        assert len(chans.actually_used) == 1
        np.testing.assert_allclose(chans.potentially_available.ops[0], uni.full, atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0])
    def test_deterministic_channels_match_unitary_interference(self, p):
        uni = grover_unitaries(GroverSpec(3, 1))
        chans = decoherence_channels(uni, ErrorModel(PHASEFLIP, p, (0, 2)))
        for ch in (chans.potentially_available, chans.actually_used):
            assert len(ch) == 1
            diff = abs(
                interference_kraus(ch).value - interference_unitary(ch.ops[0]).value
            )
            assert diff < 1e-12

    def test_channels_trace_preserving(self):
        uni = shor_unitaries(ShorSpec.for_modulus(3, 2))
        chans = decoherence_channels(uni, ErrorModel(PHASEFLIP, 0.42, (0, 3)))
        assert chans.potentially_available.completeness_defect() <= 1e-9
        assert chans.actually_used.completeness_defect() <= 1e-9

    def test_bitflip_keeps_success(self):
        spec = GroverSpec(4, 2)
        uni = grover_unitaries(spec)
        exact = grover_success(density_from_state(uni.full[:, 0]), spec.alpha)
        for p in (0.2, 0.5, 0.9):
            chans = decoherence_channels(uni, ErrorModel(BITFLIP, p, (0, 1, 2, 3)))
            assert abs(grover_success(chans.final_state, spec.alpha) - exact) < 1e-9

    def test_bitflip_all_qubits_kills_pa_interference(self):
        uni = grover_unitaries(GroverSpec(4, 2))
        chans = decoherence_channels(uni, ErrorModel(BITFLIP, 0.5, (0, 1, 2, 3)))
        assert interference_kraus(chans.potentially_available).value <= 1e-6

    def test_affected_must_receive_hadamards(self):
        uni = shor_unitaries(ShorSpec.for_modulus(3, 2))
        with pytest.raises(ValueError):
            decoherence_channels(uni, ErrorModel(BITFLIP, 0.5, (5,)))

    def test_walsh_layer_state_invariant_under_bitflips(self):
        for uni in (
            grover_unitaries(GroverSpec(4, 0)),
            shor_unitaries(ShorSpec.for_modulus(3, 2)),
        ):
            dim = uni.full.shape[0]
            rho = uni.walsh @ basis_density(dim) @ uni.walsh.conj().T
            ch = layered_error_channel(
                dim.bit_length() - 1, ErrorModel(BITFLIP, 0.37, uni.walsh_qubits)
            )
            np.testing.assert_allclose(apply_channel(ch, rho), rho, atol=1e-10)


class TestDecoherencePoint:
    @pytest.mark.parametrize("kind", [BITFLIP, PHASEFLIP])
    @pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 1.0])
    def test_matches_explicit_channels_grover(self, kind, p):
        uni = grover_unitaries(GroverSpec(3, 1))
        for affected in [(0,), (0, 2), (0, 1, 2)]:
            model = ErrorModel(kind, p, affected)
            chans = decoherence_channels(uni, model)
            point = decoherence_point(uni, model)
            assert (
                abs(
                    interference_kraus(chans.potentially_available).value
                    - point.interference_pa.value
                )
                < 1e-9
            )
            assert (
                abs(
                    interference_kraus(chans.actually_used).value
                    - point.interference_au.value
                )
                < 1e-9
            )
            np.testing.assert_allclose(
                np.diag(chans.final_state).real, point.probabilities, atol=1e-12
            )

    def test_matches_explicit_channels_shor_l3(self):
        # nine-qubit instance: the fast path against the full Kraus build
        uni = shor_unitaries(ShorSpec.for_modulus(7, 3))
        model = ErrorModel(PHASEFLIP, 0.35, (1, 4))
        chans = decoherence_channels(uni, model)
        point = decoherence_point(uni, model)
        assert (
            abs(
                interference_kraus(chans.potentially_available).value
                - point.interference_pa.value
            )
            < 1e-8
        )
        assert (
            abs(interference_kraus(chans.actually_used).value - point.interference_au.value)
            < 1e-8
        )
        np.testing.assert_allclose(
            np.diag(chans.final_state).real, point.probabilities, atol=1e-12
        )

    def test_matches_explicit_channels_shor(self):
        uni = shor_unitaries(ShorSpec.for_modulus(3, 2))
        for kind, p, affected in [
            (BITFLIP, 0.4, (0, 1)),
            (PHASEFLIP, 0.5, (0, 1, 2, 3)),
            (PHASEFLIP, 0.15, (2,)),
        ]:
            model = ErrorModel(kind, p, affected)
            chans = decoherence_channels(uni, model)
            point = decoherence_point(uni, model)
            assert (
                abs(
                    interference_kraus(chans.potentially_available).value
                    - point.interference_pa.value
                )
                < 1e-9
            )
            assert (
                abs(
                    interference_kraus(chans.actually_used).value
                    - point.interference_au.value
                )
                < 1e-9
            )
            np.testing.assert_allclose(
                np.diag(chans.final_state).real, point.probabilities, atol=1e-12
            )


class TestSuccessMeasures:
    def test_grover_success_pure_marked_state(self):
        rho = basis_density(16, 5)
        assert grover_success(rho, 5) == 1.0

    def test_grover_success_maximally_mixed(self):
        rho = np.eye(16) / 16
        assert abs(grover_success(rho, 3) - 0.0625) < 1e-12

    def test_shor_success_identical(self):
        p = np.array([0.5, 0.5, 0.0, 0.0])
        assert shor_success(p, p) == 1.0

    def test_shor_success_disjoint(self):
        assert shor_success(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_shor_success_half(self):
        ideal = np.array([0.5, 0.5, 0.0, 0.0])
        observed = np.array([0.25, 0.25, 0.25, 0.25])
        assert abs(shor_success(ideal, observed) - 0.5) < 1e-12

    def test_shor_success_rejects_bad_input(self):
        with pytest.raises(ValueError):
            shor_success(np.array([1.0, 0.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            shor_success(np.array([0.7, 0.0]), np.array([1.0, 0.0]))
