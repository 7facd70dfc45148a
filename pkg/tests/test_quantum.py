"""
Tests for core.quantum: state construction, Pauli action, expectations and reductions.
"""
from itertools import product

import networkx as nx
import numpy as np
import pytest

from core.errors import DimensionMismatchError, InvalidArgumentError, StateConstructionError, StateTooLargeError
from core.lattice import full_group, generators, graph_from_edges, parse_graph_spec, path_graph
from core.pauli import PauliString
from core.quantum import (DensityMatrix, MeasurementSetting, StateVector, apply_pauli, basis_state,
                          correlation_tensor, dump_amplitudes, eigenvalue_residuals, expectation_pauli,
                          expectation_settings, load_amplitudes, make_cluster_state, make_ghz, make_w,
                          partial_trace, pauli_coefficients, perturbed, product_state, purity)


def P(label: str) -> PauliString:
    return PauliString.from_label(label)


class TestConstruction:

    @pytest.mark.parametrize("spec", ["1d:2", "1d:5", "2x3", "star:3", "ring:5"])
    def test_cluster_generators_have_eigenvalue_one(self, spec):
        g = parse_graph_spec(spec)
        state = make_cluster_state(g)
        for gen in generators(g):
            assert expectation_pauli(state, gen) == pytest.approx(1.0, abs=1e-12)

    def test_whole_group_has_expectation_sign(self, phi4, group4):
        for element in group4:
            assert expectation_pauli(phi4, element) == pytest.approx(1.0, abs=1e-12)
            assert expectation_pauli(phi4, element.word.unsigned()) == pytest.approx(int(element.sign), abs=1e-12)
        assert max(eigenvalue_residuals(phi4, group4)) < 1e-12

    def test_ghz_and_w_amplitudes(self):
        ghz = make_ghz(3)
        assert ghz.amplitude("000") == pytest.approx(1 / np.sqrt(2))
        assert ghz.amplitude("111") == pytest.approx(1 / np.sqrt(2))
        w = make_w(3)
        assert w.amplitude("100") == pytest.approx(1 / np.sqrt(3))
        assert w.amplitude("110") == 0

    def test_unnormalized_vector_rejected(self):
        with pytest.raises(StateConstructionError):
            StateVector([1, 1])

    def test_non_power_of_two_rejected(self):
        with pytest.raises(DimensionMismatchError):
            StateVector([1, 0, 0])

    def test_amplitudes_are_read_only(self, ghz4):
        with pytest.raises(ValueError):
            ghz4.data[0] = 0

    def test_too_many_sites(self):
        with pytest.raises(StateTooLargeError):
            make_ghz(17)

    def test_product_state_is_eigenstate(self):
        settings = [MeasurementSetting.from_letter("X"), MeasurementSetting.from_vector([0, 1, 1])]
        state = product_state(settings)
        assert expectation_settings(state, settings) == pytest.approx(1.0)

    def test_perturbed_state_is_seeded(self, phi4):
        a = perturbed(phi4, seed=3)
        b = perturbed(phi4, seed=3)
        assert np.array_equal(a.data, b.data)
        assert expectation_pauli(a, P("XZII")) < 1 - 1e-6


class TestPauliAction:

    def test_y_on_zero(self):
        out = apply_pauli(P("Y"), basis_state("0"))
        assert np.allclose(out, [0, 1j])

    def test_site_zero_is_most_significant(self):
        out = apply_pauli(P("XI"), basis_state("00"))
        assert np.allclose(out, [0, 0, 1, 0])

    def test_phase_is_applied(self):
        out = apply_pauli(P("-Z"), basis_state("1"))
        assert np.allclose(out, [0, 1])

    def test_word_length_must_match(self, phi4):
        with pytest.raises(DimensionMismatchError):
            expectation_pauli(phi4, P("XZ"))


class TestMeasurementSetting:

    def test_unit_vector_required(self):
        with pytest.raises(ValueError):
            MeasurementSetting(bloch=(1.0, 1.0, 0.0))

    def test_identity_is_not_a_direction(self):
        with pytest.raises(InvalidArgumentError):
            MeasurementSetting.from_letter("I")

    def test_as_letter(self):
        assert MeasurementSetting.from_letter("Y").as_letter().value == "Y"
        assert MeasurementSetting.from_vector([1, 1, 0]).as_letter() is None

    def test_settings_agree_with_pauli_expectation(self, phi4):
        letters = [MeasurementSetting.from_letter(c) for c in "ZYXY"]
        assert expectation_settings(phi4, letters) == pytest.approx(-1.0)
        assert expectation_settings(phi4, [letters[0], None, None, None]) == pytest.approx(0.0, abs=1e-12)

    def test_settings_count_must_match(self, phi4):
        with pytest.raises(DimensionMismatchError):
            expectation_settings(phi4, [None, None])


class TestMixedStates:

    def test_single_site_of_cluster_is_maximally_mixed(self, phi4):
        rho = partial_trace(phi4, [0])
        assert np.allclose(rho.data, np.eye(2) / 2)
        assert purity(rho) == pytest.approx(0.5)

    def test_density_matrix_matches_vector(self, phi4):
        rho = phi4.density_matrix()
        for label in ("XZII", "ZYXY", "XXXX", "IZXZ"):
            assert expectation_pauli(rho, P(label)) == pytest.approx(expectation_pauli(phi4, P(label)), abs=1e-12)

    def test_partial_trace_of_mixed_state(self, phi4):
        rho = partial_trace(phi4, [0, 1, 2])
        assert np.allclose(partial_trace(rho, [0]).data, partial_trace(phi4, [0]).data)

    def test_reduced_window_keeps_window_correlations(self):
        phi6 = make_cluster_state(parse_graph_spec("1d:6"))
        rho = partial_trace(phi6, [1, 2, 3, 4])
        # S2 S3 = Z1 Y2 Y3 Z4 lives inside the window
        assert expectation_pauli(rho, P("ZYYZ")) == pytest.approx(1.0)
        assert purity(rho) < 1 - 1e-6

    def test_keep_must_be_distinct_sites(self, phi4):
        with pytest.raises(DimensionMismatchError):
            partial_trace(phi4, [0, 0])
        with pytest.raises(InvalidArgumentError):
            partial_trace(phi4, [])

    def test_non_hermitian_matrix_rejected(self):
        with pytest.raises(StateConstructionError):
            DensityMatrix([[0.5, 0.5], [0.0, 0.5]])

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(StateConstructionError):
            DensityMatrix([[1.5, 0.0], [0.0, -0.5]])

    def test_maximally_mixed(self):
        rho = DensityMatrix.maximally_mixed(3)
        assert purity(rho) == pytest.approx(1 / 8)
        assert expectation_pauli(rho, P("XYZ")) == pytest.approx(0.0)


class TestCorrelations:

    def test_cluster_tensor_entries(self, phi4):
        tensor = correlation_tensor(phi4)
        i, x, y, z = range(4)
        assert tensor.shape == (4, 4, 4, 4)
        assert tensor[i, i, i, i] == pytest.approx(1.0)
        assert tensor[x, z, i, i] == pytest.approx(1.0)
        assert tensor[z, y, x, y] == pytest.approx(-1.0)
        assert tensor[x, x, x, x] == pytest.approx(0.0, abs=1e-12)

    def test_cluster_coefficients_are_the_group(self, phi4):
        coefficients = pauli_coefficients(phi4)
        expected = {e.word.unsigned().label[1:]: float(e.sign) for e in full_group(parse_graph_spec("1d:4"))}
        assert coefficients.keys() == expected.keys()
        for label, value in expected.items():
            assert coefficients[label] == pytest.approx(value)

    def test_ghz_coefficients(self, ghz4):
        coefficients = pauli_coefficients(ghz4)
        assert len(coefficients) == 16
        assert coefficients["XXXX"] == pytest.approx(1.0)
        assert coefficients["XXYY"] == pytest.approx(-1.0)
        assert coefficients["ZZII"] == pytest.approx(1.0)
        assert "ZIII" not in coefficients


class TestAmplitudeDump:

    def test_dump_format(self):
        lines = dump_amplitudes(make_ghz(2)).splitlines()
        assert len(lines) == 4
        bits, real, imag = lines[0].split()
        assert bits == "00"
        assert float(real) == pytest.approx(1 / np.sqrt(2), abs=1e-16)
        assert float(imag) == 0.0
        assert lines[1].split()[1] == "0.0000000000000000e+00"

    def test_load_restores_cluster_state(self, phi4):
        restored = load_amplitudes(dump_amplitudes(phi4))
        assert np.allclose(restored.data, phi4.data, atol=1e-15)

    def test_malformed_line(self):
        with pytest.raises(InvalidArgumentError):
            load_amplitudes("00 1.0\n")


def ket(*factors) -> np.ndarray:
    vector = np.array([1], dtype=complex)
    for factor in factors:
        vector = np.kron(vector, factor)
    return vector


ZERO, ONE = np.array([1, 0]), np.array([0, 1])
PLUS, MINUS = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)


def random_mixed_state(num_sites: int, seed: int) -> DensityMatrix:
    rng = np.random.default_rng(seed)
    dim = 1 << num_sites
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


class TestZSigns:

    def test_mixed_z_parity_is_negative(self):
        assert np.allclose(apply_pauli(P("ZZ"), basis_state("01")), [0, -1, 0, 0])
        assert np.allclose(apply_pauli(P("ZZ"), basis_state("11")), [0, 0, 0, 1])
        assert np.allclose(apply_pauli(P("ZIZ"), basis_state("100")), -basis_state("100").data)

    def test_expectations_stay_bounded(self, phi4, ghz4, w4):
        for state in (phi4, ghz4, w4, perturbed(phi4, seed=1)):
            for element in full_group(parse_graph_spec("1d:4")):
                assert -1 - 1e-12 <= expectation_pauli(state, element.word) <= 1 + 1e-12
        assert expectation_pauli(basis_state("0110"), P("ZZZZ")) == pytest.approx(1.0)
        assert expectation_pauli(basis_state("0100"), P("ZZZZ")) == pytest.approx(-1.0)


class TestDensityExpectations:

    def test_pauli_and_settings_agree_on_random_mixed_state(self):
        rho = random_mixed_state(3, seed=21)
        for letters in product("IXYZ", repeat=3):
            settings = [None if c == "I" else MeasurementSetting.from_letter(c) for c in letters]
            word = P("".join(letters))
            assert expectation_pauli(rho, word) == pytest.approx(expectation_settings(rho, settings), abs=1e-12)

    def test_y_eigenstate(self):
        rho = StateVector([1, 1j], normalize=True).density_matrix()
        y = MeasurementSetting.from_letter("Y")
        assert expectation_pauli(rho, P("Y")) == pytest.approx(1.0)
        assert expectation_settings(rho, [y]) == pytest.approx(1.0)
        assert expectation_pauli(rho, P("-Y")) == pytest.approx(-1.0)

    def test_product_state_density(self):
        settings = [MeasurementSetting.from_letter("X"), MeasurementSetting.from_letter("Y")]
        rho = product_state(settings).density_matrix()
        assert expectation_pauli(rho, P("XY")) == pytest.approx(1.0)
        assert expectation_pauli(rho, P("IY")) == pytest.approx(1.0)
        assert expectation_pauli(rho, P("XX")) == pytest.approx(0.0, abs=1e-12)


class TestTolerances:

    def test_norm_inside_tolerance_is_accepted(self):
        state = StateVector([1 + 0.9e-12, 0, 0, 0])
        assert np.linalg.norm(state.data) == pytest.approx(1.0, abs=1e-15)
        rho = state.density_matrix()
        assert partial_trace(rho, [0]).data[0, 0] == pytest.approx(1.0)
        assert partial_trace(state, [1]).num_sites == 1

    def test_trace_inside_tolerance_is_accepted(self):
        rho = DensityMatrix(np.diag([0.5 + 1.5e-12, 0.5]))
        assert rho.num_sites == 1
        with pytest.raises(StateConstructionError):
            DensityMatrix(np.diag([0.5 + 1e-9, 0.5]))


class TestKnownStates:

    def test_four_site_chain_amplitudes(self, phi4):
        expected = (ket(PLUS, ZERO, PLUS, ZERO) + ket(PLUS, ZERO, MINUS, ONE)
                    + ket(MINUS, ONE, MINUS, ZERO) + ket(MINUS, ONE, PLUS, ONE)) / 2
        assert np.linalg.norm(expected) == pytest.approx(1.0)
        assert abs(np.vdot(expected, phi4.data)) == pytest.approx(1.0, abs=1e-12)

    def test_single_site_is_plus(self):
        assert np.allclose(make_cluster_state(path_graph(1)).data, PLUS)

    def test_w4_single_site_spectrum(self, w4):
        for site in range(4):
            eigenvalues = np.linalg.eigvalsh(partial_trace(w4, [site]).data)
            assert np.allclose(eigenvalues, [0.25, 0.75])

    def test_ghz4_three_site_reduction(self, ghz4):
        expected = np.zeros((8, 8))
        expected[0, 0] = expected[7, 7] = 0.5
        assert np.allclose(partial_trace(ghz4, [0, 1, 2]).data, expected)

    def test_global_phase_leaves_correlations(self, phi4):
        rotated = StateVector(np.exp(0.7j) * phi4.data)
        assert np.allclose(correlation_tensor(rotated), correlation_tensor(phi4), atol=1e-12)

    def test_chain_window_purities(self):
        phi10 = make_cluster_state(path_graph(10))
        # 2^-(rank of the edges crossing the cut)
        assert purity(partial_trace(phi10, range(0, 5))) == pytest.approx(0.5)
        assert purity(partial_trace(phi10, range(2, 7))) == pytest.approx(0.25)
        assert purity(partial_trace(phi10, [0])) == pytest.approx(0.5)


def stabilized_graphs():
    graphs = [parse_graph_spec(spec) for spec in ("1d:2", "1d:6", "1d:10", "3x3", "2x2x2", "ring:7", "star:6")]
    for seed in range(8):
        n = 3 + seed
        random_graph = nx.gnp_random_graph(n, 0.5, seed=100 + seed)
        graphs.append(graph_from_edges(n, random_graph.edges(), name=f"gnp-{seed}"))
    return graphs


@pytest.mark.parametrize("g", stabilized_graphs(), ids=lambda g: g.name)
def test_every_group_element_stabilizes(g):
    state = make_cluster_state(g)
    assert max(eigenvalue_residuals(state, full_group(g))) < 1e-10
    for element in full_group(g):
        assert expectation_pauli(state, element) == pytest.approx(1.0, abs=1e-10)
