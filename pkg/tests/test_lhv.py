"""
Tests for core.lhv: assignments, exhaustive satisfiability and GHZ argument search.
"""
from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import InvalidArgumentError, MissingVariableError, NoPathError, SearchSpaceError
from core.lattice import LatticeSpec, full_group, graph_from_edges, parse_graph_spec, path_graph, star_graph
from core.lhv import (Constraint, GhzArgument, LhvAssignment, assignment_value, consecutive_windows,
                      constraint_satisfied, find_ghz_arguments, involved_variables, max_satisfied, max_weighted_sum,
                      maximize_correlations, path_triple_argument, window_argument_1d)
from core.pauli import PauliLetter, multiply_all, parity_bits


def brute_force_arguments(group, max_size=4):
    """Every subset with cancelling letter parities and sign product -1, by plain enumeration."""
    elements = group.nontrivial()
    parities = [parity_bits(e.word) for e in elements]
    found = set()
    for size in range(3, max_size + 1):
        for subset in combinations(range(len(elements)), size):
            parity = 0
            sign = 1
            for i in subset:
                parity ^= parities[i]
                sign *= int(elements[i].sign)
            if parity == 0 and sign == -1:
                found.add(frozenset(elements[i].label for i in subset))
    return found


def all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for chosen in range(1 << len(pairs)):
        yield graph_from_edges(n, [pairs[j] for j in range(len(pairs)) if (chosen >> j) & 1])


class TestAssignments:

    def test_outcomes_must_be_plus_minus_one(self):
        with pytest.raises(ValidationError):
            LhvAssignment(values={(0, PauliLetter.X): 2})

    def test_identity_has_no_variable(self):
        with pytest.raises(ValidationError):
            LhvAssignment(values={(0, PauliLetter.I): 1})

    def test_serialized_keys(self):
        lam = LhvAssignment(values={(2, PauliLetter.Y): -1, (0, PauliLetter.X): 1})
        assert lam.model_dump() == {"values": {"X0": 1, "Y2": -1}}

    def test_constraint_evaluation(self, group4):
        positive = Constraint(element=group4.find("XIXZ"))
        negative = Constraint(element=group4.find("ZYXY"))
        lam = LhvAssignment.constant(involved_variables([positive, negative]))
        assert constraint_satisfied(lam, positive)
        assert not constraint_satisfied(lam, negative)
        flipped = LhvAssignment(values={**lam.values, (2, PauliLetter.X): -1})
        assert assignment_value(flipped, negative) == -1
        assert constraint_satisfied(flipped, negative)

    def test_missing_variable(self, group4):
        with pytest.raises(MissingVariableError):
            assignment_value(LhvAssignment(), Constraint(element=group4.find("XZII")))

    def test_involved_variables_order(self, group4):
        variables = involved_variables([Constraint(element=group4.find("ZYYZ"))])
        assert variables == [(0, PauliLetter.Z), (1, PauliLetter.Y), (2, PauliLetter.Y), (3, PauliLetter.Z)]


class TestExhaustiveSearch:

    def test_chain4_satisfies_thirteen_of_fifteen(self, group4):
        count, witness = max_satisfied([Constraint(element=e) for e in group4.nontrivial()])
        assert count == 13
        assert len(witness.values) == 12
        assert all(v == 1 for v in witness.values.values())

    def test_weighted_sum_with_identity(self, group4):
        value, _ = max_weighted_sum([(Constraint(element=e), 1.0) for e in group4])
        assert value == pytest.approx(12.0)

    def test_four_element_argument_value(self, group4):
        elements = [group4.find(label) for label in ("XIXZ", "ZYYZ", "XIYY", "ZYXY")]
        value, _ = max_weighted_sum([(Constraint(element=e), 1.0) for e in elements])
        assert value == pytest.approx(2.0)
        assert max_satisfied(elements)[0] == 3

    def test_single_constraint(self, group4):
        assert max_satisfied([group4.find("ZYXY")])[0] == 1

    def test_correlation_maximum(self):
        masks = np.array([0b01, 0b10, 0b11], dtype=np.int64)
        value, t = maximize_correlations(masks, np.array([1.0, 1.0, -1.0]), 2)
        # a + b - ab peaks at 1 with a = b = +1 first
        assert value == pytest.approx(1.0)
        assert t == 0

    def test_variable_ceiling(self):
        with pytest.raises(SearchSpaceError):
            maximize_correlations(np.zeros(1, dtype=np.int64), np.ones(1), 25)


class TestArgumentSearch:

    def test_chain4_contains_published_argument(self, group4):
        found = [set(arg.labels) for arg in find_ghz_arguments(group4)]
        assert {"+XIXZ", "+ZYYZ", "+XIYY", "-ZYXY"} in found

    def test_results_are_sorted_and_verified(self):
        arguments = find_ghz_arguments(full_group(path_graph(5)))
        keys = [(a.size, tuple(e.generator_mask for e in a.elements)) for a in arguments]
        assert keys == sorted(keys)
        for arg in arguments:
            assert arg.verify() < arg.size

    def test_matches_brute_force_on_small_graphs(self):
        for n in (3, 4):
            for g in all_graphs(n):
                group = full_group(g)
                found = {frozenset(arg.labels) for arg in find_ghz_arguments(group)}
                assert found == brute_force_arguments(group), g.edges

    def test_matches_brute_force_up_to_five_sites(self):
        # one graph per isomorphism class; the search commutes with relabeling sites
        atlas = [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= 5]
        assert sum(g.number_of_nodes() == 5 for g in atlas) == 34
        for atlas_graph in atlas:
            g = graph_from_edges(atlas_graph.number_of_nodes(), atlas_graph.edges())
            group = full_group(g)
            found = {frozenset(arg.labels) for arg in find_ghz_arguments(group)}
            assert found == brute_force_arguments(group), g.edges

    def test_quantum_product_is_minus_identity(self):
        for arg in find_ghz_arguments(full_group(path_graph(5))):
            product = multiply_all(e.word.unsigned() for e in arg.elements)
            assert product.label == "-IIIII"

    def test_subset_ceiling(self, group4):
        with pytest.raises(SearchSpaceError):
            find_ghz_arguments(group4, 7)

    def test_inconsistent_argument_rejected(self, group4):
        with pytest.raises(ValidationError):
            GhzArgument.from_elements([group4.find(label) for label in ("XZII", "ZXZI", "IZXZ")])


class TestWindowArguments:

    def test_five_site_window(self):
        arg = window_argument_1d(5, 2)
        assert arg.labels == ["+IZXZI", "+ZYYZI", "+IZYYZ", "-ZYXYZ"]
        assert arg.window == (0, 1, 2, 3, 4)
        assert arg.cooperating_sites == (0, 4)
        assert arg.verify() == 3

    def test_four_site_window(self):
        arg = window_argument_1d(4, 2)
        assert set(arg.labels) == {"+IZXZ", "+ZYYZ", "+IZYY", "-ZYXY"}
        assert arg.window == (0, 1, 2, 3)
        assert arg.cooperating_sites == (0,)

    @pytest.mark.parametrize("n,k", [(4, 0), (4, 3), (2, 1)])
    def test_k_out_of_range(self, n, k):
        with pytest.raises(InvalidArgumentError):
            window_argument_1d(n, k)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_translation_covariance(self, k):
        arg = window_argument_1d(8, k)
        assert arg.window == tuple(range(k - 2, k + 3))
        shifted = [e.word.shifted(-(k - 2), 5).label for e in arg.elements]
        assert shifted == window_argument_1d(5, 2).labels

    def test_restricted_chain(self):
        group = full_group(path_graph(6))
        assert find_ghz_arguments(group, support=range(5))

    def test_only_consecutive_interior_windows_admit_arguments(self):
        admits = consecutive_windows(8, interior_only=True)
        assert len(admits) == 6
        for sites, found in admits.items():
            assert found == (sites[-1] - sites[0] == 4), sites

    def test_chain_ends_admit_non_consecutive_windows(self):
        admits = consecutive_windows(6)
        assert len(admits) == 6
        # {0, 1, 2, 3} is the k=1 window; {0, 1, 3, 4, 5} uses S1 S3 across the gap
        assert admits[(0, 1, 2, 3, 5)]
        assert admits[(0, 1, 3, 4, 5)]

    def test_argument_across_a_gap(self):
        group = full_group(path_graph(6))
        elements = [group.by_mask(mask) for mask in (0b010000, 0b110000, 0b011010, 0b111010)]
        arg = GhzArgument.from_elements(elements)
        assert arg.window == (0, 1, 3, 4, 5)
        assert arg.labels[-1] == "-ZXIYXY"
        assert arg.verify() == 3


class TestPathCriterion:

    lattice = LatticeSpec(extents=(3, 3))

    def sites(self, cells):
        return [self.lattice.site(cell, one_based=True) for cell in cells]

    @pytest.mark.parametrize("cells", [[(1, 1), (1, 2), (2, 2)], [(1, 1), (1, 2), (1, 3)], [(2, 2), (1, 2), (3, 2)]])
    def test_paths_give_arguments(self, cells):
        arg = path_triple_argument(parse_graph_spec("3x3"), self.sites(cells))
        assert arg.size == 4
        assert arg.verify() == 3

    @pytest.mark.parametrize("cells", [[(1, 1), (2, 2), (3, 3)], [(1, 1), (1, 2), (2, 3)]])
    def test_non_paths_rejected(self, cells):
        with pytest.raises(NoPathError):
            path_triple_argument(parse_graph_spec("3x3"), self.sites(cells))

    def test_repeated_site_rejected(self, chain4):
        with pytest.raises(NoPathError):
            path_triple_argument(chain4, [0, 1, 1])


class TestStarGraph:

    def test_every_argument_uses_the_center(self):
        group = full_group(star_graph(4))
        arguments = find_ghz_arguments(group)
        assert arguments
        assert all(arg.generator_mask & 1 for arg in arguments)

    def test_no_argument_avoids_the_center(self):
        group = full_group(star_graph(4))
        assert find_ghz_arguments(group, support=range(1, 5)) == []

    def test_path_through_center(self):
        arg = path_triple_argument(star_graph(4), [1, 0, 2])
        assert arg.verify() == 3
