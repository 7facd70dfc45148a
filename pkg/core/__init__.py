"""
Core module for the cluster-state nonlocality toolkit.
"""
__version__ = "0.1.0"

from .errors import (ClusterNonlocalityError, DimensionMismatchError, GraphParseError, GroupTooLargeError,
                     InvalidArgumentError, MissingVariableError, NoPathError, NonHermitianElementError,
                     PauliParseError, SearchSpaceError, StateConstructionError, StateTooLargeError,
                     UnboundLabelError, UnsupportedArityError)
from .pauli import PauliLetter, PauliString, Sign, commutes, letter_parity_vector, multiply, sign_of
from .lattice import (Graph, LatticeSpec, StabilizerElement, StabilizerGroup, build_lattice, full_group,
                      generator, generators, parse_graph_spec, path_graph, ring_graph, star_graph)
from .quantum import (DensityMatrix, MeasurementSetting, StateVector, expectation_pauli, expectation_settings,
                      make_cluster_state, make_ghz, make_w4, partial_trace, purity)
from .lhv import (Constraint, GhzArgument, LhvAssignment, constraint_satisfied, find_ghz_arguments,
                  max_satisfied, max_weighted_sum, path_triple_argument, window_argument_1d)
from .bell import (BellPolynomial, BellTerm, BoundReport, SettingsChoice, cluster4_polynomial,
                   from_ghz_argument, mabk4_polynomial, optimize_settings, quantum_value,
                   stabilizer_sum_polynomial, window5_polynomial)
from .models import RunReport, RunSettings
from .utils import load_settings

__all__ = [
    '__version__',
    'ClusterNonlocalityError',
    'DimensionMismatchError',
    'GraphParseError',
    'GroupTooLargeError',
    'InvalidArgumentError',
    'MissingVariableError',
    'NoPathError',
    'NonHermitianElementError',
    'PauliParseError',
    'SearchSpaceError',
    'StateConstructionError',
    'StateTooLargeError',
    'UnboundLabelError',
    'UnsupportedArityError',
    'PauliLetter',
    'PauliString',
    'Sign',
    'commutes',
    'letter_parity_vector',
    'multiply',
    'sign_of',
    'Graph',
    'LatticeSpec',
    'StabilizerElement',
    'StabilizerGroup',
    'build_lattice',
    'full_group',
    'generator',
    'generators',
    'parse_graph_spec',
    'path_graph',
    'ring_graph',
    'star_graph',
    'DensityMatrix',
    'MeasurementSetting',
    'StateVector',
    'expectation_pauli',
    'expectation_settings',
    'make_cluster_state',
    'make_ghz',
    'make_w4',
    'partial_trace',
    'purity',
    'Constraint',
    'GhzArgument',
    'LhvAssignment',
    'constraint_satisfied',
    'find_ghz_arguments',
    'max_satisfied',
    'max_weighted_sum',
    'path_triple_argument',
    'window_argument_1d',
    'BellPolynomial',
    'BellTerm',
    'BoundReport',
    'SettingsChoice',
    'cluster4_polynomial',
    'from_ghz_argument',
    'mabk4_polynomial',
    'optimize_settings',
    'quantum_value',
    'stabilizer_sum_polynomial',
    'window5_polynomial',
    'RunReport',
    'RunSettings',
    'load_settings',
]
