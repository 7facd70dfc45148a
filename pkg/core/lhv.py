"""
Local-hidden-variable side: deterministic assignments, exhaustive
satisfiability and automated search for GHZ-type contradictions.

A variable is a (site, letter) pair, indexed as in a letter-parity vector
(3 * site + {X: 0, Y: 1, Z: 2}).
"""
import logging
from functools import reduce
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer, model_validator
from tqdm import tqdm

from .errors import InvalidArgumentError, MissingVariableError, NoPathError, SearchSpaceError
from .lattice import Graph, StabilizerElement, StabilizerGroup, element_from_mask, full_group, path_graph
from .pauli import PauliLetter, Sign, parity_bits, variable_of_index

logger = logging.getLogger(__name__)

MAX_LHV_VARIABLES = 24
DEFAULT_MAX_SUBSET = 4
MAX_SUBSET_CEILING = 6
_CHUNK_CELLS_BITS = 22

Variable = Tuple[int, PauliLetter]


class LhvAssignment(BaseModel):
    """
    Pre-established +-1 outcome for each involved (site, letter) variable.
    """
    model_config = ConfigDict(frozen=True)

    values: Dict[Tuple[int, PauliLetter], int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_outcomes(self) -> "LhvAssignment":
        for (site, letter), value in self.values.items():
            if PauliLetter(letter).is_identity:
                raise ValueError(f"site {site}: the identity carries no hidden variable")
            if value not in (1, -1):
                raise ValueError(f"outcome for {letter.value}{site} must be +1 or -1, got {value}")
        return self

    @field_serializer("values")
    def _serialize_values(self, values):
        return {f"{PauliLetter(letter).value}{site}": value for (site, letter), value in sorted(values.items())}

    @classmethod
    def constant(cls, variables: Iterable[Variable], value: int = 1) -> "LhvAssignment":
        return cls(values={v: value for v in variables})

    def __getitem__(self, variable: Variable) -> int:
        try:
            return self.values[variable]
        except KeyError:
            site, letter = variable
            raise MissingVariableError(f"assignment has no value for {PauliLetter(letter).value}{site}") from None


class Constraint(BaseModel):
    """
    Perfect-correlation requirement: the product of the hidden values on the
    element's support must equal the element's sign.
    """
    model_config = ConfigDict(frozen=True)

    element: StabilizerElement

    @property
    def sign(self) -> Sign:
        return self.element.sign

    @property
    def parity(self) -> int:
        return parity_bits(self.element.word)

    @property
    def variables(self) -> Tuple[Variable, ...]:
        word = self.element.word
        return tuple((site, word.letter(site)) for site in word.support)

    def __str__(self) -> str:
        return self.element.label


def _as_constraints(items: Iterable) -> List[Constraint]:
    return [item if isinstance(item, Constraint) else Constraint(element=item) for item in items]


def involved_variables(constraints: Iterable[Constraint]) -> List[Variable]:
    """Variables appearing in any constraint, in variable-index order."""
    packed = reduce(lambda acc, c: acc | c.parity, _as_constraints(constraints), 0)
    return [variable_of_index(j) for j in range(packed.bit_length()) if (packed >> j) & 1]


def assignment_value(lam: LhvAssignment, c: Constraint) -> int:
    """+-1 outcome of the commutative product of the constraint's variables."""
    value = 1
    for variable in c.variables:
        value *= lam[variable]
    return value


def constraint_satisfied(lam: LhvAssignment, c: Constraint) -> bool:
    return assignment_value(lam, c) == int(c.sign)


def _local_masks(parities: Sequence[int], variables: Sequence[int]) -> np.ndarray:
    """Rewrite packed parities over assignment bits; the first variable is the most significant."""
    count = len(variables)
    position = {v: count - 1 - i for i, v in enumerate(variables)}
    masks = []
    for parity in parities:
        mask = 0
        for j in range(parity.bit_length()):
            if (parity >> j) & 1:
                mask |= 1 << position[j]
        masks.append(mask)
    return np.array(masks, dtype=np.int64)


def maximize_correlations(masks: np.ndarray, weights: np.ndarray, variable_count: int,
                          show_progress: bool = False) -> Tuple[float, int]:
    """
    max over t in [0, 2^V) of sum_j weights[j] * (-1)^popcount(t & masks[j]).

    Bit value 0 stands for outcome +1, so the first maximizing t is the
    lexicographically smallest witness with +1 < -1.
    """
    if variable_count > MAX_LHV_VARIABLES:
        raise SearchSpaceError(f"{variable_count} variables exceeds the exhaustive ceiling {MAX_LHV_VARIABLES}")
    total = 1 << variable_count
    # rows * terms stays near 2^22 cells per chunk
    row_bits = max(0, _CHUNK_CELLS_BITS - max(len(masks) - 1, 0).bit_length())
    chunk = 1 << min(row_bits, variable_count)
    best_value, best_t = -np.inf, 0
    starts = range(0, total, chunk)
    for start in tqdm(starts, desc="Assignments", disable=not show_progress or len(starts) < 2):
        t = np.arange(start, start + chunk, dtype=np.int64)
        outcomes = 1 - 2 * (np.bitwise_count(t[:, None] & masks[None, :]) & 1).astype(np.int8)
        values = outcomes @ weights
        index = int(np.argmax(values))
        if values[index] > best_value:
            best_value, best_t = float(values[index]), start + index
    return best_value, best_t


def _witness(t: int, variables: Sequence[int]) -> LhvAssignment:
    count = len(variables)
    return LhvAssignment(values={
        variable_of_index(v): -1 if (t >> (count - 1 - i)) & 1 else 1 for i, v in enumerate(variables)
    })


def max_weighted_sum(weighted: Sequence[Tuple[Constraint, float]],
                     show_progress: bool = False) -> Tuple[float, LhvAssignment]:
    """
    Exact maximum of sum weight * sign * (product of hidden values) over all
    deterministic assignments of the involved variables.
    """
    constraints = _as_constraints(c for c, _ in weighted)
    if not constraints:
        return 0.0, LhvAssignment()
    parities = [c.parity for c in constraints]
    variables = [j for j in range(max(parities).bit_length()) if any((p >> j) & 1 for p in parities)]
    weights = np.array([w * int(c.sign) for c, (_, w) in zip(constraints, weighted)], dtype=float)
    value, t = maximize_correlations(_local_masks(parities, variables), weights, len(variables), show_progress)
    logger.debug(f"Weighted LHV maximum {value} over {len(variables)} variables")
    return value, _witness(t, variables)


def max_satisfied(constraints: Sequence[Constraint], show_progress: bool = False) -> Tuple[int, LhvAssignment]:
    """
    Largest number of constraints one deterministic assignment can satisfy.
    Satisfied count = (m + sum sign * product) / 2 for m constraints.
    """
    constraints = _as_constraints(constraints)
    value, witness = max_weighted_sum([(c, 1.0) for c in constraints], show_progress)
    return int(round((len(constraints) + value) / 2)), witness


class GhzArgument(BaseModel):
    """
    Set of stabilizer elements with even letter parity on every variable and
    sign product -1: no deterministic local assignment satisfies all of them.
    """
    model_config = ConfigDict(frozen=True)

    elements: Tuple[StabilizerElement, ...] = Field(..., min_length=3)
    window: Tuple[int, ...] = Field(..., description="Sites where some element acts non-trivially")
    cooperating_sites: Tuple[int, ...] = Field(default_factory=tuple, description="Window sites measured only in Z")

    @model_validator(mode="after")
    def _check_contradiction(self) -> "GhzArgument":
        if reduce(lambda acc, e: acc ^ parity_bits(e.word), self.elements, 0):
            raise ValueError("letter parities of the elements do not cancel")
        if reduce(lambda acc, e: acc * int(e.sign), self.elements, 1) != -1:
            raise ValueError("sign product of the elements is not -1")
        window, cooperating = _window_of(self.elements)
        if self.window != window or self.cooperating_sites != cooperating:
            raise ValueError(f"window {self.window} / cooperating {self.cooperating_sites} "
                             f"disagree with the elements ({window} / {cooperating})")
        return self

    @classmethod
    def from_elements(cls, elements: Iterable[StabilizerElement]) -> "GhzArgument":
        """Canonical form: elements ordered by generator mask."""
        elements = tuple(sorted(elements, key=lambda e: e.generator_mask))
        window, cooperating = _window_of(elements)
        return cls(elements=elements, window=window, cooperating_sites=cooperating)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def generator_mask(self) -> int:
        """Union of the generators used by any element."""
        return reduce(lambda acc, e: acc | e.generator_mask, self.elements, 0)

    @property
    def labels(self) -> List[str]:
        return [e.label for e in self.elements]

    def constraints(self) -> List[Constraint]:
        return [Constraint(element=e) for e in self.elements]

    def verify(self) -> int:
        """
        Exhaustive check over the involved variables; returns the largest number
        of simultaneously satisfiable elements, which must be below the size.
        """
        count, witness = max_satisfied(self.constraints())
        if count >= self.size:
            raise InvalidArgumentError(f"assignment {witness.model_dump()} satisfies every element of {self.labels}")
        return count

    def __str__(self) -> str:
        return "{" + ", ".join(self.labels) + "}"


def _window_of(elements: Sequence[StabilizerElement]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    support = reduce(lambda acc, e: acc | e.word.support_bits, elements, 0)
    window = tuple(s for s in range(support.bit_length()) if (support >> s) & 1)
    cooperating = tuple(
        s for s in window
        if all(e.word.letter(s) in (PauliLetter.I, PauliLetter.Z) for e in elements)
    )
    return window, cooperating


def find_ghz_arguments(group: StabilizerGroup, max_subset_size: int = DEFAULT_MAX_SUBSET,
                       support: Optional[Iterable[int]] = None,
                       show_progress: bool = False) -> List[GhzArgument]:
    """
    Every subset of 3..max_subset_size nontrivial elements with cancelling
    letter parities and sign product -1, ordered by size then by the tuple of
    generator masks.

    Cancelling parities force the generator masks to XOR to zero, so the last
    element of each subset is looked up from the others instead of enumerated.

    Args:
        group: Full stabilizer group of a graph
        max_subset_size: Largest subset to try (at most 6)
        support: Sites the elements may act on; None allows every site
        show_progress: Show a tqdm bar per subset size

    Returns:
        The arguments found, empty when there are none
    """
    if max_subset_size > MAX_SUBSET_CEILING:
        raise SearchSpaceError(f"subset size {max_subset_size} exceeds the ceiling {MAX_SUBSET_CEILING}")
    candidates = group.restricted(support) if support is not None else group.nontrivial()
    candidates.sort(key=lambda e: e.generator_mask)
    count = len(candidates)
    masks = np.array([e.generator_mask for e in candidates], dtype=np.int64)
    parities = np.array([parity_bits(e.word) for e in candidates], dtype=object)
    negative = np.array([e.sign is Sign.MINUS for e in candidates], dtype=bool)
    position = np.full(1 << group.n_sites, -1, dtype=np.int64)
    position[masks] = np.arange(count)

    arguments: List[GhzArgument] = []
    for size in range(3, max_subset_size + 1):
        prefixes = combinations(range(count), size - 2)
        total = comb(count, size - 2)
        for prefix in tqdm(prefixes, total=total, desc=f"Subsets of {size}", disable=not show_progress):
            prefix_mask = reduce(lambda acc, i: acc ^ int(masks[i]), prefix, 0)
            prefix_parity = reduce(lambda acc, i: acc ^ parities[i], prefix, 0)
            prefix_negative = sum(bool(negative[i]) for i in prefix) % 2
            second = np.arange(prefix[-1] + 1, count)
            last = position[masks[second] ^ prefix_mask]
            keep = last > second
            for j, k in zip(second[keep], last[keep]):
                if prefix_parity ^ parities[j] ^ parities[k]:
                    continue
                if (prefix_negative + negative[j] + negative[k]) % 2 != 1:
                    continue
                arguments.append(GhzArgument.from_elements([candidates[i] for i in prefix] + [candidates[j], candidates[k]]))
    arguments.sort(key=lambda a: (a.size, tuple(e.generator_mask for e in a.elements)))
    logger.info(f"Found {len(arguments)} GHZ arguments on {group.graph.name} (subset cap {max_subset_size})")
    return arguments


def path_triple_argument(g: Graph, path: Sequence[int]) -> GhzArgument:
    """
    {S_b, S_a S_b, S_b S_c, S_a S_b S_c} for a neighbour-to-neighbour path a-b-c.
    The three sites may be given in any order; the middle one is found from adjacency.
    """
    sites = list(path)
    if len(sites) != 3 or len(set(sites)) != 3:
        raise NoPathError(f"a path needs three distinct sites, got {sites}")
    for site in sites:
        g._check_site(site)
    middles = [b for b in sites if all(g.adjacent(b, other) for other in sites if other != b)]
    if not middles:
        raise NoPathError(f"sites {sites} do not form a neighbour-to-neighbour path on {g.name}")
    b = middles[0]
    a, c = sorted(s for s in sites if s != b)
    masks = [1 << b, (1 << a) | (1 << b), (1 << b) | (1 << c), (1 << a) | (1 << b) | (1 << c)]
    try:
        return GhzArgument.from_elements(element_from_mask(g, mask) for mask in masks)
    except ValidationError as e:
        raise InvalidArgumentError(f"path {a}-{b}-{c} on {g.name} yields no contradiction: {e}") from e


def window_argument_1d(n: int, k: int) -> GhzArgument:
    """
    Four-element argument {E_k+1, E_k E_k+1, E_k+1 E_k+2, E_k E_k+1 E_k+2} on an
    N-site chain; k is 1-based, 1 <= k <= N-2.
    """
    if not 1 <= k <= n - 2:
        raise InvalidArgumentError(f"window start k={k} outside 1..{n - 2} for a chain of {n}")
    return path_triple_argument(path_graph(n), (k - 1, k, k + 1))


def consecutive_windows(n: int, window_size: int = 5, max_subset_size: int = DEFAULT_MAX_SUBSET,
                        interior_only: bool = False) -> Dict[Tuple[int, ...], bool]:
    """
    For every window_size-subset of an N-site chain: does some argument live
    on elements supported inside it?

    With interior_only, subsets touching site 0 or N-1 are skipped. Near the
    ends the boundary generators admit arguments on non-consecutive subsets
    too, e.g. {0, 1, 2, 3, 5} on six sites contains the four-site window at k=1.
    """
    group = full_group(path_graph(n))
    sites_range = range(1, n - 1) if interior_only else range(n)
    result = {}
    for sites in combinations(sites_range, window_size):
        result[sites] = bool(find_ghz_arguments(group, max_subset_size, support=sites))
    return result
