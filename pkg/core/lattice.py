"""
Graphs, square lattices, graph-state generators and their stabilizer groups.
"""
import logging
import re
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import DimensionMismatchError, GraphParseError, GroupTooLargeError
from .pauli import PauliString, Sign, multiply, sign_of

logger = logging.getLogger(__name__)

DEFAULT_GROUP_LIMIT = 20


class Graph(BaseModel):
    """
    Simple undirected graph on sites 0..N-1.
    """
    model_config = ConfigDict(frozen=True)

    site_count: int = Field(..., ge=1)
    edges: Tuple[Tuple[int, int], ...] = Field(default_factory=tuple, description="Sorted (i, j) pairs with i < j")
    name: str = Field("graph", description="Human-readable description, e.g. '1d:4'")

    @field_validator("edges", mode="before")
    @classmethod
    def _normalize_edges(cls, edges):
        normalized = set()
        for edge in edges:
            i, j = (int(v) for v in edge)
            normalized.add((min(i, j), max(i, j)))
        return tuple(sorted(normalized))

    @model_validator(mode="after")
    def _check_simple(self) -> "Graph":
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on site {i}")
            if i < 0 or j >= self.site_count:
                raise ValueError(f"edge ({i}, {j}) outside 0..{self.site_count - 1}")
        return self

    def neighbors(self, site: int) -> Tuple[int, ...]:
        self._check_site(site)
        return tuple(sorted({j for i, j in self.edges if i == site} | {i for i, j in self.edges if j == site}))

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in set(self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph(name=self.name)
        graph.add_nodes_from(range(self.site_count))
        graph.add_edges_from(self.edges)
        return graph

    def _check_site(self, site: int) -> None:
        if not 0 <= site < self.site_count:
            raise DimensionMismatchError(f"site {site} outside 0..{self.site_count - 1}")


class LatticeSpec(BaseModel):
    """
    Extents of an open-boundary square lattice, one per dimension.
    """
    model_config = ConfigDict(frozen=True)

    extents: Tuple[int, ...] = Field(..., min_length=1)

    @field_validator("extents")
    @classmethod
    def _positive(cls, extents):
        if any(e < 1 for e in extents):
            raise ValueError(f"lattice extents must be positive, got {extents}")
        return extents

    @property
    def site_count(self) -> int:
        return int(np.prod(self.extents))

    def site(self, coords: Sequence[int], one_based: bool = False) -> int:
        """Row-major index of a cell (last coordinate fastest)."""
        coords = tuple(c - 1 for c in coords) if one_based else tuple(coords)
        if len(coords) != len(self.extents) or any(not 0 <= c < e for c, e in zip(coords, self.extents)):
            raise DimensionMismatchError(f"coordinates {coords} outside lattice {self.extents}")
        return int(np.ravel_multi_index(coords, self.extents))

    def coords(self, site: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(site, self.extents))

    @property
    def label(self) -> str:
        return f"1d:{self.extents[0]}" if len(self.extents) == 1 else "x".join(map(str, self.extents))


class StabilizerElement(BaseModel):
    """
    Signed group element: the word carries its sign in phase_exp.
    """
    model_config = ConfigDict(frozen=True)

    word: PauliString
    sign: Sign
    generator_mask: int = Field(0, ge=0, description="Bit a set when generator S_a is a factor")

    @model_validator(mode="after")
    def _sign_matches_word(self) -> "StabilizerElement":
        if sign_of(self.word) is not self.sign:
            raise ValueError(f"sign {self.sign.symbol} disagrees with word {self.word.label}")
        return self

    @classmethod
    def _raw(cls, word: PauliString, mask: int) -> "StabilizerElement":
        return cls.model_construct(word=word, sign=sign_of(word), generator_mask=mask)

    @property
    def generators(self) -> Tuple[int, ...]:
        return tuple(a for a in range(self.generator_mask.bit_length()) if (self.generator_mask >> a) & 1)

    @property
    def label(self) -> str:
        return self.word.label

    @property
    def is_identity(self) -> bool:
        return self.word.is_identity

    def __mul__(self, other: "StabilizerElement") -> "StabilizerElement":
        return StabilizerElement._raw(multiply(self.word, other.word), self.generator_mask ^ other.generator_mask)

    def __str__(self) -> str:
        return self.label


class StabilizerGroup(BaseModel):
    """
    All 2^N signed elements generated by the graph's generators,
    stored at index == generator mask.
    """
    model_config = ConfigDict(frozen=True)

    graph: Graph
    elements: Tuple[StabilizerElement, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[StabilizerElement]:
        return iter(self.elements)

    def by_mask(self, mask: int) -> StabilizerElement:
        return self.elements[mask]

    @property
    def n_sites(self) -> int:
        return self.graph.site_count

    def nontrivial(self) -> List[StabilizerElement]:
        return [e for e in self.elements if not e.is_identity]

    def find(self, word: Union[PauliString, str]) -> Optional[StabilizerElement]:
        """Element whose letters match `word` (sign ignored), or None."""
        if isinstance(word, str):
            word = PauliString.from_label(word)
        # The x-part of a graph-state element equals its generator mask.
        candidate = self.elements[word.x_bits] if word.n_sites == self.n_sites else None
        if candidate is not None and candidate.word.z_bits == word.z_bits:
            return candidate
        return None

    def restricted(self, sites: Iterable[int]) -> List[StabilizerElement]:
        """Nontrivial elements acting as the identity outside `sites`."""
        allowed = sum(1 << s for s in set(sites))
        return [e for e in self.elements if not e.is_identity and not e.word.support_bits & ~allowed]

    def sign_histogram(self) -> Dict[int, int]:
        histogram = {1: 0, -1: 0}
        for element in self.elements:
            histogram[int(element.sign)] += 1
        return histogram


def graph_from_edges(site_count: int, edges: Iterable[Tuple[int, int]], name: str = "graph") -> Graph:
    try:
        return Graph(site_count=site_count, edges=tuple(edges), name=name)
    except ValueError as e:
        raise GraphParseError(str(e)) from e


def build_lattice(spec: Union[LatticeSpec, Sequence[int]]) -> Graph:
    """Open-boundary square lattice; row-major indexing, last coordinate fastest."""
    if not isinstance(spec, LatticeSpec):
        try:
            spec = LatticeSpec(extents=tuple(spec))
        except ValueError as e:
            raise GraphParseError(f"invalid lattice extents {spec}: {e}") from e
    edges = []
    for coords in np.ndindex(*spec.extents):
        site = spec.site(coords)
        for dim, extent in enumerate(spec.extents):
            if coords[dim] + 1 < extent:
                neighbour = list(coords)
                neighbour[dim] += 1
                edges.append((site, spec.site(neighbour)))
    return Graph(site_count=spec.site_count, edges=tuple(edges), name=spec.label)


def path_graph(n: int) -> Graph:
    """1D chain 0-1-...-(n-1)."""
    return build_lattice((n,))


def ring_graph(n: int) -> Graph:
    """Closed loop of n >= 3 sites."""
    if n < 3:
        raise GraphParseError(f"a ring needs at least 3 sites, got {n}")
    graph = nx.cycle_graph(n)
    return Graph(site_count=n, edges=tuple(graph.edges()), name=f"ring:{n}")


def star_graph(n_leaves: int) -> Graph:
    """Site 0 joined to every leaf 1..n_leaves."""
    if n_leaves < 1:
        raise GraphParseError(f"a star needs at least one leaf, got {n_leaves}")
    graph = nx.star_graph(n_leaves)
    return Graph(site_count=n_leaves + 1, edges=tuple(graph.edges()), name=f"star:{n_leaves}")


def generator(g: Graph, a: int, eigenvalue: Sign = Sign.PLUS) -> StabilizerElement:
    """S_a = X_a (x) Z_neigh(a); eigenvalue -1 flips the sign of the sector."""
    g._check_site(a)
    z_bits = sum(1 << b for b in g.neighbors(a))
    word = PauliString(n_sites=g.site_count, x_bits=1 << a, z_bits=z_bits, phase_exp=0 if eigenvalue > 0 else 2)
    return StabilizerElement(word=word, sign=sign_of(word), generator_mask=1 << a)


def generators(g: Graph, eigenvalues: Optional[Sequence[Sign]] = None) -> List[StabilizerElement]:
    eigenvalues = eigenvalues or [Sign.PLUS] * g.site_count
    if len(eigenvalues) != g.site_count:
        raise DimensionMismatchError(f"{len(eigenvalues)} eigenvalues for {g.site_count} generators")
    return [generator(g, a, eigenvalues[a]) for a in range(g.site_count)]


def element_from_mask(g: Graph, mask: Union[int, Iterable[int]],
                      eigenvalues: Optional[Sequence[Sign]] = None) -> StabilizerElement:
    """Product of the selected generators in increasing index order; empty mask is +identity."""
    if not isinstance(mask, int):
        mask = sum(1 << a for a in set(mask))
    if mask >> g.site_count:
        raise DimensionMismatchError(f"mask {mask:b} selects generators beyond site {g.site_count - 1}")
    element = StabilizerElement._raw(PauliString.identity(g.site_count), 0)
    for gen in generators(g, eigenvalues):
        if mask & gen.generator_mask:
            element = element * gen
    return element


def full_group(g: Graph, limit: int = DEFAULT_GROUP_LIMIT,
               eigenvalues: Optional[Sequence[Sign]] = None) -> StabilizerGroup:
    """
    Enumerate all 2^N elements; element i has generator mask i.

    Args:
        g: Graph whose generators span the group
        limit: Largest site count allowed
        eigenvalues: Sign per generator, all +1 by default
    """
    if g.site_count > limit:
        raise GroupTooLargeError(f"{g.name} has {g.site_count} sites; the group limit is {limit}")
    elements = [StabilizerElement._raw(PauliString.identity(g.site_count), 0)]
    for gen in generators(g, eigenvalues):
        elements.extend([element * gen for element in elements])
    logger.info(f"Built stabilizer group of {g.name}: {len(elements)} elements")
    return StabilizerGroup.model_construct(graph=g, elements=tuple(elements))


_SPEC_PATTERNS = [
    (re.compile(r"^1d:(\d+)$"), lambda m: path_graph(int(m.group(1)))),
    (re.compile(r"^star:(\d+)$"), lambda m: star_graph(int(m.group(1)))),
    (re.compile(r"^ring:(\d+)$"), lambda m: ring_graph(int(m.group(1)))),
    (re.compile(r"^(\d+(?:x\d+)+)$"), lambda m: build_lattice([int(v) for v in m.group(1).split("x")])),
]


def parse_graph_spec(spec: str) -> Graph:
    """
    Accepts '1d:N', 'AxB', 'AxBxC', 'star:K', 'ring:N' or a path to a graph file.
    """
    text = spec.strip().lower()
    for pattern, build in _SPEC_PATTERNS:
        match = pattern.match(text)
        if match:
            return build(match)
    if Path(spec).exists():
        return load_graph_file(spec)
    raise GraphParseError(f"cannot parse graph spec {spec!r}; use 1d:N, AxB, star:K, ring:N or a graph file")


def load_graph_file(file_path: Union[str, Path]) -> Graph:
    """Plain text: first line 'sites N', then one 'edge i j' per line. '#' starts a comment."""
    path = Path(file_path)
    site_count = None
    edges = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "sites" and len(parts) == 2 and site_count is None:
                    site_count = int(parts[1])
                elif parts[0] == "edge" and len(parts) == 3 and site_count is not None:
                    edges.append((int(parts[1]), int(parts[2])))
                else:
                    raise ValueError(line)
            except ValueError as e:
                raise GraphParseError(f"{path}:{lineno}: unexpected line {line!r}") from e
    if site_count is None:
        raise GraphParseError(f"{path}: missing 'sites N' header")
    return graph_from_edges(site_count, edges, name=path.stem)


def save_graph_file(g: Graph, file_path: Union[str, Path]) -> Path:
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"sites {g.site_count}\n")
        for i, j in g.edges:
            f.write(f"edge {i} {j}\n")
    return path
