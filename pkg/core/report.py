"""
Command back-ends: each builds a RunReport from library calls.
The CLI only parses flags, renders and maps errors to exit codes.
"""
import logging
import math
import re
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .bell import (BellPolynomial, bound_report, classical_bound, cluster4_polynomial, from_ghz_argument,
                   mabk4_polynomial, mermin3_polynomial, operator_variance, optimize_settings, quantum_value,
                   stabilizer_sum_polynomial, symmetric_cluster4_polynomial, window5_polynomial)
from .errors import InvalidArgumentError, NoPathError
from .lattice import (Graph, LatticeSpec, StabilizerElement, full_group, generators, parse_graph_spec, path_graph,
                      star_graph)
from .lhv import (Constraint, GhzArgument, consecutive_windows, find_ghz_arguments, max_satisfied,
                  path_triple_argument, window_argument_1d)
from .models import ArgumentRecord, CheckResult, ElementRecord, GraphRecord, RunReport, RunSettings
from .quantum import (MeasurementSetting, State, StateVector, expectation_pauli, expectation_settings,
                      make_cluster_state, make_ghz, make_w, make_w4, partial_trace, perturbed, purity)
from .utils import timed

logger = logging.getLogger(__name__)

DEFAULT_GRAPH = "1d:4"
INEQUALITIES = ("cluster4", "window5", "mabk4", "stabsum", "mermin3", "symmetric-cluster4")
STATES = ("cluster", "ghz", "w4", "w", "reduced-window(N,k)")
_REDUCED_WINDOW = re.compile(r"^reduced-window\((\d+),\s*(\d+)\)$")


def graph_record(g: Graph) -> GraphRecord:
    return GraphRecord(name=g.name, site_count=g.site_count, edges=list(g.edges))


def element_record(e: StabilizerElement) -> ElementRecord:
    return ElementRecord(label=e.label, sign=int(e.sign), generators=list(e.generators))


def argument_record(arg: GhzArgument) -> ArgumentRecord:
    """Re-verifies the argument by exhaustive LHV search before it is reported."""
    return ArgumentRecord(
        elements=arg.labels,
        window=list(arg.window),
        cooperating_sites=list(arg.cooperating_sites),
        generator_mask=arg.generator_mask,
        max_satisfied=arg.verify(),
        verified=True,
    )


def build_state(name: str, g: Graph) -> State:
    """
    'cluster' and 'ghz' live on the graph's site count; 'w4' has four sites;
    'reduced-window(N,k)' is the window of window_argument_1d(N, k) traced out of the N-site chain.
    """
    key = name.strip().lower()
    if key == "cluster":
        return make_cluster_state(g)
    if key == "ghz":
        return make_ghz(g.site_count)
    if key == "w4":
        return make_w4()
    if key == "w":
        return make_w(g.site_count)
    match = _REDUCED_WINDOW.match(key)
    if match:
        n, k = int(match.group(1)), int(match.group(2))
        window = window_argument_1d(n, k).window
        return partial_trace(make_cluster_state(path_graph(n)), window)
    raise InvalidArgumentError(f"unknown state {name!r}; choose from {', '.join(STATES)}")


def build_polynomial(name: str, g: Graph, settings: RunSettings) -> BellPolynomial:
    key = name.strip().lower()
    builders: dict = {
        "cluster4": cluster4_polynomial,
        "window5": window5_polynomial,
        "mabk4": mabk4_polynomial,
        "mermin3": mermin3_polynomial,
        "symmetric-cluster4": symmetric_cluster4_polynomial,
        "stabsum": lambda: stabilizer_sum_polynomial(full_group(g, limit=settings.group_limit)),
    }
    if key not in builders:
        raise InvalidArgumentError(f"unknown inequality {name!r}; choose from {', '.join(INEQUALITIES)}")
    return builders[key]()


def cmd_group(spec: str, settings: RunSettings) -> RunReport:
    timing = {}
    with timed(timing, "total"):
        g = parse_graph_spec(spec)
        group = full_group(g, limit=settings.group_limit)
        histogram = group.sign_histogram()
        results = {
            "size": len(group),
            "sign_histogram": {"+1": histogram[1], "-1": histogram[-1]},
            "elements": [element_record(e).model_dump() for e in group],
        }
    return RunReport(command="group", invocation={"graph": spec}, graph=graph_record(g),
                     results=results, timing=timing, version=__version__)


def cmd_paradox(spec: str, settings: RunSettings, max_size: Optional[int] = None,
                exclude: Sequence[int] = (), show_progress: bool = False) -> RunReport:
    """All GHZ arguments up to the subset cap; `exclude` removes sites from the allowed support."""
    max_size = settings.max_subset if max_size is None else max_size
    timing = {}
    with timed(timing, "total"):
        g = parse_graph_spec(spec)
        group = full_group(g, limit=settings.group_limit)
        support = None
        if exclude:
            for site in exclude:
                g._check_site(site)
            support = [s for s in range(g.site_count) if s not in set(exclude)]
        arguments = find_ghz_arguments(group, max_size, support=support, show_progress=show_progress)
        records = [argument_record(arg).model_dump() for arg in arguments]
        windows = sorted({tuple(arg.window) for arg in arguments})
        results = {
            "max_subset_size": max_size,
            "count": len(records),
            "windows": [list(w) for w in windows],
            "arguments": records,
        }
    invocation = {"graph": spec, "max_size": max_size, "exclude": sorted(exclude)}
    return RunReport(command="paradox", invocation=invocation, graph=graph_record(g),
                     results=results, timing=timing, version=__version__)


def cmd_bounds(ineq: str, state_name: str, settings: RunSettings, spec: str = DEFAULT_GRAPH,
               show_progress: bool = False) -> RunReport:
    """
    Optimized BoundReport; restart 0 starts from the polynomial's reference
    settings, which are also reported on their own when they exist.
    """
    timing = {}
    with timed(timing, "total"):
        g = parse_graph_spec(spec)
        p = build_polynomial(ineq, g, settings)
        state = build_state(state_name, g)
        optimized = optimize_settings(p, state, restarts=settings.restarts, seed=settings.seed,
                                      tolerance=settings.tolerance, initial=p.reference_settings,
                                      show_progress=show_progress)
        results = {"optimized": optimized.model_dump(mode="json")}
        if p.reference_settings is not None:
            results["reference"] = bound_report(p, state, p.reference_settings).model_dump(mode="json")
    invocation = {"ineq": ineq, "state": state_name, "graph": spec,
                  "restarts": settings.restarts, "seed": settings.seed}
    return RunReport(command="bounds", invocation=invocation, graph=graph_record(g),
                     results=results, timing=timing, version=__version__)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


class ReproductionSuite:
    """
    Every published claim as a computed-vs-expected check. With perturb=True the
    cluster states are mixed with a seeded random vector and the eigenvalue
    checks are expected to fail.
    """

    def __init__(self, settings: RunSettings, perturb: bool = False):
        self.settings = settings
        self.perturb = perturb
        self.checks: List[CheckResult] = []

    def _cluster(self, g: Graph) -> StateVector:
        state = make_cluster_state(g)
        return perturbed(state, epsilon=0.05, seed=self.settings.seed) if self.perturb else state

    def _record(self, name: str, expected, computed, passed: bool) -> None:
        self.checks.append(CheckResult(name=name, expected=_fmt(expected), computed=_fmt(computed),
                                       passed=bool(passed)))
        logger.info(f"{'PASS' if passed else 'FAIL'} {name}: {_fmt(computed)} (expected {_fmt(expected)})")

    def _close(self, name: str, expected: float, computed: float, atol: float) -> None:
        self._record(name, expected, computed, abs(computed - expected) <= atol)

    def _optimized(self, p: BellPolynomial, state: State) -> float:
        return optimize_settings(p, state, restarts=self.settings.restarts, seed=self.settings.seed,
                                 tolerance=self.settings.tolerance).quantum_value

    def check_eigenvalue_family(self) -> None:
        specs = [f"1d:{n}" for n in range(2, 11)] + ["3x3", "2x2x2"]
        for spec in specs:
            g = parse_graph_spec(spec)
            state = self._cluster(g)
            worst = max(abs(expectation_pauli(state, gen) - 1) for gen in generators(g))
            self._record(f"generators of {spec} have eigenvalue +1", "<= 1e-10", worst, worst <= 1e-10)

    def check_group_census(self) -> None:
        group = full_group(path_graph(4))
        negative = sorted(e.label for e in group if e.sign < 0)
        histogram = group.sign_histogram()
        self._record("1d:4 group size", 16, len(group), len(group) == 16)
        self._record("1d:4 negative elements", "['-YXYZ', '-ZYXY']", negative, negative == ["-YXYZ", "-ZYXY"])
        self._record("1d:4 positive elements", 14, histogram[1], histogram[1] == 14)

    def check_four_qubit_argument(self) -> None:
        group = full_group(path_graph(4))
        expected = {"+XIXZ", "+ZYYZ", "+XIYY", "-ZYXY"}
        found = [arg for arg in find_ghz_arguments(group, 4) if set(arg.labels) == expected]
        self._record("1d:4 argument found", sorted(expected), [a.labels for a in found], len(found) == 1)
        count = found[0].verify() if found else -1
        self._record("1d:4 argument satisfiable at most", 3, count, count == 3)

    def check_lhv_satisfiability(self) -> None:
        group = full_group(path_graph(4))
        count, witness = max_satisfied([Constraint(element=e) for e in group.nontrivial()])
        self._record("LHV satisfies at most of 15", 13, count, count == 13)
        all_plus = all(v == 1 for v in witness.values.values())
        self._record("LHV witness is all +1", True, all_plus, all_plus)

    def check_cluster4(self) -> None:
        p = cluster4_polynomial()
        phi4 = self._cluster(path_graph(4))
        classical, _ = classical_bound(p)
        self._close("cluster4 classical bound", 2.0, classical, 1e-12)
        self._close("cluster4 on 1d:4 with reference settings", 4.0, quantum_value(p, p.reference_settings, phi4), 1e-10)
        variance = operator_variance(p, p.reference_settings, phi4)
        self._record("cluster4 operator variance on 1d:4", "< 1e-10", variance, variance < 1e-10)
        grouped = p.merged(0, 1)
        mermin = mermin3_polynomial()
        same = grouped.is_relabeling_of(mermin)
        self._record("cluster4 with parties 0,1 grouped is mermin3", True, same, same)
        self._close("grouped cluster4 classical bound", classical_bound(mermin)[0], classical_bound(grouped)[0], 1e-12)

    def check_ghz_nonviolation(self) -> None:
        p = cluster4_polynomial()
        ghz = make_ghz(4)
        self._close("cluster4 optimized on GHZ4", 2.0, self._optimized(p, ghz), 1e-3)
        rng = np.random.default_rng(self.settings.seed)
        worst = 0.0
        for _ in range(100):
            a, c, c_prime, d, d_prime = (MeasurementSetting.from_vector(rng.normal(size=3)) for _ in range(5))
            worst = max(worst,
                        abs(expectation_settings(ghz, [a, None, c_prime, d])),
                        abs(expectation_settings(ghz, [a, None, c, d_prime])))
        self._record("weight-3 cluster4 terms vanish on GHZ4", "<= 1e-10", worst, worst <= 1e-10)

    def check_w_violation(self) -> None:
        self._close("cluster4 optimized on W4", 2.618, self._optimized(cluster4_polynomial(), make_w4()), 5e-3)

    def check_mabk(self) -> None:
        p = mabk4_polynomial()
        classical, _ = classical_bound(p)
        self._close("mabk4 classical bound", 2.0, classical, 1e-12)
        self._close("mabk4 optimized on 1d:4", 2 * math.sqrt(2), self._optimized(p, self._cluster(path_graph(4))), 1e-3)
        self._close("mabk4 optimized on GHZ4", 4 * math.sqrt(2), self._optimized(p, make_ghz(4)), 1e-3)

    def check_mixed_windows(self) -> None:
        p = window5_polynomial()
        classical, _ = classical_bound(p)
        self._close("window5 classical bound", 2.0, classical, 1e-12)
        derived = from_ghz_argument(window_argument_1d(8, 3)).is_relabeling_of(p)
        self._record("window argument polynomial is window5", True, derived, derived)
        phi8 = self._cluster(path_graph(8))
        for k in range(2, 5):
            arg = window_argument_1d(8, k)
            rho = partial_trace(phi8, arg.window)
            value = purity(rho)
            self._record(f"window k={k} is mixed", "< 1 - 1e-6", value, value < 1 - 1e-6)
            offset, size = arg.window[0], len(arg.window)
            worst = max(abs(expectation_pauli(rho, e.word.shifted(-offset, size)) - 1) for e in arg.elements)
            self._record(f"window k={k} elements have expectation +1", "<= 1e-10", worst, worst <= 1e-10)
            self._close(f"window5 on window k={k}", 4.0, quantum_value(p, p.reference_settings, rho), 1e-10)

    def check_consecutiveness(self) -> None:
        admits = consecutive_windows(8, 5, self.settings.max_subset, interior_only=True)
        spread = [list(sites) for sites, found in admits.items() if found and sites[-1] - sites[0] != 4]
        self._record("1d:8 interior non-consecutive windows with an argument", [], spread, not spread)
        consecutive = [list(sites) for sites, found in admits.items() if sites[-1] - sites[0] == 4 and not found]
        self._record("1d:8 interior consecutive windows without an argument", [], consecutive, not consecutive)

    def check_path_criterion(self) -> None:
        lattice = LatticeSpec(extents=(3, 3))
        g = parse_graph_spec("3x3")

        def sites(cells):
            return [lattice.site(cell, one_based=True) for cell in cells]

        for cells in ([(1, 1), (1, 2), (2, 2)], [(1, 1), (1, 2), (1, 3)]):
            count = path_triple_argument(g, sites(cells)).verify()
            self._record(f"3x3 path {cells} gives an argument", 3, count, count == 3)
        for cells in ([(1, 1), (2, 2), (3, 3)], [(1, 1), (1, 2), (2, 3)]):
            try:
                path_triple_argument(g, sites(cells))
                outcome = "argument"
            except NoPathError:
                outcome = "NoPath"
            self._record(f"3x3 triple {cells} is rejected", "NoPath", outcome, outcome == "NoPath")

    def check_stabilizer_sum(self) -> None:
        p = stabilizer_sum_polynomial(full_group(path_graph(4)))
        classical, _ = classical_bound(p)
        self._close("stabsum classical bound", 12.0, classical, 1e-12)
        self._close("stabsum on 1d:4", 16.0, quantum_value(p, p.reference_settings, self._cluster(path_graph(4))), 1e-10)
        self._close("stabsum optimized on GHZ4", 8.0, self._optimized(p, make_ghz(4)), 1e-2)

    def check_star_graph(self) -> None:
        g = star_graph(4)
        group = full_group(g)
        arguments = find_ghz_arguments(group, self.settings.max_subset)
        centered = all(arg.generator_mask & 1 for arg in arguments)
        self._record("star:4 arguments all use the center generator", True, centered, bool(arguments) and centered)
        leaves = find_ghz_arguments(group, self.settings.max_subset, support=range(1, g.site_count))
        self._record("star:4 arguments avoiding the center", 0, len(leaves), not leaves)

    def run(self) -> List[CheckResult]:
        steps: Iterable[Callable[[], None]] = (
            self.check_eigenvalue_family, self.check_group_census, self.check_four_qubit_argument,
            self.check_lhv_satisfiability, self.check_cluster4, self.check_ghz_nonviolation,
            self.check_w_violation, self.check_mabk, self.check_mixed_windows, self.check_consecutiveness,
            self.check_path_criterion, self.check_stabilizer_sum, self.check_star_graph,
        )
        for step in steps:
            step()
        return self.checks


def cmd_report_paper(settings: RunSettings, debug_perturb: bool = False) -> RunReport:
    timing = {}
    with timed(timing, "total"):
        checks = ReproductionSuite(settings, perturb=debug_perturb).run()
        failed = sum(not check.passed for check in checks)
        results = {
            "checks": [check.model_dump() for check in checks],
            "passed": len(checks) - failed,
            "failed": failed,
        }
    invocation = {"debug_perturb": debug_perturb, "restarts": settings.restarts, "seed": settings.seed}
    return RunReport(command="report-paper", invocation=invocation, results=results,
                     timing=timing, version=__version__)
