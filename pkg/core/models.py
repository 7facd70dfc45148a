"""
Pydantic records for run configuration and machine-readable reports.
"""
import json
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class RunSettings(BaseModel):
    """
    Defaults shared by every command; loaded from the environment by core.utils.load_settings.
    """
    seed: int = Field(default=0, description="Seed for optimizer restarts and perturbations")
    restarts: int = Field(default=64, ge=1, description="Random restarts of the settings optimizer")
    tolerance: float = Field(default=1e-10, gt=0, description="Stop a restart when a sweep improves less than this")
    group_limit: int = Field(default=20, ge=1, description="Largest site count for full group enumeration")
    max_subset: int = Field(default=4, ge=3, le=6, description="Default subset cap of the paradox search")
    log_level: str = Field(default="WARNING", description="Root logging level")


class GraphRecord(BaseModel):
    """
    Graph description echoed into reports.
    """
    name: str
    site_count: int
    edges: List[Tuple[int, int]] = Field(default_factory=list)


class ElementRecord(BaseModel):
    label: str = Field(..., description="Canonical signed rendering, e.g. '-ZYXY'")
    sign: int
    generators: List[int] = Field(default_factory=list, description="Generator indices multiplied together")


class ArgumentRecord(BaseModel):
    """
    A verified GHZ argument as it appears in a report.
    """
    elements: List[str]
    window: List[int]
    cooperating_sites: List[int] = Field(default_factory=list)
    generator_mask: int
    max_satisfied: int = Field(..., description="Largest number of elements one assignment satisfies")
    verified: bool


class CheckResult(BaseModel):
    """
    One acceptance check: computed vs expected value.
    """
    name: str
    expected: str
    computed: str
    passed: bool


class RunReport(BaseModel):
    """
    Everything one CLI invocation produced. The body (timing excluded) is
    byte-identical across runs with the same invocation and seed.
    """
    command: str
    invocation: Dict[str, Any] = Field(default_factory=dict)
    graph: Optional[GraphRecord] = None
    results: Dict[str, Any] = Field(default_factory=dict)
    timing: Dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds per phase")
    version: str

    @property
    def passed(self) -> bool:
        """False when any acceptance check in the results failed."""
        return all(check.get("passed", True) for check in self.results.get("checks", []))

    def body(self) -> str:
        return json.dumps(self.model_dump(mode="json", exclude={"timing"}), sort_keys=True, indent=2)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2)
