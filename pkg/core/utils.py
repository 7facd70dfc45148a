"""
Configuration loading and small helpers shared by the CLI and reports.
"""
import logging
import os
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, Optional, Union

from dotenv import load_dotenv

from .models import RunSettings

logger = logging.getLogger(__name__)

ENV_PREFIX = "CLUSTER_NL_"


def load_settings(env_file: Optional[Union[str, Path]] = None, **overrides) -> RunSettings:
    """
    Read CLUSTER_NL_* variables (after loading a .env file) into RunSettings.
    Keyword overrides that are not None win over the environment.
    Example: CLUSTER_NL_RESTARTS=16 -> settings.restarts == 16
    """
    if env_file:
        load_dotenv(env_file)
    else:
        load_dotenv()
    values = {}
    for name in RunSettings.model_fields:
        raw = os.getenv(ENV_PREFIX + name.upper())
        if raw is not None and raw.strip():
            values[name] = raw.strip()
    values.update({k: v for k, v in overrides.items() if v is not None})
    settings = RunSettings.model_validate(values)
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings


@contextmanager
def timed(timing: Dict[str, float], phase: str) -> Iterator[None]:
    """Record the wall-clock seconds of a block under timing[phase]."""
    start = time.perf_counter()
    try:
        yield
    finally:
        timing[phase] = round(time.perf_counter() - start, 6)


def write_text(output_path: Union[str, Path], text: str) -> Path:
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    return path
