"""Settings, run configuration and sweep suite definitions."""
import os
from pathlib import Path
from typing import Dict, List, Literal, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from eldb_core.exceptions import ConfigError


PROJECT_ROOT = Path(__file__).parent.parent
SUITES_FILE = Path(__file__).parent / "suites.yaml"

DEFAULT_NODE_LIMIT = 50_000_000

_ENV_FIELDS = {
    "node_limit": "ELDB_NODE_LIMIT",
    "oracle_max_vertices": "ELDB_ORACLE_MAX_VERTICES",
    "oracle_max_k": "ELDB_ORACLE_MAX_K",
    "x3sat_max_variables": "ELDB_X3SAT_MAX_VARIABLES",
    "log_dir": "ELDB_LOG_DIR",
    "workers": "ELDB_WORKERS",
}


class Settings(BaseModel):
    """Process-wide limits, overridable from the environment or a .env file."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    node_limit: int = Field(default=DEFAULT_NODE_LIMIT, ge=1)
    oracle_max_vertices: int = Field(default=10, ge=2)
    oracle_max_k: int = Field(default=3, ge=1)
    x3sat_max_variables: int = Field(default=20, ge=1)
    log_dir: Path = PROJECT_ROOT / "errors"
    workers: int = Field(default=1, ge=1)

    @field_validator("log_dir")
    @classmethod
    def _absolute_log_dir(cls, value: Path) -> Path:
        if not value.is_absolute():
            value = PROJECT_ROOT / value
        return value


def load_settings(env_file: Optional[Path] = None, **overrides) -> Settings:
    """
    Build Settings from defaults, environment and keyword overrides.

    Args:
        env_file: Optional .env file; the default lookup is used when absent
        **overrides: Values taking precedence over the environment

    Returns:
        Settings: Validated settings
    """
    load_dotenv(env_file)
    values = {}
    for name, env_name in _ENV_FIELDS.items():
        raw = os.environ.get(env_name)
        if raw is not None and raw != "":
            values[name] = raw
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"invalid settings: {e}") from e


Command = Literal["gen", "solve", "sweep", "reduce", "verify-reduction", "check-formulas"]
ObjectiveFlag = Literal["exists", "mincost", "maxcover", "mcr", "mincost-no1"]


class RunConfig(BaseModel):
    """Validated form of one command-line invocation."""
    model_config = ConfigDict(extra="forbid")

    command: Command
    family: Optional[Literal["path", "cycle", "complete", "star", "tk", "subdivided-star"]] = None
    n: Optional[int] = Field(default=None, ge=1)
    i: Optional[int] = Field(default=None, ge=0)
    k: Optional[int] = Field(default=None, ge=1)
    product: Optional[Literal["lexicographic", "strong", "cartesian"]] = None
    left: Optional[Path] = None
    right: Optional[Path] = None
    graph: Optional[Path] = None
    cnf: Optional[Path] = None
    output: Optional[Path] = None
    objective: Optional[ObjectiveFlag] = None
    suite: Optional[str] = None
    node_limit: Optional[int] = Field(default=None, ge=1)
    format: Literal["json", "csv"] = "json"
    workers: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    allow_disconnected: bool = False
    verbose: bool = False

    @field_validator("left", "right", "graph", "cnf", "output")
    @classmethod
    def _resolve(cls, value: Optional[Path]) -> Optional[Path]:
        if value is None:
            return None
        return Path(value).expanduser().resolve()

    @model_validator(mode="after")
    def _check_command_inputs(self) -> "RunConfig":
        if self.command == "gen":
            if self.product is None and self.family is None:
                raise ValueError("gen needs --family or --product")
            if self.product is not None and (self.left is None or self.right is None):
                raise ValueError("--product needs --left and --right")
            if self.product is None:
                if self.family == "tk" and self.k is None:
                    raise ValueError("--family tk needs --k")
                if self.family == "subdivided-star" and (self.i is None or self.n is None):
                    raise ValueError("--family subdivided-star needs --i and --n")
                if self.family not in ("tk", "subdivided-star") and self.n is None:
                    raise ValueError(f"--family {self.family} needs --n")
        if self.command == "solve":
            if self.graph is None or self.objective is None:
                raise ValueError("solve needs --graph and --objective")
            if self.objective in ("exists", "mincost", "maxcover") and self.k is None:
                raise ValueError(f"objective {self.objective} needs --k")
        if self.command == "check-formulas" and self.graph is None:
            if self.family not in ("path", "cycle", "subdivided-star"):
                raise ValueError("check-formulas needs --graph or --family path|cycle|subdivided-star")
            if self.n is None:
                raise ValueError(f"check-formulas --family {self.family} needs --n")
            if self.family == "subdivided-star" and self.i is None:
                raise ValueError("check-formulas --family subdivided-star needs --i")
        if self.command == "sweep" and self.suite is None:
            raise ValueError("sweep needs --suite")
        if self.command in ("reduce", "verify-reduction"):
            if self.cnf is None:
                raise ValueError(f"{self.command} needs --cnf")
            if self.k is None:
                self.k = 2
        if self.format == "csv" and self.command != "sweep":
            raise ValueError("csv output is only offered for sweep")
        return self


def build_run_config(values: Dict) -> RunConfig:
    """Validate raw CLI values, wrapping pydantic errors in ConfigError."""
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"invalid arguments: {e}") from e


class FamilyRange(BaseModel):
    """One family block of a suite."""
    model_config = ConfigDict(extra="forbid")

    family: str
    sizes: List[int] = Field(default_factory=list)
    ks: List[int] = Field(default_factory=lambda: [1])
    subdivisions: List[int] = Field(default_factory=list)
    factor: Optional[str] = None
    factors: List[str] = Field(default_factory=list)

    @field_validator("sizes", "subdivisions")
    @classmethod
    def _non_negative(cls, value: List[int]) -> List[int]:
        if any(v < 0 for v in value):
            raise ValueError("ranges must be non-negative")
        return value


class SuiteSpec(BaseModel):
    """A named sweep: a list of family blocks."""
    model_config = ConfigDict(extra="forbid")

    description: str = ""
    blocks: List[FamilyRange]


def _expand_range(raw) -> List[int]:
    if isinstance(raw, dict):
        return list(range(raw["from"], raw["to"] + 1))
    return list(raw)


def load_suites(path: Path = SUITES_FILE) -> Dict[str, SuiteSpec]:
    """
    Read and validate the suite definitions.

    `all` is added as the union of every other suite in file order.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read suites from {path}: {e}") from e

    if not isinstance(raw, dict) or "suites" not in raw:
        raise ConfigError(f"{path}: top-level 'suites' mapping missing")

    suites: Dict[str, SuiteSpec] = {}
    for name, body in raw["suites"].items():
        try:
            blocks = []
            for block in body.get("blocks", []):
                block = dict(block)
                for key in ("sizes", "ks", "subdivisions"):
                    if key in block:
                        block[key] = _expand_range(block[key])
                blocks.append(block)
            suites[name] = SuiteSpec(description=body.get("description", ""), blocks=blocks)
        except ValidationError as e:
            raise ConfigError(f"suite {name!r}: {e}") from e
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"suite {name!r}: malformed block ({e})") from e

    if "all" in suites:
        raise ConfigError("suite name 'all' is reserved")
    suites["all"] = SuiteSpec(
        description="union of every suite",
        blocks=[b for s in suites.values() for b in s.blocks],
    )
    return suites
