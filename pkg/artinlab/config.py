"""Configuration validation and management"""

import json
from pathlib import Path
from typing import Any, Dict, Literal, Union

import toml
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .error import ArtinLabError, ConfigError
from .fields import FieldDescriptor


DEFAULT_JET_BUDGET = 2_000_000
DEFAULT_SEARCH_BUDGET = 10_000_000
DEFAULT_LIFT_BUDGET = 1_000_000

OUTPUT_FORMATS = ("csv", "json", "table")


class RunConfig(BaseModel):
    """Settings shared by every experiment run"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # Coefficient field, Q or F<q>
    field: str = "Q"

    # Parallel workers for sweeps and jet enumeration
    jobs: int = Field(default=1, ge=1)

    # Degrees of precision kept beyond the largest asserted order
    guard: int = Field(default=2, ge=0)

    # Budgets
    jet_budget: int = Field(default=DEFAULT_JET_BUDGET, ge=1)
    search_budget: int = Field(default=DEFAULT_SEARCH_BUDGET, ge=1)
    lift_budget: int = Field(default=DEFAULT_LIFT_BUDGET, ge=1)

    # Output
    format: Literal["csv", "json", "table"] = "table"
    timing: bool = False
    verbose: bool = False

    @field_validator("field")
    @classmethod
    def _check_field(cls, value: str) -> str:
        try:
            return FieldDescriptor.parse(value).label
        except ArtinLabError as exc:
            raise ValueError(str(exc)) from exc

    @property
    def descriptor(self) -> FieldDescriptor:
        return FieldDescriptor.parse(self.field)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        """Create RunConfig from a dictionary, reporting problems as ConfigError"""
        try:
            return cls(**data)
        except ValidationError as exc:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
                for error in exc.errors())
            raise ConfigError(f"Invalid configuration: {problems}") from exc

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'RunConfig':
        """
        Load configuration from a JSON, YAML or TOML file

        Args:
            path: File whose suffix selects the format

        Returns:
            Validated RunConfig
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        suffix = path.suffix.lower()
        text = path.read_text(encoding="utf-8")
        try:
            if suffix == ".json":
                data = json.loads(text)
            elif suffix in (".yaml", ".yml"):
                data = yaml.safe_load(text)
            elif suffix == ".toml":
                data = toml.loads(text)
            else:
                raise ConfigError(f"Unsupported config format: {suffix or path.name}")
        except (json.JSONDecodeError, yaml.YAMLError, toml.TomlDecodeError) as exc:
            raise ConfigError(f"Cannot parse {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a mapping of settings")
        return cls.from_dict(data)

    def merged(self, **overrides) -> 'RunConfig':
        """Copy with every override that is not None applied"""
        data = self.to_dict()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return RunConfig.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()

    def to_json(self, path: Path) -> None:
        """Save configuration to JSON file"""
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)
