"""
Runtime settings for ocs_cli.

Values come from (lowest to highest priority) the defaults below, ``OCS_*``
environment variables (a ``.env`` file is loaded by the CLI), a YAML/JSON
config file, and finally explicit command-line flags.
"""
import logging
from typing import Literal, Optional

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from ocs_cli.utils.utils import load_config


class AnnealingSettings(BaseModel):
    initial_temperature_fraction: float = Field(0.1, gt=0)
    cooling_factor: float = Field(0.95, gt=0, lt=1)
    # proposals per temperature stage, multiplied by the ring count k
    proposals_per_stage: int = Field(50, ge=1)
    final_temperature_ratio: float = Field(1e-6, gt=0, lt=1)
    # share of the evaluation budget spent annealing; the rest goes to refinement
    anneal_fraction: float = Field(0.6, gt=0, lt=1)


class RefinementSettings(BaseModel):
    initial_step: float = Field(1e-2, gt=0)
    shrink: float = Field(0.5, gt=0, lt=1)
    tolerance: float = Field(1e-5, gt=0)


class OptimizerSettings(BaseModel):
    r_max: float = Field(1.0 - 1e-6, gt=0, le=1)
    annealing: AnnealingSettings = AnnealingSettings()
    refinement: RefinementSettings = RefinementSettings()


class MeshSettings(BaseModel):
    kind: Literal["polar", "cartesian"] = "polar"
    density: float = Field(8.0, ge=4.0)
    refine: bool = True
    refine_factor: int = Field(10, ge=2)


class Settings(BaseSettings):
    """Top-level settings object shared by the commands."""

    model_config = SettingsConfigDict(env_prefix="OCS_", env_nested_delimiter="__", extra="ignore")

    seed: int = 42
    n_jobs: int = 1
    log_level: str = "INFO"
    progress: bool = True
    kappa_inf_max_dim: int = 496
    optimizer: OptimizerSettings = OptimizerSettings()
    mesh: MeshSettings = MeshSettings()


def load_settings(config_file: Optional[str] = None) -> Settings:
    """Build settings from the environment, overlaid with a config file if one exists."""
    file_values = load_config(config_file) if config_file else {}
    settings = Settings(**file_values)
    logging.debug(f"Settings loaded (config={config_file}): {settings.model_dump()}")
    return settings
