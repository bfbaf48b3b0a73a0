"""
Strongly-typed configuration for the toolkit.

Uses Pydantic for validation and type safety.
"""
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from .functionals import FunctionalSpec


class CertifyConfig(BaseModel):
    """Settings of the interval branch-and-bound certifier."""

    tol: float = Field(
        default=1e-6,
        gt=0.0,
        description="Slack added to the claimed bound"
    )

    max_boxes: int = Field(
        default=10_000_000,
        ge=1,
        description="Work budget in processed boxes"
    )

    edge_points: int = Field(
        default=1000,
        ge=2,
        description="Points per edge for the closed-form cross-check"
    )


class SamplerConfig(BaseModel):
    """Rejection sampler over (a_2, Schur parameters)."""

    degree: int = Field(default=4, ge=0, description="Number of Schur parameters")

    a2_radius: float = Field(default=2.0, gt=0.0, le=2.0)

    gamma_radius: float = Field(
        default=0.999,
        gt=0.0,
        le=1.0 - 1e-9,
        description="Radius of the disk gamma_0 is drawn from"
    )

    gamma_decay: float = Field(
        default=0.5,
        gt=0.0,
        le=1.0,
        description="gamma_k is drawn from radius gamma_radius * gamma_decay**k"
    )

    max_tries: int = Field(default=10_000, ge=1)

    margin: float = Field(default=1e-6, ge=0.0, lt=1.0)

    order: int = Field(default=64, ge=5)

    grid_size: int = Field(default=8192, ge=64)

    seed: int = Field(default=20240531, description="Random seed for reproducibility")


class SearchConfig(BaseModel):
    """Randomized extremal search for one functional."""

    spec: FunctionalSpec

    degree: int = Field(default=4, ge=0)

    restarts: int = Field(default=50, ge=1)

    iterations: int = Field(default=500, ge=0, description="Simplex iterations per restart")

    rng_seed: int = Field(default=20240531, ge=0, lt=2**64)

    order: int = Field(default=64, ge=5)

    margin: float = Field(default=1e-6, gt=0.0, lt=1.0)

    grid_size: int = Field(
        default=2048,
        ge=64,
        description="Boundary grid of the membership test inside the optimizer"
    )

    workers: int = Field(default=1, ge=1, description="Restarts evaluated concurrently")

    @field_validator('spec', mode='before')
    @classmethod
    def parse_spec(cls, v: Union[str, FunctionalSpec]) -> FunctionalSpec:
        """Accept the CLI spec syntax as well as parsed specs."""
        if isinstance(v, str):
            return FunctionalSpec.parse(v)
        return v

    @model_validator(mode='after')
    def check_order(self) -> 'SearchConfig':
        """Series order must reach the coefficient the functional reads."""
        if self.order < self.spec.required_index:
            raise ValueError(
                f"Order {self.order} too small for {self.spec.label} "
                f"(needs {self.spec.required_index})"
            )
        return self

    def sampler(self) -> SamplerConfig:
        """Sampler settings matching this search."""
        return SamplerConfig(
            degree=self.degree,
            margin=self.margin,
            order=self.order,
            grid_size=self.grid_size,
            seed=self.rng_seed,
        )


class ToolkitConfig(BaseModel):
    """Top-level settings shared by all commands."""

    log_level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR'] = Field(
        default='WARNING',
        description="Logging verbosity"
    )

    log_file: Optional[Path] = Field(
        default=None,
        description="Optional file receiving a copy of the structured log"
    )
