"""Run configurations shared by the CLI, the scripts and the acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .linalg import Field


@dataclass
class RunConfig:
    field: str = "Q"
    window: Optional[int] = 4
    r_max: int = 4
    poly_cap: int = 4
    kudo: Optional[Tuple[int, int]] = None   # (s, n): Sq^s on fibre degree n
    as_json: bool = False
    experimental: bool = False

    @property
    def F(self) -> Field:
        return Field.parse(self.field)


@dataclass
class SelftestConfig:
    spaces: Tuple[str, ...] = ("point", "delta1", "delta2", "delta3", "delta4", "delta1-boundary",
                               "delta2-boundary", "delta3-boundary", "delta4-boundary", "rp2", "torus", "circle")
    omega_max: int = 4
    assoc_max: int = 3
    rb_arity: int = 3
    rb_depth: int = 2
    poly_cap: int = 3
    fields: Tuple[int, ...] = field(default=(2, 3, 0))
