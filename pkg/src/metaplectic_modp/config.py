"""Run configuration shared by the command line and the verification suites."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .arith import FieldParams, PadicField, padic_field


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    f: int = 1
    precision: int = 24
    depth: int = 3  # largest Cartan depth enumerated by brute-force suites
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        FieldParams(self.p, self.f, self.precision)  # validates p, f, precision
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")

    def field(self) -> PadicField:
        return padic_field(self.p, self.f, self.precision)

    def to_json(self) -> dict:
        return asdict(self)
