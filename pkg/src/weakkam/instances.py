"""Seeded instance generators.

``random_rational`` and ``random_float`` draw i.i.d. costs in a range;
``torus_lagrangian`` samples the circle of circumference 1 at
``grid_size`` equispaced points with ``c(y, x) = d(y, x)**2 / 2 + V(x)``,
so the minima of ``V`` carry zero-cost loops.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .core import FLOAT, RATIONAL, CostSpace, validate_space

KINDS = ("random_rational", "random_float", "torus_lagrangian")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str = "random_rational"
    n: Optional[int] = None
    grid_size: Optional[int] = None
    seed: int = 0
    cost_range: Tuple = (0, 10)
    denominator_bound: int = 8
    potential: Optional[Sequence] = None
    mode: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        lo, hi = self.cost_range
        if Fraction(lo) > Fraction(hi):
            raise ValueError(f"invalid cost range: lo={lo} > hi={hi}")
        if self.denominator_bound < 1:
            raise ValueError("denominator_bound must be at least 1")
        if self.kind == "torus_lagrangian":
            if self.grid_size is None or self.grid_size < 2:
                raise ValueError("torus_lagrangian needs grid_size >= 2")
        elif self.n is None or self.n < 1:
            raise ValueError("random generators need n >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSpec":
        data = dict(data)
        if "cost_range" in data:
            data["cost_range"] = tuple(data["cost_range"])
        if data.get("potential") is not None:
            data["potential"] = tuple(data["potential"])
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "grid_size": self.grid_size,
            "seed": self.seed,
            "cost_range": [str(v) for v in self.cost_range],
            "denominator_bound": self.denominator_bound,
            "potential": None if self.potential is None else [str(v) for v in self.potential],
            "mode": self.mode,
        }


def gen_random(spec: GeneratorSpec) -> CostSpace:
    """I.i.d. costs in ``spec.cost_range``, fully determined by ``spec.seed``.

    Rational costs pick a denominator uniformly in ``1..denominator_bound``
    and then a numerator uniformly among those landing in the range.
    """
    if spec.kind == "random_rational":
        lo, hi = Fraction(spec.cost_range[0]), Fraction(spec.cost_range[1])
        rng = random.Random(spec.seed)
        cost = []
        for _ in range(spec.n):
            row = []
            for _ in range(spec.n):
                while True:
                    q = rng.randint(1, spec.denominator_bound)
                    a, b = math.ceil(lo * q), math.floor(hi * q)
                    if a <= b:
                        break
                row.append(Fraction(rng.randint(a, b), q))
            cost.append(row)
        return validate_space(None, cost, RATIONAL)
    if spec.kind == "random_float":
        lo, hi = float(spec.cost_range[0]), float(spec.cost_range[1])
        rng = random.Random(spec.seed)
        cost = [[rng.uniform(lo, hi) for _ in range(spec.n)] for _ in range(spec.n)]
        return validate_space(None, cost, FLOAT)
    raise ValueError(f"gen_random cannot build kind {spec.kind!r}")


def circle_distance(i: int, j: int, grid_size: int) -> Fraction:
    k = abs(i - j) % grid_size
    return Fraction(min(k, grid_size - k), grid_size)


def gen_torus(spec: GeneratorSpec) -> CostSpace:
    """Discretized mechanical cost on the unit circle."""
    if spec.kind != "torus_lagrangian":
        raise ValueError(f"gen_torus cannot build kind {spec.kind!r}")
    m = spec.grid_size
    potential = spec.potential if spec.potential is not None else [0] * m
    if len(potential) != m:
        raise ValueError(f"potential has {len(potential)} entries, grid_size is {m}")
    mode = spec.mode or RATIONAL
    pot = [Fraction(v) if mode == RATIONAL else float(v) for v in potential]
    cost = [[circle_distance(y, x, m) ** 2 / 2 + pot[x] for x in range(m)] for y in range(m)]
    labels = [f"{Fraction(i, m)}" for i in range(m)]
    return validate_space(labels, cost, mode)


def generate(spec: GeneratorSpec) -> CostSpace:
    if spec.kind == "torus_lagrangian":
        return gen_torus(spec)
    return gen_random(spec)
