"""Seeded random bricks and sum-product instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .brick import Brick
from .errors import InputError
from .fp import ResidueSet, prime_field
from .sumprod import SumProdInstance

KINDS = ("singleton", "interval", "uniform")


@dataclass(frozen=True)
class RandomBrickSpec:
    """``components`` holds 2n (kind, size) pairs: X_1..X_n then Y_1..Y_n."""

    p: int
    n: int
    components: tuple
    z_size: int

    def __post_init__(self):
        if len(self.components) != 2 * self.n:
            raise InputError(f"need {2 * self.n} component profiles, got {len(self.components)}")
        for kind, size in self.components:
            if kind not in KINDS:
                raise InputError(f"unknown component kind {kind!r}")
            if kind == "singleton" and size != 1:
                raise InputError("a singleton component has size 1")
            if not 1 <= size <= self.p - 1:
                raise InputError(f"component size {size} not in [1, {self.p - 1}]")
        if not 1 <= self.z_size <= self.p:
            raise InputError(f"z_size {self.z_size} not in [1, {self.p}]")


def _component(rng, F, kind: str, size: int) -> ResidueSet:
    p = F.p
    if kind == "interval":
        start = int(rng.integers(1, p - size + 1))
        return ResidueSet.from_iterable(F, range(start, start + size))
    vals = rng.choice(np.arange(1, p), size=size, replace=False)
    return ResidueSet.from_iterable(F, vals.tolist())


def random_brick(spec: RandomBrickSpec, seed) -> Brick:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    F = prime_field(spec.p)
    comps = [_component(rng, F, kind, size) for kind, size in spec.components]
    z = ResidueSet.from_iterable(F, rng.choice(spec.p, size=spec.z_size, replace=False).tolist())
    return Brick(comps[: spec.n], comps[spec.n :], z)


def random_spec(rng, p: int, n: int, min_size: int = 1) -> RandomBrickSpec:
    """A spec with random kinds and sizes; sizes are uniform on [min_size, p-1]."""
    comps = []
    for _ in range(2 * n):
        size = int(rng.integers(min_size, p))
        kind = "singleton" if size == 1 else KINDS[1 + int(rng.integers(0, 2))]
        comps.append((kind, size))
    return RandomBrickSpec(p, n, tuple(comps), int(rng.integers(1, p + 1)))


def random_bricks(p: int, n: int, count: int, seed: int, min_size: int = 1) -> list:
    rng = np.random.default_rng(seed)
    return [random_brick(random_spec(rng, p, n, min_size), rng) for _ in range(count)]


def edge_bricks(p: int, n: int) -> list:
    """Singletons, full F*, |Z| = 1, |Z| > p/2 and a mixed one."""
    F = prime_field(p)
    one = ResidueSet.from_iterable(F, [1])
    units = ResidueSet.units(F)
    half = ResidueSet.interval(F, 0, p // 2 + 1)
    zero = ResidueSet.from_iterable(F, [0])
    low = ResidueSet.interval(F, 1, 3)
    return [
        Brick([one] * n, [one] * n, zero),
        Brick([units] * n, [units] * n, zero),
        Brick([units] * n, [units] * n, ResidueSet.full(F)),
        Brick([one] * n, [units] * n, half),
        Brick([low] * n, [one] * n, zero),
        Brick([units] * n, [low] * n, ResidueSet.interval(F, 0, 2)),
    ]


def random_sumprod_instances(p: int, n: int, m: int, count: int, seed: int,
                             require_condition: bool = True, max_tries: int = 10**6) -> list:
    """Random instances, optionally conditioned on |Z|^2 prod|X_i||Y_i| > p^(n+2)."""
    rng = np.random.default_rng(seed)
    F = prime_field(p)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise InputError("could not sample enough instances meeting the condition")
        xs, ys = [], []
        for _ in range(n):
            for target in (xs, ys):
                size = int(rng.integers(1, p))
                target.append(ResidueSet.from_iterable(F, rng.choice(np.arange(1, p), size, replace=False).tolist()))
        z = ResidueSet.from_iterable(F, rng.choice(p, int(rng.integers(1, p + 1)), replace=False).tolist())
        inst = SumProdInstance(m, xs, ys, z)
        if require_condition and not inst.condition_holds():
            continue
        out.append(inst)
    return out
