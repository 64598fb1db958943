"""Bricks B = [X_1 x .. x X_n, Y_1 x .. x Y_n, Z] and their products, slice by slice.

For a product A.B of bricks, the slice over ``(u, v)`` is

    fiber(u, v) = (Z_A + Z_B) + sum_i { x * y' : x in X_i ∩ (u_i - X'_i),
                                               y' in Y'_i ∩ (v_i - Y_i) }

because in ``[x, y, z][x', y', z']`` the pairs ``(x, x')`` and ``(y, y')`` can
be chosen independently once ``x + x' = u`` and ``y + y' = v`` are fixed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import InputError, ResourceError
from .fp import PrimeField, ResidueSet, prime_field, product_set, sumset
from .heisenberg import DEFAULT_BRUTE_CAP, ElementSet, HeisElement, check_brute_cap

DEFAULT_FIBER_CAP = 10**7


@dataclass(frozen=True)
class Brick:
    xs: tuple
    ys: tuple
    z: ResidueSet
    # designated constructions (small-period example, the W != F construction)
    # use coordinate sets containing 0
    allow_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "ys", tuple(self.ys))
        if len(self.xs) != len(self.ys) or not self.xs:
            raise InputError("a brick needs n >= 1 X-sets and the same number of Y-sets")
        p = self.z.p
        for name, sets in (("X", self.xs), ("Y", self.ys)):
            for i, s in enumerate(sets):
                if s.p != p:
                    raise InputError(f"{name}_{i + 1} lives over F_{s.p}, Z over F_{p}")
                if not s:
                    raise InputError(f"{name}_{i + 1} is empty")
                if 0 in s and not self.allow_zero:
                    raise InputError(f"{name}_{i + 1} contains 0; brick coordinates must be nonzero")
        if not self.z:
            raise InputError("Z is empty")

    @property
    def field(self) -> PrimeField:
        return self.z.field

    @property
    def p(self) -> int:
        return self.z.p

    @property
    def n(self) -> int:
        return len(self.xs)

    def cardinality(self) -> int:
        total = len(self.z)
        for a, b in zip(self.xs, self.ys):
            total *= len(a) * len(b)
        return total

    __len__ = cardinality

    def contains(self, g: HeisElement) -> bool:
        if g.p != self.p or g.n != self.n:
            return False
        return (
            all(v in s for v, s in zip(g.x, self.xs))
            and all(v in s for v, s in zip(g.y, self.ys))
            and g.z in self.z
        )

    __contains__ = contains

    def components(self) -> list:
        """[("x", i, X_i), ..., ("y", i, Y_i), ...]."""
        return [("x", i, s) for i, s in enumerate(self.xs)] + [("y", i, s) for i, s in enumerate(self.ys)]

    def to_element_set(self, cap: int = DEFAULT_BRUTE_CAP) -> ElementSet:
        check_brute_cap(self.p, self.n, cap)
        out = ElementSet(self.p, self.n, cap=cap)
        coords = [list(s) for s in (*self.xs, *self.ys, self.z)]
        grid = np.array(list(itertools.product(*coords)), dtype=np.int64)
        n = self.n
        out.mask[out.encode(grid[:, :n], grid[:, n : 2 * n], grid[:, 2 * n])] = True
        return out


@dataclass(eq=False)
class FiberedProductSet:
    """A subset of H_n as a sparse map (u, v) -> nonempty fiber in Z/p."""

    field: PrimeField
    n: int
    fibers: dict = dc_field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def support(self) -> list:
        return sorted(self.fibers)

    def fiber(self, u, v) -> ResidueSet:
        got = self.fibers.get((tuple(u), tuple(v)))
        return got if got is not None else ResidueSet.empty(self.field)

    def cardinality(self) -> int:
        return sum(len(f) for f in self.fibers.values())

    __len__ = cardinality

    def __contains__(self, g: HeisElement) -> bool:
        return g.z in self.fiber(g.x, g.y)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiberedProductSet)
            and other.p == self.p
            and other.n == self.n
            and other.fibers == self.fibers
        )

    def projections(self):
        """(U_1..U_n, V_1..V_n, W): coordinate projections and the union of fibers."""
        us = [0] * self.n
        vs = [0] * self.n
        w = 0
        for (u, v), f in self.fibers.items():
            for i in range(self.n):
                us[i] |= 1 << u[i]
                vs[i] |= 1 << v[i]
            w |= f.bits
        F = self.field
        return (
            [ResidueSet(F, b) for b in us],
            [ResidueSet(F, b) for b in vs],
            ResidueSet(F, w),
        )

    def u_projection(self) -> set:
        return {u for u, _ in self.fibers}

    def v_projection(self) -> set:
        return {v for _, v in self.fibers}

    def right_translate(self, g: HeisElement) -> "FiberedProductSet":
        """{s g : s in self}; [u, v, w] g = [u + g.x, v + g.y, w + <u, g.y> + g.z]."""
        if g.p != self.p or g.n != self.n:
            raise InputError("translating element lives in another group")
        p = self.p
        out = {}
        for (u, v), f in self.fibers.items():
            nu = tuple((a + b) % p for a, b in zip(u, g.x))
            nv = tuple((a + b) % p for a, b in zip(v, g.y))
            shift = sum(a * b for a, b in zip(u, g.y)) + g.z
            out[(nu, nv)] = f.translate(shift)
        return FiberedProductSet(self.field, self.n, out)

    def to_element_set(self, cap: int = DEFAULT_BRUTE_CAP) -> ElementSet:
        out = ElementSet(self.p, self.n, cap=cap)
        p = self.p
        for (u, v), f in self.fibers.items():
            prefix = 0
            for val in (*u, *v):
                prefix = prefix * p + val
            base = prefix * p
            for w in f:
                out.mask[base + w] = True
        return out

    @classmethod
    def from_element_set(cls, s: ElementSet) -> "FiberedProductSet":
        F = prime_field(s.p)
        p, n = s.p, s.n
        fibers: dict = {}
        for code in s.codes():
            code = int(code)
            prefix, w = divmod(code, p)
            digits = []
            for _ in range(2 * n):
                prefix, d = divmod(prefix, p)
                digits.append(d)
            digits.reverse()
            key = (tuple(digits[:n]), tuple(digits[n:]))
            fibers[key] = fibers.get(key, 0) | (1 << w)
        return cls(F, n, {k: ResidueSet(F, b) for k, b in fibers.items()})

    def report(self, dump_fibers: bool = False) -> dict:
        us, vs, w = self.projections()
        out = {
            "p": self.p,
            "n": self.n,
            "cardinality": self.cardinality(),
            "support_size": len(self.fibers),
            "U": [s.to_list() for s in us],
            "V": [s.to_list() for s in vs],
            "W": w.to_list(),
        }
        if dump_fibers:
            out["fibers"] = [
                {"u": list(u), "v": list(v), "w": self.fibers[(u, v)].to_list()}
                for u, v in self.support
            ]
        return out


def _coordinate_tables(a_sets, b_sets, right: bool):
    """For each u: the set of first-factor (or second-factor) coordinates.

    left  (right=False): X_i ∩ (u - X'_i), the x from the first factor
    right (right=True):  Y'_i ∩ (v - Y_i), the y' from the second factor
    """
    tables = []
    for a, b in zip(a_sets, b_sets):
        table = {}
        for u in sumset(a, b):
            table[u] = (b & a.reflect(u)) if right else (a & b.reflect(u))
        tables.append(table)
    return tables


def fiber_count(left: Brick, right: Brick) -> int:
    total = 1
    for i in range(left.n):
        total *= len(sumset(left.xs[i], right.xs[i])) * len(sumset(left.ys[i], right.ys[i]))
    return total


def product_fibered(left: Brick, right: Brick, fiber_cap: int = DEFAULT_FIBER_CAP) -> FiberedProductSet:
    """Exact left . right as a fibered set."""
    if (left.p, left.n) != (right.p, right.n):
        raise InputError("bricks live in different groups")
    need = fiber_count(left, right)
    if need > fiber_cap:
        raise ResourceError(f"product needs {need} fibers, over the fiber cap {fiber_cap}")
    n = left.n
    xt = _coordinate_tables(left.xs, right.xs, right=False)
    yt = _coordinate_tables(left.ys, right.ys, right=True)
    # D_i(u_i, v_i) for every pair, computed once
    dtab = []
    for i in range(n):
        d = {}
        for u, xi in xt[i].items():
            for v, yi in yt[i].items():
                d[(u, v)] = product_set(xi, yi)
        dtab.append(d)
    base = sumset(left.z, right.z)
    fibers = {}

    def walk(i, partial, us, vs):
        if i == n:
            fibers[(tuple(us), tuple(vs))] = partial
            return
        for u in sorted(xt[i]):
            for v in sorted(yt[i]):
                walk(i + 1, sumset(partial, dtab[i][(u, v)]), us + [u], vs + [v])

    walk(0, base, [], [])
    return FiberedProductSet(left.field, n, fibers)


def square_fibered(b: Brick, fiber_cap: int = DEFAULT_FIBER_CAP) -> FiberedProductSet:
    return product_fibered(b, b, fiber_cap)


def projections(pset: FiberedProductSet):
    return pset.projections()


def fiber_at(left: Brick, right: Brick, u, v) -> ResidueSet:
    """A single fiber of left . right without building the rest."""
    acc = sumset(left.z, right.z)
    for i in range(left.n):
        xi = left.xs[i] & right.xs[i].reflect(u[i])
        yi = right.ys[i] & left.ys[i].reflect(v[i])
        if not xi or not yi:
            return ResidueSet.empty(left.field)
        acc = sumset(acc, product_set(xi, yi))
    return acc
