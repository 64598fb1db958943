"""The Heisenberg group H_n over Z/p.

An element ``[x, y, z]`` stands for the unitriangular matrix with first row
``(1, x, z)``, last column ``(z, y, 1)`` and identity block ``I_n``.  Only the
flat triple is stored; the product rule

    [x, y, z] [x', y', z'] = [x + x', y + y', <x, y'> + z + z']

determines the group.

:class:`ElementSet` is a dense boolean mask over all ``p^(2n+1)`` elements and
backs the brute-force oracles.  Element codes are mixed-radix integers with
digits ``x_1..x_n, y_1..y_n, z`` (``z`` least significant), so sorting codes
gives lexicographic order on ``(x, y, z)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import InputError, ResourceError

DEFAULT_BRUTE_CAP = 10**6


@dataclass(frozen=True, slots=True)
class HeisElement:
    x: tuple
    y: tuple
    z: int
    p: int

    def __post_init__(self):
        if len(self.x) != len(self.y) or len(self.x) < 1:
            raise InputError("x and y must have the same length n >= 1")
        p = self.p
        for v in (*self.x, *self.y, self.z):
            if not 0 <= v < p:
                raise InputError(f"entry {v} outside [0, {p})")

    @classmethod
    def make(cls, x, y, z, p) -> "HeisElement":
        return cls(tuple(int(v) % p for v in x), tuple(int(v) % p for v in y), int(z) % p, p)

    @classmethod
    def identity(cls, p: int, n: int) -> "HeisElement":
        return cls((0,) * n, (0,) * n, 0, p)

    @property
    def n(self) -> int:
        return len(self.x)

    def __mul__(self, other: "HeisElement") -> "HeisElement":
        return mul(self, other)

    def __repr__(self):
        return f"[{list(self.x)}, {list(self.y)}, {self.z}]_{self.p}"

    def to_json(self) -> dict:
        return {"x": list(self.x), "y": list(self.y), "z": self.z}

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "HeisElement":
        try:
            return cls.make(obj["x"], obj["y"], obj["z"], p)
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad element JSON {obj!r}: {exc}") from None


def _same_group(a: HeisElement, b: HeisElement) -> None:
    if a.p != b.p or len(a.x) != len(b.x):
        raise InputError(f"group mismatch: (p={a.p}, n={a.n}) vs (p={b.p}, n={b.n})")


def mul(a: HeisElement, b: HeisElement) -> HeisElement:
    _same_group(a, b)
    p = a.p
    return HeisElement(
        tuple((s + t) % p for s, t in zip(a.x, b.x)),
        tuple((s + t) % p for s, t in zip(a.y, b.y)),
        (sum(s * t for s, t in zip(a.x, b.y)) + a.z + b.z) % p,
        p,
    )


def inv(a: HeisElement) -> HeisElement:
    p = a.p
    return HeisElement(
        tuple(-v % p for v in a.x),
        tuple(-v % p for v in a.y),
        (sum(s * t for s, t in zip(a.x, a.y)) - a.z) % p,
        p,
    )


def power(a: HeisElement, k: int) -> HeisElement:
    """a^k = [k x, k y, k z + C(k, 2) <x, y>] for k >= 0."""
    p = a.p
    xy = sum(s * t for s, t in zip(a.x, a.y))
    return HeisElement(
        tuple(k * v % p for v in a.x),
        tuple(k * v % p for v in a.y),
        (k * a.z + k * (k - 1) // 2 * xy) % p,
        p,
    )


def commutator(a: HeisElement, b: HeisElement) -> HeisElement:
    """a b a^-1 b^-1."""
    return mul(mul(mul(a, b), inv(a)), inv(b))


def nilpotency_check(a: HeisElement, b: HeisElement, c: HeisElement) -> bool:
    """Evaluate the word a b a^-1 b^-1 c b a b^-1 a^-1 c^-1 and compare with e."""
    _same_group(a, b)
    _same_group(a, c)
    ai, bi, ci = inv(a), inv(b), inv(c)
    word = [a, b, ai, bi, c, b, a, bi, ai, ci]
    acc = word[0]
    for g in word[1:]:
        acc = mul(acc, g)
    return acc == HeisElement.identity(a.p, a.n)


def random_element(rng, p: int, n: int) -> HeisElement:
    vals = [int(v) for v in rng.integers(0, p, size=2 * n + 1)]
    return HeisElement(tuple(vals[:n]), tuple(vals[n : 2 * n]), vals[-1], p)


# --------------------------------------------------------------------------
# explicit subsets


def group_order(p: int, n: int) -> int:
    return p ** (2 * n + 1)


def check_brute_cap(p: int, n: int, cap: int = DEFAULT_BRUTE_CAP) -> None:
    if group_order(p, n) > cap:
        raise ResourceError(
            f"|H_{n}| = {p}^{2 * n + 1} = {group_order(p, n)} exceeds the brute-force cap {cap}"
        )


class ElementSet:
    """Explicit subset of H_n, stored as a boolean mask over element codes."""

    __slots__ = ("p", "n", "mask")

    def __init__(self, p: int, n: int, mask: Optional[np.ndarray] = None, cap: int = DEFAULT_BRUTE_CAP):
        check_brute_cap(p, n, cap)
        self.p = p
        self.n = n
        size = group_order(p, n)
        if mask is None:
            mask = np.zeros(size, dtype=bool)
        elif mask.shape != (size,):
            raise InputError("mask has the wrong length for this group")
        self.mask = mask

    # -- encoding -----------------------------------------------------------

    def encode(self, xs: np.ndarray, ys: np.ndarray, zs: np.ndarray) -> np.ndarray:
        """Codes for rows of ``xs`` (k, n), ``ys`` (k, n) and ``zs`` (k,)."""
        p = self.p
        code = np.zeros(len(zs), dtype=np.int64)
        for col in range(self.n):
            code = code * p + xs[:, col] % p
        for col in range(self.n):
            code = code * p + ys[:, col] % p
        return code * p + zs % p

    def decode(self, codes: np.ndarray):
        p, n = self.p, self.n
        codes = np.asarray(codes, dtype=np.int64)
        zs = codes % p
        rest = codes // p
        ys = np.empty((len(codes), n), dtype=np.int64)
        xs = np.empty((len(codes), n), dtype=np.int64)
        for col in reversed(range(n)):
            ys[:, col] = rest % p
            rest //= p
        for col in reversed(range(n)):
            xs[:, col] = rest % p
            rest //= p
        return xs, ys, zs

    def code_of(self, g: HeisElement) -> int:
        self._check_element(g)
        code = 0
        for v in (*g.x, *g.y, g.z):
            code = code * self.p + v
        return code

    def element_of(self, code: int) -> HeisElement:
        xs, ys, zs = self.decode(np.array([code]))
        return HeisElement(tuple(int(v) for v in xs[0]), tuple(int(v) for v in ys[0]), int(zs[0]), self.p)

    def _check_element(self, g: HeisElement) -> None:
        if g.p != self.p or g.n != self.n:
            raise InputError(f"element of H_{g.n}(F_{g.p}) used with H_{self.n}(F_{self.p})")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_elements(cls, p: int, n: int, elements: Iterable[HeisElement], cap: int = DEFAULT_BRUTE_CAP) -> "ElementSet":
        s = cls(p, n, cap=cap)
        for g in elements:
            s.mask[s.code_of(g)] = True
        return s

    @classmethod
    def from_codes(cls, p: int, n: int, codes, cap: int = DEFAULT_BRUTE_CAP) -> "ElementSet":
        s = cls(p, n, cap=cap)
        s.mask[np.asarray(codes, dtype=np.int64)] = True
        return s

    @classmethod
    def full(cls, p: int, n: int, cap: int = DEFAULT_BRUTE_CAP) -> "ElementSet":
        check_brute_cap(p, n, cap)
        return cls(p, n, np.ones(group_order(p, n), dtype=bool), cap=cap)

    # -- container protocol ---------------------------------------------------

    def codes(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def arrays(self):
        return self.decode(self.codes())

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self) -> Iterator[HeisElement]:
        xs, ys, zs = self.arrays()
        for i in range(len(zs)):
            yield HeisElement(tuple(int(v) for v in xs[i]), tuple(int(v) for v in ys[i]), int(zs[i]), self.p)

    def __contains__(self, g: HeisElement) -> bool:
        return bool(self.mask[self.code_of(g)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ElementSet)
            and (other.p, other.n) == (self.p, self.n)
            and bool(np.array_equal(other.mask, self.mask))
        )

    def __le__(self, other: "ElementSet") -> bool:
        return not bool((self.mask & ~other.mask).any())

    def __repr__(self):
        return f"ElementSet(p={self.p}, n={self.n}, size={len(self)})"

    def _same(self, other: "ElementSet") -> None:
        if (other.p, other.n) != (self.p, self.n):
            raise InputError("element sets live in different groups")

    def right_multiply_codes(self, g: HeisElement) -> np.ndarray:
        """Codes of {s g : s in self}."""
        self._check_element(g)
        xs, ys, zs = self.arrays()
        gx, gy = np.array(g.x), np.array(g.y)
        return self.encode(xs + gx, ys + gy, zs + xs @ gy + g.z)


def brute_product_set(s: ElementSet, t: ElementSet, chunk: int = 1 << 21) -> ElementSet:
    """{a b : a in S, b in T} by enumerating all pairs."""
    s._same(t)
    out = ElementSet(s.p, s.n, cap=max(group_order(s.p, s.n), 1))
    sx, sy, sz = s.arrays()
    tx, ty, tz = t.arrays()
    if len(sz) == 0 or len(tz) == 0:
        return out
    rows = max(1, chunk // len(tz))
    for start in range(0, len(sz), rows):
        ax, ay, az = sx[start : start + rows], sy[start : start + rows], sz[start : start + rows]
        k, m = len(az), len(tz)
        px = (ax[:, None, :] + tx[None, :, :]).reshape(k * m, s.n)
        py = (ay[:, None, :] + ty[None, :, :]).reshape(k * m, s.n)
        pz = (az[:, None] + tz[None, :] + ax @ ty.T).reshape(k * m)
        out.mask[out.encode(px, py, pz)] = True
    return out


def lemma1_check(s: ElementSet, t: ElementSet) -> bool:
    """True unless |S| + |T| > |H_n| and yet S T misses an element."""
    if len(s) + len(t) <= group_order(s.p, s.n):
        return True
    return len(brute_product_set(s, t)) == group_order(s.p, s.n)


def conjugate_set(s: ElementSet, g: HeisElement) -> ElementSet:
    """{g^-1 x g : x in S}."""
    s._check_element(g)
    gi = inv(g)
    xs, ys, zs = s.arrays()
    gx, gy = np.array(gi.x), np.array(gi.y)
    # gi * x
    lx, ly, lz = xs + gx, ys + gy, zs + ys @ gx + gi.z
    hx, hy = np.array(g.x), np.array(g.y)
    # (gi x) * g
    return ElementSet.from_codes(s.p, s.n, s.encode(lx + hx, ly + hy, lz + lx @ hy + g.z))


def subgroup_violation(s: ElementSet):
    """Return None if S is a subgroup, else a witness.

    Witnesses: ``("identity",)``, ``("inverse", a)`` or ``("product", a, b)``
    with ``a * b`` outside S.
    """
    e = HeisElement.identity(s.p, s.n)
    if e not in s:
        return ("identity",)
    # closure: S g must stay inside S for every g in S
    for code in s.codes():
        g = s.element_of(int(code))
        prod = s.right_multiply_codes(g)
        missing = prod[~s.mask[prod]]
        if len(missing):
            # recover a with a * g = missing[0]
            target = s.element_of(int(missing[0]))
            return ("product", mul(target, inv(g)), g)
    # a finite set closed under products is closed under inverses; kept as a check
    for a in s:
        if inv(a) not in s:
            return ("inverse", a)
    return None


def is_subgroup(s: ElementSet) -> bool:
    return subgroup_violation(s) is None


def center_brute(p: int, n: int) -> ElementSet:
    """{g : g h = h g for all h}, by exhaustion."""
    full = ElementSet.full(p, n)
    elements = list(full)
    keep = [g for g in elements if all(mul(g, h) == mul(h, g) for h in elements)]
    return ElementSet.from_elements(p, n, keep)


# --------------------------------------------------------------------------
# coordinate subgroups


@dataclass(frozen=True)
class CoordinateSubgroup:
    """Profile (K_1..K_n, L_1..L_n, M); ``True`` marks a full coordinate."""

    kx: tuple
    ky: tuple
    m: bool

    def __post_init__(self):
        if len(self.kx) != len(self.ky) or not self.kx:
            raise InputError("kx and ky must have the same length n >= 1")

    @property
    def n(self) -> int:
        return len(self.kx)

    @classmethod
    def trivial(cls, n: int) -> "CoordinateSubgroup":
        return cls((False,) * n, (False,) * n, False)

    @classmethod
    def center(cls, n: int) -> "CoordinateSubgroup":
        return cls((False,) * n, (False,) * n, True)

    @classmethod
    def whole(cls, n: int) -> "CoordinateSubgroup":
        return cls((True,) * n, (True,) * n, True)

    def closure_violation(self) -> Optional[int]:
        """Index i with K_i = L_i = F while M = 0, or None."""
        if self.m:
            return None
        for i, (a, b) in enumerate(zip(self.kx, self.ky)):
            if a and b:
                return i
        return None

    def is_closed(self) -> bool:
        return self.closure_violation() is None

    def rank(self) -> int:
        return sum(self.kx) + sum(self.ky) + int(self.m)

    def order(self, p: int) -> int:
        return p ** self.rank()

    def is_trivial(self) -> bool:
        return self.rank() == 0

    def __le__(self, other: "CoordinateSubgroup") -> bool:
        return (
            all(a <= b for a, b in zip(self.kx, other.kx))
            and all(a <= b for a, b in zip(self.ky, other.ky))
            and self.m <= other.m
        )

    def generators(self, p: int) -> list:
        n = self.n
        gens = []
        for i in range(n):
            if self.kx[i]:
                gens.append(HeisElement(_unit(n, i), (0,) * n, 0, p))
        for i in range(n):
            if self.ky[i]:
                gens.append(HeisElement((0,) * n, _unit(n, i), 0, p))
        if self.m:
            gens.append(HeisElement((0,) * n, (0,) * n, 1, p))
        return gens

    def to_json(self) -> dict:
        bit = lambda flags: "".join("1" if f else "0" for f in flags)
        return {"kx": bit(self.kx), "ky": bit(self.ky), "m": "1" if self.m else "0"}

    @classmethod
    def from_json(cls, obj: dict) -> "CoordinateSubgroup":
        def flags(s):
            if not isinstance(s, str) or set(s) - {"0", "1"}:
                raise InputError(f"profile strings use only '0' and '1', got {s!r}")
            return tuple(c == "1" for c in s)

        try:
            m = flags(obj["m"])
            if len(m) != 1:
                raise InputError("'m' must be a single flag")
            return cls(flags(obj["kx"]), flags(obj["ky"]), m[0])
        except KeyError as exc:
            raise InputError(f"coordinate subgroup JSON missing {exc}") from None


def _unit(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


def profile_elements(g: CoordinateSubgroup, p: int, cap: int = DEFAULT_BRUTE_CAP) -> ElementSet:
    """The coordinate box of the profile, whether or not it is closed."""
    n = g.n
    check_brute_cap(p, n, cap)
    ranges = [range(p) if f else (0,) for f in (*g.kx, *g.ky, g.m)]
    out = ElementSet(p, n, cap=cap)
    for vals in itertools.product(*ranges):
        out.mask[out.code_of(HeisElement(vals[:n], vals[n : 2 * n], vals[-1], p))] = True
    return out


def coordinate_subgroup_elements(g: CoordinateSubgroup, p: int, cap: int = DEFAULT_BRUTE_CAP) -> ElementSet:
    i = g.closure_violation()
    if i is not None:
        raise InputError(
            f"profile is not a subgroup: K_{i + 1} = L_{i + 1} = F forces the center, but M = 0"
        )
    return profile_elements(g, p, cap)
