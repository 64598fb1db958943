"""Arithmetic in Z/p, subsets of Z/p as bitsets, and discrete Fourier analysis.

A :class:`ResidueSet` stores its members as the set bits of a Python ``int``
of width ``p``.  Translation is a bit rotation, so a sumset costs
``min(|A|, |B|)`` shifted ORs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ComputationError, InputError, ResourceError

DEFAULT_MAX_PRIME = 9973

_INT64_MAX = np.iinfo(np.int64).max


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, eq=False)
class PrimeField:
    """The field with ``p`` elements, ``p`` an odd prime."""

    p: int
    inverse_table: tuple

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise InputError("0 has no inverse")
        return self.inverse_table[a]

    @property
    def mask(self) -> int:
        return (1 << self.p) - 1


@lru_cache(maxsize=None)
def _build_field(p: int) -> PrimeField:
    table = [0] * p
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return PrimeField(p, tuple(table))


def prime_field(p: int, max_prime: int = DEFAULT_MAX_PRIME) -> PrimeField:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise InputError(f"p must be an integer, got {p!r}")
    p = int(p)
    if p == 2:
        raise InputError("p = 2 is not supported; p must be an odd prime")
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    if p > max_prime:
        raise ResourceError(f"p = {p} exceeds the field cap {max_prime}")
    return _build_field(p)


def _iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class ResidueSet:
    """Immutable subset of Z/p."""

    __slots__ = ("field", "bits")

    def __init__(self, field: PrimeField, bits: int = 0):
        if bits < 0 or bits >> field.p:
            raise InputError("bit pattern has members outside [0, p)")
        self.field = field
        self.bits = bits

    @classmethod
    def from_iterable(cls, field: PrimeField, values: Iterable[int]) -> "ResidueSet":
        bits = 0
        for v in values:
            bits |= 1 << (int(v) % field.p)
        return cls(field, bits)

    @classmethod
    def interval(cls, field: PrimeField, lo: int, hi: int) -> "ResidueSet":
        """{lo, lo+1, ..., hi-1} reduced mod p."""
        if hi - lo >= field.p:
            return cls.full(field)
        return cls.from_iterable(field, range(lo, hi))

    @classmethod
    def full(cls, field: PrimeField) -> "ResidueSet":
        return cls(field, field.mask)

    @classmethod
    def units(cls, field: PrimeField) -> "ResidueSet":
        return cls(field, field.mask ^ 1)

    @classmethod
    def empty(cls, field: PrimeField) -> "ResidueSet":
        return cls(field, 0)

    @property
    def p(self) -> int:
        return self.field.p

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __iter__(self) -> Iterator[int]:
        return _iter_bits(self.bits)

    def __contains__(self, a) -> bool:
        return bool((self.bits >> (int(a) % self.field.p)) & 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ResidueSet)
            and other.field.p == self.field.p
            and other.bits == self.bits
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.bits))

    def __repr__(self) -> str:
        return f"ResidueSet(p={self.p}, {sorted(self)})"

    def _check(self, other: "ResidueSet") -> None:
        if not isinstance(other, ResidueSet):
            raise InputError(f"expected a ResidueSet, got {type(other).__name__}")
        if other.field.p != self.field.p:
            raise InputError(f"field mismatch: p={self.p} vs p={other.p}")

    def __or__(self, other: "ResidueSet") -> "ResidueSet":
        self._check(other)
        return ResidueSet(self.field, self.bits | other.bits)

    def __and__(self, other: "ResidueSet") -> "ResidueSet":
        self._check(other)
        return ResidueSet(self.field, self.bits & other.bits)

    def __sub__(self, other: "ResidueSet") -> "ResidueSet":
        self._check(other)
        return ResidueSet(self.field, self.bits & ~other.bits)

    def complement(self) -> "ResidueSet":
        return ResidueSet(self.field, self.field.mask ^ self.bits)

    def is_full(self) -> bool:
        return self.bits == self.field.mask

    def translate(self, c: int) -> "ResidueSet":
        """{a + c : a in self}, a rotation of the bit pattern."""
        p = self.field.p
        c %= p
        if c == 0:
            return self
        b = self.bits
        return ResidueSet(self.field, ((b << c) | (b >> (p - c))) & self.field.mask)

    def negate(self) -> "ResidueSet":
        p = self.field.p
        return ResidueSet.from_iterable(self.field, ((-a) % p for a in self))

    def reflect(self, a: int) -> "ResidueSet":
        """a - self."""
        return self.negate().translate(a)

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.field.p, dtype=np.int64)
        for a in self:
            out[a] = 1
        return out

    def to_list(self) -> list:
        return list(self)


def sumset(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    a._check(b)
    if len(a) > len(b):
        a, b = b, a
    p, mask, bb = a.field.p, a.field.mask, b.bits
    out = 0
    for s in a:
        out |= ((bb << s) | (bb >> (p - s))) & mask if s else bb
        if out == mask:
            break
    result = ResidueSet(a.field, out)
    if a and b and not result.is_full():
        # Cauchy-Davenport
        assert len(result) >= len(a) + len(b) - 1, (a, b, result)
    return result


def iterated_sumset(sets: Sequence[ResidueSet]) -> ResidueSet:
    acc = sets[0]
    for s in sets[1:]:
        acc = sumset(acc, s)
    return acc


def dilate(a: ResidueSet, lam: int) -> ResidueSet:
    p = a.field.p
    lam %= p
    if lam == 0:
        raise InputError("dilation factor must be nonzero mod p")
    return ResidueSet.from_iterable(a.field, (lam * x for x in a))


def product_set(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """{x*y : x in a, y in b}."""
    a._check(b)
    if not a or not b:
        return ResidueSet.empty(a.field)
    xs = np.fromiter(a, dtype=np.int64)
    ys = np.fromiter(b, dtype=np.int64)
    vals = np.unique(np.outer(xs, ys) % a.field.p)
    return ResidueSet.from_iterable(a.field, vals.tolist())


def product_count_table(x: ResidueSet, y: ResidueSet) -> np.ndarray:
    """r(t) = #{(a, b) in X x Y : a*b = t}, indexed by residue t."""
    x._check(y)
    if 0 in x or 0 in y:
        raise InputError("product_count_table needs subsets of the nonzero residues")
    p = x.field.p
    counts = np.zeros(p, dtype=np.int64)
    if x and y:
        xs = np.fromiter(x, dtype=np.int64)
        ys = np.fromiter(y, dtype=np.int64)
        np.add.at(counts, (np.outer(xs, ys) % p).ravel(), 1)
    return counts


@lru_cache(maxsize=64)
def _roots(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """values[r] = sum_x f(x) e(x r), e(t) = exp(2 pi i t / p)."""

    values: np.ndarray
    source_cardinality: int

    @property
    def p(self) -> int:
        return len(self.values)

    def parseval_sum(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def inverse(self) -> np.ndarray:
        return inverse_dft(self.values)


def dft(values: Sequence[float]) -> np.ndarray:
    """Naive O(p^2) transform with exact index reduction x*r mod p."""
    f = np.asarray(values)
    p = len(f)
    support = np.nonzero(f)[0]
    if len(support) == 0:
        return np.zeros(p, dtype=complex)
    idx = np.outer(support, np.arange(p)) % p
    return (f[support][:, None] * _roots(p)[idx]).sum(axis=0)


def inverse_dft(values: Sequence[complex]) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    p = len(v)
    idx = (-np.outer(np.arange(p), np.arange(p))) % p
    return (_roots(p)[idx] * v[None, :]).sum(axis=1) / p


def dft_indicator(a: ResidueSet) -> Spectrum:
    values = dft(a.indicator())
    # the r = 0 coefficient is a plain count; store it exactly
    values[0] = len(a)
    return Spectrum(values, len(a))


def cyclic_convolve(f: Sequence[int], g: Sequence[int]) -> np.ndarray:
    """Exact (f*g)(u) = sum_a f(a) g(u - a mod p) over int64."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape or f.ndim != 1:
        raise InputError("convolution operands must be equal-length 1-d sequences")
    if not (np.issubdtype(f.dtype, np.integer) and np.issubdtype(g.dtype, np.integer)):
        raise InputError("convolution operands must be integer-valued")
    if (f < 0).any() or (g < 0).any():
        raise InputError("convolution operands must be nonnegative")
    total = int(sum(int(v) for v in f)) * int(max((int(v) for v in g), default=0))
    if total > _INT64_MAX:
        raise ComputationError(
            f"convolution accumulator overflow: sum(f)*max(g) = {total} exceeds int64 "
            f"(p={len(f)}, sum(f)={int(f.sum())}, max(g)={int(g.max())})"
        )
    f = f.astype(np.int64)
    g = g.astype(np.int64)
    out = np.zeros(len(f), dtype=np.int64)
    for a in np.nonzero(f)[0]:
        out += f[a] * np.roll(g, int(a))
    return out


def representation_counts(a: ResidueSet, b: ResidueSet) -> np.ndarray:
    """#{(x, y) in A x B : x + y = u} for every u."""
    a._check(b)
    return cyclic_convolve(a.indicator(), b.indicator())


def set_to_json(a: ResidueSet) -> list:
    return a.to_list()


def set_from_json(field: PrimeField, obj) -> ResidueSet:
    """Sorted integer array, or {"lo": a, "hi": b} for the half-open interval."""
    if isinstance(obj, dict):
        if set(obj) != {"lo", "hi"}:
            raise InputError(f"interval object needs exactly 'lo' and 'hi', got {sorted(obj)}")
        lo, hi = obj["lo"], obj["hi"]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (lo, hi)):
            raise InputError("interval bounds must be integers")
        if hi < lo:
            raise InputError(f"empty or reversed interval [{lo}, {hi})")
        return ResidueSet.interval(field, lo, hi)
    if isinstance(obj, list):
        for v in obj:
            if not isinstance(v, int) or isinstance(v, bool):
                raise InputError(f"set members must be integers, got {v!r}")
        return ResidueSet.from_iterable(field, obj)
    raise InputError(f"cannot read a residue set from {obj!r}")
