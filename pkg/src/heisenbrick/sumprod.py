"""When does mZ + X_1 Y_1 + ... + X_n Y_n cover Z/p?

Two independent routes give the number N(u) of representations

    u = z_1 + ... + z_m + x_1 y_1 + ... + x_n y_n:

* exact: integer cyclic convolution of the indicator of Z (m times) with the
  product-count tables r_i(t) = #{(a, b) in X_i x Y_i : a b = t};
* spectral: with f_i(t) = r_i(t) / |X_i|,
  p * N(u) / prod|X_i| = sum_r Zhat(r)^m prod_i fhat_i(r) e(-r u).

Coverage decisions use the exact route only; the spectral route is a
consistency check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ClaimFailure, InputError
from .fp import ResidueSet, _roots, cyclic_convolve, dft, dft_indicator, product_count_table

SPECTRAL_RTOL = 1e-6


@dataclass(frozen=True)
class SumProdInstance:
    m: int
    xs: tuple
    ys: tuple
    z: ResidueSet

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "ys", tuple(self.ys))
        if not isinstance(self.m, int) or self.m < 1:
            raise InputError(f"m must be a positive integer, got {self.m!r}")
        if len(self.xs) != len(self.ys) or not self.xs:
            raise InputError("need n >= 1 pairs (X_i, Y_i)")
        for name, sets in (("X", self.xs), ("Y", self.ys)):
            for i, s in enumerate(sets):
                if s.p != self.z.p:
                    raise InputError(f"{name}_{i + 1} lives over another field")
                if not s or 0 in s:
                    raise InputError(f"{name}_{i + 1} must be a nonempty set of nonzero residues")
        if not self.z:
            raise InputError("Z is empty")

    @property
    def p(self) -> int:
        return self.z.p

    @property
    def n(self) -> int:
        return len(self.xs)

    def condition_lhs(self) -> int:
        lhs = len(self.z) ** 2
        for a, b in zip(self.xs, self.ys):
            lhs *= len(a) * len(b)
        return lhs

    def condition_rhs(self) -> int:
        return self.p ** (self.n + 2)

    def condition_margin(self) -> int:
        """|Z|^2 prod|X_i||Y_i| - p^(n+2), exact."""
        return self.condition_lhs() - self.condition_rhs()

    def condition_holds(self) -> bool:
        return self.condition_margin() > 0


def _check_units(x: ResidueSet, y: ResidueSet) -> None:
    if x.p != y.p:
        raise InputError("X and Y live over different fields")
    if not x or not y:
        raise InputError("X and Y must be nonempty")
    if 0 in x or 0 in y:
        raise InputError("X and Y must avoid 0")


def normalized_f(x: ResidueSet, y: ResidueSet) -> np.ndarray:
    """f(t) = (1/|X|) #{a in X : t/a in Y}."""
    _check_units(x, y)
    inv = x.field.inverse_table
    ind = y.indicator()
    t = np.arange(x.p)
    f = np.zeros(x.p)
    for a in x:
        f += ind[(t * inv[a]) % x.p]
    return f / len(x)


@dataclass(frozen=True)
class FSpectrumReport:
    fhat: np.ndarray
    fhat_zero: complex
    y_size: int
    bound: float
    max_nonzero: float
    identity_error: float

    @property
    def zero_ok(self) -> bool:
        return abs(self.fhat_zero - self.y_size) <= 1e-9 * len(self.fhat)

    @property
    def bound_ok(self) -> bool:
        return self.max_nonzero <= self.bound * (1 + 1e-9)

    @property
    def ok(self) -> bool:
        return self.zero_ok and self.bound_ok


def f_spectrum_checks(x: ResidueSet, y: ResidueSet) -> FSpectrumReport:
    """Check fhat(0) = |Y| and |fhat(r)| <= sqrt(p|Y|/|X|) for r != 0."""
    f = normalized_f(x, y)
    p = x.p
    fhat = dft(f)
    yhat = dft_indicator(y).values
    # fhat(r) = (1/|X|) sum_{a in X} Yhat(r a)
    r = np.arange(p)
    via_y = np.zeros(p, dtype=complex)
    for a in x:
        via_y += yhat[(r * a) % p]
    via_y /= len(x)
    bound = math.sqrt(p * len(y) / len(x))
    report = FSpectrumReport(
        fhat=fhat,
        fhat_zero=complex(fhat[0]),
        y_size=len(y),
        bound=bound,
        max_nonzero=float(np.abs(fhat[1:]).max()),
        identity_error=float(np.abs(fhat - via_y).max()),
    )
    if not report.ok:
        worst = int(np.argmax(np.abs(fhat[1:]))) + 1
        raise ClaimFailure(
            f"spectral bound failed for X={x.to_list()}, Y={y.to_list()}",
            witness={"r": worst, "abs_fhat": abs(complex(fhat[worst])), "bound": bound,
                     "fhat0": [report.fhat_zero.real, report.fhat_zero.imag]},
        )
    return report


@dataclass(frozen=True)
class SolutionProfile:
    exact_counts: np.ndarray
    normalized: np.ndarray
    fourier_pS: np.ndarray
    threshold_holds: bool
    max_spectral_error: float

    def min_count(self) -> int:
        return int(self.exact_counts.min())

    def argmin(self) -> int:
        return int(np.argmin(self.exact_counts))


def exact_counts(inst: SumProdInstance) -> np.ndarray:
    ind = inst.z.indicator()
    acc = ind
    for _ in range(inst.m - 1):
        acc = cyclic_convolve(acc, ind)
    for a, b in zip(inst.xs, inst.ys):
        acc = cyclic_convolve(acc, product_count_table(a, b))
    return acc


def fourier_pS(inst: SumProdInstance) -> np.ndarray:
    """sum_r Zhat(r)^m prod_i fhat_i(r) e(-r u), for every u."""
    p = inst.p
    spec = dft_indicator(inst.z).values ** inst.m
    for a, b in zip(inst.xs, inst.ys):
        spec = spec * dft(normalized_f(a, b))
    idx = (-np.outer(np.arange(p), np.arange(p))) % p
    return (_roots(p)[idx] * spec[None, :]).sum(axis=1)


def solution_profile(inst: SumProdInstance) -> SolutionProfile:
    counts = exact_counts(inst)
    denom = 1
    for a in inst.xs:
        denom *= len(a)
    normalized = counts / denom
    pS = fourier_pS(inst)
    p = inst.p
    err = np.abs(p * normalized - pS)
    scale = SPECTRAL_RTOL * p * np.maximum(1.0, normalized)
    expected_total = len(inst.z) ** inst.m
    for a, b in zip(inst.xs, inst.ys):
        expected_total *= len(a) * len(b)
    if int(counts.sum()) != expected_total:
        raise ClaimFailure("counting identity failed", witness={"sum": int(counts.sum()), "expected": expected_total})
    if (err > scale).any():
        u = int(np.argmax(err - scale))
        raise ClaimFailure(
            "exact and spectral solution counts disagree",
            witness={"u": u, "exact_pS": float(p * normalized[u]), "fourier_pS": [pS[u].real, pS[u].imag]},
        )
    return SolutionProfile(
        exact_counts=counts,
        normalized=normalized,
        fourier_pS=pS,
        threshold_holds=inst.condition_holds(),
        max_spectral_error=float(err.max()),
    )


def positivity_chain(inst: SumProdInstance) -> float:
    """|Z|^m prod|Y_i| - p |Z|^(m-1) prod sqrt(p|Y_i|/|X_i|); positive forces N(u) > 0."""
    zs = len(inst.z)
    main = float(zs) ** inst.m
    err = inst.p * float(zs) ** (inst.m - 1)
    for a, b in zip(inst.xs, inst.ys):
        main *= len(b)
        err *= math.sqrt(inst.p * len(b) / len(a))
    return main - err


@dataclass(frozen=True)
class Coverage:
    covers: bool
    missed: Optional[int]
    condition_holds: bool
    margin: int
    profile: SolutionProfile

    def report(self) -> dict:
        return {
            "covers": self.covers,
            "missed_residue": self.missed,
            "condition_holds": self.condition_holds,
            "condition_margin": self.margin,
            "min_count": self.profile.min_count(),
            "argmin": self.profile.argmin(),
            "max_spectral_error": self.profile.max_spectral_error,
        }


def covers_field(inst: SumProdInstance) -> Coverage:
    profile = solution_profile(inst)
    counts = profile.exact_counts
    zeros = np.flatnonzero(counts == 0)
    covers = len(zeros) == 0
    missed = None if covers else int(zeros[0])
    result = Coverage(covers, missed, inst.condition_holds(), inst.condition_margin(), profile)
    if inst.m >= 2 and result.condition_holds and not covers:
        raise ClaimFailure(
            "condition |Z|^2 prod|X_i||Y_i| > p^(n+2) holds but the sum misses a residue",
            witness={"u": missed, "margin": result.margin},
        )
    return result
