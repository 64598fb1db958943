"""Cosets and periods inside product sets of bricks.

Detectors work on a :class:`FiberedProductSet`; the brute-force oracles
(:func:`brute_stabilizer`, :func:`cyclic_coset_witness`) work on explicit
:class:`ElementSet` objects and are only available at tiny scale.

Thresholds of the form ``size > p/sqrt(2)`` and ``size > p/2`` are compared
as ``2 size^2 > p^2`` and ``2 size > p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .brick import DEFAULT_FIBER_CAP, Brick, FiberedProductSet, fiber_at, square_fibered
from .errors import ClaimFailure, InputError
from .fp import ResidueSet, prime_field, representation_counts
from .heisenberg import (
    DEFAULT_BRUTE_CAP,
    CoordinateSubgroup,
    ElementSet,
    HeisElement,
    group_order,
    subgroup_violation,
)
from .sumprod import SumProdInstance, covers_field

# c and the exponent numerator in  |BB|/|B| >= c (|B|/|G|)^(ln 3 / (2 ln p))
GROWTH_CONSTANT = Fraction(1, 4)
BOUND_RTOL = 1e-9


def choose_popular_shift(x: ResidueSet):
    """(a, X ∩ (a - X)) for the a maximizing the intersection; smallest a on ties."""
    if not x:
        raise InputError("popular shift of an empty set")
    counts = representation_counts(x, x)
    a = int(np.argmax(counts))
    tilde = x & x.reflect(a)
    assert len(tilde) == counts[a]
    # averaging over a: |X~| >= |X|^2 / p
    assert len(tilde) * x.p >= len(x) ** 2
    return a, tilde


# --------------------------------------------------------------------------
# center cosets


@dataclass
class CosetReport:
    center_coset_count: int
    coset_witnesses: list
    threshold_count: Fraction

    @property
    def passes(self) -> bool:
        return self.center_coset_count >= self.threshold_count

    def to_json(self) -> dict:
        return {
            "center_coset_count": self.center_coset_count,
            "threshold": [self.threshold_count.numerator, self.threshold_count.denominator],
            "threshold_float": float(self.threshold_count),
            "passes": self.passes,
            "witnesses": [{"a": list(a), "b": list(b)} for a, b in self.coset_witnesses],
        }


def count_center_cosets(pset: FiberedProductSet, b: Brick) -> CosetReport:
    """Count the (u, v) whose fiber is all of Z/p, i.e. cosets [u, v, F] inside P."""
    witnesses = [key for key in pset.support if pset.fibers[key].is_full()]
    return CosetReport(len(witnesses), witnesses, Fraction(b.cardinality(), b.p))


# --------------------------------------------------------------------------
# popular-shift certificate and the set of good pairs


@dataclass
class Th1Certificate:
    shifts_x: tuple
    shifts_y: tuple
    tilde_x: tuple
    tilde_y: tuple
    lhs: int
    rhs: int
    witness: Optional[tuple] = None
    fiber_full: Optional[bool] = None
    sumprod_covers: Optional[bool] = None

    @property
    def holds(self) -> bool:
        return self.lhs > self.rhs

    def to_json(self) -> dict:
        return {
            "a": list(self.shifts_x),
            "b": list(self.shifts_y),
            "tilde_x_sizes": [len(s) for s in self.tilde_x],
            "tilde_y_sizes": [len(s) for s in self.tilde_y],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "condition_holds": self.holds,
            "fiber_full": self.fiber_full,
            "sumprod_covers": self.sumprod_covers,
        }


def _require_proper(b: Brick) -> None:
    if b.allow_zero and any(0 in s for s in (*b.xs, *b.ys)):
        raise InputError("this procedure needs coordinate sets inside the nonzero residues")


def th1_certificate(b: Brick, pset: Optional[FiberedProductSet] = None) -> Th1Certificate:
    """Popular shifts a_i, b_i; if |Z|^2 prod|X~_i||Y~_i| > p^(n+2), [a, b, F] lies in B.B.

    A positive certificate is checked twice: by the sum-product coverage test
    on (2Z, X~, Y~) and by the fiber itself.
    """
    _require_proper(b)
    sx = [choose_popular_shift(s) for s in b.xs]
    sy = [choose_popular_shift(s) for s in b.ys]
    lhs = len(b.z) ** 2
    for (_, tx), (_, ty) in zip(sx, sy):
        lhs *= len(tx) * len(ty)
    cert = Th1Certificate(
        shifts_x=tuple(a for a, _ in sx),
        shifts_y=tuple(a for a, _ in sy),
        tilde_x=tuple(t for _, t in sx),
        tilde_y=tuple(t for _, t in sy),
        lhs=lhs,
        rhs=b.p ** (b.n + 2),
    )
    if not cert.holds:
        return cert
    a, bb = cert.shifts_x, cert.shifts_y
    fib = pset.fiber(a, bb) if pset is not None else fiber_at(b, b, a, bb)
    cert.witness = (a, bb)
    cert.fiber_full = fib.is_full()
    cert.sumprod_covers = covers_field(SumProdInstance(2, cert.tilde_x, cert.tilde_y, b.z)).covers
    if not (cert.fiber_full and cert.sumprod_covers):
        raise ClaimFailure(
            "popular-shift certificate holds but [a, b, F] is not inside B.B",
            witness={"a": list(a), "b": list(bb), "missing": fib.complement().to_list()[:5],
                     "sumprod_covers": cert.sumprod_covers},
        )
    return cert


@dataclass
class GoodPairReport:
    pairs: list
    prod_xy: int
    p: int
    n: int
    z_size: int
    all_full: bool = True

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def two_step_bound(self) -> Optional[Fraction]:
        """(prod|X||Y|^2 - p^(3n+2)) / (prod|X||Y| - p^(n+2)), when the denominator is positive."""
        denom = self.prod_xy - self.p ** (self.n + 2)
        if denom <= 0:
            return None
        return Fraction(self.prod_xy**2 - self.p ** (3 * self.n + 2), denom)

    @property
    def final_bound(self) -> float:
        """(1 - p^(-3/2)) prod|X_i||Y_i|."""
        return (1 - self.p**-1.5) * self.prod_xy

    @property
    def final_precondition(self) -> bool:
        # prod|X_i||Y_i| > p^(3n/2 + 7/4), raised to the 4th power
        return self.prod_xy**4 > self.p ** (6 * self.n + 7)

    @property
    def meets_two_step(self) -> Optional[bool]:
        bound = self.two_step_bound
        return None if bound is None else self.size >= bound

    @property
    def meets_final(self) -> bool:
        return self.size >= self.final_bound

    def to_json(self, with_pairs: bool = False) -> dict:
        bound = self.two_step_bound
        out = {
            "size": self.size,
            "prod_xy": self.prod_xy,
            "two_step_bound": None if bound is None else [bound.numerator, bound.denominator],
            "two_step_bound_float": None if bound is None else float(bound),
            "meets_two_step": self.meets_two_step,
            "final_bound": self.final_bound,
            "final_precondition": self.final_precondition,
            "meets_final": self.meets_final,
            "all_full": self.all_full,
        }
        if with_pairs:
            out["pairs"] = [{"a": list(a), "b": list(b)} for a, b in self.pairs]
        return out


def good_pair_set_E(b: Brick, pset: Optional[FiberedProductSet] = None) -> GoodPairReport:
    """All (a, b) with |Z|^2 prod|X_i ∩ (a_i - X_i)||Y_i ∩ (b_i - Y_i)| > p^(n+2).

    Each member's fiber is checked to be all of Z/p.
    """
    _require_proper(b)
    p, n = b.p, b.n
    cx = [representation_counts(s, s) for s in b.xs]
    cy = [representation_counts(s, s) for s in b.ys]
    zz = len(b.z) ** 2
    rhs = p ** (n + 2)
    supports = [np.flatnonzero(c).tolist() for c in (*cx, *cy)]
    weights = [c for c in (*cx, *cy)]
    pairs = []
    for combo in itertools.product(*supports):
        val = zz
        for w, idx in zip(weights, combo):
            val *= int(w[idx])
        if val > rhs:
            pairs.append((tuple(combo[:n]), tuple(combo[n:])))
    prod_xy = 1
    for s, t in zip(b.xs, b.ys):
        prod_xy *= len(s) * len(t)
    report = GoodPairReport(pairs, prod_xy, p, n, len(b.z))
    for a, bb in pairs:
        fib = pset.fiber(a, bb) if pset is not None else fiber_at(b, b, a, bb)
        if not fib.is_full():
            report.all_full = False
            raise ClaimFailure("a good pair has a fiber that is not all of Z/p",
                               witness={"a": list(a), "b": list(bb)})
    if report.meets_two_step is False:
        raise ClaimFailure("|E| is below the two-step lower bound",
                           witness={"size": report.size, "bound": float(report.two_step_bound)})
    if report.final_precondition and not report.meets_final:
        raise ClaimFailure("|E| is below (1 - p^(-3/2)) prod|X_i||Y_i|",
                           witness={"size": report.size, "bound": report.final_bound})
    return report


# --------------------------------------------------------------------------
# periods


@dataclass
class PeriodReport:
    invariant_directions: list
    period: CoordinateSubgroup
    full_stabilizer_order: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "invariant_directions": self.invariant_directions,
            "period": self.period.to_json(),
            "period_rank": self.period.rank(),
            "full_stabilizer_order": self.full_stabilizer_order,
        }


def _direction_invariant(pset: FiberedProductSet, letter: str, i: int) -> bool:
    p = pset.p
    fibers = pset.fibers
    for (u, v), f in fibers.items():
        if letter == "x":
            nu = u[:i] + ((u[i] + 1) % p,) + u[i + 1 :]
            if fibers.get((nu, v)) != f:
                return False
        else:
            nv = v[:i] + ((v[i] + 1) % p,) + v[i + 1 :]
            # [u, v, w] [0, e_i, 0] = [u, v + e_i, w + u_i]
            if fibers.get((u, nv)) != f.translate(u[i]):
                return False
    return True


def structured_period(pset: FiberedProductSet, with_stabilizer: bool = False,
                      brute_cap: int = DEFAULT_BRUTE_CAP) -> PeriodReport:
    """Largest coordinate subgroup G with P G = P."""
    n = pset.n
    kx = tuple(_direction_invariant(pset, "x", i) for i in range(n))
    ky = tuple(_direction_invariant(pset, "y", i) for i in range(n))
    center = all(f.is_full() for f in pset.fibers.values())
    forced = any(a and b for a, b in zip(kx, ky))
    if forced and not center:
        # [e_i,0,0] and [0,e_i,0] both stabilize P, so their commutator must too
        raise ClaimFailure("stabilizer is not closed: x- and y-directions invariant but center is not",
                           witness={"kx": kx, "ky": ky})
    period = CoordinateSubgroup(kx, ky, center)
    dirs = [f"x{i + 1}" for i in range(n) if kx[i]] + [f"y{i + 1}" for i in range(n) if ky[i]]
    if center:
        dirs.append("z")
    for g in period.generators(pset.p):
        if pset.right_translate(g) != pset:
            raise ClaimFailure("direction test passed but P g != P", witness=g.to_json())
    report = PeriodReport(dirs, period)
    if with_stabilizer and group_order(pset.p, n) <= brute_cap:
        report.full_stabilizer_order = len(brute_stabilizer(pset.to_element_set(brute_cap)))
    return report


def _left_mul_arrays(gx, gy, gz, xs, ys, zs):
    """[g] [x, y, z] for a fixed g and arrays of right factors."""
    return xs + gx, ys + gy, zs + ys @ gx + gz


def brute_stabilizer(s: ElementSet) -> ElementSet:
    """{g : S g = S} by exhaustion.

    If S is nonempty, S g = S forces s0 g in S, so g ranges over s0^-1 S.
    """
    p, n = s.p, s.n
    if len(s) == 0:
        return ElementSet.full(p, n)
    xs, ys, zs = s.arrays()
    s0x, s0y, s0z = -xs[0], -ys[0], int(xs[0] @ ys[0]) - zs[0]
    cx, cy, cz = _left_mul_arrays(s0x, s0y, s0z, xs, ys, zs)
    out = ElementSet(p, n, cap=group_order(p, n))
    for gx, gy, gz in zip(cx % p, cy % p, cz % p):
        codes = s.encode(xs + gx, ys + gy, zs + xs @ gy + gz)
        if s.mask[codes].all():
            out.mask[s.encode(gx[None, :], gy[None, :], np.array([gz]))] = True
    witness = subgroup_violation(out)
    assert witness is None, witness
    return out


def cyclic_coset_witness(s: ElementSet):
    """Find s0 and h != e with s0 <h> inside S, or return None.

    Every nontrivial subgroup of H_n contains an element of order p, so S
    contains a coset of some nontrivial subgroup iff it contains a coset
    s0 <h> of a cyclic subgroup of order p.  Such a coset has s0 h in S, so
    h is drawn from s0^-1 S and the search is exhaustive.
    """
    p = s.p
    xs, ys, zs = s.arrays()
    for idx in range(len(zs)):
        ax, ay, az = xs[idx], ys[idx], zs[idx]
        # h = s0^-1 t for all t in S
        hx, hy, hz = _left_mul_arrays(-ax, -ay, int(ax @ ay) - az, xs, ys, zs)
        hx, hy, hz = hx % p, hy % p, hz % p
        keep = (hx.any(axis=1)) | (hy.any(axis=1)) | (hz != 0)
        hx, hy, hz = hx[keep], hy[keep], hz[keep]
        if len(hz) == 0:
            continue
        hxy = (hx * hy).sum(axis=1)
        alive = np.ones(len(hz), dtype=bool)
        for k in range(2, p):
            # s0 h^k, h^k = [k x, k y, k z + C(k,2) <x, y>]
            px, py = k * hx, k * hy
            pz = k * hz + (k * (k - 1) // 2) * hxy
            codes = s.encode(ax + px, ay + py, az + py @ ax + pz)
            alive &= s.mask[codes]
            if not alive.any():
                break
        if alive.any():
            j = int(np.flatnonzero(alive)[0])
            s0 = HeisElement(tuple(int(v) for v in ax), tuple(int(v) for v in ay), int(az), p)
            h = HeisElement(tuple(int(v) for v in hx[j]), tuple(int(v) for v in hy[j]), int(hz[j]), p)
            return s0, h
    return None


# --------------------------------------------------------------------------
# growth versus period


@dataclass
class Th13Analysis:
    classes: list
    k: int
    ell: int
    singletons: int
    recipe_group: CoordinateSubgroup
    pinned: Optional[tuple]
    pinned_full: Optional[bool]
    product_size: int
    brick_size: int
    verified_period: CoordinateSubgroup
    ratio_lower_bound: float
    recipe_is_period: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.product_size, self.brick_size)

    @property
    def sqrt2_ok(self) -> bool:
        return self.ratio**2 >= 2**self.k

    @property
    def headline_ok(self) -> bool:
        return float(self.ratio) >= self.ratio_lower_bound * (1 - BOUND_RTOL)

    def to_json(self) -> dict:
        return {
            "classes": self.classes,
            "k": self.k,
            "ell": self.ell,
            "singletons": self.singletons,
            "recipe_group": self.recipe_group.to_json(),
            "pinned": None if self.pinned is None else list(self.pinned),
            "pinned_full": self.pinned_full,
            "product_size": self.product_size,
            "brick_size": self.brick_size,
            "ratio": [self.ratio.numerator, self.ratio.denominator],
            "ratio_float": float(self.ratio),
            "verified_period": self.verified_period.to_json(),
            "ratio_lower_bound": self.ratio_lower_bound,
            "sqrt2_ok": self.sqrt2_ok,
            "headline_ok": self.headline_ok,
            "recipe_is_period": self.recipe_is_period,
        }


def classify_component(size: int, p: int) -> str:
    if size == 1:
        return "singleton"
    if 2 * size * size <= p * p:
        return "medium"
    return "large"


def growth_lower_bound(brick_size: int, group_size: int, p: int) -> float:
    """(1/4) (|B|/|G|)^(ln 3 / (2 ln p)), evaluated at 40 digits."""
    with mpmath.workdps(40):
        alpha = mpmath.log(3) / (2 * mpmath.log(p))
        val = mpmath.mpf(GROWTH_CONSTANT.numerator) / GROWTH_CONSTANT.denominator
        val *= mpmath.power(mpmath.mpf(brick_size) / group_size, alpha)
        return float(val)


def th13_analysis(b: Brick, pset: Optional[FiberedProductSet] = None,
                  fiber_cap: int = DEFAULT_FIBER_CAP) -> Th13Analysis:
    p, n = b.p, b.n
    comps = b.components()
    classes = [classify_component(len(s), p) for _, _, s in comps]
    k = classes.count("medium")
    ell = classes.count("large")
    if pset is None:
        pset = square_fibered(b, fiber_cap)

    recipe = CoordinateSubgroup.trivial(n)
    pinned = None
    pinned_full = None
    if ell >= 3:
        _require_proper(b)
        large_x = [i for (letter, i, _), c in zip(comps, classes) if letter == "x" and c == "large"]
        large_y = [i for (letter, i, _), c in zip(comps, classes) if letter == "y" and c == "large"]
        # ell >= 3 spread over two letters: one letter has two large components
        letter, idx = ("x", large_x) if len(large_x) >= 2 else ("y", large_y)
        i, j = idx[0], idx[1]
        sets = b.xs if letter == "x" else b.ys
        wi, ti = choose_popular_shift(sets[i])
        wj, tj = choose_popular_shift(sets[j])
        assert 2 * len(ti) > p and 2 * len(tj) > p
        kx = [False] * n
        ky = [False] * n
        for h in large_x:
            kx[h] = not (letter == "x" and h in (i, j))
        for h in large_y:
            ky[h] = not (letter == "y" and h in (i, j))
        recipe = CoordinateSubgroup(tuple(kx), tuple(ky), True)
        assert recipe.order(p) == p ** (ell - 1)
        pinned = (letter, i, wi, j, wj)
        pos = 0 if letter == "x" else 1
        pinned_full = all(
            f.is_full() for key, f in pset.fibers.items()
            if key[pos][i] == wi and key[pos][j] == wj
        )
        if not pinned_full:
            raise ClaimFailure("fibers over the pinned popular sums are not all of Z/p",
                               witness={"letter": letter, "i": i, "w_i": wi, "j": j, "w_j": wj})

    period = structured_period(pset).period
    lower = growth_lower_bound(b.cardinality(), period.order(p), p)
    recipe_is_period = all(pset.right_translate(g) == pset for g in recipe.generators(p))
    result = Th13Analysis(
        classes=classes,
        k=k,
        ell=ell,
        singletons=classes.count("singleton"),
        recipe_group=recipe,
        pinned=pinned,
        pinned_full=pinned_full,
        product_size=pset.cardinality(),
        brick_size=b.cardinality(),
        verified_period=period,
        ratio_lower_bound=lower,
        recipe_is_period=recipe_is_period,
    )
    if not result.sqrt2_ok:
        raise ClaimFailure("|B.B|/|B| < sqrt(2)^k", witness=result.to_json())
    if not result.headline_ok:
        raise ClaimFailure("|B.B|/|B| below (1/4)(|B|/|G|)^(ln3/(2 ln p))", witness=result.to_json())
    return result


# --------------------------------------------------------------------------
# explicit constructions


def prop2_construct(p: int, n: int) -> Brick:
    """[R, R, Z] with R = {r >= 0 : 2n r^2 < p - 1}, Z = {z >= 0 : 4z < p}.

    R contains 0, so the brick is built with ``allow_zero``.
    """
    F = prime_field(p)
    if n < 1:
        raise InputError("n must be >= 1")
    r = ResidueSet.from_iterable(F, (t for t in range(p) if 2 * n * t * t < p - 1))
    z = ResidueSet.from_iterable(F, (t for t in range(p) if 4 * t < p))
    return Brick((r,) * n, (r,) * n, z, allow_zero=True)


def full_line_witness(points: set, n: int, p: int):
    """(i, rest) such that {rest with coordinate i free} lies inside ``points``, or None."""
    for i in range(n):
        groups: dict = {}
        for pt in points:
            rest = pt[:i] + pt[i + 1 :]
            groups.setdefault(rest, set()).add(pt[i])
        for rest, vals in sorted(groups.items()):
            if len(vals) == p:
                return i, rest
    return None


@dataclass
class Prop2Report:
    p: int
    n: int
    r: list
    z: list
    brick_size: int
    bound: Fraction
    w: list
    w_full: bool
    u_line: Optional[tuple]
    v_line: Optional[tuple]
    center_cosets: int
    product_size: int
    stabilizer_order: Optional[int] = None
    cyclic_coset: Optional[tuple] = None
    brute_checked: bool = False

    @property
    def size_ok(self) -> bool:
        return self.brick_size >= self.bound

    @property
    def passed(self) -> bool:
        ok = self.size_ok and not self.w_full and self.u_line is None and self.v_line is None
        if self.brute_checked:
            ok = ok and self.stabilizer_order == 1 and self.cyclic_coset is None
        return ok

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "R": self.r,
            "Z": self.z,
            "brick_size": self.brick_size,
            "bound": [self.bound.numerator, self.bound.denominator],
            "bound_float": float(self.bound),
            "size_ok": self.size_ok,
            "W": self.w,
            "W_is_field": self.w_full,
            "u_full_line": None if self.u_line is None else [self.u_line[0], list(self.u_line[1])],
            "v_full_line": None if self.v_line is None else [self.v_line[0], list(self.v_line[1])],
            "center_cosets": self.center_cosets,
            "product_size": self.product_size,
            "brute_checked": self.brute_checked,
            "stabilizer_order": self.stabilizer_order,
            "cyclic_coset": None if self.cyclic_coset is None
            else [g.to_json() for g in self.cyclic_coset],
        }


def prop2_verify(p: int, n: int, brute_cap: int = DEFAULT_BRUTE_CAP,
                 fiber_cap: int = DEFAULT_FIBER_CAP) -> Prop2Report:
    b = prop2_construct(p, n)
    pset = square_fibered(b, fiber_cap)
    _, _, w = pset.projections()
    report = Prop2Report(
        p=p,
        n=n,
        r=b.xs[0].to_list(),
        z=b.z.to_list(),
        brick_size=b.cardinality(),
        # sqrt(p) |H_n|^(1/2) / (4 (2n)^n) = p^(n+1) / (4 (2n)^n)
        bound=Fraction(p ** (n + 1), 4 * (2 * n) ** n),
        w=w.to_list(),
        w_full=w.is_full(),
        u_line=full_line_witness(pset.u_projection(), n, p),
        v_line=full_line_witness(pset.v_projection(), n, p),
        center_cosets=count_center_cosets(pset, b).center_coset_count,
        product_size=pset.cardinality(),
    )
    if group_order(p, n) <= brute_cap:
        elems = pset.to_element_set(brute_cap)
        report.brute_checked = True
        report.stabilizer_order = len(brute_stabilizer(elems))
        report.cyclic_coset = cyclic_coset_witness(elems)
    return report


@dataclass
class SmallPeriodReport:
    p: int
    x: list
    brick_size: int
    product_size: int
    period: PeriodReport

    @property
    def growth_ok(self) -> bool:
        return self.product_size < 4 * self.brick_size

    @property
    def period_is_center(self) -> bool:
        return self.period.period == CoordinateSubgroup.center(1)

    @property
    def passed(self) -> bool:
        return self.growth_ok and self.period_is_center

    def to_json(self) -> dict:
        ratio = Fraction(self.product_size, self.brick_size)
        return {
            "p": self.p,
            "X": self.x,
            "brick_size": self.brick_size,
            "product_size": self.product_size,
            "ratio": [ratio.numerator, ratio.denominator],
            "below_4": self.growth_ok,
            "period": self.period.to_json(),
            "period_is_center": self.period_is_center,
        }


def small_period_brick(p: int) -> Brick:
    F = prime_field(p)
    x = ResidueSet.from_iterable(F, (t for t in range(p) if 4 * t * t < p))
    return Brick((x,), (x,), ResidueSet.full(F), allow_zero=True)


def small_period_example(p: int, fiber_cap: int = DEFAULT_FIBER_CAP) -> SmallPeriodReport:
    b = small_period_brick(p)
    pset = square_fibered(b, fiber_cap)
    return SmallPeriodReport(
        p=p,
        x=b.xs[0].to_list(),
        brick_size=b.cardinality(),
        product_size=pset.cardinality(),
        period=structured_period(pset),
    )
