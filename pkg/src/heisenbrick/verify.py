"""Verifier suites. Each returns a report dict

    {"claim": str, "status": "pass" | "fail" | "not-applicable",
     "witnesses": [...], "numbers": {...}}

Instances are processed in index order; with ``threads > 1`` they are farmed
out to worker processes and merged back in index order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .brick import DEFAULT_FIBER_CAP, Brick, square_fibered
from .errors import ClaimFailure
from .fp import ResidueSet, prime_field, sumset
from .heisenberg import DEFAULT_BRUTE_CAP, ElementSet, brute_product_set, group_order, lemma1_check
from .serialize import brick_to_json, instance_to_json
from .structure import (
    count_center_cosets,
    good_pair_set_E,
    prop2_verify,
    small_period_example,
    th13_analysis,
    th1_certificate,
)
from .sumprod import covers_field


def claim_report(claim: str, status: str, witnesses=None, numbers=None) -> dict:
    return {"claim": claim, "status": status, "witnesses": witnesses or [], "numbers": numbers or {}}


def _fraction(q: Fraction) -> list:
    return [q.numerator, q.denominator]


# --------------------------------------------------------------------------
# per-instance checks (module level so worker processes can pickle them)


def th1_instance(b: Brick, fiber_cap: int = DEFAULT_FIBER_CAP) -> dict:
    pset = square_fibered(b, fiber_cap)
    cert = th1_certificate(b, pset)
    good = good_pair_set_E(b, pset)
    cosets = count_center_cosets(pset, b)
    witnesses = set(cosets.coset_witnesses)
    missing = [pair for pair in good.pairs if pair not in witnesses]
    if missing:
        a, bb = missing[0]
        raise ClaimFailure("a good pair is not a full fiber", witness={"a": list(a), "b": list(bb)})
    if 2 * len(b.z) > b.p and not cosets.passes:
        raise ClaimFailure("|Z| > p/2 but fewer than |B|/p center cosets",
                           witness={"count": cosets.center_coset_count,
                                    "threshold": _fraction(cosets.threshold_count)})
    return {
        "brick_size": b.cardinality(),
        "product_size": pset.cardinality(),
        "certificate": cert.to_json(),
        "E": good.to_json(),
        "center_cosets": cosets.center_coset_count,
        "threshold": _fraction(cosets.threshold_count),
        "cosets_meet_threshold": cosets.passes,
    }


def th13_instance(b: Brick, fiber_cap: int = DEFAULT_FIBER_CAP) -> dict:
    return th13_analysis(b, fiber_cap=fiber_cap).to_json()


def _run_one(args):
    fn, item, kwargs = args
    try:
        return True, fn(item, **kwargs), None
    except ClaimFailure as exc:
        return False, None, {"message": str(exc), "witness": exc.witness}


def run_suite(claim: str, fn, items, to_json, threads: int = 1, **kwargs) -> dict:
    jobs = [(fn, item, kwargs) for item in items]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    per_instance, witnesses = [], []
    for idx, (item, (ok, numbers, failure)) in enumerate(zip(items, results)):
        if ok:
            per_instance.append(numbers)
        else:
            per_instance.append(None)
            witnesses.append({"instance": idx, "input": to_json(item), **failure})
    status = "fail" if witnesses else "pass"
    numbers = {"instances": len(items), "failures": len(witnesses), "per_instance": per_instance}
    return claim_report(claim, status, witnesses, numbers)


def verify_th1(bricks, threads: int = 1, fiber_cap: int = DEFAULT_FIBER_CAP) -> dict:
    report = run_suite(
        "popular-shift certificates and good pairs give full center cosets inside B.B",
        th1_instance, bricks, brick_to_json, threads, fiber_cap=fiber_cap,
    )
    rows = [r for r in report["numbers"]["per_instance"] if r]
    report["numbers"]["certificates"] = sum(1 for r in rows if r["certificate"]["condition_holds"])
    return report


def verify_th13(bricks, threads: int = 1, fiber_cap: int = DEFAULT_FIBER_CAP) -> dict:
    report = run_suite(
        "|B.B|/|B| >= (1/4)(|B|/|G|)^(ln 3/(2 ln p)) with G the verified period, and >= sqrt(2)^k",
        th13_instance, bricks, brick_to_json, threads, fiber_cap=fiber_cap,
    )
    rows = [r for r in report["numbers"]["per_instance"] if r]
    report["numbers"]["recipe_not_period"] = sum(1 for r in rows if not r["recipe_is_period"])
    return report


def verify_prop2(p: int, n: int, brute_cap: int = DEFAULT_BRUTE_CAP,
                 fiber_cap: int = DEFAULT_FIBER_CAP) -> dict:
    rep = prop2_verify(p, n, brute_cap, fiber_cap)
    witnesses = []
    if not rep.size_ok:
        witnesses.append({"brick_size": rep.brick_size, "bound": _fraction(rep.bound)})
    if rep.w_full:
        witnesses.append({"W": rep.w})
    for name, line in (("u", rep.u_line), ("v", rep.v_line)):
        if line is not None:
            witnesses.append({"projection": name, "free_coordinate": line[0], "rest": list(line[1])})
    if rep.brute_checked:
        if rep.stabilizer_order != 1:
            witnesses.append({"stabilizer_order": rep.stabilizer_order})
        if rep.cyclic_coset is not None:
            witnesses.append({"coset_of": rep.cyclic_coset[1].to_json(), "at": rep.cyclic_coset[0].to_json()})
    return claim_report(
        "the constructed brick is large and B.B contains no coset of a nontrivial subgroup",
        "fail" if witnesses else "pass",
        witnesses,
        rep.to_json(),
    )


def verify_small_period(p: int, fiber_cap: int = DEFAULT_FIBER_CAP) -> dict:
    rep = small_period_example(p, fiber_cap)
    witnesses = []
    if not rep.growth_ok:
        witnesses.append({"product_size": rep.product_size, "four_brick": 4 * rep.brick_size})
    if not rep.period_is_center:
        witnesses.append({"period": rep.period.period.to_json()})
    return claim_report(
        "box brick in H_1 with Z = F: |B.B| < 4|B| and the period is exactly the center",
        "fail" if witnesses else "pass",
        witnesses,
        rep.to_json(),
    )


def verify_sumprod(instances, threads: int = 1) -> dict:
    return run_suite(
        "condition |Z|^2 prod|X_i||Y_i| > p^(n+2) forces mZ + sum X_i Y_i = F",
        _coverage, instances, instance_to_json, threads,
    )


def _coverage(inst) -> dict:
    return covers_field(inst).report()


# --------------------------------------------------------------------------
# covering facts


def _all_nonempty_subsets(F):
    return [ResidueSet(F, bits) for bits in range(1, 1 << F.p)]


def _brute_sumset(a: ResidueSet, b: ResidueSet) -> set:
    p = a.p
    return {(x + y) % p for x in a for y in b}


def additive_checks_exhaustive(p: int):
    """Check Cauchy-Davenport and |A| + |B| > p => A + B = F on every pair of nonempty subsets."""
    F = prime_field(p)
    subsets = _all_nonempty_subsets(F)
    violations = []
    pairs = 0
    for a, b in itertools.product(subsets, repeat=2):
        pairs += 1
        brute = _brute_sumset(a, b)
        fast = sumset(a, b)
        if set(fast) != brute:
            violations.append({"kind": "sumset", "A": a.to_list(), "B": b.to_list()})
        if len(brute) < min(p, len(a) + len(b) - 1):
            violations.append({"kind": "cauchy-davenport", "A": a.to_list(), "B": b.to_list()})
        if len(a) + len(b) > p and len(brute) != p:
            violations.append({"kind": "large-pair-sumset", "A": a.to_list(), "B": b.to_list()})
    return pairs, violations


def group_large_pairs_random(p: int, n: int, count: int, seed: int):
    """Random S, T around the threshold |S| + |T| > |H_n|."""
    rng = np.random.default_rng(seed)
    order = group_order(p, n)
    checked, violations = 0, []
    for _ in range(count):
        s_size = int(rng.integers(1, order + 1))
        t_size = int(rng.integers(max(1, order + 1 - s_size), order + 1))
        s = ElementSet.from_codes(p, n, rng.choice(order, s_size, replace=False))
        t = ElementSet.from_codes(p, n, rng.choice(order, t_size, replace=False))
        checked += 1
        if not lemma1_check(s, t):
            violations.append({"kind": "large-pair-product", "S_size": s_size, "T_size": t_size,
                               "product_size": len(brute_product_set(s, t))})
    return checked, violations


def verify_lemmas(primes=(5, 7), seed: int = 0, count: int = 100) -> dict:
    numbers = {}
    witnesses = []
    for p in primes:
        pairs, bad = additive_checks_exhaustive(p)
        numbers[f"additive_pairs_p{p}"] = pairs
        witnesses.extend(bad)
    checked, bad = group_large_pairs_random(3, 1, count, seed)
    numbers["group_large_pairs_p3_n1"] = checked
    witnesses.extend(bad)
    return claim_report(
        "Cauchy-Davenport, |A|+|B| > p => A+B = F, and |S|+|T| > |G| => S T = G",
        "fail" if witnesses else "pass",
        witnesses[:20],
        numbers,
    )
