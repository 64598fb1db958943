"""Command-line front end.

    heisenbrick <command> [--instance FILE] [--p INT --n INT] [--seed INT]
                [--brute-cap INT] [--fiber-cap INT] [--dump-fibers] [--out FILE] [--csv]

Exit codes: 0 pass or not-applicable, 1 a verified claim failed,
2 invalid input, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .brick import DEFAULT_FIBER_CAP, square_fibered
from .errors import HeisenbrickError, InputError
from .heisenberg import DEFAULT_BRUTE_CAP, group_order
from .sampling import edge_bricks, random_bricks, random_sumprod_instances
from .serialize import brick_from_json, dumps, instance_from_json, load_json, to_csv
from .structure import count_center_cosets, good_pair_set_E, structured_period, th1_certificate
from .verify import (
    claim_report,
    verify_lemmas,
    verify_prop2,
    verify_small_period,
    verify_sumprod,
    verify_th1,
    verify_th13,
)

COMMANDS = ("product", "period", "cosets", "sumprod", "verify")
TARGETS = ("th1", "th13", "prop2", "small-period", "lemmas")
DEFAULT_COUNT = 100


@dataclass
class RunConfig:
    command: str
    verify_target: Optional[str] = None
    instance_path: Optional[str] = None
    p: Optional[int] = None
    n: Optional[int] = None
    m: int = 2
    seed: int = 0
    count: int = DEFAULT_COUNT
    brute_cap: int = DEFAULT_BRUTE_CAP
    fiber_cap: int = DEFAULT_FIBER_CAP
    dump_fibers: bool = False
    output_path: Optional[str] = None
    csv: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.command == "verify" and self.verify_target not in TARGETS:
            raise InputError(f"verify needs a target among {', '.join(TARGETS)}")
        if self.brute_cap <= 0 or self.fiber_cap <= 0:
            raise InputError("caps must be positive")
        if self.count <= 0:
            raise InputError("--count must be positive")


def _brick(cfg: RunConfig):
    if not cfg.instance_path:
        raise InputError(f"'{cfg.command}' needs --instance FILE")
    return brick_from_json(load_json(cfg.instance_path))


def _need_pn(cfg: RunConfig):
    if cfg.p is None or cfg.n is None:
        raise InputError("give --instance FILE, or --p and --n for a seeded random suite")
    return cfg.p, cfg.n


def _suite_bricks(cfg: RunConfig):
    if cfg.instance_path:
        return [_brick(cfg)]
    p, n = _need_pn(cfg)
    return random_bricks(p, n, cfg.count, cfg.seed) + edge_bricks(p, n)


def _computed(name: str, numbers: dict) -> dict:
    return claim_report(name, "pass", [], numbers)


def run(cfg: RunConfig) -> dict:
    """Execute one configuration and return its report."""
    if cfg.command == "product":
        b = _brick(cfg)
        pset = square_fibered(b, cfg.fiber_cap)
        return _computed("B.B computed fiber by fiber", pset.report(cfg.dump_fibers))

    if cfg.command == "period":
        b = _brick(cfg)
        pset = square_fibered(b, cfg.fiber_cap)
        with_stab = group_order(b.p, b.n) <= cfg.brute_cap
        rep = structured_period(pset, with_stabilizer=with_stab, brute_cap=cfg.brute_cap)
        return _computed("largest coordinate subgroup G with B.B.G = B.B", rep.to_json())

    if cfg.command == "cosets":
        b = _brick(cfg)
        pset = square_fibered(b, cfg.fiber_cap)
        cosets = count_center_cosets(pset, b)
        numbers = {
            "cosets": cosets.to_json(),
            "certificate": th1_certificate(b, pset).to_json(),
            "E": good_pair_set_E(b, pset).to_json(),
        }
        return _computed("center cosets [a, b, F] inside B.B", numbers)

    if cfg.command == "sumprod":
        if cfg.instance_path:
            insts = [instance_from_json(load_json(cfg.instance_path))]
        else:
            p, n = _need_pn(cfg)
            insts = random_sumprod_instances(p, n, cfg.m, cfg.count, cfg.seed)
        return verify_sumprod(insts, cfg.threads)

    target = cfg.verify_target
    if target == "th1":
        return verify_th1(_suite_bricks(cfg), cfg.threads, cfg.fiber_cap)
    if target == "th13":
        return verify_th13(_suite_bricks(cfg), cfg.threads, cfg.fiber_cap)
    if target == "prop2":
        p, n = _need_pn(cfg)
        return verify_prop2(p, n, cfg.brute_cap, cfg.fiber_cap)
    if target == "small-period":
        if cfg.p is None:
            raise InputError("small-period needs --p")
        return verify_small_period(cfg.p, cfg.fiber_cap)
    primes = (cfg.p,) if cfg.p is not None else (5, 7)
    return verify_lemmas(primes, cfg.seed, cfg.count)


def exit_code(report: dict) -> int:
    return 1 if report.get("status") == "fail" else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heisenbrick", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("target", nargs="?", choices=TARGETS, help="verify target")
    parser.add_argument("--instance", help="brick or instance JSON file")
    parser.add_argument("--p", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int, default=2, help="number of Z summands (sumprod)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=DEFAULT_COUNT, help="random instances per suite")
    parser.add_argument("--brute-cap", type=int, default=DEFAULT_BRUTE_CAP)
    parser.add_argument("--fiber-cap", type=int, default=DEFAULT_FIBER_CAP)
    parser.add_argument("--dump-fibers", action="store_true")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--csv", action="store_true", help="emit scalar numbers as CSV")
    return parser


def _threads() -> int:
    raw = os.environ.get("HEISENBRICK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            verify_target=args.target,
            instance_path=args.instance,
            p=args.p,
            n=args.n,
            m=args.m,
            seed=args.seed,
            count=args.count,
            brute_cap=args.brute_cap,
            fiber_cap=args.fiber_cap,
            dump_fibers=args.dump_fibers,
            output_path=args.out,
            csv=args.csv,
            threads=_threads(),
        )
        report = run(cfg)
    except HeisenbrickError as exc:
        print(f"heisenbrick: {exc}", file=sys.stderr)
        if args.out:
            _emit(dumps({"status": "error", "error": str(exc), "exit_code": exc.exit_code}), args.out)
        return exc.exit_code
    _emit(to_csv(report) if cfg.csv else dumps(report), cfg.output_path)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
