"""Command-line front end.

Instance files are JSON objects — ``{"slots": 2, "bidders": [{"id": "a",
"bid": 2.0, "ctr": 0.5, "cont": 0.75}, ...]}`` — or, with ``--format csv``,
a CSV table with header ``id,bid,ctr,cont`` (slots then come from
``--slots``).  String ids from the file are mapped to dense integers
internally and mapped back on output.

Every command writes line-delimited JSON records to stdout and diagnostics
to stderr.  Exit codes: 0 success, 2 invalid input, 3 instance too large
for the requested solver.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .analysis import UnknownBidder, check_monotonicity, compare_gsp, sweep_bid
from .model import AuctionInstance, Bidder
from .optimizer import SizeLimitExceeded, dp_optimal, fast_optimal, solve
from .pricing import vcg_prices

__all__ = ["main", "load_instance", "random_instance", "SEED_ENV_VAR"]

SEED_ENV_VAR = "MARKOV_AUCTION_SEED"


class InputError(ValueError):
    """Any defect in an instance file or command arguments (exit code 2)."""


@dataclass
class NamedInstance:
    """An instance plus the original string id for each dense bidder id."""

    instance: AuctionInstance
    names: list[str]

    def name(self, dense_id: int) -> str:
        return self.names[dense_id]

    def dense(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"no bidder with id {name!r} in the instance") from None


# ---------------------------------------------------------------------------
# Instance loading
# ---------------------------------------------------------------------------


def _check_fields(name: str, where: str, bid: Any, ctr: Any, cont: Any) -> tuple[float, float, float]:
    out = []
    for field, raw, low_ok, low, high, high_ok in (
        ("bid", bid, True, 0.0, math.inf, False),
        ("ctr", ctr, False, 0.0, 1.0, True),
        ("cont", cont, True, 0.0, 1.0, False),
    ):
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise InputError(f"bidder {name!r} ({where}): field {field!r} must be a number, got {raw!r}")
        val = float(raw)
        if not math.isfinite(val):
            raise InputError(f"bidder {name!r} ({where}): field {field!r} must be finite, got {val!r}")
        above = val >= low if low_ok else val > low
        below = val <= high if high_ok else val < high
        if not (above and below):
            lo_b = "[" if low_ok else "("
            hi_b = "]" if high_ok else ")"
            raise InputError(
                f"bidder {name!r} ({where}): field {field!r} must be in "
                f"{lo_b}{low}, {high}{hi_b}, got {val!r}"
            )
        out.append(val)
    return out[0], out[1], out[2]


def _load_json(path: str, slots_override: int | None) -> NamedInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    rows = doc.get("bidders")
    if not isinstance(rows, list):
        raise InputError(f"{path}: key 'bidders' must be a list")
    names: list[str] = []
    bidders: list[Bidder] = []
    for entry, row in enumerate(rows):
        where = f"entry {entry}"
        if not isinstance(row, dict):
            raise InputError(f"{path}: bidder {where} must be an object, got {row!r}")
        if "id" not in row:
            raise InputError(f"{path}: bidder {where} is missing field 'id'")
        name = row["id"]
        if not isinstance(name, str):
            name = str(name)
        for field in ("bid", "ctr", "cont"):
            if field not in row:
                raise InputError(f"{path}: bidder {name!r} ({where}) is missing field {field!r}")
        if name in names:
            raise InputError(f"{path}: bidder id {name!r} ({where}) appears more than once")
        bid, ctr, cont = _check_fields(name, where, row["bid"], row["ctr"], row["cont"])
        bidders.append(Bidder(len(names), bid, ctr, cont))
        names.append(name)
    if slots_override is not None:
        slots = slots_override
    else:
        slots = doc.get("slots")
        if slots is None:
            raise InputError(f"{path}: key 'slots' is missing and --slots was not given")
        if isinstance(slots, bool) or not isinstance(slots, int) or slots < 1:
            raise InputError(f"{path}: 'slots' must be an integer >= 1, got {slots!r}")
    return NamedInstance(AuctionInstance(tuple(bidders), slots), names)


def _load_csv(path: str, slots_override: int | None) -> NamedInstance:
    if slots_override is None:
        raise InputError("--slots is required with --format csv (the table has no slots column)")
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            if header is None or sorted(header) != ["bid", "cont", "ctr", "id"]:
                raise InputError(
                    f"{path}: CSV header must be exactly id,bid,ctr,cont, got {header!r}"
                )
            names: list[str] = []
            bidders: list[Bidder] = []
            for line_no, row in enumerate(reader, start=2):
                where = f"line {line_no}"
                name = row["id"]
                if name is None or any(row[f] is None for f in ("bid", "ctr", "cont")):
                    raise InputError(f"{path}: {where} has too few columns")
                fields = {}
                for field in ("bid", "ctr", "cont"):
                    try:
                        fields[field] = float(row[field])
                    except ValueError:
                        raise InputError(
                            f"bidder {name!r} ({where}): field {field!r} must be a number, "
                            f"got {row[field]!r}"
                        ) from None
                if name in names:
                    raise InputError(f"{path}: bidder id {name!r} ({where}) appears more than once")
                bid, ctr, cont = _check_fields(name, where, fields["bid"], fields["ctr"], fields["cont"])
                bidders.append(Bidder(len(names), bid, ctr, cont))
                names.append(name)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return NamedInstance(AuctionInstance(tuple(bidders), slots_override), names)


def load_instance(path: str, fmt: str = "json", slots_override: int | None = None) -> NamedInstance:
    """Parse an instance file; raises InputError on any defect."""
    if fmt == "json":
        return _load_json(path, slots_override)
    if fmt == "csv":
        return _load_csv(path, slots_override)
    raise InputError(f"unknown format {fmt!r}")


def random_instance(n: int, slots: int, seed: int) -> AuctionInstance:
    """Synthetic instance: bids log-uniform on [0.01, 10], ctr uniform on
    (0, 1], cont uniform on [0, 0.99]."""
    rng = np.random.default_rng(seed)
    bids = np.exp(rng.uniform(np.log(0.01), np.log(10.0), n))
    ctrs = 1.0 - rng.random(n)
    conts = rng.uniform(0.0, 0.99, n)
    bidders = tuple(
        Bidder(i, float(bids[i]), float(ctrs[i]), float(conts[i])) for i in range(n)
    )
    return AuctionInstance(bidders, slots)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _emit(record: dict) -> None:
    sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")


def _cmd_assign(ns: argparse.Namespace) -> int:
    named = load_instance(ns.file, ns.format, ns.slots)
    slate = solve(named.instance, method=ns.solver)
    _emit(
        {
            "type": "assignment",
            "solver": ns.solver,
            "slots": named.instance.slots,
            "order": [named.name(i) for i in slate.order],
            "efficiency": slate.efficiency,
            "click_probs": list(slate.click_probs),
        }
    )
    return 0


def _cmd_price(ns: argparse.Namespace) -> int:
    named = load_instance(ns.file, ns.format, ns.slots)
    slate, schedule = vcg_prices(named.instance, solver=ns.solver)
    _emit(
        {
            "type": "assignment",
            "solver": ns.solver,
            "slots": named.instance.slots,
            "order": [named.name(i) for i in slate.order],
            "efficiency": slate.efficiency,
            "click_probs": list(slate.click_probs),
        }
    )
    for w in schedule.winners:
        _emit(
            {
                "type": "price",
                "bidder": named.name(w.bidder_id),
                "value": w.value,
                "expected_payment": w.expected_payment,
                "per_click_price": w.per_click_price,
                "utility": w.utility,
            }
        )
    return 0


def _cmd_sweep(ns: argparse.Namespace) -> int:
    named = load_instance(ns.file, ns.format, None)
    if ns.start < 0.0 or ns.stop < ns.start:
        raise InputError(f"bid grid must satisfy 0 <= from <= to, got {ns.start} .. {ns.stop}")
    if ns.steps < 1:
        raise InputError(f"--steps must be >= 1, got {ns.steps}")
    dense = named.dense(ns.bidder)
    grid = [float(x) for x in np.linspace(ns.start, ns.stop, ns.steps)]
    report = sweep_bid(named.instance, dense, grid)
    for pt in report.points:
        _emit(
            {
                "type": "sweep_point",
                "bidder": ns.bidder,
                "bid": pt.bid,
                "position": pt.position,
                "click_prob": pt.click_prob,
                "efficiency": pt.efficiency,
                "selected": [named.name(i) for i in pt.selected],
            }
        )
    verdict = check_monotonicity(report)
    _emit(
        {
            "type": "monotonicity",
            "bidder": ns.bidder,
            "passed": verdict.passed,
            "first_violation": verdict.first_violation,
            "reason": verdict.reason,
        }
    )
    return 0


def _cmd_compare(ns: argparse.Namespace) -> int:
    named = load_instance(ns.file, ns.format, ns.slots)
    report = compare_gsp(named.instance)
    _emit(
        {
            "type": "comparison",
            "slots": report.slots,
            "gsp_order": [named.name(i) for i in report.gsp_order],
            "gsp_efficiency": report.gsp_efficiency,
            "optimal_order": [named.name(i) for i in report.optimal_order],
            "optimal_efficiency": report.optimal_efficiency,
            "efficiency_ratio": report.efficiency_ratio,
        }
    )
    return 0


def _cmd_bench(ns: argparse.Namespace) -> int:
    seed = ns.seed
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is not None:
        try:
            seed = int(raw)
        except ValueError:
            raise InputError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
    inst = random_instance(ns.n, ns.k, seed)
    started = time.perf_counter()
    slate = solve(inst, method=ns.solver)
    elapsed = time.perf_counter() - started
    digest = hashlib.sha256(",".join(str(i) for i in slate.order).encode()).hexdigest()
    sub_n = min(ns.n, 2000)
    sub = AuctionInstance(inst.bidders[:sub_n], inst.slots)
    checked = solve(sub, method=ns.solver)
    if ns.solver == "dp":
        reference_name = "fast"
        reference = fast_optimal(sub).final
    else:
        reference_name = "dp"
        reference = dp_optimal(sub)
    diff = abs(checked.efficiency - reference.efficiency)
    _emit(
        {
            "type": "bench",
            "n": ns.n,
            "k": ns.k,
            "seed": seed,
            "solver": ns.solver,
            "efficiency": slate.efficiency,
            "selection_hash": digest,
            "elapsed_s": elapsed,
            "cross_check": {
                "n": sub_n,
                "reference": reference_name,
                "reference_efficiency": reference.efficiency,
                "solver_efficiency": checked.efficiency,
                "abs_diff": diff,
                "within_tol": diff <= 1e-9,
            },
        }
    )
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {raw}")
    return value


def _add_file_args(sub: argparse.ArgumentParser, with_solver: bool, with_slots: bool) -> None:
    sub.add_argument("file", help="instance file")
    sub.add_argument("--format", choices=("json", "csv"), default="json", help="file format")
    if with_slots:
        sub.add_argument("--slots", type=_positive_int, default=None, help="override slot count")
    if with_solver:
        sub.add_argument("--solver", choices=("brute", "dp", "fast"), default="dp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markov-auction",
        description="Optimal slates, VCG prices, and diagnostics for cascade position auctions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assign", help="compute the optimal slate")
    _add_file_args(p, with_solver=True, with_slots=True)
    p.set_defaults(func=_cmd_assign)

    p = sub.add_parser("price", help="optimal slate plus VCG payments")
    _add_file_args(p, with_solver=True, with_slots=True)
    p.set_defaults(func=_cmd_price)

    p = sub.add_parser("sweep", help="re-solve across a grid of bids for one bidder")
    _add_file_args(p, with_solver=False, with_slots=False)
    p.add_argument("--bidder", required=True, help="id of the bidder to sweep")
    p.add_argument("--from", dest="start", type=float, required=True, help="first bid")
    p.add_argument("--to", dest="stop", type=float, required=True, help="last bid")
    p.add_argument("--steps", type=int, default=50, help="number of grid points")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("compare", help="ecpm ranking versus the optimizer")
    _add_file_args(p, with_solver=False, with_slots=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("bench", help="time a solver on a synthetic instance")
    p.add_argument("--n", type=_positive_int, required=True, help="number of bidders")
    p.add_argument("--k", type=_positive_int, required=True, help="number of slots")
    p.add_argument("--seed", type=int, default=0, help=f"rng seed ({SEED_ENV_VAR} overrides)")
    p.add_argument("--solver", choices=("brute", "dp", "fast"), default="fast")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (InputError, UnknownBidder) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
