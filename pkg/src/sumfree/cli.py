"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from sumfree.errors import ConvergenceError, ResourceCapError, SumFreeError, ValidationError

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _seed_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    a, b = int(lo), int(hi)
    if b < a:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return list(range(a, b + 1))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sumfree", description="Constructions and checks for k-colored sum-free sets in Z_m^n.")
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", help="write the result here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def mk(name, help_, extra=("m", "k")):
        sp = sub.add_parser(name, help=help_, parents=[common])
        for a in extra:
            sp.add_argument(a, type=int)
        sp.add_argument("--tol", type=float, default=1e-12)
        return sp

    mk("gamma", "gamma, the capacity and H(nu)")
    mk("nu", "the distribution nu")
    mk("tau", "a positive symmetric tensor with marginal nu")
    r = mk("round", "round tau to denominator n", ("m", "k", "n"))
    r.add_argument("--gap", action="store_true", help="also report the entropy gap to the max-entropy tensor")
    c = mk("construct", "run the randomized construction", ("m", "k", "n"))
    seeds = c.add_mutually_exclusive_group(required=True)
    seeds.add_argument("--seed", type=int)
    seeds.add_argument("--seeds", type=_seed_range, help="inclusive range a..b")
    c.add_argument("--prime", type=int)
    c.add_argument("--method", choices=("greedy", "behrend"), default="greedy")
    c.add_argument("--mode", choices=("integer", "zm"), default="zm")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--jobs", type=int, default=1, help="worker processes for --seeds")
    v = sub.add_parser("verify", help="check a collection file", parents=[common])
    v.add_argument("file")
    mk("bounds", "exact bounded-sum count against Gamma^n", ("m", "k", "n"))
    pr = sub.add_parser("props", help="run a property suite", parents=[common])
    pr.add_argument("--suite", required=True)
    pr.add_argument("--seed", type=int, default=0)
    return p


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cmd_gamma(a) -> tuple[int, str]:
    from sumfree.distributions import Params, capacity

    res = capacity(Params(a.m, a.k, tol=a.tol))
    return EXIT_OK, _dumps({"m": a.m, "k": a.k, "gamma": res.gamma, "capacity": res.capacity, "entropy_nu": res.entropy_nu})


def _cmd_nu(a) -> tuple[int, str]:
    from sumfree.distributions import Params, nu

    return EXIT_OK, _dumps({"m": a.m, "k": a.k, "nu": nu(Params(a.m, a.k, tol=a.tol)).to_floats()})


def _tau(a):
    from sumfree.decomposition import symmetric_marginal_tensor
    from sumfree.distributions import Params, nu

    return symmetric_marginal_tensor(nu(Params(a.m, a.k, tol=a.tol)), a.k, tol=a.tol)


def _cmd_tau(a) -> tuple[int, str]:
    from sumfree.compositions import marginal

    tau = _tau(a)
    out = {
        "m": a.m,
        "k": a.k,
        "tensor": tau.to_json(),
        "marginal": marginal(tau).to_floats(),
        "min_weight": float(tau.min_weight()),
        "entropy": tau.entropy(),
    }
    return EXIT_OK, _dumps(out)


def _cmd_round(a) -> tuple[int, str]:
    from sumfree.rounding import entropy_gap_report, round_tau

    pair = round_tau(_tau(a), a.n)
    out = pair.to_json()
    if a.gap:
        out["gap"] = entropy_gap_report(pair).to_json()
    return EXIT_OK, _dumps(out)


def _construct_one(args: tuple) -> dict:
    from sumfree.construction import ConstructOptions, construct

    m, k, n, seed, prime, method, tol, mode = args
    res = construct(m, k, n, seed, ConstructOptions(prime=prime, method=method, tol=tol))
    coll = res.integer if mode == "integer" else res.zm
    return {"collection": coll.to_json(), "row": res.csv_row()}


def _cmd_construct(a) -> tuple[int, str]:
    if a.n <= 0 or a.n % a.k:
        raise ValidationError(f"n must be a positive multiple of k={a.k}")
    seeds = [a.seed] if a.seed is not None else a.seeds
    jobs = [(a.m, a.k, a.n, s, a.prime, a.method, a.tol, a.mode) for s in seeds]
    if a.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=a.jobs) as pool:
            results = list(pool.map(_construct_one, jobs))
    else:
        results = [_construct_one(j) for j in jobs]
    if a.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(results[0]["row"]), lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow(r["row"])
        return EXIT_OK, buf.getvalue()
    if a.seed is not None:
        return EXIT_OK, _dumps(results[0]["collection"])
    return EXIT_OK, _dumps({"runs": [r["collection"] for r in results]})


def _cmd_verify(a) -> tuple[int, str]:
    from sumfree.construction import SumFreeCollection
    from sumfree.verification import verify_sumfree

    try:
        data = json.loads(Path(a.file).read_text())
        coll = SumFreeCollection.from_json(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValidationError(f"cannot read collection {a.file}: {exc}") from exc
    verdict = verify_sumfree(coll)
    return (EXIT_OK if verdict.ok else EXIT_VERIFY), _dumps(verdict.to_json())


def _cmd_bounds(a) -> tuple[int, str]:
    from sumfree.verification import bounded_tuple_count

    return EXIT_OK, _dumps(bounded_tuple_count(a.n, a.m, a.k).to_json())


def _cmd_props(a) -> tuple[int, str]:
    from sumfree.suites import run_suite

    report = run_suite(a.suite, a.seed)
    return (EXIT_VERIFY if report["failures"] else EXIT_OK), _dumps(report)


COMMANDS = {
    "gamma": _cmd_gamma,
    "nu": _cmd_nu,
    "tau": _cmd_tau,
    "round": _cmd_round,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "bounds": _cmd_bounds,
    "props": _cmd_props,
}


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, text = COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except ValidationError as exc:
        return _fail(EXIT_USAGE, "validation", str(exc))
    except (ResourceCapError, ConvergenceError) as exc:
        return _fail(EXIT_CAP, type(exc).__name__, str(exc))
    except SumFreeError as exc:
        return _fail(EXIT_VERIFY, type(exc).__name__, str(exc))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
