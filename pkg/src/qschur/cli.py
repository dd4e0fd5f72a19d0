"""Command-line front end: ``qschur [options] VERB args``.

Options may appear before or after the verb. Matrices are row-major JSON
arrays and modules are JSON lists of ``[i, j, multiplicity]`` triples.
Results go to stdout as JSON. Exit status is 0 on success, 1 when a
verification suite finds failures, and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import genmul, hall, schur
from . import matrix as mx
from .gfcount import PreconditionViolated
from .poly import DegreeExceeded, NotIntegral, NotPolynomial, is_prime
from .quivermod import DimVectorMismatch, Multisegment

ENV_CACHE = "QSCHUR_CACHE"
ENV_JOBS = "QSCHUR_JOBS"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    n: int | None
    r: int | None
    primes: tuple[int, ...] | None
    cache_path: Path | None
    parallelism: int

    def need(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise UsageError(f"--{name} is required for this command")


def _common_options(defaults: bool) -> argparse.ArgumentParser:
    # Sub-parsers use SUPPRESS so an option given before the verb is not reset.
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=d(None), help="matrix size / number of quiver vertices + 1")
    common.add_argument("--r", type=int, default=d(None), help="degree r of S_q(n, r)")
    common.add_argument("--primes", default=d(None), help="comma-separated primes for interpolation")
    common.add_argument("--cache", default=d(None), help="structure-constant cache directory")
    common.add_argument("--jobs", type=int, default=d(None), help="worker processes")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qschur", parents=[_common_options(True)], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    common = [_common_options(False)]

    def verb(name, help_, *positionals):
        p = sub.add_parser(name, parents=common, help=help_)
        for pos in positionals:
            p.add_argument(pos)
        return p

    verb("mul", "polynomial product e_A e_A2", "A", "A2")
    verb("gmul", "generic product A o A2", "A", "A2")
    verb("theta", "theta(M) = l_{M,r}", "M")
    verb("gamma", "Gamma(M)", "M")
    verb("hall", "Hall polynomial F^X_{MN}", "X", "M", "N")
    verb("genext", "generic extension M * N", "M", "N")
    table = verb("table", "full multiplication table for (n, r)")
    table.add_argument("kind", choices=["schur", "generic", "zero"])
    table.add_argument("--out", required=True)
    check = verb("verify", "run a verification suite", "suite")
    check.add_argument("--max-dim", type=int, dest="max_dim")
    check.add_argument("--samples", type=int)
    check.add_argument("--seed", type=int)
    check.add_argument("--form", choices=["oriented", "literal"])
    return parser


def _config(args) -> Config:
    primes = None
    if args.primes:
        try:
            primes = tuple(int(p) for p in args.primes.split(","))
        except ValueError:
            raise UsageError(f"--primes must be comma-separated integers, got {args.primes!r}")
        if len(set(primes)) != len(primes) or not all(is_prime(p) for p in primes):
            raise UsageError(f"--primes must be distinct primes, got {args.primes!r}")
    if args.n is not None and args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.r is not None and args.r < 1:
        raise UsageError("--r must be at least 1")
    cache = args.cache or os.environ.get(ENV_CACHE)
    jobs = args.jobs if args.jobs is not None else int(os.environ.get(ENV_JOBS, "1"))
    if jobs < 1:
        raise UsageError("--jobs must be positive")
    return Config(args.n, args.r, primes, Path(cache) if cache else None, jobs)


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}")


def _matrix(text: str, cfg: Config):
    A = mx.as_matrix(_json_arg(text, "matrix"))
    if cfg.n is not None and len(A) != cfg.n:
        raise UsageError(f"matrix {text} is not {cfg.n} x {cfg.n}")
    if cfg.r is not None and mx.total(A) != cfg.r:
        raise UsageError(f"matrix {text} does not sum to r = {cfg.r}")
    return A


def _module(text: str, cfg: Config) -> Multisegment:
    data = _json_arg(text, "module")
    if isinstance(data, dict):
        return Multisegment.from_json(data)
    cfg.need("n")
    return Multisegment.from_triples(cfg.n, data)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


# -- tables -----------------------------------------------------------------------


def _schur_job(pair):
    A, A2 = pair
    return schur.count_product(A, A2).to_json()


def _zero_job(args):
    r, M, N = args
    return schur.specialize0(schur.product(schur.l_element(M, r), schur.l_element(N, r))).to_json()


def _pool_map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _table(kind: str, cfg: Config) -> list[dict]:
    n, r = cfg.n, cfg.r
    if kind == "schur":
        basis = mx.theta(n, r)
        pairs = [(A, B) for A in basis for B in basis if mx.co(A) == mx.ro(B)]
        cache = schur.StructureCache(cfg.cache_path) if cfg.cache_path else None
        results = {}
        for pair in pairs:
            hit = cache.get(*pair) if cache else None
            if hit is not None:
                results[pair] = hit.to_json()
        todo = [pair for pair in pairs if pair not in results]
        for pair, terms in zip(todo, _pool_map(_schur_job, todo, cfg.parallelism)):
            results[pair] = terms
        if cache and todo:
            cache.put_many(n, r, {pair: schur.SchurElement.from_json(results[pair]) for pair in todo})
        return [{"left": mx.to_json(A), "right": mx.to_json(B), "product": results[(A, B)]} for A, B in pairs]
    if kind == "generic":
        basis = mx.theta_upper(n, r)
        out = []
        for A in basis:
            for B in basis:
                C = genmul.generic_multiply(A, B)
                out.append({"left": mx.to_json(A), "right": mx.to_json(B),
                            "result": "zero" if C is genmul.ZERO else mx.to_json(C)})
        return out
    mods = genmul.strict_modules(n, r)
    jobs = [(r, M, N) for M in mods for N in mods]
    products = _pool_map(_zero_job, jobs, cfg.parallelism)
    return [{"left": M.to_json(), "right": N.to_json(), "product": x} for (_, M, N), x in zip(jobs, products)]


# -- dispatch ---------------------------------------------------------------------


def _run(args, cfg: Config) -> int:
    if cfg.cache_path:
        schur.set_cache(schur.StructureCache(cfg.cache_path))
    verb = args.verb
    if verb == "mul":
        A, A2 = _matrix(args.A, cfg), _matrix(args.A2, cfg)
        _emit(schur.multiply(A, A2, primes=cfg.primes).to_json())
    elif verb == "gmul":
        C = genmul.generic_multiply(_matrix(args.A, cfg), _matrix(args.A2, cfg))
        _emit({"result": "zero" if C is genmul.ZERO else mx.to_json(C)})
    elif verb in ("theta", "gamma"):
        cfg.need("r")
        M = _module(args.M, cfg)
        _emit((genmul.theta if verb == "theta" else genmul.gamma)(M, cfg.r).to_json())
    elif verb == "hall":
        X, M, N = (_module(t, cfg) for t in (args.X, args.M, args.N))
        _emit({"polynomial": hall.hall_polynomial(X, M, N, primes=cfg.primes).to_json()})
    elif verb == "genext":
        _emit(hall.generic_extension(_module(args.M, cfg), _module(args.N, cfg)).to_json())
    elif verb == "table":
        cfg.need("n", "r")
        entries = _table(args.kind, cfg)
        doc = {"kind": args.kind, "n": cfg.n, "r": cfg.r, "entries": entries}
        Path(args.out).write_text(json.dumps(doc, separators=(",", ":")) + "\n")
        _emit({"out": args.out, "kind": args.kind, "entries": len(entries)})
    elif verb == "verify":
        cfg.need("n")
        bounds = {k: getattr(args, k) for k in ("max_dim", "samples", "seed", "form") if getattr(args, k, None) is not None}
        report = genmul.verify_suite(args.suite, cfg.n, cfg.r or 0, bounds, jobs=cfg.parallelism)
        _emit(report.to_json())
        return 0 if report.passed else 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args, _config(args))
    except (NotPolynomial, NotIntegral, DegreeExceeded) as exc:
        print(f"qschur: counting check failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, PreconditionViolated, DimVectorMismatch) as exc:
        print(f"qschur: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
