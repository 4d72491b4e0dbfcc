"""Command-line interface: ``ssalab gen | eval | verify``.

Exit status: 0 when everything passed, 1 when at least one check failed,
2 on premise or usage errors.
"""

from __future__ import annotations

import argparse
import ast
import datetime as _dt
import itertools
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import io as sio
from .entropy import (
    LogBase,
    Partition,
    among_cluster_information,
    cluster_entropy,
    correlation_information,
    mutual_information,
    parse_cluster,
    ssa_excess,
    ssa_triples,
    von_neumann_entropy,
    within_cluster_information,
)
from .errors import PremiseError, SsalabError
from .states import (
    BlockAllocation,
    biorthogonal_mixture,
    monoorthogonal_mixture,
    named_state,
    orthogonal_mixture,
    product_state,
    random_density,
    random_mixture,
    theorem2_family,
)
from .tensor import MAX_TOTAL_DIM
from . import verify as V

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

FAMILIES = ("bell", "ghz", "w", "max_mixed", "random", "pure", "product", "biorthogonal", "monoorthogonal", "theorem2")
CHECKS = (
    "lemma1",
    "theorem1",
    "corollary1",
    "ssa",
    "eq19",
    "corollary2",
    "lemma2",
    "lemma3",
    "lemma4",
    "mixing",
    "lemma5",
    "theorem2",
)


class UsageError(SsalabError):
    pass


# -- argument parsing ------------------------------------------------------------


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _blocks(text):
    """``2,2`` (same blocks on every constrained subsystem) or ``2,2/1,3``."""
    return tuple(_ints(part) for part in text.split("/"))


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--samples", type=int, default=1)
    g.add_argument("--tol", type=float, default=None, help="equality tolerance (default 1e-8)")
    g.add_argument("--log-base", choices=("bits", "nats"), default="bits")
    g.add_argument("--out", choices=("json", "csv"), default="json", help="report format")
    g.add_argument("--max-dim", type=int, default=MAX_TOTAL_DIM)
    return p


def _generator_flags(p):
    p.add_argument("--dims", type=_ints)
    p.add_argument("--rank", type=int)
    p.add_argument("--blocks", type=_blocks)
    p.add_argument("--weights", type=_floats)


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    # global flags live on each subcommand; argparse lets subparser defaults
    # clobber values parsed by the top-level parser
    parser = argparse.ArgumentParser(prog="ssalab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ssalab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="generate a state file")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    _generator_flags(gen)
    gen.add_argument("--n", type=int, default=3, help="qubits for ghz / w")
    gen.add_argument("--cut", type=int, help="product: split point M for rho_1..M (x) rho_M+1..N")
    gen.add_argument("--same-rho3", action="store_true", help="theorem2: one shared factor on subsystem 3")
    gen.add_argument("-o", "--output", help="state file (default <family>.json)")
    gen.add_argument("--mixture-output", help="also write the mixture (weights and components)")

    ev = sub.add_parser("eval", parents=[common], help="evaluate a functional on a state file")
    ev.add_argument("state")
    ev.add_argument("quantity", choices=("entropy", "corr", "mutual", "within", "among", "excess"))
    ev.add_argument("args", nargs="*", help="clusters like 1,2 or a partition like '{1}|{2,3}'")

    ver = sub.add_parser("verify", parents=[common], help="run a verification campaign")
    ver.add_argument("check", choices=CHECKS)
    _generator_flags(ver)
    ver.add_argument("--state", help="verify a single state file instead of generated samples")
    ver.add_argument("--mixture", help="verify a single mixture file (mixture-based checks)")
    ver.add_argument("--components", type=int, default=2, help="lemma4: mixture size")
    ver.add_argument("--cut", type=int, help="corollary2: split point M (default N-2)")
    ver.add_argument("--partition", help="theorem1: a single partition instead of all of them")
    ver.add_argument("--tree", help="corollary1: split tree as a Python literal, e.g. '(1,(2,3))'")
    ver.add_argument("--equality", action="store_true", help="ssa: detect equality instead of the inequality")
    ver.add_argument("--same-rho3", action="store_true")
    ver.add_argument("--report-file", help="default verify-<check>.<out>")
    ver.add_argument("--timestamp", help="ISO-8601 stamp written into reports (default: now)")
    ver.add_argument("--jobs", type=int, default=1)
    return parser


# -- gen -----------------------------------------------------------------------------


def _default_weights(k):
    return tuple([1.0 / k] * k)


def _alloc(blocks, n_rows, default):
    rows = blocks or (default,)
    if len(rows) == 1:
        rows = rows * n_rows
    return BlockAllocation(rows)


def _need(value, flag, family):
    if value is None:
        raise UsageError(f"{family} needs {flag}")
    return value


def generate(args, rng):
    """Return ``(state, mixture_or_None)`` for ``args.family``."""
    fam = args.family
    if fam == "bell":
        return named_state("bell"), None
    if fam in ("ghz", "w"):
        return named_state(fam, n=args.n), None
    if fam == "max_mixed":
        return named_state("max_mixed", dims=_need(args.dims, "--dims", fam)), None
    dims = _need(args.dims, "--dims", fam)
    if fam == "random":
        return random_density(dims, args.rank, rng, max_dim=args.max_dim), None
    if fam == "pure":
        return random_density(dims, 1, rng, max_dim=args.max_dim), None
    if fam == "product":
        if args.cut:
            groups = [dims[: args.cut], dims[args.cut :]]
        else:
            groups = [(d,) for d in dims]
        return product_state([random_density(g, None, rng) for g in groups]), None
    if fam == "biorthogonal":
        alloc = _alloc(args.blocks, 2, (dims[0] // 2, dims[0] - dims[0] // 2))
        mix = biorthogonal_mixture(dims, alloc, args.weights or _default_weights(alloc.n_blocks), rng, rank=args.rank)
        return mix.mix(), mix
    if fam == "monoorthogonal":
        alloc = _alloc(args.blocks, 1, (dims[0] // 2, dims[0] - dims[0] // 2))
        mix = monoorthogonal_mixture(
            dims, alloc, args.weights or _default_weights(alloc.n_blocks), rng, rank=args.rank
        )
        return mix.mix(), mix
    if fam == "theorem2":
        alloc = _alloc(args.blocks, 2, (2, 2))
        rho, mix = theorem2_family(
            dims,
            alloc,
            args.weights or _default_weights(alloc.n_blocks),
            rng,
            not getattr(args, "same_rho3", False),
            rank=args.rank,
        )
        return rho, mix
    raise UsageError(f"unknown family {fam!r}")


def cmd_gen(args, out=sys.stdout) -> int:
    rho, mix = generate(args, np.random.default_rng(args.seed))
    path = args.output or f"{args.family}.json"
    sio.save_state(path, rho)
    if args.mixture_output:
        if mix is None:
            raise UsageError(f"family {args.family} is not a mixture")
        sio.save_mixture(args.mixture_output, mix)
    base = args.log_base
    print(f"wrote {path}", file=out)
    print(f"dims: {list(rho.dims)}  rank: {rho.rank}", file=out)
    print(f"S = {_fmt(von_neumann_entropy(rho, base))} {base}", file=out)
    if rho.n_subsystems > 1:
        singles = [von_neumann_entropy(rho.ptrace((k,)), base) for k in range(1, rho.n_subsystems + 1)]
        print("S_n = " + ", ".join(_fmt(s) for s in singles) + f" {base}", file=out)
        print(f"correlation information = {_fmt(correlation_information(rho, base))} {base}", file=out)
    return EXIT_OK


# -- eval ----------------------------------------------------------------------------


def _fmt(x: float) -> str:
    s = f"{x:.15g}"
    return s if any(c in s for c in ".en") else s + ".0"


def evaluate(rho, quantity, qargs, base):
    n = rho.n_subsystems
    want = {"entropy": (0, 1), "corr": (0, 0), "mutual": (2, 2), "within": (1, 1), "among": (1, 1), "excess": (3, 3)}
    lo, hi = want[quantity]
    if not lo <= len(qargs) <= hi:
        raise UsageError(f"{quantity} takes {lo if lo == hi else f'{lo}-{hi}'} argument(s), got {len(qargs)}")
    if quantity == "entropy":
        return cluster_entropy(rho, parse_cluster(qargs[0]), base) if qargs else von_neumann_entropy(rho, base)
    if quantity == "corr":
        return correlation_information(rho, base)
    if quantity == "mutual":
        return mutual_information(rho, parse_cluster(qargs[0]), parse_cluster(qargs[1]), base)
    if quantity == "within":
        return within_cluster_information(rho, parse_cluster(qargs[0]), base)
    if quantity == "among":
        return among_cluster_information(rho, Partition.parse(qargs[0], n), base)
    a, b, d = (parse_cluster(x) for x in qargs)
    return ssa_excess(rho, a, b, d, base)


def cmd_eval(args, out=sys.stdout) -> int:
    rho = sio.load_state(args.state, args.max_dim)
    value = evaluate(rho, args.quantity, args.args, args.log_base)
    print(f"{_fmt(value)} {args.log_base}", file=out)
    return EXIT_OK


# -- verify --------------------------------------------------------------------------


def _caterpillar(n):
    tree = n
    for k in range(n - 1, 0, -1):
        tree = (k, tree)
    return tree


def _corollary2_cases(n, m):
    head, tail = list(range(1, m + 1)), list(range(m + 1, n + 1))
    subsets = lambda xs: (c for r in range(1, len(xs) + 1) for c in itertools.combinations(xs, r))
    for extra in subsets(head):
        cl = tuple(sorted(extra + tuple(tail)))
        rest = [h for h in head if h not in extra]
        for ck in subsets(rest):
            for drop in subsets(tail):
                yield ck, cl, tuple(x for x in cl if x not in drop)


def _one_sample(args, seed, tol, base):
    """All reports for one seeded sample (or the supplied file)."""
    check = args.check
    rng = np.random.default_rng(seed)
    dims = args.dims

    def state():
        if args.state:
            return sio.load_state(args.state, args.max_dim)
        if dims is None:
            raise UsageError(f"{check} needs --dims or --state")
        return random_density(dims, args.rank, rng, max_dim=args.max_dim)

    def mixture(default):
        if args.mixture:
            return sio.load_mixture(args.mixture, args.max_dim)
        return default()

    kw = dict(base=base, seed=seed)
    if check == "lemma1":
        return [V.verify_lemma1(state(), args.tol, **kw)]
    if check == "theorem1":
        rho = state()
        if args.partition:
            return [V.verify_theorem1(rho, Partition.parse(args.partition, rho.n_subsystems), tol, **kw)]
        return V.verify_theorem1_all_partitions(rho, tol, **kw)
    if check == "corollary1":
        rho = state()
        tree = ast.literal_eval(args.tree) if args.tree else _caterpillar(rho.n_subsystems)
        return [V.verify_corollary1(rho, tree, tol, **kw)]
    if check == "ssa":
        rho = state()
        return [
            V.verify_ssa(rho, a, b, d, args.tol, equality=args.equality, **kw)
            for a, b, d in ssa_triples(rho.n_subsystems)
        ]
    if check == "eq19":
        return [V.verify_eq19_excess_pairing(state(), tol, **kw)]
    if check == "corollary2":
        if args.state:
            rho = sio.load_state(args.state, args.max_dim)
            n = rho.n_subsystems
            m = args.cut or n - 2
        else:
            if dims is None:
                raise UsageError("corollary2 needs --dims or --state")
            n = len(dims)
            m = args.cut or n - 2
            rho = product_state([random_density(dims[:m], None, rng), random_density(dims[m:], None, rng)])
        return [V.verify_corollary2(rho, m, ck, cl, clp, tol, **kw) for ck, cl, clp in _corollary2_cases(n, m)]

    weights = lambda k: args.weights or _default_weights(k)
    if check in ("lemma2", "theorem2"):
        d = dims or (4, 4, 2)
        alloc = _alloc(args.blocks, 2, (2, 2))
        if check == "theorem2":
            if args.mixture:
                raise UsageError("theorem2 builds its own family; use lemma2/lemma3 for mixture files")
            return V.verify_theorem2(
                d, alloc, weights(alloc.n_blocks), rng, tol, distinct_rho3=not args.same_rho3, rank=args.rank, **kw
            )
        mix = mixture(lambda: theorem2_family(d, alloc, weights(alloc.n_blocks), rng, rank=args.rank)[1])
        return [V.verify_lemma2(mix, tol, seed=seed)]
    if check == "lemma3":
        d = dims or (4, 4)
        alloc = _alloc(args.blocks, 2, (d[0] // 2, d[0] - d[0] // 2))
        mix = mixture(lambda: biorthogonal_mixture(d, alloc, weights(alloc.n_blocks), rng, rank=args.rank))
        return [V.verify_lemma3(mix, tol, **kw)]
    if check == "lemma5":
        d = dims or (4, 2)
        alloc = _alloc(args.blocks, 1, (d[0] // 2, d[0] - d[0] // 2))
        mix = mixture(lambda: monoorthogonal_mixture(d, alloc, weights(alloc.n_blocks), rng, rank=args.rank))
        return [V.verify_lemma5(mix, tol, **kw)]
    if check == "lemma4":
        d = dims or (2,)
        mix = mixture(lambda: random_mixture(d, args.components, rng, rank=args.rank, weights=args.weights))
        return [V.verify_lemma4(mix, tol, **kw)]
    if check == "mixing":
        d = dims or (3,)
        total = int(np.prod(d))
        blocks = args.blocks[0] if args.blocks else (total // 2, total - total // 2)
        mix = mixture(lambda: orthogonal_mixture(d, blocks, weights(len(blocks)), rng, rank=args.rank))
        return [V.verify_mixing_property(mix, tol, **kw)]
    raise UsageError(f"unknown check {check!r}")


def _timestamp(args) -> str:
    if args.timestamp:
        return args.timestamp
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch else _dt.datetime.now(_dt.timezone.utc)
    return now.replace(microsecond=0).isoformat()


def run_campaign(args) -> list:
    """Reports in seed order, independent of ``--jobs``."""
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    tol = args.tol if args.tol is not None else V.EQ_TOL
    if tol <= 0:
        raise UsageError("--tol must be positive")
    LogBase.coerce(args.log_base)
    single = bool(args.state or args.mixture)
    seeds = [args.seed] if single else [args.seed + i for i in range(args.samples)]
    task = lambda s: _one_sample(args, s, tol, args.log_base)
    if args.jobs > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            batches = list(pool.map(task, seeds))
    else:
        batches = [task(s) for s in seeds]
    return [r for batch in batches for r in batch]


def cmd_verify(args, out=sys.stdout) -> int:
    reports = run_campaign(args)
    stamp = _timestamp(args)
    records = [sio.report_record(r, stamp) for r in reports]
    path = args.report_file or f"verify-{args.check}.{args.out}"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(sio.dumps_reports(records, args.out))
    n_fail = sum(not r.passed for r in reports)
    worst = max((r.residual for r in reports), default=0.0)
    print(f"{args.check}: {len(reports) - n_fail}/{len(reports)} passed, max residual {worst:.3e}", file=out)
    if args.check == "ssa":
        eq = sum(r.context["excess"] <= (args.tol or V.EQ_TOL) for r in reports)
        print(f"ssa: equality detected in {eq} of {len(reports)} (a, b, discard) cases", file=out)
    print(f"reports written to {path}", file=out)
    return EXIT_OK if n_fail == 0 else EXIT_FAILED


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"gen": cmd_gen, "eval": cmd_eval, "verify": cmd_verify}[args.command]
    try:
        return handler(args, out)
    except PremiseError as exc:
        print(f"premise error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SsalabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
