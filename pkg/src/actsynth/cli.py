"""Command-line front end: synth, gen, eval, gi.

Exit codes
    0  success (for ``gi`` also when the graphs are not isomorphic)
    1  unreadable or malformed input, inapplicable plan
    2  time limit reached during synthesis
    3  some action needs more parameters than the budget allows

Settings come from flags, then a ``key = value`` file given with
``--config``, then ``ACTSYNTH_<KEY>`` environment variables.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from .errors import ActSynthError, NotApplicable, ParamBudgetExceeded, ParseError, TimeLimit
from .evaluation import diff_domains
from .gi import format_mapping, parse_graph, solve_gi
from .learn import LearnConfig, default_workers, learn_domain
from .pddl import emit_domain, parse_domain, parse_plan, parse_problem
from .tracegen import random_walk, replay_plan
from .traces import emit_trace, parse_trace

log = logging.getLogger("actsynth")

ENV_PREFIX = "ACTSYNTH_"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TIME_LIMIT = 2
EXIT_PARAM_BUDGET = 3


@dataclass
class RunConfig:
    time_limit: float = 60.0
    seed: int = 0
    param_budget_extra: int = 3
    workers: int = 0  # 0: available parallelism
    strict_types: bool = False
    declared_types: bool = False
    debug_cnf: str = ""

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.param_budget_extra < 0:
            raise ValueError("param_budget_extra must be non-negative")
        if self.workers < 0:
            raise ValueError("workers must be non-negative")


def _coerce(name: str, value: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if kind in ("bool", bool):
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off", ""):
            return False
        raise ValueError(f"{name}: not a boolean: {value!r}")
    if kind in ("int", int):
        return int(value)
    if kind in ("float", float):
        return float(value)
    return value


def read_config_file(path: str | Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment, values may be quoted."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ParseError("expected key = value", lineno, 1)
        if key not in known:
            raise ParseError(f"unknown setting {key!r}", lineno, 1)
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        out[key] = value
    return out


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Flags win over the config file, which wins over the environment."""
    environ = os.environ if environ is None else environ
    values: dict[str, object] = {}
    for f in fields(RunConfig):
        env = environ.get(ENV_PREFIX + f.name.upper())
        if env is not None:
            values[f.name] = _coerce(f.name, env)
    if getattr(args, "config", None):
        for key, value in read_config_file(args.config).items():
            values[key] = _coerce(key, value)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return RunConfig(**values)


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _fail(msg: str, code: int = EXIT_INPUT) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# -- synth -------------------------------------------------------------------


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        cfg = resolve_config(args)
        header = parse_domain(_read(args.header)).header()
        traces = []
        for p in args.traces:
            try:
                traces.append(parse_trace(_read(p), header.predicates, header.hierarchy))
            except ParseError as e:
                raise ParseError(f"{p}: {e}") from None
    except (ActSynthError, OSError, ValueError) as e:
        return _fail(str(e))
    if not traces:
        return _fail("no traces given")
    workers = cfg.workers or default_workers()
    if cfg.debug_cnf:
        workers = 1  # solver state has to stay in this process to be dumped
    config = LearnConfig(
        time_limit=cfg.time_limit,
        param_budget_extra=cfg.param_budget_extra,
        workers=workers,
        use_declared_types=cfg.declared_types,
        record_cnf=bool(cfg.debug_cnf),
    )
    try:
        result = learn_domain(header, traces, config)
    except TimeLimit as e:
        return _fail(str(e), EXIT_TIME_LIMIT)
    except ParamBudgetExceeded as e:
        return _fail(str(e), EXIT_PARAM_BUDGET)
    except ActSynthError as e:
        return _fail(str(e))
    try:
        _write(args.out, emit_domain(result.domain))
    except OSError as e:
        return _fail(str(e))
    summary = sys.stdout if args.out not in (None, "-") else sys.stderr
    for name in sorted(result.actions):
        a = result.actions[name]
        s = a.schema
        print(f"{name} k={s.arity} pre={len(s.pre)} add={len(s.add)} del={len(s.delete)}", file=summary)
        if args.diagnostics:
            sol = a.solution
            print(f"{name} k={sol.k} encoded={len(sol.encoded)} offenses={sol.offenses} "
                  f"time={sol.elapsed:.3f}", file=sys.stderr)
        if cfg.debug_cnf and a.solution.encoding is not None:
            out = Path(cfg.debug_cnf)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}-k{a.solution.k}.cnf").write_text(a.solution.encoding.context.to_dimacs())
    return EXIT_OK


# -- gen ---------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        cfg = resolve_config(args)
        domain = parse_domain(_read(args.domain))
        problem = parse_problem(_read(args.problem), domain)
        if args.plan is not None:
            trace = replay_plan(domain, problem, parse_plan(_read(args.plan)), args.instance)
        else:
            trace = random_walk(domain, problem, args.random_walk, cfg.seed, args.instance)
        _write(args.out, emit_trace(trace))
    except NotApplicable as e:
        return _fail(str(e))
    except (ActSynthError, OSError, ValueError) as e:
        return _fail(str(e))
    return EXIT_OK


# -- eval --------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        cfg = resolve_config(args)
        learned = parse_domain(_read(args.learned))
        reference = parse_domain(_read(args.reference))
    except (ActSynthError, OSError, ValueError) as e:
        return _fail(str(e))
    report = diff_domains(learned, reference)
    if args.json:
        try:
            _write(args.json, report.to_json())
        except OSError as e:
            return _fail(str(e))
    sys.stdout.write(report.table(strict=cfg.strict_types))
    return EXIT_OK


# -- gi ----------------------------------------------------------------------


def cmd_gi(args: argparse.Namespace) -> int:
    try:
        g1 = parse_graph(_read(args.g1), directed=not args.undirected)
        g2 = parse_graph(_read(args.g2), directed=not args.undirected)
    except (ActSynthError, OSError, ValueError) as e:
        return _fail(str(e))
    print(format_mapping(solve_gi(g1, g2), g1))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actsynth",
        description="Learn STRIPS action schemas from label-only state traces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value settings file")

    p = sub.add_parser("synth", help="learn a domain from traces")
    p.add_argument("header", help="PDDL domain giving types and predicates (actions are ignored)")
    p.add_argument("traces", nargs="+", help="trace files")
    p.add_argument("-o", "--out", help="output domain file (default: stdout)")
    p.add_argument("--time-limit", dest="time_limit", type=float, help="seconds for the whole run (default 60)")
    p.add_argument("--param-budget-extra", dest="param_budget_extra", type=int,
                   help="parameters allowed beyond min_pars (default 3)")
    p.add_argument("--workers", type=int, help="parallel labels (default: available CPUs)")
    p.add_argument("--seed", type=int, help="accepted for uniformity; synthesis is deterministic")
    p.add_argument("--declared-types", dest="declared_types", action="store_const", const=True,
                   help="count the object types declared in traces as observations")
    p.add_argument("--debug-cnf", dest="debug_cnf", metavar="DIR", help="dump each label's final CNF here")
    p.add_argument("--diagnostics", action="store_true", help="per-label solver statistics on stderr")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("gen", help="generate a label-only trace")
    p.add_argument("domain")
    p.add_argument("problem")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--plan", help="plan file, one (action args...) per line")
    how.add_argument("--random-walk", dest="random_walk", type=int, metavar="N",
                     help="take up to N random applicable actions")
    p.add_argument("--seed", type=int, help="random-walk seed (default 0)")
    p.add_argument("--instance", help="instance id written to the trace (default: problem name)")
    p.add_argument("-o", "--out", help="output trace file (default: stdout)")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="compare a learned domain with a reference")
    p.add_argument("learned")
    p.add_argument("reference")
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--strict", dest="strict_types", action="store_const", const=True,
                   help="fidelity from type-exact effect counts")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gi", help="graph isomorphism through effect synthesis")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("--undirected", action="store_true", help="edges have no orientation")
    p.set_defaults(func=cmd_gi)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
