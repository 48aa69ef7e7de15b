"""Compare the compiled and pure-Python CDCL backends.

Two workloads: random 3-SAT near the phase transition, and learning the
transport bundle end to end with each backend plugged into the solve
contexts.  Both backends take the same decisions, so answers must agree.

    python benchmarks/bench_sat.py --vars 120 --instances 10 --steps 300
"""

import argparse
import random
import statistics
import sys
import time

import actsynth.sat.bridge as bridge
from actsynth.bundles import load_bundle
from actsynth.learn import LearnConfig, learn_domain
from actsynth.pddl import emit_domain
from actsynth.sat import CSolver, PySolver


def random_3sat(n: int, m: int, rnd: random.Random) -> list[list[int]]:
    return [[rnd.choice((1, -1)) * v for v in rnd.sample(range(1, n + 1), 3)] for _ in range(m)]


def run_cnf(cls, n: int, clauses: list[list[int]]) -> tuple[int, float]:
    t0 = time.perf_counter()
    s = cls()
    for _ in range(n):
        s.new_var()
    for c in clauses:
        s.add_clause(c)
    res = s.solve([])
    return res, time.perf_counter() - t0


def run_learn(cls, steps: int, seed: int) -> tuple[str, float]:
    b = load_bundle("transport")
    traces = b.walks(steps, seed=seed)
    orig = bridge._solver_factory
    bridge._solver_factory = cls
    try:
        t0 = time.perf_counter()
        res = learn_domain(b.domain.header(), traces, LearnConfig(workers=1))
        return emit_domain(res.domain), time.perf_counter() - t0
    finally:
        bridge._solver_factory = orig


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=100)
    ap.add_argument("--ratio", type=float, default=4.26)
    ap.add_argument("--instances", type=int, default=8)
    ap.add_argument("--steps", type=int, default=300, help="transport walk length")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if CSolver is None:
        print("compiled backend not built; nothing to compare", file=sys.stderr)
        return 1

    rnd = random.Random(args.seed)
    m = int(args.vars * args.ratio)
    times = {"python": [], "cython": []}
    answers = 0
    for _ in range(args.instances):
        clauses = random_3sat(args.vars, m, rnd)
        rp, tp = run_cnf(PySolver, args.vars, clauses)
        rc, tc = run_cnf(CSolver, args.vars, clauses)
        if rp != rc:
            print(f"backends disagree: python={rp} cython={rc}", file=sys.stderr)
            return 2
        answers += rp == 1
        times["python"].append(tp)
        times["cython"].append(tc)
    mp, mc = statistics.median(times["python"]), statistics.median(times["cython"])
    print(f"random 3-SAT n={args.vars} m={m} x{args.instances} ({answers} sat)")
    print(f"  python  median {mp * 1000:9.2f} ms")
    print(f"  cython  median {mc * 1000:9.2f} ms   speedup {mp / mc:5.1f}x")

    dp, tp = run_learn(PySolver, args.steps, args.seed + 1)
    dc, tc = run_learn(CSolver, args.steps, args.seed + 1)
    if dp != dc:
        print("backends learned different domains", file=sys.stderr)
        return 2
    print(f"learn transport, {args.steps} steps")
    print(f"  python  {tp:7.3f} s")
    print(f"  cython  {tc:7.3f} s   speedup {tp / tc:5.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
