"""Run proof search on the named goals and on random reachability goals.

Prints one row per goal and writes a JSON report. Budgets are swept to show
that successes persist as the budget grows.
"""

from __future__ import annotations

import argparse
import json
import random
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from irew import fixtures as fx
from irew.generators import random_ground_term, random_sequence
from irew.search import Exhausted, SearchBudget, search_proof
from irew.trs import replay

NAMED_GOALS = [
    ("collapse", fx.C_OMEGA, "a", "ibi", fx.TRS_COLLAPSE),
    ("collapse", fx.C_OMEGA, "a", "ired", fx.TRS_COLLAPSE),
    ("grow", "a", fx.C_OMEGA, "ired", fx.TRS_GROW),
    ("f_to_g", fx.F_OMEGA, fx.G_OMEGA, "ired", fx.TRS_FG),
    ("diagonal", "f(a, b)", "D", "ired", fx.TRS_DIAGONAL),
    ("a_eq_b", "a", "b", "ieq", fx.TRS_EQ),
    ("ca_eq_c_omega", "C(a)", fx.C_OMEGA, "ieq", fx.TRS_EQ),
    ("swap", fx.A_OMEGA, fx.B_OMEGA, "ieq", fx.TRS_SWAP),
]


@dataclass
class BenchConfig:
    seed: int = 0
    random_goals: int = 50
    max_steps: int = 4
    goal_budgets: list[int] = field(default_factory=lambda: [100, 500, 2000])
    out: str = "results/search_benchmark.json"


def run_goal(s, t, kind, trs, budget):
    start = time.perf_counter()
    result = search_proof(s, t, kind, trs, budget)
    took = time.perf_counter() - start
    if isinstance(result, Exhausted):
        return {"found": False, "reason": result.reason, "goals": result.goals, "seconds": took}
    return {"found": True, "nodes": len(result), "seconds": took}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = BenchConfig()
    ap.add_argument("--seed", type=int, default=cfg.seed)
    ap.add_argument("--random-goals", type=int, default=cfg.random_goals)
    ap.add_argument("--out", default=cfg.out)
    args = ap.parse_args()
    cfg = BenchConfig(seed=args.seed, random_goals=args.random_goals, out=args.out)

    rows = []
    for max_goals in cfg.goal_budgets:
        budget = SearchBudget(max_goals=max_goals)
        for name, s, t, kind, trs in NAMED_GOALS:
            row = {"goal": name, "kind": kind, "max_goals": max_goals}
            row.update(run_goal(trs.parse(s), trs.parse(t), kind, trs, budget))
            rows.append(row)
            status = f"{row['nodes']} nodes" if row["found"] else f"exhausted ({row['reason']})"
            print(f"{name:14s} {kind:4s} goals<={max_goals:5d}  {status:28s} {row['seconds']:.3f}s")

    rng = random.Random(cfg.seed)
    per_kind = {k: [0, 0.0] for k in ("ired", "ibi", "ieq")}
    for _ in range(cfg.random_goals):
        s = random_ground_term(rng, 3)
        t = replay(random_sequence(rng, s, fx.TRS_PERM, rng.randint(0, cfg.max_steps)), fx.TRS_PERM)
        for kind in per_kind:
            row = run_goal(s, t, kind, fx.TRS_PERM, SearchBudget())
            per_kind[kind][0] += row["found"]
            per_kind[kind][1] = max(per_kind[kind][1], row["seconds"])
    for kind, (found, worst) in per_kind.items():
        print(f"random reachability {kind:4s}: {found}/{cfg.random_goals} found, slowest {worst:.3f}s")

    out = Path(cfg.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    report = {"config": asdict(cfg), "named": rows, "random": per_kind}
    out.write_text(json.dumps(report, indent=2) + "\n")
    print(f"report written to {out}")


if __name__ == "__main__":
    main()
