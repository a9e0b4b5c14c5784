"""Compare certificate sizes before and after compression.

Covers the left-linear fixtures and a batch of random certificates, and
checks that each linearized prefix agrees with the target to a few depths.
"""

from __future__ import annotations

import argparse
import collections
import random
from dataclasses import dataclass

from irew import fixtures as fx
from irew.compression import compress, format_ored, linearize
from irew.generators import CertGenConfig, random_ired_cert
from irew.proofs import check_valid
from irew.terms import truncation_equal
from irew.trs import is_left_linear, replay_terms


@dataclass
class SizeConfig:
    seed: int = 0
    samples: int = 500
    max_nodes: int = 12
    depth: int = 4
    steps: int = 80


def agreement_depth(o, trs, cfg: SizeConfig) -> int:
    terms = replay_terms(linearize(o, cfg.steps), trs)
    n = -1
    while n < cfg.depth and any(truncation_equal(u, o.target, n + 1) for u in terms):
        n += 1
    return n


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--show", action="store_true", help="print each compressed fixture")
    args = ap.parse_args()
    cfg = SizeConfig(seed=args.seed, samples=args.samples)

    for name, (trs, cert) in fx.ired_fixtures().items():
        if not is_left_linear(trs):
            print(f"{name:26s} skipped: not left-linear")
            continue
        check_valid(cert, trs)
        o = compress(cert, trs)
        print(f"{name:26s} {len(cert):3d} nodes -> {len(o):2d} ored nodes, agrees to depth {agreement_depth(o, trs, cfg)}")
        if args.show:
            print("   " + format_ored(o, trs).replace("\n", "\n   "))

    rng = random.Random(cfg.seed)
    gen = CertGenConfig(max_nodes=cfg.max_nodes)
    table = collections.defaultdict(collections.Counter)
    shallow = 0
    for _ in range(cfg.samples):
        cert = random_ired_cert(rng, gen)
        o = compress(cert, fx.TRS_PERM)
        table[len(cert)][len(o)] += 1
        shallow += agreement_depth(o, fx.TRS_PERM, cfg) < cfg.depth
    print(f"\nrandom certificates ({cfg.samples}): input nodes -> ored node counts")
    for n in sorted(table):
        print(f"  {n:3d}: {dict(sorted(table[n].items()))}")
    print(f"prefixes not agreeing to depth {cfg.depth} within {cfg.steps} steps: {shallow}")


if __name__ == "__main__":
    main()
