"""Exhaustive comparison of the two permutation-equivalence oracles.

For every start term up to a node bound and every pair of sequences of equal
length from it, compares the brute-force witness search with canonical-tree
equality. Reports counts per (term size, length) and total disagreements.
"""

from __future__ import annotations

import argparse
import collections
import time
from dataclasses import dataclass

from irew import fixtures as fx
from irew.proofs import cert_fingerprint
from irew.sequences import canonical_tree_of, enumerate_sequences, enumerate_terms, permutation_equiv_bruteforce, rulapp


@dataclass
class SweepConfig:
    max_nodes: int = 5
    max_length: int = 4


def sweep(cfg: SweepConfig):
    trs = fx.TRS_PERM
    stats = collections.defaultdict(lambda: collections.Counter())
    for source in enumerate_terms(trs.signature, cfg.max_nodes):
        for length in range(cfg.max_length + 1):
            seqs = list(enumerate_sequences(source, trs, length))
            keys = [cert_fingerprint(canonical_tree_of(r, trs)) for r in seqs]
            groups = collections.defaultdict(list)
            for i, r in enumerate(seqs):
                groups[tuple(sorted(rulapp(r)))].append(i)
            row = stats[(len(source), length)]
            row["sequences"] += len(seqs)
            row["pairs"] += len(seqs) ** 2
            for members in groups.values():
                for i in members:
                    for j in members:
                        brute = permutation_equiv_bruteforce(seqs[i], seqs[j], trs) is not None
                        row["equivalent"] += brute
                        row["disagree"] += brute != (keys[i] == keys[j])
            # a fingerprint shared across rule-application groups is a disagreement
            owner = {}
            for g, members in enumerate(groups.values()):
                for k in {keys[i] for i in members}:
                    row["disagree"] += owner.setdefault(k, g) != g
    return stats


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-nodes", type=int, default=SweepConfig.max_nodes)
    ap.add_argument("--max-length", type=int, default=SweepConfig.max_length)
    args = ap.parse_args()
    cfg = SweepConfig(args.max_nodes, args.max_length)
    start = time.perf_counter()
    stats = sweep(cfg)
    print(f"{'size':>4} {'len':>3} {'sequences':>9} {'pairs':>8} {'equiv':>7} {'disagree':>8}")
    total = collections.Counter()
    for (size, length), row in sorted(stats.items()):
        total.update(row)
        print(f"{size:4d} {length:3d} {row['sequences']:9d} {row['pairs']:8d} {row['equivalent']:7d} {row['disagree']:8d}")
    print(f"total: {dict(total)} in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
