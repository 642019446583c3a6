"""Run every decision route on the semigroup corpus and tabulate agreement.

Routes: the ideal criterion, weak confluence, unique normal forms, bounded
collapse search on S^U words, bounded amalgam closure.

    python3 scripts/corpus_equivalence.py --seed 20240501 --target 240
"""
import argparse
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from partglob.amalgams import amalgam_from_partial_action, bounded_embeddability_check
from partglob.generators import semigroup_corpus
from partglob.semigroups import check_criterion, check_weak_confluence, find_collapse_witness, unique_normal_forms


@dataclass
class Config:
    seed: int = 20240501
    target: int = 240
    nf_len: int = 5
    search_len: int = 4


def run(cfg: Config) -> None:
    t0 = time.perf_counter()
    corpus = semigroup_corpus(np.random.default_rng(cfg.seed), target=cfg.target)
    print(f"corpus: {len(corpus)} instances in {time.perf_counter() - t0:.1f}s")
    by_source: Counter = Counter()
    disagreements = []
    for inst in corpus:
        ipa = inst.ipa
        verdicts = {
            "criterion": check_criterion(ipa).holds,
            "confluence": check_weak_confluence(ipa, cross_check=False).confluent,
            "normal forms": unique_normal_forms(ipa, cfg.nf_len).unique,
            "no collapse": find_collapse_witness(ipa, cfg.search_len) is None,
            "no amalgam violation": not bounded_embeddability_check(amalgam_from_partial_action(ipa), cfg.search_len).found,
        }
        by_source[(inst.source, verdicts["criterion"])] += 1
        if len(set(verdicts.values())) != 1:
            disagreements.append((inst.source, verdicts))
    print(f"{'source':<28} {'holds':>6} {'fails':>6}")
    for src in sorted({s for s, _ in by_source}):
        print(f"{src:<28} {by_source[(src, True)]:>6} {by_source[(src, False)]:>6}")
    print(f"disagreements: {len(disagreements)}")
    for src, v in disagreements[:10]:
        print(f"  {src}: {v}")
    print(f"total {time.perf_counter() - t0:.1f}s")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
