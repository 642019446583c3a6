"""How long must words get before a collapse shows up?

For every corpus instance failing the ideal criterion, find the least word-length bound at
which the S^U word search and the amalgam closure first report a merge.
"""
import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from partglob.amalgams import amalgam_from_partial_action, bounded_embeddability_check
from partglob.generators import semigroup_corpus
from partglob.semigroups import check_criterion, find_collapse_witness


@dataclass
class Config:
    seed: int = 20240501
    target: int = 240
    max_len: int = 4


def least_bound(found_at, max_len: int) -> int | None:
    for n in range(1, max_len + 1):
        if found_at(n):
            return n
    return None


def run(cfg: Config) -> None:
    corpus = semigroup_corpus(np.random.default_rng(cfg.seed), target=cfg.target)
    words, amalg = Counter(), Counter()
    chain_lengths = Counter()
    for inst in corpus:
        ipa = inst.ipa
        if check_criterion(ipa).holds:
            continue
        am = amalgam_from_partial_action(ipa)
        words[least_bound(lambda n: find_collapse_witness(ipa, n) is not None, cfg.max_len)] += 1
        amalg[least_bound(lambda n: bounded_embeddability_check(am, n).found, cfg.max_len)] += 1
        w = find_collapse_witness(ipa, cfg.max_len)
        if w is not None:
            chain_lengths[len(w.trace.steps)] += 1
    print("least bound   S^U words   amalgam")
    for n in sorted(set(words) | set(amalg), key=lambda v: (v is None, v)):
        print(f"{str(n):>11}   {words[n]:>9}   {amalg[n]:>7}")
    print("collapse chain lengths:", dict(sorted(chain_lengths.items())))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
