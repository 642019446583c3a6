"""Globalizability of random partial actions on partial algebras.

Tabulates the globalizability verdict per signature, checks it against functionality of
the lifted graph system, and counts how often globalizable actions have
domains that are not subalgebras.
"""
import argparse
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from partglob.algebras import check_globalizability_32
from partglob.generators import random_algebra_action
from partglob.relational import graph_system, is_functional_system, lift_relational_system


@dataclass
class Config:
    seed: int = 0
    samples: int = 2000
    max_size: int = 5
    max_group: int = 4


def run(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    stats = defaultdict(lambda: [0, 0, 0])  # samples, globalizable, globalizable with an unclosed domain
    mismatches = 0
    for _ in range(cfg.samples):
        apa = random_algebra_action(rng, cfg.max_size, cfg.max_group)
        ok = check_globalizability_32(apa, cross_check=False).globalizable
        functional = is_functional_system(lift_relational_system(apa.pa, graph_system(apa.alg)).system)[0]
        mismatches += ok != functional
        closed = all(apa.alg.subalgebra_violation(d) is None for d in apa.pa.domains())
        row = stats[apa.alg.signature]
        row[0] += 1
        row[1] += ok
        row[2] += ok and not closed
    print(f"{'signature':<10} {'samples':>8} {'globalizable':>13} {'unclosed':>9}")
    for sig in sorted(stats):
        n, g, u = stats[sig]
        print(f"{str(sig):<10} {n:>8} {g:>13} {u:>9}")
    print(f"verdict/functionality mismatches: {mismatches}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
