"""Certify realizations of random degree matrices and tally the verdicts.

Each D is realized at a random multiplier; the verdict is ramanujan_D on
the block partition. Indeterminate outcomes list the bracket that caused them.
"""
import argparse
import collections
import json
from dataclasses import dataclass

import numpy as np

from rlab.certify import UNKNOWN, ramanujan_D
from rlab.degmat import DegreeMatrix
from rlab.realize import realize


@dataclass
class Config:
    samples: int = 40
    classes: int = 2
    top: int = 3
    max_mult: int = 4
    seed: int = 0


def random_matrix(rng, t, top):
    while True:
        D = DegreeMatrix.of(rng.integers(0, top + 1, size=(t, t)).tolist())
        if D.validity.ok and D.array().sum() > 0:
            return D


def main(argv=None):
    cfg = Config()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(cfg).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=value)
    cfg = Config(**vars(p.parse_args(argv)))
    rng = np.random.default_rng(cfg.seed)
    tally = collections.Counter()
    for _ in range(cfg.samples):
        D = random_matrix(rng, cfg.classes, cfg.top)
        g, part = realize(D, int(rng.integers(1, cfg.max_mult + 1)))
        rep = ramanujan_D(g, part, D)
        tally[rep.verdict] += 1
        line = {"D": [list(r) for r in D.entries], "n": g.n, "verdict": rep.verdict,
                "k": rep.k, "compared": rep.compared, "bracket": list(rep.threshold)}
        if rep.verdict == UNKNOWN:
            line["k_range"] = list(rep.k_range)
        print(json.dumps(line))
    print(json.dumps(dict(tally)))


if __name__ == "__main__":
    main()
