"""Table of rho(X_{d,g}) and the normalised excess h(d, g) over a (d, g) grid."""
import argparse
import csv
import math
import sys
from dataclasses import dataclass

from rlab.bounds import paschke


@dataclass
class Config:
    d_min: int = 3
    d_max: int = 8
    g_min: int = 3
    g_max: int = 20


def main(argv=None):
    cfg = Config()
    p = argparse.ArgumentParser(description=__doc__)
    for name, value in vars(cfg).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=value)
    cfg = Config(**vars(p.parse_args(argv)))
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["d", "g", "s_star", "rho", "excess", "h", "h_limit"])
    for d in range(cfg.d_min, cfg.d_max + 1):
        for g in range(cfg.g_min, cfg.g_max + 1):
            res = paschke(d, g)
            h = "" if math.isnan(res.h) else f"{res.h:.9f}"
            out.writerow([d, g, f"{res.s_star:.9f}", f"{res.rho:.15f}",
                          f"{res.rho - 2 * math.sqrt(d - 1):.3e}", h, f"{(d - 2) / d:.9f}"])


if __name__ == "__main__":
    main()
