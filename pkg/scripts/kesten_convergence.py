"""Lower end of the rho(T_D) bracket against radius, with the fitted convergence exponent.

Writes CSV rows (matrix, r, lower, gap) to stdout; the gap is upper - lower.
"""
import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

from rlab.bounds import convergence_exponent, rho_universal_cover


@dataclass
class Config:
    matrices: list = field(default_factory=lambda: [[[3]], [[4]], [[0, 3], [2, 0]],
                                                    [[1, 2], [1, 1]]])
    r_max: int = 4096


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--matrix", action="append", help="inline degree matrix, repeatable")
    p.add_argument("--rmax", type=int, default=Config.r_max)
    a = p.parse_args(argv)
    cfg = Config(r_max=a.rmax)
    if a.matrix:
        cfg.matrices = [json.loads(m) for m in a.matrix]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["matrix", "r", "lower", "gap"])
    for D in cfg.matrices:
        br = rho_universal_cover(D, tol=0.0, r_max=cfg.r_max)
        for r, lo in br.history:
            out.writerow([json.dumps(D), r, f"{lo:.15g}", f"{br.upper - lo:.3e}"])
        print(f"# {json.dumps(D)}: upper={br.upper:.15g} ({br.upper_source}) "
              f"exponent={convergence_exponent(D):.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
