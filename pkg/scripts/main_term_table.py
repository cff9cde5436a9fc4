"""Exact a_k(n) against the saddle-point main term on a grid of n."""

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from powerparity.asymptotics import int_log, main_term
from powerparity.series import expand_Gk


@dataclass
class Config:
    k: int = 2
    n_max: int = 100_000
    points: int = 10


def run(cfg: Config):
    a = expand_Gk(cfg.k, cfg.n_max).coeffs
    step = max(cfg.n_max // cfg.points, 1)
    rows = []
    for n in range(step, cfg.n_max + 1, step):
        log_main, _ = main_term(cfg.k, n)
        ratio = math.exp(int_log(a[n]) - log_main) if a[n] > 0 else float("nan")
        rows.append((n, int_log(a[n]) if a[n] > 0 else float("nan"), log_main, ratio))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n-max", type=int, default=100_000)
    p.add_argument("--points", type=int, default=10)
    args = p.parse_args()
    cfg = Config(args.k, args.n_max, args.points)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "log_a", "log_main", "ratio"])
    w.writerows(run(cfg))


if __name__ == "__main__":
    main()
