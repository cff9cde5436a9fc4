"""Largest normalized Gauss sum |S_k(a,b)| / b^(1-1/k) per k, with its location."""

import argparse
import os
from dataclasses import dataclass

from powerparity.gauss import STECHKIN, stechkin_scan


@dataclass
class Config:
    kmax: int = 6
    bmax: int = 300
    threads: int = os.cpu_count() or 1


def run(cfg: Config):
    rows = stechkin_scan(cfg.kmax, cfg.bmax, threads=cfg.threads)
    best = {}
    for k, a, b, _, ratio in rows:
        if k not in best or ratio > best[k][2]:
            best[k] = (a, b, ratio)
    return best


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--bmax", type=int, default=300)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = p.parse_args()
    best = run(Config(args.kmax, args.bmax, args.threads))
    print(f"{'k':>3} {'a':>5} {'b':>5} {'ratio':>10}   (constant {STECHKIN})")
    for k, (a, b, r) in sorted(best.items()):
        print(f"{k:>3} {a:>5} {b:>5} {r:>10.6f}")


if __name__ == "__main__":
    main()
