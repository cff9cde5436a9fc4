"""Relative residual of the modular transformation against direct summation,
for every reduced a/b up to a modulus bound, under both readings of d_h and b1."""

import argparse
import math
from dataclasses import dataclass

from powerparity.wright import DivergentProductError, wright_check


@dataclass
class Config:
    k: int = 3
    bmax: int = 5
    tau: float = 0.2
    tol: float = 1e-10


def run(cfg: Config):
    rows = []
    for b in range(1, cfg.bmax + 1):
        for a in range(b):
            if math.gcd(a, b) != 1:
                continue
            try:
                power = wright_check(cfg.k, a, b, cfg.tau, cfg.tol).residual
                square = wright_check(cfg.k, a, b, cfg.tau, cfg.tol, root_power=2).residual
            except DivergentProductError as exc:
                rows.append((a, b, None, None, str(exc)))
                continue
            rows.append((a, b, power, square, ""))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--bmax", type=int, default=5)
    p.add_argument("--tau", type=float, default=0.2)
    p.add_argument("--tol", type=float, default=1e-10)
    args = p.parse_args()
    print(f"{'a/b':>6} {'h^k reading':>12} {'h^2 reading':>12}")
    for a, b, power, square, note in run(Config(args.k, args.bmax, args.tau, args.tol)):
        if power is None:
            print(f"{a:>3}/{b:<2} skipped: {note}")
        else:
            print(f"{a:>3}/{b:<2} {power:>12.3e} {square:>12.3e}")


if __name__ == "__main__":
    main()
