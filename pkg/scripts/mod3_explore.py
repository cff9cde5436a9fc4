"""Where the cyclic ordering of p_k(a, m, n) by residue a first breaks, for several k and m."""

import argparse
from dataclasses import dataclass, field

from powerparity.counting import count_by_parts_mod, cyclic_pattern_report
from powerparity.partsets import kth_powers


@dataclass
class Config:
    ks: list = field(default_factory=lambda: [1, 2, 3])
    ms: list = field(default_factory=lambda: [2, 3, 4])
    N: int = 2000


def run(cfg: Config):
    out = []
    for k in cfg.ks:
        for m in cfg.ms:
            rep = cyclic_pattern_report(count_by_parts_mod(kth_powers(k), m, cfg.N))
            out.append((k, m, rep["segment_start"], rep["first_violation"], rep["violations_total"]))
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ks", type=lambda s: [int(x) for x in s.split(",")], default=[1, 2, 3])
    p.add_argument("--ms", type=lambda s: [int(x) for x in s.split(",")], default=[2, 3, 4])
    p.add_argument("--N", type=int, default=2000)
    args = p.parse_args()
    print(f"{'k':>2} {'m':>2} {'holds from':>10} {'first break':>11} {'violations':>10}")
    for k, m, start, brk, total in run(Config(args.ks, args.ms, args.N)):
        print(f"{k:>2} {m:>2} {str(start):>10} {str(brk):>11} {total:>10}")


if __name__ == "__main__":
    main()
