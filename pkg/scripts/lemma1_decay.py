"""Residual of log G_k(e^{-y}) against B y^{-1/k} - ((k-1)/2) log 2 as y shrinks."""

import argparse
from dataclasses import dataclass, field

from powerparity.asymptotics import lemma1_residuals


@dataclass
class Config:
    ks: list = field(default_factory=lambda: [2, 3, 4])
    ys: list = field(default_factory=lambda: [0.4, 0.2, 0.1, 0.05, 0.02])


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ks", type=lambda s: [int(x) for x in s.split(",")], default=[2, 3, 4])
    p.add_argument("--ys", type=lambda s: [float(x) for x in s.split(",")], default=[0.4, 0.2, 0.1, 0.05, 0.02])
    args = p.parse_args()
    cfg = Config(args.ks, args.ys)
    for k in cfg.ks:
        rep = lemma1_residuals(k, cfg.ys)
        cells = "  ".join(f"y={y:g}: {r:.3e}" for y, r in zip(rep.ys, rep.residuals))
        print(f"k={k}  {cells}  slope={rep.slope:.2f}")


if __name__ == "__main__":
    main()
