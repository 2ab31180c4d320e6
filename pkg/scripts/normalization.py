"""Ratio of exact curve counts to the leading main term.

For (Z/Q)^n the count |H_{G,g}| should approach C * D^(Q^n - 2) * q^D.  For
Q^n = 2 the ratio is exact and constant; for larger groups it drifts slowly.
"""
import argparse
import math
from dataclasses import dataclass

from kummer_census.abgroup import GroupSpec
from kummer_census.asymptotics import conductor, leading_coeff_full
from kummer_census.ffield import make_field
from kummer_census.genfun import count_H_star_series


@dataclass
class Config:
    Q: int = 2
    n: int = 2
    q: int = 5
    genera: tuple = tuple(range(1, 12))


def main(cfg: Config):
    G = GroupSpec((cfg.Q,) * cfg.n)
    ctx = make_field(cfg.q)
    N = G.order
    C = leading_coeff_full(cfg.Q, cfg.n, cfg.q)
    print(f"# G=(Z/{cfg.Q})^{cfg.n} q={cfg.q} C={C.rational}*L_{C.L_index} = {C.value():.10g}")
    print("g\tD\tcount\tratio")
    for g in cfg.genera:
        D = conductor(cfg.Q, cfg.n, g)
        if D.denominator != 1:
            continue
        D = int(D)
        count = N * count_H_star_series(G, ctx, g)
        ratio = count / (C.value() * D ** (N - 2) * float(cfg.q) ** D)
        print(f"{g}\t{D}\t{count}\t{ratio:.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Q", type=int, default=2)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--gmax", type=int, default=11)
    a = ap.parse_args()
    main(Config(a.Q, a.n, a.q, tuple(range(1, a.gmax + 1))))
