"""Total-variation distance between the point-count histogram and the
sum-of-i.i.d. model, as the genus grows."""
import argparse
import time
from dataclasses import dataclass

from kummer_census.abgroup import GroupSpec
from kummer_census.asymptotics import histogram_mean, sum_law, tv_distance
from kummer_census.census import point_count_histogram
from kummer_census.ffield import make_field


@dataclass
class Config:
    q: int = 3
    group: tuple = (2,)
    genera: tuple = (1, 2, 3, 4, 5)
    workers: int = 1


def main(cfg: Config):
    G = GroupSpec(cfg.group)
    ctx = make_field(cfg.q)
    Q, n = cfg.group[0], len(cfg.group)
    law = sum_law(Q, n, cfg.q)
    print("g\tcurves\ttv\tmean\tseconds")
    for g in cfg.genera:
        t0 = time.perf_counter()
        h = point_count_histogram(G, ctx, g, workers=cfg.workers)
        dt = time.perf_counter() - t0
        print(f"{g}\t{sum(h.values())}\t{float(tv_distance(h, law)):.6f}\t"
              f"{float(histogram_mean(h)):.6f}\t{dt:.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--group", default="2")
    ap.add_argument("--gmax", type=int, default=5)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    main(Config(a.q, tuple(int(x) for x in a.group.split(",")), tuple(range(1, a.gmax + 1)), a.workers))
