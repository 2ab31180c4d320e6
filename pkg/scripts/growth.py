"""Series coefficients against the predicted pole structure.

Prints a_D together with a_D / (q^(D/c) D^(m-1)) for the dominant pole
(1/c, multiplicity m) reported by predicted_growth.
"""
import argparse
from dataclasses import dataclass

from kummer_census.abgroup import GroupSpec
from kummer_census.ffield import make_field
from kummer_census.genfun import predicted_growth, series_F


@dataclass
class Config:
    q: int = 5
    group: tuple = (4,)
    dmax: int = 24


def main(cfg: Config):
    G = GroupSpec(cfg.group)
    ctx = make_field(cfg.q)
    poles = predicted_growth(G)
    inv_c, m = max(poles)
    print(f"# G={G} q={cfg.q} poles={[(str(a), b) for a, b in poles]}")
    vals = series_F(G, ctx, dmax=cfg.dmax).integers()
    print("D\ta_D\tnormalized")
    for D, a in enumerate(vals):
        if a == 0 or D == 0:
            continue
        norm = a / (float(cfg.q) ** (D * float(inv_c)) * D ** m)
        print(f"{D}\t{a}\t{norm:.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--group", default="4")
    ap.add_argument("--dmax", type=int, default=24)
    a = ap.parse_args()
    main(Config(a.q, tuple(int(x) for x in a.group.split(",")), a.dmax))
