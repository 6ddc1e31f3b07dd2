"""Stratify a few families and test the partition at random rational points.

Every sampled point must lie in exactly one stratum, and the b-function
of the fibre there must be the stratum's.

    python3 scripts/stratify_coverage.py [--points 20] [--seed 1]
"""

import argparse
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from bsfamily.bfunction import bernstein
from bsfamily.division import DivisionConfig
from bsfamily.parametric import specialize, strata_disjoint, stratify
from bsfamily.polyparse import parse_poly

FAMILIES = [
    ("x1^2 + y*x2^2 + x2^3", ["x1", "x2"], ["y"]),
    ("y1*x + y2*x^2 + x^3", ["x"], ["y1", "y2"]),
    ("x^2 + y1*x*z + y2*z^2", ["x", "z"], ["y1", "y2"]),
    ("(y1^2 - y2)*x + y1*x^2", ["x"], ["y1", "y2"]),
    ("y1*x^2 + y2*x^3", ["x"], ["y1", "y2"]),
]


@dataclass
class Settings:
    points: int = 20
    seed: int = 1
    order: str = "global"


def sample(rng, m):
    # small heights so that special loci get hit now and then
    return tuple(Fraction(rng.choice([0, 0, 1, -1, 2, 3, -4]), rng.choice([1, 1, 2])) for _ in range(m))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=Settings.points)
    ap.add_argument("--seed", type=int, default=Settings.seed)
    ap.add_argument("--order", choices=("local", "global"), default=Settings.order)
    a = ap.parse_args()
    cfg = Settings(a.points, a.seed, a.order)
    dc = DivisionConfig(order=cfg.order)
    rng = random.Random(cfg.seed)
    for text, xs, ys in FAMILIES:
        f = parse_poly(text, xs + ys)
        t0 = time.perf_counter()
        strata = stratify(f, len(xs), dc)
        dt = time.perf_counter() - t0
        print(f"{text}   ({len(strata)} strata, {dt:.2f} s, disjoint={strata_disjoint(strata)})")
        for st in strata:
            where = " u ".join(c.format(ys) for c in st.carrier)
            print(f"    {where}: {st.b.factored() if st.b is not None else 'f = 0'}")
        bad = 0
        for _ in range(cfg.points):
            p = sample(rng, len(ys))
            owners = [st for st in strata if st.contains(p)]
            fp = specialize(f, len(xs), p)
            if len(owners) != 1:
                bad += 1
                print(f"    point {p}: in {len(owners)} strata")
                continue
            b = None if fp.is_zero() else bernstein(fp, config=dc)[0]
            if b != owners[0].b:
                bad += 1
                print(f"    point {p}: fibre has {b}, stratum says {owners[0].b}")
        print(f"    {cfg.points - bad}/{cfg.points} sampled points consistent", flush=True)


if __name__ == "__main__":
    main()
