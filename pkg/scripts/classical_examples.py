"""b-functions of textbook germs against their closed forms, with timings and certificates.

    python3 scripts/classical_examples.py [--order global] [--json out.json]
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from bsfamily.bfunction import BFunction, bernstein
from bsfamily.division import DivisionConfig
from bsfamily.parametric import generic_bernstein, weak_certificate
from bsfamily.polyparse import parse_poly
from bsfamily.verify import certificate_check


@dataclass
class RunConfig:
    order: str = "local"
    certificates: bool = True
    json_path: str | None = None


def brieskorn(a, b):
    roots = {Fraction(-1): 1}
    for i in range(1, a):
        for j in range(1, b):
            r = -(Fraction(i, a) + Fraction(j, b))
            roots[r] = roots.get(r, 0) + 1
    return BFunction(tuple(roots.items()))


def cases():
    for a in range(1, 6):
        yield f"x^{a}", ["x"], BFunction(tuple((Fraction(-j, a), 1) for j in range(1, a + 1)))
    yield "x^2 + y^2", ["x", "y"], BFunction(((-1, 2),))
    yield "x^2 + y^2 + z^2", ["x", "y", "z"], BFunction(((-1, 1), (Fraction(-3, 2), 1)))
    for a, b in [(2, 3), (2, 5), (3, 4), (3, 5)]:
        yield f"x^{a} + y^{b}", ["x", "y"], brieskorn(a, b)
    yield "x*y", ["x", "y"], BFunction(((-1, 2),))
    yield "x*y*z", ["x", "y", "z"], BFunction(((-1, 3),))


@dataclass
class Row:
    f: str
    b: str
    expected: str
    match: bool
    seconds: float
    certificate: bool | None


def run(cfg: RunConfig) -> list:
    dc = DivisionConfig(order=cfg.order)
    rows = []
    for text, xs, expected in cases():
        f = parse_poly(text, xs)
        t0 = time.perf_counter()
        b = bernstein(f, config=dc)[0]
        dt = time.perf_counter() - t0
        ok = None
        if cfg.certificates:
            res = generic_bernstein(f, len(xs), None, dc)
            c = weak_certificate(f, len(xs), None, res, dc)
            ok = certificate_check(c.f, c.n, c.Q, c.b, c.h, c.P0, c.P1).ok
        rows.append(Row(text, b.factored(), expected.factored(), b == expected, round(dt, 3), ok))
        print(f"{text:18} {b.factored():44} {'ok' if b == expected else 'MISMATCH':8} "
              f"{dt:7.2f} s  cert={ok}", flush=True)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", choices=("local", "global"), default="local")
    ap.add_argument("--no-certificates", action="store_true")
    ap.add_argument("--json", dest="json_path")
    a = ap.parse_args()
    cfg = RunConfig(a.order, not a.no_certificates, a.json_path)
    rows = run(cfg)
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": [asdict(r) for r in rows]}, fh, indent=2)


if __name__ == "__main__":
    main()
