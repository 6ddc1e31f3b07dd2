"""Local versus global order: same b-function, very different cost.

Each germ is run under both orders in a child process with a wall-clock
limit, since the local order can stall on germs that are not weighted
homogeneous.

    python3 scripts/order_comparison.py [--limit 60]
"""

import argparse
import multiprocessing as mp
import time
from dataclasses import dataclass

from bsfamily.bfunction import bernstein
from bsfamily.division import DivisionConfig
from bsfamily.polyparse import parse_poly

GERMS = [
    ("x^2 + y^3", "xy"),
    ("x^4 + y^4", "xy"),
    ("x^2 + y^3 + x*y^3", "xy"),
    ("x*(x - 1)^2", "x"),
    ("(x - 1)*y^2", "xy"),
    ("x^2*y + y^4", "xy"),
    ("y + x^2 + 2*x*y^2", "xy"),
    ("x^3 + y^3 + z^3", "xyz"),
]


@dataclass
class Settings:
    limit: float = 60.0


def _work(text, names, order, q):
    t0 = time.perf_counter()
    b = bernstein(parse_poly(text, list(names)), config=DivisionConfig(order=order))[0]
    q.put((b.factored(), time.perf_counter() - t0))


def timed_run(text, names, order, limit):
    q = mp.Queue()
    p = mp.Process(target=_work, args=(text, names, order, q))
    p.start()
    p.join(limit)
    if p.is_alive():
        p.terminate()
        p.join()
        return None, limit
    return q.get() if not q.empty() else ("error", 0.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=float, default=Settings.limit, help="seconds per run")
    cfg = Settings(ap.parse_args().limit)
    print(f"{'germ':22} {'local':>9} {'global':>9}  b")
    for text, names in GERMS:
        bl, tl = timed_run(text, names, "local", cfg.limit)
        bg, tg = timed_run(text, names, "global", cfg.limit)
        if bl is None:
            agree = "local timed out"
        else:
            agree = "agree" if bl == bg else f"DIFFER local={bl}"
        fmt = lambda b, t: f"{t:8.2f}s" if b is not None else f">{cfg.limit:.0f}s".rjust(9)
        print(f"{text:22} {fmt(bl, tl)} {fmt(bg, tg)}  {bg}  ({agree})", flush=True)


if __name__ == "__main__":
    main()
