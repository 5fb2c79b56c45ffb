"""Search small grids for a link with prescribed component count and Euler characteristic.

Used to find the corpus entries: a figure-eight presentation and the three-component
link whose Euler characteristic matches the thin formula.
"""

import argparse
import random

from floer_lasagna.grid import GridDiagram, GridError, euler_characteristic, expected_euler, trace_components
from floer_lasagna.laurent import LaurentMV
from floer_lasagna.obstruction import l2_alexander

TARGETS = {
    "figure8": (1, LaurentMV(1, {(2,): -1, (0,): 3, (-2,): -1})),
    "l2": (3, l2_alexander()),
}


def candidates(n, rng, tries):
    for _ in range(tries):
        o, x = list(range(n)), list(range(n))
        rng.shuffle(o)
        rng.shuffle(x)
        yield tuple(o), tuple(x)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("target", choices=sorted(TARGETS))
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--tries", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    comps, delta = TARGETS[args.target]
    rng = random.Random(args.seed)
    for o, x in candidates(args.n, rng, args.tries):
        if any(a == b for a, b in zip(o, x)):
            continue
        labels = trace_components(o, x)
        if len(set(labels)) != comps:
            continue
        try:
            g = GridDiagram(args.n, o, x, labels)
        except GridError:
            continue
        if euler_characteristic(g).equal_up_to_sign(expected_euler(g, delta)):
            print(g.to_text())
            return
    print("no grid found")


if __name__ == "__main__":
    main()
