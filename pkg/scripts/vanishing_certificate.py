"""Build the pants-map vanishing certificate from the thin formula and the grid, then kill the cabled module."""

import json
import sys

from floer_lasagna.grid import builtin_grid, extract_hfl
from floer_lasagna.obstruction import (
    l2_alexander,
    pants_vanishing_certificate,
    replay,
    theorem13_vanishing,
    thin_link_homology,
)


def main(max_n: int = 6):
    thin = pants_vanishing_certificate(thin_link_homology(l2_alexander(), 3), "thin")
    grid = pants_vanishing_certificate(extract_hfl(builtin_grid("l2")), "grid")
    res = theorem13_vanishing(thin, range(1, max_n + 1))
    print(json.dumps({
        "thin_target": thin.target.key(),
        "grid_target": grid.target.key(),
        "zero": res.is_zero,
        "trace_replays": replay(res.trace),
    }, indent=2))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
