"""Print the per-sector quotient dimensions of the truncated cabled unknot module."""

import argparse
import json

from floer_lasagna.cabled import stabilization_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--truncations", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--alpha-max", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--bridge-zero-level", action="store_true")
    args = ap.parse_args()
    alphas = list(range(-args.alpha_max, args.alpha_max + 1))
    rep = stabilization_report(args.truncations, alphas, args.bridge_zero_level, jobs=args.jobs)
    for a in rep.alphas:
        pr = rep.profiles[a]
        print(f"alpha={a:+d} top={pr['top_grading']} (previous {pr['top_grading_previous_truncation']})"
              f" bounded_above={pr['bounded_above']} support={pr['support']}")
    print(json.dumps({"matches": rep.matches_expected_profile()}))


if __name__ == "__main__":
    main()
