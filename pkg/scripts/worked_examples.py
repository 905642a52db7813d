"""Print the full analysis of the worked examples shipped in data/.

    python3 scripts/worked_examples.py [--oracle]
"""
import argparse
from pathlib import Path

from soficflow.cli import analysis_report
from soficflow.fischer import fischer_cover
from soficflow.oracle import periodic_preimage_census
from soficflow.presentation import parse

DATA = Path(__file__).resolve().parent.parent / "data"
EXAMPLES = ["B.shift", "C.shift", "even.shift", "shadow.shift", "shadow_pair.shift",
            "merge_drop.shift", "late_merge.shift"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--oracle", action="store_true", help="run the brute-force cross checks too")
    ap.add_argument("--period", type=int, default=2, help="census period bound")
    args = ap.parse_args()

    for name in EXAMPLES:
        p = parse((DATA / name).read_text())
        cover = fischer_cover(p)
        _, lines = analysis_report(p, cover, args.oracle)
        print(f"=== {name}")
        print("\n".join(lines))
        multi = [r for r in periodic_preimage_census(cover, args.period) if r.count > 1]
        if multi:
            print(f"periodic points with several preimages (period <= {args.period}):")
            for row in multi:
                print("  " + row.render())
        print()


if __name__ == "__main__":
    main()
