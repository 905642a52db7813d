"""Survey random Fischer covers: class frequencies and cross-check statistics.

For each cover the tuple-graph classification is compared with the
fiber-product decision, and the exact multiplicities with the sizes of the
nonempty tuple pieces.  Covers where the two readings differ are listed.

    python3 scripts/random_survey.py --count 2000 --seed 1
"""
import argparse
import random
import time
from collections import Counter

from soficflow.generate import random_cover
from soficflow.oracle import fiber_decision, multicard_by_fiber
from soficflow.presentation import render
from soficflow.tupleflow import analyze


def drop_to_single(g) -> bool:
    """The weaker AFT test: some edge falls from a larger tuple to one state."""
    return any(len(i) >= 2 and len(j) == 1 for i, j, _ in g.edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-states", type=int, default=6)
    ap.add_argument("--max-alphabet", type=int, default=4)
    ap.add_argument("--show", type=int, default=2, help="covers to print per kind of discrepancy")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally = Counter()
    sizes = Counter()
    shown = Counter()
    t0 = time.perf_counter()
    for n in range(args.count):
        p = random_cover(rng, args.max_states, args.max_alphabet)
        g, r = analyze(p)
        d = fiber_decision(p)
        kind = "near Markov" if r.is_near_markov else "PET" if r.is_pet else "AFT" if r.is_aft else "not AFT"
        tally[kind] += 1
        sizes[tuple(sorted(r.multicard))] += r.is_aft
        events = []
        if (r.is_aft, r.is_pet) != (d.is_aft, d.is_pet):
            events.append("oracle disagreement")
        if r.is_aft and r.multicard != multicard_by_fiber(p):
            events.append("multicard disagreement")
        if r.multicard != r.tuple_sizes:
            events.append("shadow piece (tuple sizes exceed multiplicities)")
        if not r.is_aft and not drop_to_single(g):
            events.append("not AFT without a drop to one state")
        for e in events:
            tally[e] += 1
            if shown[e] < args.show:
                shown[e] += 1
                print(f"# cover {n}: {e}")
                print(render(p))
    elapsed = time.perf_counter() - t0

    print(f"{args.count} covers, seed {args.seed}, {elapsed:.1f} s")
    for key in ["near Markov", "PET", "AFT", "not AFT"]:
        print(f"  {key:12s} {tally[key]}")
    print("exact multiplicity sets among AFT covers:")
    for key, c in sorted(sizes.items()):
        if c:
            print(f"  {{{', '.join(map(str, key))}}}: {c}")
    print("events:")
    for key in ["oracle disagreement", "multicard disagreement",
                "shadow piece (tuple sizes exceed multiplicities)", "not AFT without a drop to one state"]:
        print(f"  {key}: {tally[key]}")


if __name__ == "__main__":
    main()
