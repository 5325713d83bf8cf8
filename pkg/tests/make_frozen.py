"""Regenerate tests/data/frozen.json from the reference implementations in
oracles.py. Run from the repository root: ``python3 tests/make_frozen.py``."""

import json
import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import oracles  # noqa: E402


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def main() -> None:
    c12 = oracles.pair_colors(12)
    c8 = oracles.pair_colors(8)
    decomposable = {}
    for k in range(2, 6):
        for U in combinations(range(8), k):
            found = oracles.decompositions_by_subsets(U, c8)
            if found:
                decomposable[",".join(map(str, U))] = [[sorted(a), sorted(b)] for a, b in found]
    slices = {}
    for n in range(1, 4):
        verts, edges = oracles.slice_edges(n)
        slices[str(n)] = {"vertices": len(verts), "edges": len(edges)}
    _, e2 = oracles.slice_edges(2)
    frozen = {
        "dyadic_first": [[fmt(a), fmt(b)] for a, b in map(oracles.interval_by_index, range(20))],
        "pair_colors_12": [[b, a, j] for (b, a), j in sorted(c12.items())],
        "decomposable_unions_8": decomposable,
        "levels": {fmt(x): oracles.level_by_search(x) for x in
                   [Fraction(1), Fraction(1, 3), Fraction(7, 2), Fraction(5, 7), Fraction(100), Fraction(1, 8), Fraction(31, 24)]},
        "level_sizes": {str(n): len(oracles.A(n)) for n in range(1, 5)},
        "slices": slices,
        "slice_2_edges": sorted([fmt(x), fmt(y)] for x, y in e2),
        "ramsey": {
            str(m): sum(oracles.has_mono_triangle(m, col) for col in oracles.all_two_colorings(m))
            for m in (3, 4, 5)
        },
    }
    out = Path(__file__).parent / "data" / "frozen.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(frozen, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
