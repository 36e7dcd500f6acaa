#!/usr/bin/env python3
"""Regenerate the tiling-quotient fixtures shipped in hypsc/catalog/.

Each fixture pins down a finite quotient of an {r,s} rotation group by a
short list of extra relator words. This script rediscovers the quotients
from scratch (permutation pair searches and abelian descent), extracts a
pruned presentation for each, verifies the roundtrip through coset
enumeration, and rewrites the JSON files. Runs in a few minutes; only
needed when the catalog changes.
"""

import json
import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hypsc import derive_code
from hypsc.group import CosetTable, Presentation, todd_coxeter, tiling_from_quotient
from hypsc.subgroups import cayley_relators, descend, pair_search, prune_relators

CATALOG_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "hypsc" / "catalog"


def descent_bfs(r, s, max_index, primes=(2, 3, 5)):
    trivial = CosetTable(action=np.zeros((1, 4), dtype=np.int64))
    frontier = [trivial]
    seen = {trivial.canonical_key()}
    tables = [trivial]
    while frontier:
        nxt = []
        for tbl in frontier:
            for p in primes:
                if tbl.n * p > max_index:
                    continue
                for new in descend(tbl, r, s, p, max_index=max_index):
                    key = new.canonical_key()
                    if key not in seen:
                        seen.add(key)
                        nxt.append(new)
                        tables.append(new)
        frontier = nxt
    return tables


def surface_quotients(tables, r, s):
    out = []
    for tbl in tables:
        try:
            surf = tiling_from_quotient(tbl, r, s, name="candidate")
        except (Exception,):
            continue
        out.append((tbl, surf))
    return out


def freeze(name, r, s, table):
    t0 = time.time()
    words = prune_relators(r, s, cayley_relators(table), table.n)
    check = todd_coxeter(Presentation.triangle_rotation(r, s, words))
    assert check.n == table.n
    assert check.canonical_key() == table.canonical_key(), name
    surf = tiling_from_quotient(check, r, s, name=name)
    code = derive_code(surf)
    payload = {"name": name, "r": r, "s": s, "relator_words": words}
    path = CATALOG_DIR / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(
        f"{name}: order {table.n}, [[{code.n}, {code.k}]], "
        f"{len(words)} relators (longest {max(map(len, words))}), "
        f"{time.time() - t0:.1f}s -> {path.name}"
    )


def unique_surface(tables, r, s, order):
    hits = [t for t, _ in surface_quotients(tables, r, s) if t.n == order]
    assert len(hits) == 1, f"expected one order-{order} surface quotient, got {len(hits)}"
    return hits[0]


def main():
    CATALOG_DIR.mkdir(exist_ok=True)

    freeze("hyp45-60", 4, 5, unique_surface(pair_search(4, 5, 5, 120), 4, 5, 120))
    freeze("hyp45-160", 4, 5, unique_surface(descent_bfs(4, 5, 320), 4, 5, 320))
    freeze(
        "hyp45-360",
        4,
        5,
        unique_surface(pair_search(4, 5, 8, 720, exact_order=720), 4, 5, 720),
    )
    freeze(
        "klein-quartic",
        3,
        7,
        unique_surface(pair_search(3, 7, 8, 168, exact_order=168), 3, 7, 168),
    )
    freeze(
        "small-stellated-dodecahedron",
        5,
        5,
        unique_surface(pair_search(5, 5, 5, 60), 5, 5, 60),
    )
    freeze("toric44-l2", 4, 4, unique_surface(descent_bfs(4, 4, 16), 4, 4, 16))


if __name__ == "__main__":
    main()
