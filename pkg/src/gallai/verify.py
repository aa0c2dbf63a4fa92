"""Certificate checkers for rainbow-triangle-free colorings.

Everything here is a pure function of its inputs: the rainbow-freeness test,
class-size extraction, the prefix-sum necessary condition on distributions,
top-l cover totals, and extraction of a block decomposition with at most two
cross colors.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import (
    Coloring,
    Distribution,
    GallaiPartition,
    InternalScheduleError,
    NotFound,
    NotGallai,
    PreconditionViolated,
    StarPartition,
    canonicalize,
)


def _color_matrix(c: Coloring) -> np.ndarray:
    """Symmetric n x n matrix of edge colors (diagonal 0)."""
    n = c.n
    mat = np.zeros((n, n), dtype=np.int32)
    arr = np.asarray(c.colex_colors(), dtype=np.int32)
    pos = 0
    for v in range(1, n):
        row = arr[pos : pos + v]
        mat[v, :v] = row
        mat[:v, v] = row
        pos += v
    return mat


def rainbow_witness(c: Coloring) -> Optional[tuple[int, int, int]]:
    """Return a triangle with three pairwise-distinct edge colors, or None.

    Scans all triangles; vectorized row-by-row so that large instances stay
    cheap while the result is still the plain exhaustive check.
    """
    n = c.n
    if n < 3 or c.k < 3:
        return None
    mat = _color_matrix(c)
    for u in range(n - 2):
        a = mat[u, u + 1 :]
        sub = mat[u + 1 :, u + 1 :]
        bad = (a[:, None] != a[None, :]) & (a[:, None] != sub) & (a[None, :] != sub)
        if n - u - 1 >= 2:
            iu = np.triu_indices(n - u - 1, k=1)
            hits = np.nonzero(bad[iu])[0]
            if hits.size:
                h = hits[0]
                v = int(iu[0][h]) + u + 1
                w = int(iu[1][h]) + u + 1
                return (u, v, w)
    return None


def is_gallai(c: Coloring) -> bool:
    """True iff no triangle of the coloring uses three distinct colors."""
    return rainbow_witness(c) is None


def class_sizes(c: Coloring) -> Distribution:
    """Canonical distribution of the per-color edge counts."""
    return canonicalize(c.counts, c.n)


def check_necessary(d: Distribution) -> tuple[bool, Optional[int]]:
    """Prefix-sum necessary condition for realizability.

    For every l in 1..k the l largest classes together must have at least
    (n-1) + (n-2) + ... + (n-l) edges.  Returns (True, None) if every prefix
    passes, else (False, smallest failing l).
    """
    prefix = 0
    bound = 0
    for ell, size in enumerate(d.sizes, start=1):
        prefix += size
        bound += d.n - ell
        if prefix < bound:
            return False, ell
    return True, None


def top_l_cover(
    c: Coloring, ell: int, *, check: bool = True
) -> tuple[tuple[int, ...], int]:
    """The l largest color classes and their total edge count.

    Ties in class size are broken toward the smaller color id.  With
    ``check`` enabled, raises NotGallai when the input has a rainbow
    triangle (the cover guarantee only holds for rainbow-free colorings).
    """
    if not (1 <= ell <= c.k):
        raise PreconditionViolated(f"need 1 <= l <= k={c.k}, got {ell}")
    if check:
        w = rainbow_witness(c)
        if w is not None:
            raise NotGallai(w)
    ranked = sorted(range(1, c.k + 1), key=lambda col: (-c.counts[col - 1], col))
    chosen = tuple(ranked[:ell])
    return chosen, sum(c.counts[col - 1] for col in chosen)


def is_special_coloring(c: Coloring) -> bool:
    """True iff every vertex i >= 1 has all its down-edges in one color."""
    arr = c.colex_colors()
    pos = 0
    for v in range(1, c.n):
        row = arr[pos : pos + v]
        if any(col != row[0] for col in row):
            return False
        pos += v
    return True


def star_partition_of(c: Coloring) -> Optional[StarPartition]:
    """Recover the star partition of a special coloring, or None."""
    if not is_special_coloring(c):
        return None
    groups: dict[int, list[int]] = {}
    arr = c.colex_colors()
    pos = 0
    for v in range(1, c.n):
        groups.setdefault(arr[pos], []).append(v)
        pos += v
    return StarPartition(c.n, tuple(tuple(g) for g in groups.values()))


# ---------------------------------------------------------------------------
# Gallai partition extraction
# ---------------------------------------------------------------------------

class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _blocks_for_pair(c: Coloring, a: int, b: int) -> list[list[int]]:
    """Connected components of the graph of edges NOT colored a or b."""
    dsu = _DSU(c.n)
    for u, v, col in c.edges():
        if col != a and col != b:
            dsu.union(u, v)
    comp: dict[int, list[int]] = {}
    for v in range(c.n):
        comp.setdefault(dsu.find(v), []).append(v)
    return sorted(comp.values(), key=lambda blk: blk[0])


def _pair_colors(c: Coloring, blocks: list[list[int]]) -> Optional[dict[tuple[int, int], int]]:
    """Color of each block pair if every pair is monochromatic, else None."""
    owner = {}
    for bi, blk in enumerate(blocks):
        for v in blk:
            owner[v] = bi
    reduced: dict[tuple[int, int], int] = {}
    for u, v, col in c.edges():
        bu, bv = owner[u], owner[v]
        if bu == bv:
            continue
        key = (bu, bv) if bu < bv else (bv, bu)
        prev = reduced.get(key)
        if prev is None:
            reduced[key] = col
        elif prev != col:
            return None
    return reduced


def _partition_from(blocks: list[list[int]], reduced: dict[tuple[int, int], int]) -> GallaiPartition:
    return GallaiPartition(
        blocks=tuple(tuple(blk) for blk in blocks),
        cross_colors=frozenset(reduced.values()),
        reduced=tuple(sorted((i, j, col) for (i, j), col in reduced.items())),
    )


def find_gallai_partition(c: Coloring) -> GallaiPartition:
    """Extract a block decomposition with at most two cross colors.

    Tries every candidate color pair {a, b} (singletons included): the
    blocks are the components of the graph of edges colored neither a nor
    b, accepted when there are at least two of them and every block pair is
    monochromatic.  For rainbow-free input some pair always succeeds; a
    merge-refinement fallback is kept as hardening.  Raises NotFound when
    the input has a rainbow triangle.
    """
    if c.n < 2:
        raise PreconditionViolated("need n >= 2 for a block decomposition")
    colors = list(range(1, c.k + 1))
    candidates = [(a, b) for ai, a in enumerate(colors) for b in colors[ai:]]
    for a, b in candidates:
        blocks = _blocks_for_pair(c, a, b)
        if len(blocks) < 2:
            continue
        reduced = _pair_colors(c, blocks)
        if reduced is None or len(set(reduced.values())) > 2:
            continue
        gp = _partition_from(blocks, reduced)
        if validate_gallai_partition(c, gp):
            return gp
    # Hardening: merge blocks that violate monochromaticity and retry.
    for a, b in candidates:
        blocks = _blocks_for_pair(c, a, b)
        merged = _merge_refine(c, blocks)
        if len(merged) < 2:
            continue
        reduced = _pair_colors(c, merged)
        if reduced is None or len(set(reduced.values())) > 2:
            continue
        gp = _partition_from(merged, reduced)
        if validate_gallai_partition(c, gp):
            return gp
    w = rainbow_witness(c)
    if w is not None:
        raise NotFound(f"no decomposition: input has rainbow triangle {w}")
    raise InternalScheduleError(
        "no valid block decomposition found for a rainbow-free coloring"
    )


def _merge_refine(c: Coloring, blocks: list[list[int]]) -> list[list[int]]:
    blocks = [list(blk) for blk in blocks]
    while len(blocks) >= 2:
        owner = {}
        for bi, blk in enumerate(blocks):
            for v in blk:
                owner[v] = bi
        seen: dict[tuple[int, int], int] = {}
        conflict = None
        for u, v, col in c.edges():
            bu, bv = owner[u], owner[v]
            if bu == bv:
                continue
            key = (bu, bv) if bu < bv else (bv, bu)
            prev = seen.get(key)
            if prev is None:
                seen[key] = col
            elif prev != col:
                conflict = key
                break
        if conflict is None:
            return sorted(blocks, key=lambda blk: blk[0])
        i, j = conflict
        blocks[i] = sorted(blocks[i] + blocks[j])
        del blocks[j]
    return blocks


def validate_gallai_partition(c: Coloring, gp: GallaiPartition) -> bool:
    """Independent re-check of all Gallai-partition invariants."""
    if gp.m < 2 or len(gp.cross_colors) > 2:
        return False
    seen: set[int] = set()
    owner: dict[int, int] = {}
    for bi, blk in enumerate(gp.blocks):
        if not blk:
            return False
        for v in blk:
            if v in seen or not (0 <= v < c.n):
                return False
            seen.add(v)
            owner[v] = bi
    if len(seen) != c.n:
        return False
    reduced = {(i, j): col for i, j, col in gp.reduced}
    if set(reduced.values()) - gp.cross_colors:
        return False
    needed = {(i, j) for i in range(gp.m) for j in range(i + 1, gp.m)}
    if set(reduced) != needed:
        return False
    for u, v, col in c.edges():
        bu, bv = owner[u], owner[v]
        if bu == bv:
            continue
        key = (bu, bv) if bu < bv else (bv, bu)
        if reduced[key] != col:
            return False
    return True
