"""Constructive procedures for rainbow-triangle-free colorings.

Star-based special colorings are the workhorse: most builders produce a
partition of the vertex labels 1..n-1 into groups whose label sums are the
requested class sizes.  Each generated schedule is validated before being
committed; on validation failure the constructor falls back to an explicit
backtracking search over star partitions, so a wrong schedule can never
leak out as a wrong coloring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    BudgetExceeded,
    Coloring,
    Distribution,
    DivisionParams,
    InternalScheduleError,
    PeelImpossible,
    PreconditionViolated,
    StarPartition,
    TooManyColors,
    balanced_sizes,
    canonicalize,
    edge_index,
    star_partition,
    total_edges,
)
from . import verify


@dataclass(frozen=True, slots=True)
class NotConstructed:
    """Returned by construct_any when no coloring could be produced."""

    reason: str  # "necessary-condition failure" | "fallback exhausted" | "unknown"
    detail: str = ""


def _checked(c: Coloring, want: Distribution, *, special: bool = False) -> Coloring:
    """Post-check every constructed coloring; fail loudly on a mismatch."""
    w = verify.rainbow_witness(c)
    if w is not None:
        raise InternalScheduleError(f"construction produced rainbow triangle {w}")
    got = verify.class_sizes(c)
    if got != want:
        raise InternalScheduleError(f"constructed sizes {got.sizes}, wanted {want.sizes}")
    if special and not verify.is_special_coloring(c):
        raise InternalScheduleError("construction expected to be special is not")
    return c


# ---------------------------------------------------------------------------
# Special colorings and the star-partition fallback solver
# ---------------------------------------------------------------------------

def special_coloring(sp: StarPartition) -> Coloring:
    """Color edge (i, j) with i > j by the group containing i.

    Always rainbow-free: in any triangle the two edges at the largest vertex
    share a star, hence a color.  Class sizes are the group label sums.
    """
    label_color = {}
    for gi, group in enumerate(sp.groups, start=1):
        for label in group:
            label_color[label] = gi
    arr: list[int] = []
    for v in range(1, sp.n):
        arr.extend([label_color[v]] * v)
    return Coloring(sp.n, arr)


def star_partition_for(
    d: Distribution, *, max_nodes: Optional[int] = 5_000_000
) -> Optional[StarPartition]:
    """Find a star partition realizing d, or None when none exists.

    Backtracking over the labels n-1, n-2, ..., 1 (largest first), placing
    each into one of the k groups; among groups with equal residual need
    only the first is tried.  Exhaustion without success proves that no
    special coloring of d exists.  Raises BudgetExceeded past ``max_nodes``.
    """
    n, k = d.n, d.k
    if k == 0:
        return StarPartition(n, ()) if n == 1 else None
    if k > n - 1:
        return None
    residual = list(d.sizes)
    assign = [0] * (n - 1)
    # rem_sum[idx] = sum of labels still unplaced at depth idx
    rem_sum = [0] * n
    for idx in range(n - 2, -1, -1):
        rem_sum[idx] = rem_sum[idx + 1] + (n - 1 - idx)
    nodes = 0

    def place(idx: int) -> bool:
        nonlocal nodes
        if idx == n - 1:
            return True
        label = n - 1 - idx
        left = rem_sum[idx + 1]
        tried = set()
        for g in range(k):
            r = residual[g]
            if r < label or r in tried:
                continue
            tried.add(r)
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                raise BudgetExceeded(f"star partition search exceeded {max_nodes} nodes")
            residual[g] = r - label
            if max(residual) <= left:
                assign[idx] = g
                if place(idx + 1):
                    return True
            residual[g] = r
        return False

    if not place(0):
        return None
    groups: list[list[int]] = [[] for _ in range(k)]
    for idx, g in enumerate(assign):
        groups[g].append(n - 1 - idx)
    return star_partition(n, groups)


def _fallback_star(d: Distribution, context: str) -> Coloring:
    sp = star_partition_for(d, max_nodes=20_000_000)
    if sp is None:
        raise InternalScheduleError(f"{context}: schedule failed and no star partition exists for {d}")
    return special_coloring(sp)


# ---------------------------------------------------------------------------
# Division: k classes of p edges plus one class of q edges
# ---------------------------------------------------------------------------

def _division_groups(n: int, k: int, p: int, q: int) -> tuple[list[list[int]], list[int]]:
    """Partition labels 1..n-1 into k groups of sum p and one of sum q.

    Recursive schedule; every reduction removes a suffix of the label
    interval, so recursive instances live on prefixes [1, n'-1] and no
    relabeling is needed.
    """
    if n <= 1:
        if q != 0 or (k > 0 and p > 0):
            raise InternalScheduleError(f"bad base instance n={n}, k={k}, p={p}, q={q}")
        return [[] for _ in range(k)], []
    if k == 0:
        return [], list(range(1, n))
    if q >= p:
        # Split q into extra p-classes plus a remainder; re-merge afterwards.
        take, q_small = divmod(q, p)
        pgroups, qgroup = _division_groups(n, k + take, p, q_small)
        merged = qgroup
        for g in pgroups[k:]:
            merged = merged + g
        return pgroups[:k], merged
    if q >= n - 1:
        # Remove a spanning star from the q class.
        pgroups, qgroup = _division_groups(n - 1, k, p, q - (n - 1))
        return pgroups, qgroup + [n - 1]

    # Now q <= min(n-2, p-1).
    if p <= 2 * n - 3:
        # Classes from pairs of stars with centers summing to p.
        if p % 2 == 1:
            count = n - (p + 1) // 2
            if count > k:
                raise InternalScheduleError(f"odd pairing count {count} exceeds k={k}")
            pairs = [_pair(n - 1 - t, p - n + 1 + t) for t in range(count)]
            n_rec = p - n + 1
            pgroups, qgroup = _division_groups(n_rec, k - count, p, q)
            return pgroups + pairs, qgroup
        half = p // 2
        count = n - 1 - half
        pairs = [_pair(n - 1 - t, p - n + 1 + t) for t in range(count)]
        n_rec = p - n + 1
        k2 = 2 * (k - count) - 1
        if k2 < -1:
            raise InternalScheduleError(f"even pairing count {count} exceeds k={k}")
        if k2 == -1:
            # All p-classes already formed; leftover star + remaining labels are q.
            if q != half + total_edges(n_rec):
                raise InternalScheduleError(
                    f"degenerate even case: q={q} != {half}+{total_edges(n_rec)}"
                )
            return pairs, [half] + list(range(1, n_rec))
        halves, qgroup = _division_groups(n_rec, k2, half, q)
        halves = halves + [[half]]
        merged = [halves[2 * t] + halves[2 * t + 1] for t in range(len(halves) // 2)]
        return merged + pairs, qgroup

    # p >= 2n-2: remove one pair of stars from each p-class.
    pairs_b = [_pair(n - i, n - 2 * k - 1 + i) for i in range(1, k + 1)]
    p2 = p - (2 * n - 2 * k - 1)
    n2 = n - 2 * k
    if p2 >= n2 - 1:
        pgroups, qgroup = _division_groups(n2, k, p2, q)
        return [pg + pb for pg, pb in zip(pgroups, pairs_b)], qgroup
    delta = n - 4 * k
    if delta == 1:
        # n = 4k+1, p = 8k, q = 2k: one star triple plus k-1 quadruples.
        if p != 2 * n - 2 or q != 2 * k:
            raise InternalScheduleError(f"delta=1 endgame mismatch: n={n}, p={p}, q={q}")
        groups = [[4 * k, 4 * k - 1, 1]]
        for i in range(1, k):
            groups.append([4 * k - 2 * i, 4 * k - 2 * i - 1, 2 * i, 2 * i + 1])
        return groups, [2 * k]
    if delta == 2:
        # n = 4k+2, p = 8k+3, q = 3k+1: pairs, then a star off the q class.
        if p != 2 * n - 1 or q != 3 * k + 1:
            raise InternalScheduleError(f"delta=2 endgame mismatch: n={n}, p={p}, q={q}")
        pgroups, qgroup = _division_groups(n2 - 1, k, p2, q - (n2 - 1))
        qgroup = qgroup + [n2 - 1]
        return [pg + pb for pg, pb in zip(pgroups, pairs_b)], qgroup
    raise InternalScheduleError(f"unexpected endgame delta={delta} for n={n}, k={k}, p={p}")


def _pair(hi: int, lo: int) -> list[int]:
    """Star pair as a label group; the empty star S(0) is simply skipped."""
    if not (0 <= lo < hi):
        raise InternalScheduleError(f"bad star pair ({hi}, {lo})")
    return [hi] if lo == 0 else [hi, lo]


def _validate_label_groups(n: int, groups: Sequence[Sequence[int]]) -> bool:
    seen: set[int] = set()
    for g in groups:
        for i in g:
            if not (1 <= i <= n - 1) or i in seen:
                return False
            seen.add(i)
    return len(seen) == n - 1


def construct_division(params: DivisionParams) -> Coloring:
    """Special coloring with k classes of p edges and one class of q edges."""
    n, k, p, q = params.n, params.k, params.p, params.q
    target = params.target()
    if n == 1:
        return Coloring(1, ())
    try:
        pgroups, qgroup = _division_groups(n, k, p, q)
        groups = [g for g in pgroups if g]
        if qgroup:
            groups.append(qgroup)
        ok = (
            _validate_label_groups(n, groups)
            and len(pgroups) == k
            and all(sum(g) == p for g in pgroups)
            and sum(qgroup) == q
        )
        if not ok:
            raise InternalScheduleError(f"division schedule invalid for n={n}, k={k}, p={p}, q={q}")
        c = special_coloring(star_partition(n, groups))
    except InternalScheduleError:
        c = _fallback_star(target, f"division n={n} k={k} p={p} q={q}")
    return _checked(c, target, special=True)


# ---------------------------------------------------------------------------
# Balanced colorings
# ---------------------------------------------------------------------------

def _balanced_groups(n: int, k: int) -> list[list[int]]:
    """Label groups realizing the balanced k-part distribution of K_n."""
    if k == 1:
        return [list(range(1, n))]
    if n == 2 * k - 1:
        # k = ceil(n/2) with n odd: one class of 2k-2, the rest of size 2k-3.
        groups = [[2 * k - 2], [2 * k - 3]]
        groups.extend([j, 2 * k - 3 - j] for j in range(1, k - 1))
        return groups
    if n >= 4 * k:
        # Group the classes of a finer balanced coloring.
        r = max(2, -(-n // (4 * k)))
        if r * k > (n + 1) // 2:
            raise InternalScheduleError(f"no valid grouping factor for n={n}, k={k}")
        sub = _balanced_groups(n, r * k)
        sub.sort(key=lambda g: -sum(g))
        buckets: list[list[int]] = [[] for _ in range(k)]
        for t, g in enumerate(sub):
            buckets[t % k].extend(g)
        return buckets

    i = n - 2 * k
    ell, m = divmod(total_edges(i), k)
    z = 2 * k + 2 * i + ell - 1
    zp = z + 1
    if ell % 2 == 0:
        h = ell // 2
        if m <= h:
            pairs = [_pair(2 * k + i - 1 - t, i + ell + t) for t in range(k - h)]
            if h == 0:
                if i + ell > 1:
                    raise InternalScheduleError(f"nonempty residue with h=0 for n={n}, k={k}")
                return pairs
            sub = _balanced_groups(i + ell, h)
            _expect_sums(sub, [z] * (h - m) + [zp] * m, f"balanced n={n} k={k} even-a")
            return pairs + sub
        pairs_z = [_pair(2 * k + i - 1 - t, i + ell + t) for t in range(k - m)]
        pairs_zp = [
            _pair(k + i + m - 1 - t, k + i - m + ell + 1 + t) for t in range(m - h - 1)
        ]
        u1 = k + i - m + ell
        u2 = k + i + h
        if total_edges(i + ell) != h * zp + (m - h):
            raise InternalScheduleError(f"even-b identity failed for n={n}, k={k}")
        pgroups, qgroup = _division_groups(i + ell, h, zp, m - h)
        assembled = qgroup + [u1, u2]
        return pairs_z + pairs_zp + pgroups + [assembled]

    h1 = (ell + 1) // 2
    if k - h1 <= m:
        pairs = [_pair(2 * k + i - 1 - t, i + ell + 1 + t) for t in range(k - h1)]
        sub = _balanced_groups(i + ell + 1, h1)
        _expect_sums(sub, [z] * (k - m) + [zp] * (m - k + h1), f"balanced n={n} k={k} odd-a")
        return pairs + sub
    # Few large classes: pairs of both sums with one skipped center, then
    # division on the bottom interval completes the last class of sum z.
    t_count = k - m - h1
    pairs_z = [_pair(2 * k + i - 1 - t, i + ell + t) for t in range(t_count)]
    u = i + ell + t_count
    pairs_zp = [_pair(2 * k + i - 1 - t_count - t, u + 1 + t) for t in range(m)]
    if total_edges(i + ell) != (h1 - 1) * z + (z - u):
        raise InternalScheduleError(f"odd-b identity failed for n={n}, k={k}")
    pgroups, qgroup = _division_groups(i + ell, h1 - 1, z, z - u)
    assembled = qgroup + [u]
    return pairs_z + pairs_zp + pgroups + [assembled]


def _expect_sums(groups: Sequence[Sequence[int]], want: list[int], context: str) -> None:
    if sorted(sum(g) for g in groups) != sorted(want):
        raise InternalScheduleError(f"{context}: subschedule sums mismatch")


def construct_balanced(n: int, k: int) -> Coloring:
    """Rainbow-free k-coloring of K_n with class sizes differing by <= 1."""
    if k < 1:
        raise PreconditionViolated("k must be >= 1")
    if k > (n + 1) // 2:
        raise TooManyColors(f"balanced colorings need k <= ceil(n/2) = {(n + 1) // 2}, got k={k}")
    if n == 1:
        return Coloring(1, ())
    target = canonicalize(balanced_sizes(n, k), n)
    try:
        groups = _balanced_groups(n, k)
        if not _validate_label_groups(n, groups) or sorted(
            (sum(g) for g in groups), reverse=True
        ) != list(target.sizes):
            raise InternalScheduleError(f"balanced schedule invalid for n={n}, k={k}")
        c = special_coloring(star_partition(n, groups))
    except InternalScheduleError:
        c = _fallback_star(target, f"balanced n={n} k={k}")
    return _checked(c, target, special=True)


# ---------------------------------------------------------------------------
# Monotone extension and peeling
# ---------------------------------------------------------------------------

def extend_by_star(c: Coloring, color: int) -> Coloring:
    """Join a new vertex to all others in one color (may open a new class).

    The new vertex is homogeneously attached, so rainbow-freeness is
    preserved; the chosen class grows by n edges.
    """
    if not (1 <= color <= c.k + 1):
        raise PreconditionViolated(f"color must be in 1..{c.k + 1}, got {color}")
    return Coloring(c.n + 1, c.colex_colors() + (color,) * c.n)


def peel_reduction(d: Distribution, base_n: int) -> tuple[Distribution, tuple[int, ...]]:
    """Shrink d to base_n vertices by repeatedly peeling spanning stars.

    At each intermediate size n' the current largest class loses n'-1 edges.
    Returns the residual distribution and the log of peeled class positions
    (indices into d.sizes); replaying the log with extend_by_star restores d.
    """
    if not (1 <= base_n <= d.n):
        raise PreconditionViolated(f"need 1 <= base_n <= {d.n}, got {base_n}")
    slots = list(d.sizes)
    log: list[int] = []
    for n_cur in range(d.n, base_n, -1):
        star = n_cur - 1
        slot = max(range(len(slots)), key=lambda i: (slots[i], -i))
        if slots[slot] < star:
            raise PeelImpossible(
                f"largest class has {slots[slot]} < {star} edges at n'={n_cur}"
            )
        slots[slot] -= star
        log.append(slot)
    base = canonicalize([s for s in slots if s > 0], base_n)
    return base, tuple(log)


def replay_peel(base: Coloring, d: Distribution, log: Sequence[int]) -> Coloring:
    """Inverse of peel_reduction: re-attach the logged stars onto ``base``."""
    if base.n + len(log) != d.n:
        raise PreconditionViolated(f"log length {len(log)} does not bridge {base.n} -> {d.n}")
    slots = list(d.sizes)
    for step, slot in enumerate(log):
        slots[slot] -= (d.n - step) - 1
    survivors = [i for i, s in enumerate(slots) if s > 0]
    by_size = sorted(survivors, key=lambda i: (-slots[i], i))
    base_colors = sorted(range(1, base.k + 1), key=lambda col: (-base.counts[col - 1], col))
    if [slots[i] for i in by_size] != [base.counts[col - 1] for col in base_colors]:
        raise PreconditionViolated("base coloring does not match the peeled distribution")
    slot_color = dict(zip(by_size, base_colors))
    c = base
    for slot in reversed(log):
        col = slot_color.get(slot)
        if col is None:
            col = c.k + 1
            slot_color[slot] = col
        c = extend_by_star(c, col)
    return c


# ---------------------------------------------------------------------------
# Base cases: three colors on K_5, four colors on K_8
# ---------------------------------------------------------------------------

_K3_TABLE: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {
    (7, 2, 1): ((4, 3), (2,), (1,)),
    (6, 3, 1): ((4, 2), (3,), (1,)),
    (5, 4, 1): ((3, 2), (4,), (1,)),
    (5, 3, 2): ((4, 1), (3,), (2,)),
    (4, 3, 3): ((4,), (3,), (2, 1)),
    (4, 4, 2): ((4,), (3, 1), (2,)),
}


def construct_k3_base(d: Distribution) -> Coloring:
    """All eight 3-part distributions of K_5, via the fixed table.

    Six are special colorings; (8,1,1) uses two disjoint edges and (6,2,2)
    a complete bipartite class.
    """
    if d.n != 5 or d.k != 3:
        raise PreconditionViolated(f"need a 3-part distribution on K_5, got {d}")
    key = d.sizes
    if key in _K3_TABLE:
        c = special_coloring(star_partition(5, _K3_TABLE[key]))
    elif key == (8, 1, 1):
        edges = []
        for u in range(5):
            for v in range(u + 1, 5):
                if (u, v) == (0, 1):
                    edges.append((u, v, 2))
                elif (u, v) == (2, 3):
                    edges.append((u, v, 3))
                else:
                    edges.append((u, v, 1))
        c = Coloring.from_edges(5, edges)
    elif key == (6, 2, 2):
        # Complete bipartite {0,1} x {2,3,4} in color 1.
        edges = []
        for u in range(5):
            for v in range(u + 1, 5):
                if u < 2 <= v:
                    edges.append((u, v, 1))
                elif (u, v) in ((0, 1), (2, 3)):
                    edges.append((u, v, 2))
                else:
                    edges.append((u, v, 3))
        c = Coloring.from_edges(5, edges)
    else:  # pragma: no cover - the eight cases above are exhaustive
        raise InternalScheduleError(f"unexpected distribution {d}")
    return _checked(c, d)


def _lex_fill(n: int, sizes: Sequence[int]) -> Coloring:
    """Fill edges in lexicographic order; safe only for at most two colors."""
    if len(sizes) > 2:
        raise PreconditionViolated("lexicographic fill is only rainbow-free for k <= 2")
    arr = [0] * total_edges(n)
    queue = [(color, size) for color, size in enumerate(sizes, start=1)]
    qi = 0
    left = queue[0][1] if queue else 0
    for u in range(n):
        for v in range(u + 1, n):
            while left == 0:
                qi += 1
                left = queue[qi][1]
            arr[edge_index(u, v)] = queue[qi][0]
            left -= 1
    return Coloring(n, arr)


_SMALL_MEMO: dict[tuple[int, tuple[int, ...]], Optional[tuple[int, ...]]] = {}


def _small_gallai(n: int, sizes: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    """Colex color array of some rainbow-free coloring of K_n, or None."""
    key = (n, sizes)
    if key not in _SMALL_MEMO:
        from . import oracle

        verdict = oracle.search_realizable(canonicalize(sizes, n))
        _SMALL_MEMO[key] = (
            verdict.witness.colex_colors() if verdict.is_feasible else None
        )
    return _SMALL_MEMO[key]


def _clique_multisets(edge_total: int, max_verts: int):
    """Non-increasing clique orders with the given total edge count."""

    def gen(left: int, verts: int, cap: int):
        if left == 0:
            yield []
            return
        a = cap
        while a >= 2:
            ea = total_edges(a)
            if ea <= left and a <= verts:
                for rest in gen(left - ea, verts - a, a):
                    yield [a] + rest
            a -= 1

    yield from gen(edge_total, max_verts, max_verts)


def _split_matrices(sizes: list[int], caps: list[int]):
    """All ways to spread each color count over the cliques, filling each."""
    nc = len(caps)

    def gen(idx: int, loads: list[int]):
        if idx == len(sizes):
            if loads == caps:
                yield []
            return
        size = sizes[idx]

        def spread(j: int, left: int, row: list[int]):
            if j == nc - 1:
                if left <= caps[j] - loads[j]:
                    yield row + [left]
                return
            for take in range(min(left, caps[j] - loads[j]) + 1):
                yield from spread(j + 1, left - take, row + [take])

        for row in spread(0, size, []):
            new_loads = [a + b for a, b in zip(loads, row)]
            for rest in gen(idx + 1, new_loads):
                yield [row] + rest

    yield from gen(0, [0] * nc)


def _realize_on_cliques(
    n_verts: int, smalls: list[tuple[int, int]], comp_color: int
) -> Optional[Coloring]:
    """Place the small classes inside vertex-disjoint cliques.

    The cliques carry the small colors (each clique rainbow-free on its
    own), and the complete multipartite complement carries ``comp_color``.
    Returns None when no clique layout admits a valid split.
    """
    sizes = [s for _, s in smalls]
    colors = [c for c, _ in smalls]
    total = sum(sizes)
    for cliques in _clique_multisets(total, n_verts):
        caps = [total_edges(a) for a in cliques]
        for matrix in _split_matrices(sizes, caps):
            witnesses = []
            for j, a in enumerate(cliques):
                sub = tuple(sorted((matrix[i][j] for i in range(len(sizes)) if matrix[i][j] > 0), reverse=True))
                got = _small_gallai(a, sub)
                if got is None:
                    witnesses = None
                    break
                witnesses.append(got)
            if witnesses is None:
                continue
            arr = [comp_color] * total_edges(n_verts)
            off = 0
            for j, a in enumerate(cliques):
                # Map witness colors (by descending count) onto our colors.
                sub_counts: dict[int, int] = {}
                for col in witnesses[j]:
                    sub_counts[col] = sub_counts.get(col, 0) + 1
                ranked = sorted(sub_counts, key=lambda col: (-sub_counts[col], col))
                want = sorted(
                    (i for i in range(len(sizes)) if matrix[i][j] > 0),
                    key=lambda i: (-matrix[i][j], i),
                )
                cmap = {sub_col: colors[i] for sub_col, i in zip(ranked, want)}
                pos = 0
                for v in range(1, a):
                    for u in range(v):
                        arr[edge_index(off + u, off + v)] = cmap[witnesses[j][pos]]
                        pos += 1
                off += a
            return Coloring(n_verts, arr)
    return None


def construct_k4_base(d: Distribution) -> Coloring:
    """Any 4-part distribution of K_8.

    Values 7, 6, 5 are eliminated by star extensions over smaller complete
    graphs; otherwise the small classes are packed into disjoint cliques
    whose complement carries the largest class.  A star-partition search
    and the exhaustive oracle remain as fallbacks.
    """
    if d.n != 8 or d.k != 4:
        raise PreconditionViolated(f"need a 4-part distribution on K_8, got {d}")
    try:
        c = _k4_schedule(d)
        if c is not None:
            return _checked(c, d)
    except (InternalScheduleError, PreconditionViolated, PeelImpossible):
        pass
    sp = star_partition_for(d)
    if sp is not None:
        return _checked(special_coloring(sp), d)
    arr = _small_gallai(8, d.sizes)
    if arr is None:
        raise InternalScheduleError(f"no coloring found for {d} (expected total)")
    return _checked(Coloring(8, arr), d)


def _k4_schedule(d: Distribution) -> Optional[Coloring]:
    sizes = list(d.sizes)

    def finish(inner_n: int, slots: list[int], steps: list[int]) -> Coloring:
        """Realize the reduced slot sizes on K_inner_n, then re-attach stars.

        ``steps`` lists the slot receiving each star for inner_n, inner_n+1,
        ... edges in turn.
        """
        inner = canonicalize([s for s in slots if s > 0], inner_n)
        c = _construct_guaranteed(inner)
        live = sorted(
            (i for i, s in enumerate(slots) if s > 0), key=lambda i: (-slots[i], i)
        )
        ranked = sorted(range(1, c.k + 1), key=lambda col: (-c.counts[col - 1], col))
        slot_color = dict(zip(live, ranked))
        for slot in steps:
            col = slot_color.get(slot)
            if col is None:
                col = c.k + 1
                slot_color[slot] = col
            c = extend_by_star(c, col)
        return c

    if 7 in sizes:
        s7 = sizes.index(7)
        slots = sizes.copy()
        slots[s7] = 0
        return finish(7, slots, [s7])
    if 6 in sizes:
        s6 = sizes.index(6)
        slots = sizes.copy()
        slots[s6] = 0
        slots[0] -= 7
        if slots[0] < 1:
            raise InternalScheduleError(f"largest class too small for the 6-case: {d}")
        return finish(6, slots, [s6, 0])
    if 5 in sizes:
        s5 = sizes.index(5)
        slots = sizes.copy()
        slots[s5] = 0
        if sizes[0] >= 13:
            slots[0] -= 13
            steps = [s5, 0, 0]
        else:
            if sizes[1] < 8:
                raise InternalScheduleError(f"no big second class for the 5-case: {d}")
            slots[0] -= 7
            slots[1] -= 6
            steps = [s5, 1, 0]
        return finish(5, slots, steps)

    bigs = [i for i, s in enumerate(sizes) if s >= 8]
    if bigs == [0]:
        return _realize_on_cliques(8, [(i + 1, sizes[i]) for i in (1, 2, 3)], 1)
    if bigs == [0, 1]:
        inner = _realize_on_cliques(
            7, [(2, sizes[1] - 7), (3, sizes[2]), (4, sizes[3])], 1
        )
        if inner is None:
            return None
        return extend_by_star(inner, 2)
    if bigs == [0, 1, 2]:
        inner = _realize_on_cliques(
            6, [(2, sizes[1] - 7), (3, sizes[2] - 6), (4, sizes[3])], 1
        )
        if inner is None:
            return None
        return extend_by_star(extend_by_star(inner, 3), 2)
    raise InternalScheduleError(f"unexpected shape for a 4-part distribution of 28: {d}")


# ---------------------------------------------------------------------------
# General k: the quadratic-threshold construction
# ---------------------------------------------------------------------------

def construct_gk_general(d: Distribution, stats: Optional[dict] = None) -> Coloring:
    """Any k-part distribution once n reaches 8k^2 + 1.

    Above the threshold the instance is peeled down to it; at the threshold
    the smallest class is eliminated by spanning stars plus a residue placed
    inside a fresh block of 4k+1 vertices, and the remaining k-1 classes are
    built recursively on what is left.
    """
    k, n = d.k, d.n
    if k < 3:
        raise PreconditionViolated(f"need k >= 3, got k={k}")
    threshold = 8 * k * k + 1
    if n < threshold:
        raise PreconditionViolated(f"need n >= 8k^2+1 = {threshold}, got n={n}")
    if stats is not None:
        stats.setdefault("levels", [])
        stats.setdefault("peeled_to_threshold", n - threshold)
    if n > threshold:
        base, log = peel_reduction(d, threshold)
        if base.k == k and base.k >= 3:
            inner = construct_gk_general(base, stats)
        else:
            inner = _construct_guaranteed(base)
        return _checked(replay_peel(inner, d, log), d)
    if k == 3:
        return _checked(_construct_guaranteed(d), d)
    return _checked(_gk_phases(d, stats), d)


def _gk_phases(d: Distribution, stats: Optional[dict]) -> Coloring:
    k, n = d.k, d.n
    sizes = list(d.sizes)  # color i  <->  sizes[i-1]
    arr = [0] * total_edges(n)
    m = n
    e_small = sizes[k - 1]
    stars = 0
    while e_small >= m - 1:
        v = m - 1
        base = v * (v - 1) // 2
        for t in range(v):
            arr[base + t] = k
        e_small -= m - 1
        m -= 1
        stars += 1
    block = 4 * k + 1
    start = m - block
    n_rest = start
    if n_rest < 1:
        raise InternalScheduleError(f"block does not fit: n={n}, k={k}, stars={stars}")
    # Residue of the smallest class inside the block, greedy stars first.
    rem = e_small
    for j in range(block - 1, 0, -1):
        take = min(rem, j)
        for t in range(j):
            arr[edge_index(start + t, start + j)] = k if t < take else 1
        rem -= take
    if rem:
        raise InternalScheduleError(f"block capacity exceeded: n={n}, k={k}")
    for v in range(start, m):
        for u in range(start):
            arr[edge_index(u, v)] = 1
    cost1 = block * n_rest + (total_edges(block) - e_small)
    e1_rest = sizes[0] - cost1
    if e1_rest < 0:
        raise InternalScheduleError(f"largest class too small: n={n}, k={k}, deficit={-e1_rest}")
    if stats is not None:
        stats["levels"].append(
            {"k": k, "n": n, "phase1_stars": stars, "block_size": block, "block_color_k": e_small}
        )
    rest = [(e1_rest, 1)] + [(sizes[i], i + 1) for i in range(1, k - 1)]
    rest = [(s, col) for s, col in rest if s > 0]
    sub = canonicalize([s for s, _ in rest], n_rest)
    csub = _construct_guaranteed(sub)
    ranked = sorted(range(1, csub.k + 1), key=lambda col: (-csub.counts[col - 1], col))
    want = sorted(rest, key=lambda sc: (-sc[0], sc[1]))
    if [csub.counts[col - 1] for col in ranked] != [s for s, _ in want]:
        raise InternalScheduleError("recursive level does not match the residual sizes")
    cmap = {sub_col: col for sub_col, (_, col) in zip(ranked, want)}
    for u, v, col in csub.edges():
        arr[edge_index(u, v)] = cmap[col]
    return Coloring(n, arr)


def _construct_guaranteed(d: Distribution, stats: Optional[dict] = None) -> Coloring:
    """Builder for the regions where success is unconditional."""
    k, n = d.k, d.n
    if k == 0:
        return Coloring(n, ())
    if k <= 2:
        return _lex_fill(n, d.sizes)
    if k == 3:
        if n < 5:
            raise PreconditionViolated(f"three colors need n >= 5, got n={n}")
        if n == 5:
            return construct_k3_base(d)
        base, log = peel_reduction(d, 5)
        return replay_peel(_construct_guaranteed(base), d, log)
    if k == 4:
        if n < 8:
            raise PreconditionViolated(f"four colors need n >= 8, got n={n}")
        if n == 8:
            return construct_k4_base(d)
        base, log = peel_reduction(d, 8)
        return replay_peel(_construct_guaranteed(base), d, log)
    return construct_gk_general(d, stats)


# ---------------------------------------------------------------------------
# Lower-bound witness, merging, dispatch
# ---------------------------------------------------------------------------

def lower_bound_witness(k: int) -> tuple[int, Distribution]:
    """The k-part distribution of K_{2k-3} that no coloring realizes.

    Its k-1 singleton classes cannot be pairwise disjoint on 2k-3 vertices,
    so two of them meet and close a rainbow triangle with any third color.
    """
    if k < 3:
        raise PreconditionViolated("need k >= 3")
    n = 2 * k - 3
    head = total_edges(n) - (k - 1)
    return n, canonicalize([head] + [1] * (k - 1), n)


def merge_classes(c: Coloring, grouping: Iterable[Iterable[int]]) -> Coloring:
    """Merge color classes; part j of the grouping becomes color j+1.

    Merging cannot create a rainbow triangle, and a special coloring stays
    special.
    """
    parts = [tuple(p) for p in grouping]
    seen: set[int] = set()
    for p in parts:
        if not p:
            raise PreconditionViolated("grouping parts must be nonempty")
        for col in p:
            if not (1 <= col <= c.k) or col in seen:
                raise PreconditionViolated(f"grouping must cover colors 1..{c.k} exactly once")
            seen.add(col)
    if len(seen) != c.k:
        raise PreconditionViolated(f"grouping must cover colors 1..{c.k} exactly once")
    cmap = {}
    for new, p in enumerate(parts, start=1):
        for col in p:
            cmap[col] = new
    return Coloring(c.n, tuple(cmap[col] for col in c.colex_colors()))


def construct_any(d: Distribution) -> Coloring | NotConstructed:
    """Dispatch to the guaranteed builders, else best effort.

    Guaranteed regions: k <= 2 always; k = 3 with n >= 5; k = 4 with
    n >= 8; k >= 5 with n >= 8k^2+1.  Outside them the necessary condition
    is checked first, then a star-partition search, then (for n <= 8) the
    exhaustive oracle.
    """
    k, n = d.k, d.n
    if (
        k <= 2
        or (k == 3 and n >= 5)
        or (k == 4 and n >= 8)
        or (k >= 5 and n >= 8 * k * k + 1)
    ):
        return _checked(_construct_guaranteed(d), d)
    ok, ell = verify.check_necessary(d)
    if not ok:
        return NotConstructed("necessary-condition failure", f"prefix bound fails at l={ell}")
    try:
        sp = star_partition_for(d, max_nodes=2_000_000)
    except BudgetExceeded:
        return NotConstructed("unknown", "star partition search exceeded its budget")
    if sp is not None:
        return _checked(special_coloring(sp), d)
    if n <= 8:
        from . import oracle

        verdict = oracle.search_realizable(d)
        if verdict.is_feasible:
            assert verdict.witness is not None
            return _checked(verdict.witness, d)
        if verdict.is_infeasible:
            return NotConstructed("fallback exhausted", "exhaustive search proved infeasibility")
        return NotConstructed("unknown", "exhaustive search hit its budget")
    return NotConstructed("unknown", "no special coloring found and n too large for the oracle")
