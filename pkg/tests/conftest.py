"""Shared helpers: independent brute-force oracles and input strategies."""

from __future__ import annotations

from itertools import combinations

from hypothesis import strategies as st

from gallai.core import Coloring, total_edges


def naive_rainbow(c: Coloring):
    """Triple-loop rainbow-triangle scan, independent of the library's."""
    for a, b, d in combinations(range(c.n), 3):
        x = c.edge_color(a, b)
        y = c.edge_color(a, d)
        z = c.edge_color(b, d)
        if x != y and x != z and y != z:
            return (a, b, d)
    return None


def compact_colors(raw: list[int]) -> list[int]:
    """Remap arbitrary positive ids onto 1..k so Coloring accepts them."""
    used = sorted(set(raw))
    remap = {old: new for new, old in enumerate(used, start=1)}
    return [remap[c] for c in raw]


@st.composite
def arbitrary_colorings(draw, min_n: int = 1, max_n: int = 7, max_colors: int = 4):
    """Completely arbitrary colorings (not necessarily rainbow-free)."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    raw = draw(
        st.lists(
            st.integers(min_value=1, max_value=max_colors),
            min_size=total_edges(n),
            max_size=total_edges(n),
        )
    )
    return Coloring(n, compact_colors(raw))


@st.composite
def label_partitions(draw, min_n: int = 2, max_n: int = 12):
    """Random star partitions: shuffle labels 1..n-1, cut into groups."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    labels = draw(st.permutations(list(range(1, n))))
    k = draw(st.integers(min_value=1, max_value=n - 1))
    cuts = sorted(draw(
        st.lists(
            st.integers(min_value=1, max_value=n - 2),
            min_size=k - 1,
            max_size=k - 1,
            unique=True,
        )
    )) if n > 2 and k > 1 else []
    groups = []
    prev = 0
    for cut in cuts + [n - 1]:
        groups.append(tuple(labels[prev:cut]))
        prev = cut
    return n, [g for g in groups if g]
