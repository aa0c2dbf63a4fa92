"""Core domain types for rainbow-triangle-free edge colorings of complete graphs.

Vertices of K_n are labeled 0..n-1, colors are 1-based ids.  Edge colors are
stored in a dense triangular array indexed in colex order (all edges whose
larger endpoint is v form one contiguous row), which gives O(1) lookups and
makes star-shaped updates cheap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class GallaiError(Exception):
    """Base class for all errors raised by this package."""


class SumMismatch(GallaiError):
    """Distribution entries do not add up to the edge count of K_n."""

    def __init__(self, expected: int, got: int):
        super().__init__(f"class sizes must sum to {expected}, got {got}")
        self.expected = expected
        self.got = got


class NonPositiveEntry(GallaiError):
    """A class size was zero or negative."""


class ParseError(GallaiError):
    """A serialized coloring could not be read."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvariantViolation(ParseError):
    """A structurally well-formed input violates a semantic invariant.

    Raised both at load time (missing edge, color out of range, phantom
    color) and at construction boundaries of core values.
    """

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message, line)


class NotGallai(GallaiError):
    """A coloring expected to be rainbow-triangle-free is not."""

    def __init__(self, witness: tuple[int, int, int]):
        super().__init__(f"rainbow triangle on vertices {witness}")
        self.witness = witness


class NotFound(GallaiError):
    """No certificate of the requested kind exists for the input."""


class BudgetExceeded(GallaiError):
    """A bounded search hit its node or time budget."""


class PreconditionViolated(GallaiError):
    """Arguments violate a documented precondition."""


class TooManyColors(PreconditionViolated):
    """A balanced coloring with more than ceil(n/2) colors was requested."""


class PeelImpossible(GallaiError):
    """The largest class is too small to remove a spanning star."""


class InternalScheduleError(GallaiError):
    """A constructive schedule failed validation and no fallback applied.

    Never returned silently: constructors validate their output and raise
    this instead of handing back a wrong coloring.
    """


# ---------------------------------------------------------------------------
# Small helpers
# ---------------------------------------------------------------------------

def total_edges(n: int) -> int:
    """Number of edges of K_n."""
    return n * (n - 1) // 2


def edge_index(u: int, v: int) -> int:
    """Position of edge {u,v} in the colex-ordered triangular array."""
    if u > v:
        u, v = v, u
    if u == v or u < 0:
        raise ValueError(f"not an edge: ({u}, {v})")
    return v * (v - 1) // 2 + u


def balanced_sizes(n: int, k: int) -> tuple[int, ...]:
    """The unique balanced k-part distribution of the edges of K_n."""
    if k <= 0:
        raise PreconditionViolated("k must be positive")
    small, extra = divmod(total_edges(n), k)
    return (small + 1,) * extra + (small,) * (k - extra)


# ---------------------------------------------------------------------------
# Distribution
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Distribution:
    """A multiset of positive class sizes bound to a vertex count.

    ``sizes`` is kept sorted non-increasing (canonical form) and must sum to
    the number of edges of K_n.
    """

    sizes: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvariantViolation(f"vertex count must be >= 1, got {self.n}")
        for s in self.sizes:
            if s < 1:
                raise NonPositiveEntry(f"class sizes must be >= 1, got {s}")
        if any(a < b for a, b in zip(self.sizes, self.sizes[1:])):
            raise InvariantViolation("sizes must be sorted non-increasing")
        expected = total_edges(self.n)
        got = sum(self.sizes)
        if got != expected:
            raise SumMismatch(expected, got)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.sizes) + f") on K_{self.n}"


def canonicalize(sizes: Iterable[int], n: int) -> Distribution:
    """Sort class sizes into canonical non-increasing order and validate."""
    return Distribution(tuple(sorted(sizes, reverse=True)), n)


# ---------------------------------------------------------------------------
# Coloring
# ---------------------------------------------------------------------------

class Coloring:
    """A complete assignment of a color id in 1..k to every edge of K_n.

    Immutable after construction.  Every color id in 1..k occurs on at least
    one edge (no phantom colors).
    """

    __slots__ = ("n", "k", "counts", "_colors")

    def __init__(self, n: int, colors: Iterable[int], k: Optional[int] = None):
        if n < 1:
            raise InvariantViolation(f"vertex count must be >= 1, got {n}")
        arr = tuple(colors)
        if len(arr) != total_edges(n):
            raise InvariantViolation(
                f"expected {total_edges(n)} edge colors for K_{n}, got {len(arr)}"
            )
        kk = max(arr, default=0)
        if k is not None and k != kk:
            raise InvariantViolation(f"declared k={k} but max color in use is {kk}")
        counts = [0] * (kk + 1)
        for c in arr:
            if c < 1:
                raise InvariantViolation(f"color ids must be >= 1, got {c}")
            counts[c] += 1
        for c in range(1, kk + 1):
            if counts[c] == 0:
                raise InvariantViolation(f"phantom color {c}: declared but unused")
        self.n = n
        self.k = kk
        self.counts = tuple(counts[1:])
        self._colors = arr

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "Coloring":
        """Build a coloring from (u, v, color) triples covering every edge once."""
        arr: list[int] = [0] * total_edges(n)
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InvariantViolation(f"bad edge ({u}, {v}) for K_{n}")
            i = edge_index(u, v)
            if arr[i] != 0:
                raise InvariantViolation(f"duplicate edge ({u}, {v})")
            arr[i] = c
        for i, c in enumerate(arr):
            if c == 0:
                raise InvariantViolation(f"missing edge at triangular index {i}")
        return cls(n, arr)

    def edge_color(self, u: int, v: int) -> int:
        return self._colors[edge_index(u, v)]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (u, v, color) in lexicographic order of (u, v)."""
        arr = self._colors
        for u in range(self.n):
            for v in range(u + 1, self.n):
                yield u, v, arr[v * (v - 1) // 2 + u]

    def colex_colors(self) -> tuple[int, ...]:
        """The raw triangular color array (colex edge order)."""
        return self._colors

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Coloring)
            and self.n == other.n
            and self._colors == other._colors
        )

    def __hash__(self) -> int:
        return hash((self.n, self._colors))

    def __repr__(self) -> str:
        return f"Coloring(n={self.n}, k={self.k}, counts={self.counts})"


# ---------------------------------------------------------------------------
# Star partitions (witnesses for special colorings)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class StarPartition:
    """A partition of the vertex labels 1..n-1 into color groups.

    Group j collects the centers of the stars forming color class j; the
    class size is the sum of the group's labels.
    """

    n: int
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for g in self.groups:
            if not g:
                raise InvariantViolation("star partition groups must be nonempty")
            for i in g:
                if not (1 <= i <= self.n - 1):
                    raise InvariantViolation(f"label {i} out of range for K_{self.n}")
                if i in seen:
                    raise InvariantViolation(f"label {i} appears in two groups")
                seen.add(i)
        if len(seen) != self.n - 1:
            missing = set(range(1, self.n)) - seen
            raise InvariantViolation(f"labels not covered: {sorted(missing)}")

    @property
    def k(self) -> int:
        return len(self.groups)

    def group_sums(self) -> tuple[int, ...]:
        return tuple(sum(g) for g in self.groups)


def star_partition(n: int, groups: Iterable[Iterable[int]]) -> StarPartition:
    """Convenience constructor accepting any iterables of labels."""
    return StarPartition(n, tuple(tuple(sorted(g)) for g in groups))


# ---------------------------------------------------------------------------
# Gallai partitions (block decompositions with at most two cross colors)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GallaiPartition:
    """A decomposition of the vertex set into m >= 2 blocks such that edges
    between any two blocks all carry a single color, and at most two colors
    appear between blocks overall."""

    blocks: tuple[tuple[int, ...], ...]
    cross_colors: frozenset[int]
    reduced: tuple[tuple[int, int, int], ...]  # (block_i, block_j, color), i < j

    def __post_init__(self) -> None:
        if len(self.blocks) < 2:
            raise InvariantViolation("a Gallai partition needs at least 2 blocks")
        if len(self.cross_colors) > 2:
            raise InvariantViolation("more than two cross colors")

    @property
    def m(self) -> int:
        return len(self.blocks)

    def reduced_color(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        for a, b, c in self.reduced:
            if a == i and b == j:
                return c
        raise KeyError((i, j))


# ---------------------------------------------------------------------------
# Parameter records for the constructive procedures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class DivisionParams:
    """Instance of the division problem: k classes of p edges plus one of q."""

    n: int
    k: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 0 or self.q < 0:
            raise PreconditionViolated(
                f"need n >= 1, k >= 0, q >= 0; got n={self.n}, k={self.k}, q={self.q}"
            )
        if self.p < self.n - 1:
            raise PreconditionViolated(f"need p >= n-1, got p={self.p}, n={self.n}")
        if self.k * self.p + self.q != total_edges(self.n):
            raise PreconditionViolated(
                f"k*p + q = {self.k * self.p + self.q} != {total_edges(self.n)}"
            )

    @property
    def n_reduced(self) -> int:
        """Vertex count after removing the k top star pairs."""
        return self.n - 2 * self.k

    @property
    def p_reduced(self) -> int:
        """Class size left after removing one top star pair from a class."""
        return self.p - 2 * self.n + 2 * self.k + 1

    @property
    def delta(self) -> int:
        """Slack n - 4k used in the endgame split."""
        return self.n - 4 * self.k

    def target(self) -> Distribution:
        sizes = [self.p] * self.k
        if self.q:
            sizes.append(self.q)
        return canonicalize(sizes, self.n)


@dataclass(frozen=True, slots=True)
class BalancedParams:
    """Derived quantities of a balanced instance with n = 2k + i."""

    n: int
    k: int
    r: int = 1  # grouping factor applied before reaching this instance

    def __post_init__(self) -> None:
        if self.k < 1:
            raise PreconditionViolated("k must be >= 1")
        if self.n < 2 * self.k:
            raise PreconditionViolated("BalancedParams requires n >= 2k")

    @property
    def i(self) -> int:
        return self.n - 2 * self.k

    @property
    def ell(self) -> int:
        return total_edges(self.i) // self.k

    @property
    def m(self) -> int:
        return total_edges(self.i) % self.k

    @property
    def z(self) -> int:
        return 2 * self.k + 2 * self.i + self.ell - 1

    @property
    def z_prime(self) -> int:
        return self.z + 1


# ---------------------------------------------------------------------------
# Oracle verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Three-valued answer of the exhaustive search.

    feasible carries a witness coloring, infeasible certifies the search
    space was exhausted, unknown means a budget was hit.
    """

    tag: str  # "feasible" | "infeasible" | "unknown"
    witness: Optional[Coloring]
    nodes_explored: int

    def __post_init__(self) -> None:
        if self.tag not in ("feasible", "infeasible", "unknown"):
            raise InvariantViolation(f"bad verdict tag {self.tag!r}")
        if self.tag == "feasible" and self.witness is None:
            raise InvariantViolation("feasible verdict requires a witness")
        if self.tag != "feasible" and self.witness is not None:
            raise InvariantViolation("only feasible verdicts carry a witness")

    @property
    def is_feasible(self) -> bool:
        return self.tag == "feasible"

    @property
    def is_infeasible(self) -> bool:
        return self.tag == "infeasible"

    @property
    def is_unknown(self) -> bool:
        return self.tag == "unknown"

    def to_json_dict(self) -> dict:
        out: dict = {"tag": self.tag, "nodes_explored": self.nodes_explored}
        if self.witness is not None:
            out["witness"] = json.loads(serialize_json(self.witness))
        return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def serialize(c: Coloring) -> str:
    """Text format: header "n k", then one line "u v c" per edge.

    Edges appear in lexicographic order of (u, v); every line ends with LF.
    """
    lines = [f"{c.n} {c.k}"]
    lines.extend(f"{u} {v} {col}" for u, v, col in c.edges())
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> Coloring:
    """Parse the text format, enforcing totality and canonical edge order."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"expected header 'n k', got {lines[0]!r}", 1)
    try:
        n, k = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"non-numeric header {lines[0]!r}", 1) from None
    if n < 1:
        raise InvariantViolation(f"vertex count must be >= 1, got {n}", 1)
    expected = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if len(lines) - 1 != len(expected):
        raise InvariantViolation(
            f"expected {len(expected)} edge lines, got {len(lines) - 1}",
            len(lines),
        )
    arr = [0] * total_edges(n)
    for ln, ((eu, ev), raw) in enumerate(zip(expected, lines[1:]), start=2):
        parts = raw.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v c', got {raw!r}", ln)
        try:
            u, v, col = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"non-numeric edge line {raw!r}", ln) from None
        if (u, v) != (eu, ev):
            raise InvariantViolation(
                f"edge ({u}, {v}) out of order; expected ({eu}, {ev})", ln
            )
        if not (1 <= col <= k):
            raise InvariantViolation(f"color {col} out of range 1..{k}", ln)
        arr[edge_index(u, v)] = col
    try:
        return Coloring(n, arr, k=k)
    except InvariantViolation:
        raise
    except GallaiError as exc:  # pragma: no cover - defensive
        raise InvariantViolation(str(exc)) from exc


def serialize_json(c: Coloring) -> str:
    """Structured equivalent of the text format with the same edge order."""
    payload = {
        "n": c.n,
        "k": c.k,
        "edges": [[u, v, col] for u, v, col in c.edges()],
    }
    return json.dumps(payload, separators=(",", ":"))


def deserialize_json(text: str) -> Coloring:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    for key in ("n", "k", "edges"):
        if key not in payload:
            raise ParseError(f"missing key {key!r}")
    n, k = payload["n"], payload["k"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvariantViolation(f"bad vertex count {n!r}")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise InvariantViolation(f"bad color count {k!r}")
    expected = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = payload["edges"]
    if not isinstance(edges, list) or len(edges) != len(expected):
        raise InvariantViolation(f"expected {len(expected)} edge entries")
    arr = [0] * total_edges(n)
    for (eu, ev), item in zip(expected, edges):
        if not (
            isinstance(item, list)
            and len(item) == 3
            and all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise ParseError(f"bad edge entry {item!r}")
        u, v, col = item
        if (u, v) != (eu, ev):
            raise InvariantViolation(f"edge ({u}, {v}) out of order; expected ({eu}, {ev})")
        if not (1 <= col <= k):
            raise InvariantViolation(f"color {col} out of range 1..{k}")
        arr[edge_index(u, v)] = col
    return Coloring(n, arr, k=k)
