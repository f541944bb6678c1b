"""Rooted level-uniform trees over a bounded domain.

A tree of height H is described by branching factors (n_1, ..., n_H): level 0
holds the single root, and every node at level i-1 has n_i children, so level
i holds n_1 * ... * n_i nodes and the leaves (level H) split the domain into
equal-width bins.  Nodes are identified by their index path from the root,
e.g. () is the root and (2, 1) is the first child of the root's second child.

Besides interval and count bookkeeping, this module computes the two node
sets every mechanism is assembled from:

* ``covering(leaf)``    -- minimal breadth-first node set whose intervals tile
  the prefix interval [lo, right edge of leaf);
* ``right_covering(leaf)`` -- the analogous tiling of the complement
  [right edge of leaf, hi).

Everything here is a pure function of immutable values and safe to share
across threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

NodePath = tuple[int, ...]

ROOT: NodePath = ()


@dataclass(frozen=True)
class DomainInterval:
    """Half-open interval [lo, hi) bounding the data."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("interval endpoints must be finite")
        if not lo < hi:
            raise ValueError(f"not an interval: [{lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x < self.hi


@dataclass(frozen=True)
class TreeShape:
    """Branching factors (n_1, ..., n_H) of a level-uniform tree."""

    branching: tuple[int, ...]

    def __post_init__(self) -> None:
        branching = tuple(self.branching)
        if not branching:
            raise ValueError("at least one branching factor is required")
        for n in branching:
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
                raise ValueError(f"branching factors must be integers >= 2, got {n!r}")
        object.__setattr__(self, "branching", tuple(int(n) for n in branching))

    @property
    def height(self) -> int:
        return len(self.branching)

    @property
    def leaf_count(self) -> int:
        return math.prod(self.branching)

    @property
    def node_count(self) -> int:
        total, width = 1, 1
        for n in self.branching:
            width *= n
            total += width
        return total

    def level_size(self, level: int) -> int:
        if not 0 <= level <= self.height:
            raise ValueError(f"no level {level} in a tree of height {self.height}")
        return math.prod(self.branching[:level])

    def level_nodes(self, level: int) -> Iterator[NodePath]:
        """Nodes of one level in lexicographic order."""
        self.level_size(level)
        return itertools.product(*(range(1, n + 1) for n in self.branching[:level]))

    def iter_nodes(self) -> Iterator[NodePath]:
        """All nodes in breadth-first order, lexicographic within a level."""
        for level in range(self.height + 1):
            yield from self.level_nodes(level)

    def validate_path(self, path: Sequence[int]) -> NodePath:
        path = tuple(path)
        if len(path) > self.height:
            raise ValueError(f"path {path!r} is deeper than the tree height {self.height}")
        for depth, j in enumerate(path):
            if not isinstance(j, (int, np.integer)) or isinstance(j, bool):
                raise ValueError(f"path {path!r} has non-integer entries")
            if not 1 <= j <= self.branching[depth]:
                raise ValueError(
                    f"path {path!r}: index {j} out of range 1..{self.branching[depth]} "
                    f"at depth {depth + 1}"
                )
        return tuple(int(j) for j in path)

    def leaf_index(self, leaf: Sequence[int]) -> int:
        """Zero-based bin index of a leaf, in left-to-right order."""
        leaf = self.validate_path(leaf)
        _require_leaf(self, leaf)
        idx, span = 0, self.leaf_count
        for depth, j in enumerate(leaf):
            span //= self.branching[depth]
            idx += (j - 1) * span
        return idx

    def leaf_path(self, index: int) -> NodePath:
        """Inverse of :meth:`leaf_index`."""
        if not 0 <= index < self.leaf_count:
            raise ValueError(f"leaf index {index} out of range")
        path, span = [], self.leaf_count
        for n in self.branching:
            span //= n
            path.append(index // span + 1)
            index %= span
        return tuple(path)


def build_tree(branching: Sequence[int]) -> TreeShape:
    """Validate branching factors and return the tree shape they define."""
    return TreeShape(tuple(branching))


def parent(path: NodePath) -> NodePath:
    if not path:
        raise ValueError("the root has no parent")
    return path[:-1]


def children(shape: TreeShape, path: Sequence[int]) -> tuple[NodePath, ...]:
    path = shape.validate_path(path)
    if len(path) == shape.height:
        return ()
    n = shape.branching[len(path)]
    return tuple(path + (j,) for j in range(1, n + 1))


def node_interval(shape: TreeShape, domain: DomainInterval, path: Sequence[int]) -> DomainInterval:
    """Half-open interval associated with a node.

    The root owns the whole domain; child j of a node with interval [lo, hi)
    owns the j-th of n equal parts.  First/last children reuse the parent
    endpoints bit-for-bit so that sibling intervals tile the parent exactly.
    """
    path = shape.validate_path(path)
    lo, hi = domain.lo, domain.hi
    for depth, j in enumerate(path):
        n = shape.branching[depth]
        width = hi - lo
        new_lo = lo if j == 1 else lo + width * (j - 1) / n
        new_hi = hi if j == n else lo + width * j / n
        lo, hi = new_lo, new_hi
    return DomainInterval(lo, hi)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Real-valued samples confined to a half-open domain interval."""

    samples: np.ndarray
    domain: DomainInterval

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValueError("samples must be a flat sequence")
        bad = np.nonzero(~((samples >= self.domain.lo) & (samples < self.domain.hi)))[0]
        if bad.size:
            raise ValueError(
                f"sample {samples[bad[0]]!r} (position {bad[0]}) lies outside "
                f"[{self.domain.lo}, {self.domain.hi})"
            )
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def N(self) -> int:
        return int(self.samples.size)


def leaf_bin_counts(shape: TreeShape, dataset: Dataset) -> np.ndarray:
    """Sample counts of the leaf bins, left to right."""
    counts, _ = np.histogram(
        dataset.samples, bins=shape.leaf_count, range=(dataset.domain.lo, dataset.domain.hi)
    )
    return counts.astype(np.int64)


def node_counts_bfs(shape: TreeShape, dataset: Dataset) -> np.ndarray:
    """Per-node sample counts in breadth-first node order (root first)."""
    per_level = [leaf_bin_counts(shape, dataset)]
    for n in reversed(shape.branching):
        per_level.append(per_level[-1].reshape(-1, n).sum(axis=1))
    per_level.reverse()
    return np.concatenate(per_level)


def exact_counts(shape: TreeShape, dataset: Dataset) -> dict[NodePath, int]:
    """Exact count of samples inside every node's interval.

    Internal counts are aggregated from the leaf bins, so the parent count
    always equals the sum of its children's counts.
    """
    values = node_counts_bfs(shape, dataset)
    return {path: int(c) for path, c in zip(shape.iter_nodes(), values)}


def bfs_paths(shape: TreeShape) -> tuple[NodePath, ...]:
    return tuple(shape.iter_nodes())


def level_offsets(shape: TreeShape) -> tuple[int, ...]:
    """Start index of each level within the breadth-first node order."""
    offsets = [0]
    for level in range(shape.height + 1):
        offsets.append(offsets[-1] + shape.level_size(level))
    return tuple(offsets)


def _require_leaf(shape: TreeShape, path: NodePath) -> None:
    if len(path) != shape.height:
        raise ValueError(f"{path!r} is not a leaf of a tree of height {shape.height}")


def _deepest_non_max(shape: TreeShape, leaf: NodePath) -> int:
    """Largest depth whose index is not the last child, 0 if the leaf is all-max."""
    for depth in range(shape.height, 0, -1):
        if leaf[depth - 1] != shape.branching[depth - 1]:
            return depth
    return 0


def covering(shape: TreeShape, leaf: Sequence[int]) -> tuple[NodePath, ...]:
    """Breadth-first node set whose intervals tile [lo, right edge of leaf).

    Closed form: the left siblings along the path, down to the deepest index
    that is not maximal, plus the path node at that depth.  The rightmost
    leaf is covered by the root alone.
    """
    leaf = shape.validate_path(leaf)
    _require_leaf(shape, leaf)
    tau = _deepest_non_max(shape, leaf)
    if tau == 0:
        return (ROOT,)
    out: list[NodePath] = []
    for depth in range(1, tau + 1):
        prefix = leaf[: depth - 1]
        out.extend(prefix + (s,) for s in range(1, leaf[depth - 1]))
    out.append(leaf[:tau])
    return tuple(out)


def right_covering(shape: TreeShape, leaf: Sequence[int]) -> tuple[NodePath, ...]:
    """Breadth-first node set whose intervals tile [right edge of leaf, hi).

    The mirror image of :func:`covering`: the right siblings along the path
    down to the deepest non-maximal index.  Empty for the rightmost leaf.
    """
    leaf = shape.validate_path(leaf)
    _require_leaf(shape, leaf)
    tau = _deepest_non_max(shape, leaf)
    out: list[NodePath] = []
    for depth in range(1, tau + 1):
        prefix = leaf[: depth - 1]
        n = shape.branching[depth - 1]
        out.extend(prefix + (s,) for s in range(leaf[depth - 1] + 1, n + 1))
    return tuple(out)
