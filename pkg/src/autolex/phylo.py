"""Rooted trees: UPGMA construction, Newick I/O and Robinson-Foulds distance.

Trees are immutable. Each node stores the length of the edge above it and
its height (distance down to its deepest leaf). The Robinson-Foulds
difference here is the *rooted* variant: the size of the symmetric
difference of the two clade sets. On the same pair of trees it is not equal
to the unrooted bipartition count.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DuplicateLeaf, LeafSetMismatch, ParseError
from .lexstat import (
    FamilyDataset,
    PairMatrix,
    StabilityTable,
    SynonymPolicy,
    _matrix_from_table,
    _pair_table,
    _top_mask,
    default_grid,
)

__all__ = [
    "Node",
    "Tree",
    "upgma",
    "newick_serialize",
    "newick_parse",
    "clades",
    "rf_difference",
    "rf_curve",
]


@dataclass(frozen=True, eq=False)
class Node:
    label: str | None = None
    children: tuple[Node, ...] = ()
    length: float = 0.0
    height: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @cached_property
    def leaf_labels(self) -> frozenset[str]:
        if self.is_leaf:
            return frozenset([self.label])
        return frozenset().union(*(c.leaf_labels for c in self.children))

    @cached_property
    def min_label(self) -> str:
        return min(self.leaf_labels)

    def iter_nodes(self) -> Iterator[Node]:
        """Pre-order traversal, children in canonical (smallest leaf label) order."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(canonical_children(node)))


def canonical_children(node: Node) -> list[Node]:
    return sorted(node.children, key=lambda c: c.min_label)


class Tree:
    """A rooted tree with uniquely labelled leaves."""

    def __init__(self, root: Node):
        self.root = root
        seen = set()
        for node in root.iter_nodes():
            if node.is_leaf:
                if node.label is None:
                    raise ValueError("leaf without label")
                if node.label in seen:
                    raise DuplicateLeaf(node.label)
                seen.add(node.label)

    @property
    def leaf_labels(self) -> frozenset[str]:
        return self.root.leaf_labels

    def nodes(self) -> Iterator[Node]:
        return self.root.iter_nodes()

    def leaves(self) -> list[Node]:
        return [n for n in self.nodes() if n.is_leaf]

    def internal_nodes(self) -> list[Node]:
        return [n for n in self.nodes() if not n.is_leaf]

    def root_to_leaf(self) -> dict[str, float]:
        """Path length from the root to every leaf."""
        out = {}
        stack = [(self.root, 0.0)]
        while stack:
            node, depth = stack.pop()
            if node.is_leaf:
                out[node.label] = depth
            for child in node.children:
                stack.append((child, depth + child.length))
        return out

    def clade_heights(self) -> dict[frozenset[str], float]:
        return {n.leaf_labels: n.height for n in self.internal_nodes()}

    def newick(self) -> str:
        return newick_serialize(self)

    def __repr__(self):
        return f"Tree({newick_serialize(self)!r})"


def _key_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def upgma(m: PairMatrix) -> Tree:
    """Average-linkage clustering into a rooted ultrametric tree.

    At each step the two clusters with the smallest average distance merge
    into a node at half that distance. Among exactly tied candidates the
    pair whose smallest leaf labels sort first wins.
    """
    n = len(m.labels)
    if n < 2:
        raise ValueError("need at least 2 taxa")
    dist = np.array(m.values, dtype=float)
    if not np.all(np.isfinite(dist)) or np.any(dist < 0):
        raise ValueError("distances must be finite and non-negative")

    nodes: list[Node | None] = [Node(label=lab) for lab in m.labels]
    sizes = [1] * n
    active = list(range(n))

    while len(active) > 1:
        sub = dist[np.ix_(active, active)]
        iu, ju = np.triu_indices(len(active), k=1)
        vals = sub[iu, ju]
        best = vals.min()
        candidates = np.flatnonzero(vals == best)
        pick = min(
            candidates,
            key=lambda c: _key_pair(nodes[active[iu[c]]].min_label, nodes[active[ju[c]]].min_label),
        )
        i, j = active[iu[pick]], active[ju[pick]]

        height = best / 2.0
        left, right = sorted((nodes[i], nodes[j]), key=lambda c: c.min_label)
        kids = tuple(
            Node(c.label, c.children, max(0.0, height - c.height), c.height) for c in (left, right)
        )
        nodes[i] = Node(None, kids, 0.0, height)
        nodes[j] = None

        si, sj = sizes[i], sizes[j]
        merged = (si * dist[i] + sj * dist[j]) / (si + sj)
        dist[i, :] = merged
        dist[:, i] = merged
        dist[i, i] = 0.0
        sizes[i] = si + sj
        active.remove(j)

    return Tree(nodes[active[0]])


# -- Newick -----------------------------------------------------------------

_SPECIAL = set("()[]':;, \t\r\n")


def _format_label(label: str) -> str:
    if label and not any(ch in _SPECIAL for ch in label):
        return label
    return "'" + label.replace("'", "''") + "'"


def _format_length(x: float) -> str:
    if x == 0:
        return "0"
    return format(x, ".12g")


def newick_serialize(t: Tree) -> str:
    """Newick text with branch lengths; children ordered by smallest leaf label."""
    out = []

    def emit(node: Node, is_root: bool):
        if node.is_leaf:
            out.append(_format_label(node.label))
        else:
            out.append("(")
            for k, child in enumerate(canonical_children(node)):
                if k:
                    out.append(",")
                emit(child, False)
            out.append(")")
            if node.label is not None:
                out.append(_format_label(node.label))
        if not is_root:
            out.append(":")
            out.append(_format_length(node.length))

    emit(t.root, True)
    out.append(";")
    return "".join(out)


class _NewickReader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message, pos=None):
        return ParseError(self.pos if pos is None else pos, message)

    def skip(self):
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "[":
                end = text.find("]", self.pos)
                if end < 0:
                    raise self.error("unterminated comment")
                self.pos = end + 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def label(self) -> str | None:
        ch = self.peek()
        if ch == "'":
            start = self.pos
            self.pos += 1
            parts = []
            while True:
                end = self.text.find("'", self.pos)
                if end < 0:
                    raise self.error("unterminated quoted label", start)
                parts.append(self.text[self.pos:end])
                self.pos = end + 1
                if self.text.startswith("'", self.pos):
                    parts.append("'")
                    self.pos += 1
                else:
                    return "".join(parts)
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _SPECIAL:
            self.pos += 1
        return self.text[start:self.pos] or None

    def length(self) -> float:
        if self.peek() != ":":
            return 0.0
        self.pos += 1
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _SPECIAL:
            self.pos += 1
        token = self.text[start:self.pos]
        try:
            value = float(token)
        except ValueError:
            raise self.error(f"invalid branch length {token!r}", start) from None
        if not math.isfinite(value) or value < 0:
            raise self.error(f"branch length must be finite and non-negative, got {token!r}", start)
        return value

    def subtree(self) -> Node:
        if self.peek() == "(":
            self.pos += 1
            children = [self.subtree()]
            while self.peek() == ",":
                self.pos += 1
                children.append(self.subtree())
            self.expect(")")
            label = self.label()
            length = self.length()
            height = max(c.height + c.length for c in children)
            return Node(label, tuple(children), length, height)
        start = self.pos
        label = self.label()
        if label is None:
            raise self.error("missing leaf label", start)
        return Node(label, (), self.length(), 0.0)

    def tree(self) -> Tree:
        if not self.peek():
            raise self.error("empty input")
        root = self.subtree()
        self.expect(";")
        if self.peek():
            raise self.error("trailing characters after ';'")
        if root.length:
            root = Node(root.label, root.children, 0.0, root.height)
        return Tree(root)


def newick_parse(s: str) -> Tree:
    """Parse one Newick tree. Missing branch lengths default to 0; quoted
    labels and ``[...]`` comments are understood. Multifurcations are kept.
    """
    return _NewickReader(s).tree()


# -- Robinson-Foulds ----------------------------------------------------------

def clades(t: Tree) -> frozenset[frozenset[str]]:
    """Leaf sets of internal nodes, excluding singletons and the full set."""
    full = len(t.leaf_labels)
    return frozenset(
        n.leaf_labels for n in t.internal_nodes() if 2 <= len(n.leaf_labels) < full
    )


def rf_difference(t1: Tree, t2: Tree) -> int:
    if t1.leaf_labels != t2.leaf_labels:
        only1 = sorted(t1.leaf_labels - t2.leaf_labels)
        only2 = sorted(t2.leaf_labels - t1.leaf_labels)
        raise LeafSetMismatch(f"leaf sets differ: only in first {only1}, only in second {only2}")
    return len(clades(t1) ^ clades(t2))


def rf_curve(ds: FamilyDataset, t: StabilityTable, grid: Iterable[int] | None = None,
             policy: SynonymPolicy = SynonymPolicy.FIRST) -> list[tuple[int, int]]:
    """``(n, RF)`` between the UPGMA tree on the top-``n`` meanings and the
    tree on the full list."""
    grid = default_grid(ds.n_meanings) if grid is None else list(grid)
    table = _pair_table(ds, policy)
    reference = upgma(_matrix_from_table(ds, table, _top_mask(ds, t, ds.n_meanings)))
    return [
        (n, rf_difference(upgma(_matrix_from_table(ds, table, _top_mask(ds, t, n))), reference))
        for n in grid
    ]
