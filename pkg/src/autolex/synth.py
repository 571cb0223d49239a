"""Synthetic language families with known history.

A Yule tree supplies the genealogy. Each meaning then evolves down the tree
independently: on an edge of length ``t`` the word is replaced outright by a
fresh random word with probability ``1 - exp(-rate * t)``, otherwise each of
its characters drifts to a different letter with probability
``1 - exp(-mutation_rate * t)``. Borrowing between branches is not modelled.

Randomness for a given (meaning, edge) pair comes from its own stream
derived from the master seed, so the output does not depend on traversal
order.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .editdist import normalized_distance
from .lexstat import FamilyDataset
from .phylo import Node, Tree

__all__ = [
    "EvolutionParams",
    "generate_tree",
    "evolve",
    "two_rate_rates",
    "simulate_family",
    "random_word_baseline",
]

DEFAULT_ALPHABET = string.ascii_lowercase


@dataclass(frozen=True)
class EvolutionParams:
    rates: tuple[float, ...]
    mutation_rate: float = 0.1
    alphabet: str = DEFAULT_ALPHABET
    word_length_range: tuple[int, int] = (3, 8)
    seed: int = 0
    meanings: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        rates = tuple(float(r) for r in self.rates)
        if not rates:
            raise ValueError("need at least one meaning rate")
        if any(not np.isfinite(r) or r < 0 for r in rates):
            raise ValueError("rates must be finite and non-negative")
        if not (np.isfinite(self.mutation_rate) and self.mutation_rate >= 0):
            raise ValueError("mutation_rate must be finite and non-negative")
        if not self.alphabet:
            raise ValueError("alphabet is empty")
        lo, hi = self.word_length_range
        if not 1 <= lo <= hi:
            raise ValueError(f"invalid word length range {self.word_length_range}")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "alphabet", "".join(dict.fromkeys(self.alphabet)))
        if self.meanings is not None:
            meanings = tuple(self.meanings)
            if len(meanings) != len(rates):
                raise ValueError("meanings and rates differ in length")
            object.__setattr__(self, "meanings", meanings)

    def meaning_ids(self) -> tuple[str, ...]:
        if self.meanings is not None:
            return self.meanings
        width = len(str(len(self.rates) - 1))
        return tuple(f"m{i:0{width}d}" for i in range(len(self.rates)))


def generate_tree(n_leaves: int, seed, height: float = 1.0) -> Tree:
    """Random Yule tree scaled to root height ``height``.

    Starting from one lineage that splits at the root, each step waits an
    exponential time with rate equal to the number of lineages and then
    splits one lineage chosen uniformly. After the last split all lineages
    run on for one more waiting time. Leaves are labelled ``L01``, ``L02``,
    ... in depth-first order.
    """
    if n_leaves < 2:
        raise ValueError("n_leaves must be at least 2")
    if not height > 0:
        raise ValueError("height must be positive")
    rng = np.random.default_rng(seed)

    # start time per lineage; split time and daughter ids for lineages that split
    start = {0: 0.0}
    split: dict[int, tuple[float, tuple[int, int]]] = {}
    pending = [0]
    now = 0.0
    next_id = 1
    while True:
        k = rng.integers(len(pending)) if len(pending) > 1 else 0
        lineage = pending.pop(int(k))
        kids = (next_id, next_id + 1)
        next_id += 2
        split[lineage] = (now, kids)
        for kid in kids:
            start[kid] = now
            pending.append(kid)
        if len(pending) == n_leaves:
            break
        now += rng.exponential(1.0 / len(pending))
    end = now + rng.exponential(1.0 / len(pending))
    scale = height / end

    labels = iter(f"L{i:0{len(str(n_leaves))}d}" for i in range(1, n_leaves + 1))
    # two passes: assign labels in depth-first order, then build bottom-up
    order = []
    stack = [0]
    while stack:
        lin = stack.pop()
        order.append(lin)
        if lin in split:
            stack.extend(reversed(split[lin][1]))
    leaf_label = {lin: next(labels) for lin in order if lin not in split}

    built: dict[int, Node] = {}
    for lin in reversed(order):
        stop = split[lin][0] if lin in split else end
        length = (stop - start[lin]) * scale
        node_height = (end - stop) * scale
        if lin in split:
            kids = tuple(built.pop(c) for c in split[lin][1])
            built[lin] = Node(None, kids, length, node_height)
        else:
            built[lin] = Node(leaf_label[lin], (), length, 0.0)
    root = built[0]
    return Tree(Node(None, root.children, 0.0, root.height))


def _stream(seed: int, meaning: int, edge: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(meaning, edge)))


def _random_word(rng: np.random.Generator, alphabet: str, lengths: tuple[int, int]) -> str:
    size = int(rng.integers(lengths[0], lengths[1] + 1))
    return "".join(alphabet[i] for i in rng.integers(len(alphabet), size=size))


def _drift(word: str, p: float, rng: np.random.Generator, alphabet: str) -> str:
    if p == 0.0 or len(alphabet) < 2:
        return word
    hits = rng.random(len(word)) < p
    shifts = rng.integers(1, len(alphabet), size=len(word))
    out = []
    for ch, hit, shift in zip(word, hits, shifts):
        if hit:
            ch = alphabet[(alphabet.index(ch) + int(shift)) % len(alphabet)]
        out.append(ch)
    return "".join(out)


def evolve(tree: Tree, params: EvolutionParams) -> FamilyDataset:
    """Evolve one word per meaning down ``tree``; leaves become languages."""
    # edge ids: pre-order position of the child node, root = 0
    nodes = list(tree.nodes())
    edge_id = {id(node): k for k, node in enumerate(nodes)}
    leaves = sorted((n for n in nodes if n.is_leaf), key=lambda n: n.label)
    alphabet = params.alphabet

    columns = []
    for m, rate in enumerate(params.rates):
        root_word = _random_word(_stream(params.seed, m, 0), alphabet, params.word_length_range)
        words = {id(tree.root): root_word}
        for node in nodes:
            parent_word = words[id(node)]
            for child in node.children:
                rng = _stream(params.seed, m, edge_id[id(child)])
                t = child.length
                if rng.random() < -np.expm1(-rate * t):
                    word = _random_word(rng, alphabet, params.word_length_range)
                else:
                    word = _drift(parent_word, -np.expm1(-params.mutation_rate * t), rng, alphabet)
                words[id(child)] = word
        columns.append([words[id(leaf)] for leaf in leaves])

    cells = tuple(tuple(col[k] for col in columns) for k in range(len(leaves)))
    return FamilyDataset(tuple(leaf.label for leaf in leaves), params.meaning_ids(), cells)


def two_rate_rates(n_meanings: int, slow: float, fast: float, fraction_slow: float, seed) -> np.ndarray:
    """Rates for a two-class family; which meanings are slow is shuffled by
    ``seed`` so that meaning identifiers carry no information."""
    if not 0 <= fraction_slow <= 1:
        raise ValueError("fraction_slow must be in [0, 1]")
    n_slow = int(round(fraction_slow * n_meanings))
    rates = np.full(n_meanings, float(fast))
    rng = np.random.default_rng([int(seed), 1])
    rates[rng.permutation(n_meanings)[:n_slow]] = slow
    return rates


def simulate_family(n_languages: int, n_meanings: int, slow: float = 0.05, fast: float = 1.0,
                    fraction_slow: float = 0.5, mutation_rate: float = 0.1, seed: int = 0,
                    height: float = 1.0, **kwargs):
    """Tree, per-meaning rates and evolved dataset for a two-rate family.

    Returns ``(dataset, tree, rates)``; ``rates[i]`` belongs to
    ``dataset.meanings[i]``.
    """
    tree = generate_tree(n_languages, np.random.SeedSequence(seed, spawn_key=(2**31,)), height)
    rates = two_rate_rates(n_meanings, slow, fast, fraction_slow, seed)
    params = EvolutionParams(tuple(rates), mutation_rate=mutation_rate, seed=seed, **kwargs)
    return evolve(tree, params), tree, rates


def random_word_baseline(alphabet: str = DEFAULT_ALPHABET, word_length_range: tuple[int, int] = (3, 8),
                         samples: int = 20000, seed: int = 0) -> float:
    """Monte-Carlo mean normalized distance between two independent random words."""
    rng = np.random.default_rng(seed)
    total = 0.0
    for _ in range(samples):
        total += normalized_distance(
            _random_word(rng, alphabet, word_length_range),
            _random_word(rng, alphabet, word_length_range),
        )
    return total / samples

