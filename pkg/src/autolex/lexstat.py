"""Language distances, meaning stability and list-length analysis.

Every quantity here is an average of normalized word distances between
languages. Gaps in the data are handled by averaging over the pairs that
are actually available, and the number of compared items is kept next to
each value (``support`` / ``pairs``) so callers can filter thin results.

Sums are taken with ``math.fsum``, which is correctly rounded and therefore
independent of summation order: permuting languages or meanings, or
selecting every meaning through a ranked list, reproduces the same bits.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .editdist import normalize, normalized_distance
from .errors import (
    DataError,
    DegenerateVariance,
    DuplicateIdentifier,
    EmptyDataset,
    InsufficientCoverage,
    LabelMismatch,
    NoSharedMeanings,
)

__all__ = [
    "SynonymPolicy",
    "FamilyDataset",
    "PairMatrix",
    "DistanceMatrix",
    "StabilityTable",
    "cell_distance",
    "language_distance",
    "stability",
    "rank_meanings",
    "truncated_distance",
    "correlation",
    "correlation_curve",
    "default_grid",
]


class SynonymPolicy(str, enum.Enum):
    """How to compare two cells that may hold several forms.

    FIRST compares the first-listed forms only; MIN takes the closest pair
    over the cross product of forms.
    """

    FIRST = "first"
    MIN = "min"


def _as_cell(value) -> tuple[str, ...] | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = [value]
    forms = tuple(normalize(v) for v in value)
    if not forms:
        return None
    return forms


@dataclass(frozen=True)
class FamilyDataset:
    """N languages by M meanings; each cell is ``None`` (missing) or a tuple
    of normalized word forms.

    Cells may be given as ``None``, a single string or a sequence of strings;
    they are normalized on construction.
    """

    languages: tuple[str, ...]
    meanings: tuple[str, ...]
    cells: tuple[tuple[tuple[str, ...] | None, ...], ...]

    def __post_init__(self):
        languages = tuple(self.languages)
        meanings = tuple(self.meanings)
        for kind, ids in (("language", languages), ("meaning", meanings)):
            seen = set()
            for ident in ids:
                if ident in seen:
                    raise DuplicateIdentifier(kind, ident)
                seen.add(ident)
        if len(languages) < 2:
            raise EmptyDataset(f"need at least 2 languages, got {len(languages)}")
        if not meanings:
            raise EmptyDataset("need at least 1 meaning")
        if len(self.cells) != len(languages):
            raise DataError(f"{len(self.cells)} cell rows for {len(languages)} languages")

        rows = []
        for lang, row in zip(languages, self.cells):
            row = tuple(row)
            if len(row) != len(meanings):
                raise DataError(f"language {lang!r} has {len(row)} cells, expected {len(meanings)}")
            row = tuple(_as_cell(c) for c in row)
            if all(c is None for c in row):
                raise DataError(f"language {lang!r} has no present cell")
            rows.append(row)

        object.__setattr__(self, "languages", languages)
        object.__setattr__(self, "meanings", meanings)
        object.__setattr__(self, "cells", tuple(rows))

    @classmethod
    def from_mapping(cls, data: Mapping[str, Mapping[str, object]], meanings: Sequence[str] | None = None):
        """Build from ``{language: {meaning: forms}}``; absent keys are missing."""
        if meanings is None:
            meanings = list(dict.fromkeys(m for row in data.values() for m in row))
        languages = list(data)
        cells = [[data[lang].get(m) for m in meanings] for lang in languages]
        return cls(tuple(languages), tuple(meanings), tuple(map(tuple, cells)))

    @property
    def n_languages(self) -> int:
        return len(self.languages)

    @property
    def n_meanings(self) -> int:
        return len(self.meanings)

    def cell(self, language: str, meaning: str):
        return self.cells[self.languages.index(language)][self.meanings.index(meaning)]

    def meaning_mask(self, selection: Iterable[str] | None) -> np.ndarray:
        """Boolean mask over ``meanings`` for a selection of identifiers."""
        if selection is None:
            return np.ones(self.n_meanings, dtype=bool)
        index = {m: i for i, m in enumerate(self.meanings)}
        mask = np.zeros(self.n_meanings, dtype=bool)
        for m in selection:
            try:
                mask[index[m]] = True
            except KeyError:
                raise DataError(f"unknown meaning {m!r}") from None
        return mask


def cell_distance(a: Sequence[str], b: Sequence[str], policy: SynonymPolicy = SynonymPolicy.FIRST) -> float:
    policy = SynonymPolicy(policy)
    if policy is SynonymPolicy.FIRST:
        return normalized_distance(a[0], b[0])
    return min(normalized_distance(x, y) for x in a for y in b)


class PairMatrix:
    """Symmetric N x N matrix with a zero diagonal and labelled rows."""

    def __init__(self, labels: Sequence[str], values):
        self.labels = tuple(labels)
        values = np.array(values, dtype=float)
        n = len(self.labels)
        if values.shape != (n, n):
            raise ValueError(f"matrix shape {values.shape} does not match {n} labels")
        values.setflags(write=False)
        self.values = values
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, pair):
        a, b = pair
        return float(self.values[self._index[a], self._index[b]])

    def index(self, label: str) -> int:
        return self._index[label]

    def pairs(self):
        """Label pairs in upper-triangular row-major order."""
        return list(itertools.combinations(self.labels, 2))

    def upper(self) -> np.ndarray:
        i, j = np.triu_indices(len(self.labels), k=1)
        return self.values[i, j]

    def reorder(self, labels: Sequence[str]):
        """Same matrix with rows/columns permuted to ``labels``."""
        if set(labels) != set(self.labels) or len(labels) != len(self.labels):
            raise LabelMismatch(f"label sets differ: {sorted(self.labels)} vs {sorted(labels)}")
        idx = [self._index[lab] for lab in labels]
        return self._with(labels, self.values[np.ix_(idx, idx)], idx)

    def _with(self, labels, values, idx):
        return type(self)(labels, values)

    def __repr__(self):
        return f"{type(self).__name__}(labels={list(self.labels)!r})"


class DistanceMatrix(PairMatrix):
    """Lexical distances in [0, 1]; ``support[i, j]`` is the number of
    meanings that contributed to entry (i, j)."""

    def __init__(self, labels, values, support=None):
        super().__init__(labels, values)
        n = len(self.labels)
        if support is None:
            support = np.zeros((n, n), dtype=int)
        support = np.array(support, dtype=int)
        support.setflags(write=False)
        self.support = support

    def _with(self, labels, values, idx):
        return DistanceMatrix(labels, values, self.support[np.ix_(idx, idx)])


@dataclass(frozen=True)
class StabilityTable:
    """Per-meaning stability ``S`` with the number of language pairs that
    contributed and the rank (1 = most stable)."""

    meanings: tuple[str, ...]
    values: np.ndarray
    pairs: np.ndarray
    ranks: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.ranks is None:
            order = _rank_order(self.meanings, self.values)
            ranks = np.empty(len(self.meanings), dtype=int)
            ranks[order] = np.arange(1, len(order) + 1)
            object.__setattr__(self, "ranks", ranks)

    def __getitem__(self, meaning: str) -> float:
        return float(self.values[self.meanings.index(meaning)])

    def rows(self):
        """``(meaning, S, pairs, rank)`` tuples in rank order."""
        for i in np.argsort(self.ranks, kind="stable"):
            yield self.meanings[i], float(self.values[i]), int(self.pairs[i]), int(self.ranks[i])


def _rank_order(meanings, values):
    return sorted(range(len(meanings)), key=lambda i: (-values[i], meanings[i]))


# Per-meaning, per-language-pair distance table. Rows follow dataset meaning
# order, columns follow upper-triangular language pair order; NaN marks pairs
# where either cell is missing. Everything else is a reduction of this table.
def _pair_table(ds: FamilyDataset, policy) -> np.ndarray:
    policy = SynonymPolicy(policy)
    pairs = list(itertools.combinations(range(ds.n_languages), 2))
    table = np.full((ds.n_meanings, len(pairs)), np.nan)
    for m in range(ds.n_meanings):
        column = [row[m] for row in ds.cells]
        for p, (a, b) in enumerate(pairs):
            ca, cb = column[a], column[b]
            if ca is not None and cb is not None:
                table[m, p] = cell_distance(ca, cb, policy)
    return table


def _exact_sums(rows: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(row[~np.isnan(row)]) for row in rows])


def _matrix_from_table(ds: FamilyDataset, table: np.ndarray, mask: np.ndarray) -> DistanceMatrix:
    if not mask.any():
        raise DataError("meaning selection is empty")
    selected = table[mask]
    present = ~np.isnan(selected)
    counts = present.sum(axis=0)
    sums = _exact_sums(selected.T)

    n = ds.n_languages
    iu, ju = np.triu_indices(n, k=1)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        p = empty[0]
        raise NoSharedMeanings(ds.languages[iu[p]], ds.languages[ju[p]])

    values = np.zeros((n, n))
    support = np.zeros((n, n), dtype=int)
    values[iu, ju] = values[ju, iu] = sums / counts
    support[iu, ju] = support[ju, iu] = counts
    return DistanceMatrix(ds.languages, values, support)


def language_distance(ds: FamilyDataset, meanings: Iterable[str] | None = None,
                      policy: SynonymPolicy = SynonymPolicy.FIRST) -> DistanceMatrix:
    """Average normalized word distance between every pair of languages.

    ``meanings`` selects a subset of meaning identifiers (default: all). The
    average for a pair runs over the selected meanings present in both
    languages.
    """
    mask = ds.meaning_mask(meanings)
    return _matrix_from_table(ds, _pair_table(ds, policy), mask)


def _stability_from_table(ds: FamilyDataset, table: np.ndarray) -> StabilityTable:
    present = ~np.isnan(table)
    counts = present.sum(axis=1)
    for m, meaning in enumerate(ds.meanings):
        if counts[m] == 0:
            n_present = sum(row[m] is not None for row in ds.cells)
            raise InsufficientCoverage(meaning, n_present)
    sums = _exact_sums(table)
    return StabilityTable(ds.meanings, 1.0 - sums / counts, counts)


def stability(ds: FamilyDataset, policy: SynonymPolicy = SynonymPolicy.FIRST) -> StabilityTable:
    """Stability of each meaning: one minus the mean distance between its
    words over all language pairs where both words are present.

    High values mean slow lexical replacement.
    """
    return _stability_from_table(ds, _pair_table(ds, policy))


def rank_meanings(t: StabilityTable) -> list[str]:
    """Meanings by decreasing stability; ties by ascending identifier."""
    return [t.meanings[i] for i in _rank_order(t.meanings, t.values)]


def _top_mask(ds: FamilyDataset, t: StabilityTable, n: int) -> np.ndarray:
    if not 1 <= n <= ds.n_meanings:
        raise ValueError(f"n must be in [1, {ds.n_meanings}], got {n}")
    return ds.meaning_mask(rank_meanings(t)[:n])


def truncated_distance(ds: FamilyDataset, t: StabilityTable, n: int,
                       policy: SynonymPolicy = SynonymPolicy.FIRST) -> DistanceMatrix:
    """Distance matrix using only the ``n`` most stable meanings of ``t``."""
    return _matrix_from_table(ds, _pair_table(ds, policy), _top_mask(ds, t, n))


def correlation(m1: PairMatrix, m2: PairMatrix) -> float:
    """Pearson correlation between the off-diagonal entries of two matrices.

    ``m2`` is aligned to ``m1``'s label order first.
    """
    if m1.labels != m2.labels:
        m2 = m2.reorder(m1.labels)
    x = m1.upper()
    y = m2.upper()
    if x.size < 2:
        raise DegenerateVariance("need at least 3 languages (2 distinct pairs) to correlate")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance("matrix entries are constant")
    # sqrt(s*s) == s exactly in IEEE arithmetic, so identical inputs give 1.0.
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def default_grid(n_meanings: int, step: int = 10) -> list[int]:
    """``step, 2*step, ..., n_meanings`` (always ending at ``n_meanings``)."""
    grid = list(range(step, n_meanings, step))
    grid.append(n_meanings)
    return grid


def correlation_curve(ds: FamilyDataset, t: StabilityTable, grid: Iterable[int] | None = None,
                      policy: SynonymPolicy = SynonymPolicy.FIRST) -> list[tuple[int, float]]:
    """``(n, c(n))`` where c(n) correlates top-``n`` distances with full-list
    distances."""
    grid = default_grid(ds.n_meanings) if grid is None else list(grid)
    table = _pair_table(ds, policy)
    full = _matrix_from_table(ds, table, _top_mask(ds, t, ds.n_meanings))
    return [(n, correlation(_matrix_from_table(ds, table, _top_mask(ds, t, n)), full)) for n in grid]
