"""Character-level word distances.

Characters are Unicode scalar values (Python ``str`` code points) after NFC
composition. Grapheme clusters are *not* treated as units, so a base letter
plus a combining mark that has no precomposed form counts as two characters.
"""

import unicodedata

from .errors import EmptyWord

__all__ = ["normalize", "levenshtein", "normalized_distance"]


def normalize(raw: str) -> str:
    """Return the canonical form of a word: NFC, case-folded, trimmed.

    >>> normalize("  NU  ")
    'nu'
    """
    word = unicodedata.normalize("NFC", raw).strip()
    if not word:
        raise EmptyWord(raw)
    # casefold() can decompose (e.g. German sharp s stays "ss", but some
    # letters gain combining marks), so recompose afterwards.
    return unicodedata.normalize("NFC", word.casefold()).strip()


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions and
    substitutions turning ``a`` into ``b`` (all costs 1).

    After stripping the common prefix and suffix, the shorter word is
    encoded as bit masks and the longer one is scanned once with the
    bit-parallel recurrence of Myers (1999) in Hyyrö's formulation, so the
    cost is O(len(b)) big-integer operations.
    """
    if a == b:
        return 0
    start = 0
    stop = min(len(a), len(b))
    while start < stop and a[start] == b[start]:
        start += 1
    end_a, end_b = len(a), len(b)
    while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
        end_a -= 1
        end_b -= 1
    a = a[start:end_a]
    b = b[start:end_b]
    if len(a) > len(b):
        a, b = b, a
    m = len(a)
    if m == 0:
        return len(b)

    peq: dict[str, int] = {}
    for i, ch in enumerate(a):
        peq[ch] = peq.get(ch, 0) | (1 << i)
    full = (1 << m) - 1
    top = 1 << (m - 1)
    pv, mv, score = full, 0, m
    for ch in b:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & full)
        mh = pv & xh
        if ph & top:
            score += 1
        elif mh & top:
            score -= 1
        ph = ((ph << 1) | 1) & full
        mh = (mh << 1) & full
        pv = mh | (~(xv | ph) & full)
        mv = ph & xv
    return score


def normalized_distance(a: str, b: str) -> float:
    """Edit distance divided by the length of the longer word, in [0, 1]."""
    longest = max(len(a), len(b))
    if longest == 0:
        raise EmptyWord("")
    return levenshtein(a, b) / longest
