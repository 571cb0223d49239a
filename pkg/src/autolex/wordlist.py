"""Tab-separated wordlist files.

Layout::

    language<TAB>meaning_1<TAB>...<TAB>meaning_M
    lang_a<TAB>form<TAB>...<TAB>form|synonym
    lang_b<TAB>?<TAB>...<TAB>form

An empty cell or ``?`` means the datum is missing. Several forms for one
meaning are separated by ``|``. Lines are numbered from 1 and columns from
1 in error messages. Blank lines and lines starting with ``#`` are skipped.
"""

from __future__ import annotations

import io
import os
from typing import IO

from .editdist import normalize
from .errors import DuplicateIdentifier, EmptyDataset, EmptyWord, FormatError
from .lexstat import FamilyDataset

__all__ = ["parse_wordlist", "read_wordlist", "write_wordlist", "format_wordlist"]

MISSING = "?"
SEPARATOR = "|"


def _parse_cell(text: str, line: int, column: int):
    text = text.strip()
    if text in ("", MISSING):
        return None
    forms = []
    for raw in text.split(SEPARATOR):
        try:
            forms.append(normalize(raw))
        except EmptyWord:
            raise FormatError(line, column, f"empty form in cell {text!r}") from None
    return tuple(forms)


def parse_wordlist(source: str | os.PathLike | IO[str]) -> FamilyDataset:
    """Read a wordlist from a path or an open text stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            return parse_wordlist(fh)

    header = None
    languages: list[str] = []
    rows = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(source, 1):
        line = line.rstrip("\r\n")
        if lineno == 1:
            line = line.lstrip("\ufeff")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if header is None:
            if fields[0].strip() != "language":
                raise FormatError(lineno, 1, f"header must start with 'language', found {fields[0]!r}")
            header = [f.strip() for f in fields[1:]]
            if not header:
                raise EmptyDataset("header lists no meanings")
            meaning_seen = {}
            for col, meaning in enumerate(header, 2):
                if not meaning:
                    raise FormatError(lineno, col, "empty meaning identifier")
                if meaning in meaning_seen:
                    raise DuplicateIdentifier("meaning", meaning, lineno)
                meaning_seen[meaning] = col
            continue

        if len(fields) != len(header) + 1:
            # first surplus column, or first absent one
            column = len(header) + 2 if len(fields) > len(header) + 1 else len(fields) + 1
            raise FormatError(lineno, column, f"expected {len(header) + 1} fields, found {len(fields)}")
        lang = fields[0].strip()
        if not lang:
            raise FormatError(lineno, 1, "empty language identifier")
        if lang in seen:
            raise DuplicateIdentifier("language", lang, lineno)
        seen[lang] = lineno
        cells = tuple(_parse_cell(text, lineno, col) for col, text in enumerate(fields[1:], 2))
        if all(c is None for c in cells):
            raise FormatError(lineno, 1, f"language {lang!r} has no present cell")
        languages.append(lang)
        rows.append(cells)

    if header is None:
        raise EmptyDataset("no header line")
    if len(languages) < 2:
        raise EmptyDataset(f"need at least 2 languages, found {len(languages)}")
    return FamilyDataset(tuple(languages), tuple(header), tuple(rows))


def read_wordlist(text: str) -> FamilyDataset:
    return parse_wordlist(io.StringIO(text))


def write_wordlist(ds: FamilyDataset, stream: IO[str]) -> None:
    stream.write("\t".join(("language",) + ds.meanings) + "\n")
    for lang, row in zip(ds.languages, ds.cells):
        cells = [MISSING if c is None else SEPARATOR.join(c) for c in row]
        stream.write("\t".join([lang] + cells) + "\n")


def format_wordlist(ds: FamilyDataset) -> str:
    buf = io.StringIO()
    write_wordlist(ds, buf)
    return buf.getvalue()
