"""Exception hierarchy.

Errors fall in three families that the command line maps to exit codes:
data/format problems (2), computation problems (3) and tree problems
(Newick parsing is treated as a format problem, tree comparison as a
computation problem).
"""


class AutolexError(Exception):
    pass


class DataError(AutolexError, ValueError):
    """Input data violates a dataset or file invariant."""


class EmptyWord(DataError):
    def __init__(self, raw=""):
        super().__init__(f"empty word: {raw!r}")
        self.raw = raw


class FormatError(DataError):
    def __init__(self, line, column, message):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class DuplicateIdentifier(DataError):
    def __init__(self, kind, identifier, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate {kind} identifier {identifier!r}{where}")
        self.kind = kind
        self.identifier = identifier
        self.line = line


class EmptyDataset(DataError):
    pass


class ComputationError(AutolexError, ArithmeticError):
    """A well-formed input for which the requested quantity is undefined."""


class NoSharedMeanings(ComputationError):
    def __init__(self, a, b):
        super().__init__(f"languages {a!r} and {b!r} share no present meaning in the selection")
        self.pair = (a, b)


class InsufficientCoverage(ComputationError):
    def __init__(self, meaning, present):
        super().__init__(f"meaning {meaning!r} is present in {present} language(s); need at least 2")
        self.meaning = meaning
        self.present = present


class DegenerateVariance(ComputationError):
    pass


class SaturatedDistance(ComputationError):
    def __init__(self, a, b):
        super().__init__(f"distance between {a!r} and {b!r} is 1; divergence time is infinite")
        self.pair = (a, b)


class ZeroDistance(ComputationError):
    def __init__(self, a, b):
        super().__init__(f"distance between {a!r} and {b!r} is 0; cannot calibrate on it")
        self.pair = (a, b)


class LabelMismatch(ComputationError):
    pass


class TreeError(AutolexError):
    pass


class ParseError(TreeError, ValueError):
    def __init__(self, position, message):
        super().__init__(f"Newick parse error at position {position}: {message}")
        self.position = position
        self.message = message


class DuplicateLeaf(TreeError, ValueError):
    def __init__(self, label):
        super().__init__(f"duplicate leaf label {label!r}")
        self.label = label


class LeafSetMismatch(TreeError, ValueError):
    pass
