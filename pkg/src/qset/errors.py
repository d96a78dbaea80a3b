"""Exception types shared across the package.

Every domain error derives from QsetError and can carry a source span
(byte offsets into the script being evaluated) once the error has passed
through the language layer.  Errors raised by kernel or algebra code
start with span=None; the evaluator attaches the span of the offending
call before re-raising.
"""


class QsetError(Exception):
    def __init__(self, message, *, span=None):
        super().__init__(message)
        self.span = span

    @property
    def message(self):
        return self.args[0]


class CapExceeded(QsetError):
    """An enumeration bound was hit; results are never silently truncated."""


class NotInUniverse(QsetError):
    """A universe-relative operation was applied to a non-member."""


class InvalidPermutation(QsetError):
    """A relabelling map is not a kind-preserving bijection."""


class NonClassicalIndex(QsetError):
    """An indexed family was given an index set containing m-atoms."""


class NotComposable(QsetError):
    """Composition was attempted where cod and dom do not line up."""


class InvalidQuasiFunction(QsetError):
    """A relation is not class-functional and total on its domain."""


class EmptyUniverse(QsetError):
    """A universe fragment must contain at least one element."""


class LexError(QsetError):
    pass


class ParseError(QsetError):
    def __init__(self, message, *, span=None, expected=()):
        super().__init__(message, span=span)
        self.expected = tuple(expected)


class EvalError(QsetError):
    pass
