"""Exception hierarchy shared by every mtk module."""


class MtkError(Exception):
    """Base class for all errors raised by mtk."""


class ParseError(MtkError):
    """Malformed input document; carries the file, line and field when known."""

    def __init__(self, message, *, source=None, line=None, field=None):
        self.source = source
        self.line = line
        self.field = field
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ValidationError(MtkError):
    """Input data violates a structural rule (e.g. a quotient with sources)."""

    def __init__(self, message, violations=()):
        self.violations = list(violations)
        super().__init__(message)


class PreconditionError(MtkError):
    """An operation was called on data outside its domain."""


class CertificationError(MtkError):
    """An internally computed certificate failed its check.

    Seeing one of these means a bug or an input that slipped past validation,
    never a user error.
    """


class UniquenessError(CertificationError):
    """Two distinct decompositions were found where at most one may exist."""


class SizeGuardError(MtkError):
    """A construction exceeded its configured size bound."""

    def __init__(self, message, bound):
        self.bound = bound
        super().__init__(message)
