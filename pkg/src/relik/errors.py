"""Exception hierarchy shared across the package."""


class RelikError(Exception):
    """Base class for every error raised by relik."""


class InvalidOrder(RelikError):
    """A relation failed preorder/strict-order validation."""


class NotStrict(InvalidOrder):
    """Relation is reflexive somewhere or not transitive."""


class NotModular(InvalidOrder):
    pass


class ForeignWorld(RelikError):
    """A set or world mentions something outside the host order."""


class InvalidAlgebra(RelikError):
    pass


class InvalidRelation(RelikError):
    """A set relation violates the hypotheses an operation needs."""


class NotTotalPreorder(InvalidRelation):
    pass


class AgreementFailure(RelikError):
    """The lifted order of a realization disagrees with the target relation."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceLimit(RelikError):
    """A configured size/budget cap was exceeded."""


class ParseError(RelikError):
    def __init__(self, message, position=None, expected=()):
        detail = message
        if position is not None:
            detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(detail)
        self.position = position
        self.expected = frozenset(expected)


class UnknownProposition(RelikError):
    pass
