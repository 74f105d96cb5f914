#
# errors.py -- exceptions raised by wcolab
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#


class WcoLabError(Exception):
    """Base class for all wcolab errors."""
    pass


class PoleError(WcoLabError, ValueError):
    """A map was evaluated at its pole (the image is the point at infinity)."""
    pass


class DomainError(WcoLabError, ValueError):
    """An argument lies outside the domain where the formula is defined."""
    pass


class DivergenceError(WcoLabError, ValueError):
    """Parameters for which a hypergeometric value does not exist."""
    pass


class ConvergenceError(WcoLabError):
    """A series did not reach its tolerance within the term budget."""

    def __init__(self, msg, terms=None, partial=None):
        super(ConvergenceError, self).__init__(msg)
        self.terms = terms
        self.partial = partial


class QuadratureError(WcoLabError):
    """Integration over the sphere failed (empty rule, non-finite values)."""
    pass


class OutOfScopeError(WcoLabError, ValueError):
    """The requested quantity has no known closed form for these parameters."""
    pass


class BoundViolation(WcoLabError):
    """An inequality that must hold was observed to fail."""

    def __init__(self, msg, lhs=None, rhs=None):
        super(BoundViolation, self).__init__(msg)
        self.lhs = lhs
        self.rhs = rhs


class UsageError(WcoLabError, ValueError):
    """Invalid command line configuration."""
    pass
