"""Exception hierarchy shared by every gqlab module."""


class GQLabError(Exception):
    """Base class; the CLI maps these to exit code 2 unless noted."""


class NotPrimePower(GQLabError, ValueError):
    pass


class DivisionByZero(GQLabError, ZeroDivisionError):
    pass


class SizeBudgetExceeded(GQLabError):
    pass


class GroupTableError(GQLabError, ValueError):
    """Raised by group_from_table; ``witness`` carries the offending data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAssociative(GroupTableError):
    pass


class NoIdentity(GroupTableError):
    pass


class NoInverse(GroupTableError):
    pass


class NotNormal(GroupTableError):
    pass


class NotClassTwo(GQLabError):
    pass


class CenterNotElementaryAbelian(GQLabError):
    pass


class CenterNotFieldSized(GQLabError):
    pass


class ConstructionInvalid(GQLabError):
    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = violations or []


class AxiomViolation(GQLabError):
    """A generalized-quadrangle axiom failed; ``axiom`` is 'i', 'ii' or 'iii'."""

    def __init__(self, axiom, message, witness=None):
        super().__init__(f"axiom ({axiom}) violated: {message}")
        self.axiom = axiom
        self.witness = witness


class NotUniformOrder(GQLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTriad(GQLabError, ValueError):
    pass


class InvalidRoot(GQLabError, ValueError):
    pass


class InvalidPoint(GQLabError, ValueError):
    pass


class InvalidAction(GQLabError, ValueError):
    pass


class NotEGQ(GQLabError):
    pass


class NotSTGQ(GQLabError):
    pass


class NoKantorFamily(GQLabError):
    pass


class UnknownTheorem(GQLabError, KeyError):
    pass


class BudgetExceeded(GQLabError):
    """A search ran out of budget; ``partial`` holds whatever was found."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []
        self.incomplete = True


class FormatError(GQLabError, ValueError):
    pass
