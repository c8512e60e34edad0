"""Exception hierarchy.

Every error carries a short ``code`` naming the failure; the CLI prints it and
maps :class:`ZcDomainError` to exit status 1 and :class:`ZcNumericalError` to 2.
"""


class ZcWellError(Exception):
    code = "ZcWellError"


class ZcDomainError(ZcWellError, ValueError):
    """Invalid input: bad geometry, boundary data or design shape."""

    code = "DomainError"


class CuspAtNode(ZcDomainError):
    """A slope discontinuity sits on a zero of the wave; no finite strength exists."""

    code = "CuspAtNode"


class PeriodicInfeasible(ZcDomainError):
    code = "PeriodicInfeasible"


class NodeInInterior(ZcDomainError):
    """The wave vanishes inside the well, so it cannot seed a superpotential."""

    code = "NodeInInterior"


class UntunedWell(ZcDomainError):
    code = "UntunedWell"


class OffGridSpike(ZcDomainError):
    code = "OffGridSpike"


class ZcNumericalError(ZcWellError, ArithmeticError):
    code = "NumericalError"


class BracketExhausted(ZcNumericalError):
    code = "BracketExhausted"


class EigensolverError(ZcNumericalError):
    code = "EigensolverError"


class QuadratureError(ZcNumericalError):
    code = "QuadratureError"
