"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`LndError`.
The CLI maps :class:`ParseError` to exit code 2 and every other
:class:`LndError` to exit code 1.
"""


class LndError(Exception):
    """Base class for domain errors."""

    kind = "domain"


class ParseError(LndError, ValueError):
    kind = "parse"


class RingMismatchError(LndError, ValueError):
    pass


class UnknownVariableError(ParseError, KeyError):
    def __str__(self):
        # KeyError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class NotNilpotentError(LndError):
    """Iteration cap exceeded before the derivation killed an element."""


class NotASliceError(LndError, ValueError):
    pass


class WeightError(LndError):
    """No valid multigrading, or an inconsistent one."""


class ModuleError(LndError, ValueError):
    pass


class AssumptionError(LndError, ValueError):
    """Input violates the hypotheses of Kuroda's criterion."""


class CatalogError(LndError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""
