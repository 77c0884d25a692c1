"""Exception types shared across the toolkit.

Every domain error carries a short ``code`` (the class name) so the CLI can
emit machine-readable error records.
"""


class PaleyError(ValueError):
    """Base class for all domain errors raised by the toolkit."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class NotPrime(PaleyError):
    pass


class Overflow(PaleyError):
    pass


class FieldMismatch(PaleyError):
    pass


class DivisionByZero(PaleyError, ZeroDivisionError):
    pass


class LabelOutOfRange(PaleyError):
    pass


class BadCongruence(PaleyError):
    pass


class BadBase(PaleyError):
    pass


class BadForm(PaleyError):
    pass


class OutOfWindow(PaleyError):
    pass


class ZeroPolynomial(PaleyError):
    pass


class DimensionMismatch(PaleyError):
    pass


class HypothesisFails(PaleyError):
    pass


class NotAClique(PaleyError):
    pass


class NOutOfRange(PaleyError):
    pass


class NoAdmissibleN(PaleyError):
    pass


class PreconditionM(PaleyError):
    pass


class BadSubset(PaleyError):
    pass
