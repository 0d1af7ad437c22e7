"""Exception hierarchy shared by all lorentzkit modules."""


class LorentzKitError(Exception):
    """Base class for every error raised by lorentzkit."""


class DimensionMismatch(LorentzKitError, ValueError):
    pass


class ShapeError(LorentzKitError, ValueError):
    pass


class ZeroVector(LorentzKitError, ValueError):
    pass


class JacobiViolation(LorentzKitError, ValueError):
    def __init__(self, residual, triple):
        self.residual = residual
        self.triple = triple
        super().__init__(
            f"Jacobi identity violated on basis triple {triple}: residual {residual:.3e}"
        )


class NotSemisimple(LorentzKitError, ValueError):
    pass


class NotAbelian(LorentzKitError, ValueError):
    pass


class NotSplitDiagonalizable(LorentzKitError, ValueError):
    pass


class NotSkew(LorentzKitError, ValueError):
    pass


class NotLorentz(LorentzKitError, ValueError):
    pass


class AlgebraMismatch(LorentzKitError, ValueError):
    pass


class UnknownWeight(LorentzKitError, KeyError):
    pass


class RankTooLarge(LorentzKitError, ValueError):
    pass


class NotGenerating(LorentzKitError, ValueError):
    pass


class PointOffSpace(LorentzKitError, ValueError):
    pass


class NotTangent(LorentzKitError, ValueError):
    pass


class DegeneratePlane(LorentzKitError, ValueError):
    pass


class BadCodimension(LorentzKitError, ValueError):
    pass


class NonPositiveRadius(LorentzKitError, ValueError):
    pass


class FlatFiber(LorentzKitError, ValueError):
    pass


class NonConstantFiber(LorentzKitError, ValueError):
    pass


class NotIsometry(LorentzKitError, ValueError):
    pass


class NotLorentzOrbit(LorentzKitError, ValueError):
    pass


class UnknownBuiltin(LorentzKitError, KeyError):
    pass


class UnknownCheck(LorentzKitError, KeyError):
    pass


class ParseError(LorentzKitError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
