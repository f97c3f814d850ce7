"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` which the CLI emits
verbatim in its ``{"error": code, "detail": ...}`` payload.
"""


class AlgebraError(ValueError):
    code = "AlgebraError"

    def __init__(self, detail="", **info):
        super().__init__(detail)
        self.detail = detail
        self.info = info


class RingMismatch(AlgebraError):
    code = "RingMismatch"


class ArityMismatch(AlgebraError):
    code = "ArityMismatch"


class IndexOutOfRange(AlgebraError):
    code = "IndexOutOfRange"


class SingularMatrix(AlgebraError):
    code = "SingularMatrix"


class NotSymplectic(AlgebraError):
    code = "NotSymplectic"


class NotSymplecticLinear(AlgebraError):
    code = "NotSymplecticLinear"


class BadPrime(AlgebraError):
    code = "BadPrime"


class NotCentral(AlgebraError):
    code = "NotCentral"


class NonDivisible(AlgebraError):
    code = "NonDivisible"


class PreconditionX(AlgebraError):
    code = "PreconditionX"


class GaugeOrderError(AlgebraError):
    code = "GaugeOrderError"


class IsIdentity(AlgebraError):
    code = "IsIdentity"


class NonHamiltonian(AlgebraError):
    code = "NonHamiltonian"


class SamplerExhausted(AlgebraError):
    code = "SamplerExhausted"


class ZeroForm(AlgebraError):
    code = "ZeroForm"


class NotHomogeneous(AlgebraError):
    code = "NotHomogeneous"


class ParseError(AlgebraError):
    code = "ParseError"

    def __init__(self, detail="", position=None):
        super().__init__(f"{detail} at offset {position}" if position is not None else detail,
                         position=position)
        self.position = position


class FormatError(AlgebraError):
    code = "FormatError"
