"""Exception hierarchy shared by all modules."""


class DiracSzegoError(Exception):
    """Base class for all library errors."""


class NotHermitian(DiracSzegoError):
    pass


class NotPositiveDefinite(DiracSzegoError):
    pass


class RankMismatch(DiracSzegoError):
    pass


class LambdaZero(DiracSzegoError):
    pass


class RealLambda(DiracSzegoError):
    pass


class SingularDenominator(DiracSzegoError):
    pass


class SingularShift(DiracSzegoError):
    pass


class ModulusAtLeastOne(DiracSzegoError):
    pass


class BlockSizeNotOne(DiracSzegoError):
    pass


class PoleAtInput(DiracSzegoError):
    pass


class IdentityViolated(DiracSzegoError):
    pass


class SingularS(DiracSzegoError):
    pass


class ResolventSingular(DiracSzegoError):
    pass


class SingularW0(DiracSzegoError):
    pass


class ModulusMismatch(DiracSzegoError):
    pass


class InvariantViolated(DiracSzegoError):
    pass


class SingularLeadingBlock(DiracSzegoError):
    pass


class SingularVMinus(DiracSzegoError):
    pass


class Phi1Mismatch(DiracSzegoError):
    pass


class AnalyticityViolation(DiracSzegoError):
    pass


class ToeplitzNotPD(DiracSzegoError):
    def __init__(self, message, failing_index=None):
        super().__init__(message)
        self.failing_index = failing_index


class DocumentError(DiracSzegoError):
    """Malformed or inconsistent on-disk document."""
