"""Exception hierarchy shared by all fourfold modules."""


class FourfoldError(Exception):
    """Base class for all errors raised by this package."""

    code = "Error"

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


# lattice

class DegenerateForm(FourfoldError):
    code = "DegenerateForm"


class DimensionMismatch(FourfoldError):
    code = "DimensionMismatch"


class DefiniteFormUnsupported(FourfoldError):
    code = "DefiniteFormUnsupported"


# manifold

class DefinitePartUnsupported(FourfoldError):
    code = "DefinitePartUnsupported"


class SpinKSInconsistent(FourfoldError):
    code = "SpinKSInconsistent"


class OrientationReversalUnavailable(FourfoldError):
    code = "OrientationReversalUnavailable"


# cover

class NoNontrivialCoverAvailable(FourfoldError):
    code = "NoNontrivialCoverAvailable"


# charpoly

class ModeMismatch(FourfoldError):
    code = "ModeMismatch"


class NonMonicDenominator(FourfoldError):
    code = "NonMonicDenominator"


class NonExactDivision(FourfoldError):
    code = "NonExactDivision"


class UDegreeOverflow(FourfoldError):
    code = "UDegreeOverflow"


# obstruct

class SlotUnavailable(FourfoldError):
    code = "SlotUnavailable"


class TooManyGenerators(FourfoldError):
    code = "TooManyGenerators"


class PreconditionViolated(FourfoldError):
    code = "PreconditionViolated"


class ZeroClassUnavailable(FourfoldError):
    code = "ZeroClassUnavailable"


class RankMismatch(FourfoldError):
    code = "RankMismatch"


class HypothesesNotMet(FourfoldError):
    code = "HypothesesNotMet"


# cli

class ParseError(FourfoldError):
    code = "ParseError"

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset

    def __str__(self):
        base = super().__str__()
        if self.offset is not None:
            return f"{base} (at byte {self.offset})"
        return base


class GenusZero(FourfoldError):
    code = "GenusZero"


class NegativeMultiplicity(FourfoldError):
    code = "NegativeMultiplicity"
