"""Exception types shared across the package."""


class SpinPhaseError(Exception):
    """Base class for all domain errors raised by this package."""


class UndefinedPhase(SpinPhaseError):
    """The phase functional was applied to a (numerically) vanishing argument.

    Physically this signals a collapse of the interference visibility: the
    quantity whose phase is requested has no well-defined phase.
    """


class DimensionMismatch(SpinPhaseError):
    """Operands have non-conformable dimensions."""


class NotHermitian(SpinPhaseError):
    """A Hermitian matrix was required but the input is not Hermitian."""


class DegenerateSpectrum(SpinPhaseError):
    """Instantaneous spectrum is (numerically) degenerate; eigenbasis undefined."""


class DegenerateFrame(SpinPhaseError):
    """Effective rotating-frame frequency vanishes; the return period is undefined."""


class DegenerateWeights(SpinPhaseError):
    """Ensemble weights are not pairwise distinct; shifted companions are undefined."""


class UnitarityLoss(SpinPhaseError):
    """Integrator drifted too far from the unitary group; increase the step count."""


class InconsistentClassification(SpinPhaseError):
    """Verification classifications flipped across generic grid points."""
