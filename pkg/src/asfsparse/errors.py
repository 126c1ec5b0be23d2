"""Exception hierarchy shared by all asfsparse modules."""


class AsfSparseError(Exception):
    """Base class for every error raised by this package."""


class SingularError(AsfSparseError):
    pass


class NotAFrameError(AsfSparseError):
    """The synthesis vectors do not span the ambient space."""


class GenerationFailed(AsfSparseError):
    pass


class IterationLimit(AsfSparseError):
    """Simplex exceeded its pivot budget (a bug or a pathological input)."""


class ScaleGuardError(AsfSparseError):
    """An enumeration would exceed its configured size limit."""


class InfeasibleError(AsfSparseError):
    pass


class NotFound(AsfSparseError):
    """No support of the allowed size reproduces the target."""


class NoSolution(AsfSparseError):
    """The system restricted to a support is inconsistent."""


class NotInKernel(AsfSparseError):
    pass


class HypothesisError(AsfSparseError):
    """A theorem hypothesis fails, so the theorem says nothing here."""


class NotNormalized(HypothesisError):
    pass
