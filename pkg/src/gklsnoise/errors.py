"""Exception types raised across the package."""


class DimensionMismatch(ValueError):
    """Operands act on Hilbert spaces of different dimension."""


class NotSelfDual(ValueError):
    """A self-dual generator was required but the dissipator is not self-dual."""


class NonHermitianLindblad(ValueError):
    """A unitary (classical-noise) stepper was given a non-Hermitian Lindblad operator."""


class ScenarioError(ValueError):
    """Unknown builtin scenario or malformed scenario document."""
