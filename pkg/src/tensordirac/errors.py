"""Exception and warning types raised across the package."""

from __future__ import annotations


class DiracError(ValueError):
    """Base class for every failure raised by :mod:`tensordirac`."""


# metric
class NotSymmetric(DiracError):
    pass


class Singular(DiracError):
    pass


class ZeroG00(DiracError):
    pass


class NotAdmissible(DiracError):
    pass


# clifford
class NoEtaFactorization(DiracError):
    pass


class SingularMap(DiracError):
    pass


class SingularS(DiracError):
    pass


class NoIntertwiner(DiracError):
    pass


class DimensionNotOne(DiracError):
    """A solution space that should be one-dimensional is not."""

    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


class NotGaussian(DiracError):
    """Alpha matrices do not close under a scalar anticommutator.

    ``g0j`` holds the offending inverse-metric components, ``raw`` the three
    matrices ``a'0 a'j + a'j a'0`` (with ``a' = g^00 * alpha``) and
    ``expected_residual`` the max deviation of ``raw`` from ``2 g^0j gamma^0``.
    """

    def __init__(self, message: str, g0j, raw, expected_residual: float):
        super().__init__(message)
        self.g0j = g0j
        self.raw = raw
        self.expected_residual = expected_residual


# hermitize
class SingularA(DiracError):
    pass


class NotDefinite(DiracError):
    pass


class NotIntertwiner(DiracError):
    pass


class NotHermitian(DiracError):
    pass


# observables
class ImaginaryResidue(DiracError):
    pass


class NoSolution(DiracError):
    pass


class WrongSignature(DiracError):
    pass


class ZeroScalar(DiracError):
    pass


# dynamics
class NonRealPotential(DiracError):
    pass


class GramNotPositive(DiracError):
    pass


class GridMismatch(DiracError):
    pass


class SolveFailure(DiracError):
    pass


class TooFewSteps(DiracError):
    pass


# cli
class ConfigParse(DiracError):
    pass


class RelaxedCondition(UserWarning):
    """Rejection sampling gave up before meeting the requested condition bound."""


class SolutionDimensionWarning(UserWarning):
    """A solution space expected to be one-dimensional is not (non-fatal)."""
