"""Exception types raised by the library.

Every failure that a caller can act on gets its own class; diagnostic
payloads (offending matrices, levels, residues) ride on attributes so the
CLI can render them without string parsing.
"""


class UniwaringError(Exception):
    """Base class for all library errors."""


class ParseError(UniwaringError):
    """Malformed scalar, polynomial, or problem file."""

    def __init__(self, message, where=None):
        self.where = where
        if where is not None:
            message = f"{where}: {message}"
        super().__init__(message)


class NotClosed(UniwaringError):
    """Lie basis is not closed under the matrix bracket."""


class BadLevel(UniwaringError):
    """Derived-series level out of range."""


class NotUnitriangular(UniwaringError):
    """Matrix (or morphism) is not unitriangular."""


class NotInGroup(UniwaringError):
    """Element does not lie in the group defined by the Lie basis."""

    def __init__(self, message, offending=None):
        self.offending = offending
        super().__init__(message)


class NotIntegral(UniwaringError):
    """Value has entries outside the integral ring demanded by the spec tag."""


class NotGenerating(UniwaringError):
    """Family fails the generating criterion; carries the witness covector."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotRepresented(UniwaringError):
    """Integral moment solve hit a divisibility obstruction."""

    def __init__(self, level, residual, divisor):
        self.level = level
        self.residual = residual
        self.divisor = divisor
        super().__init__(
            f"level {level}: residual {residual} not divisible by {divisor}"
        )


class DivisibilityError(UniwaringError):
    """Ring-mode abelian decomposition failed; D*target is always solvable."""

    def __init__(self, message, guaranteed_divisor):
        self.guaranteed_divisor = guaranteed_divisor
        super().__init__(message)


class DescentStalled(UniwaringError):
    """Commutator candidates exhausted before the next level generates."""

    def __init__(self, level, witness):
        self.level = level
        self.witness = witness
        super().__init__(
            f"descent stalled entering level {level}; unreached covector {witness}"
        )


class IndexOutOfRange(UniwaringError):
    """Word references a morphism index outside the family."""


class NotSublattice(UniwaringError):
    """Claimed sublattice has a generator outside the ambient lattice."""


class RankDeficient(UniwaringError):
    """Certificate failed: some derived level is not certified full rank."""

    def __init__(self, level, message=""):
        self.level = level
        super().__init__(message or f"certified sublattice at level {level} is rank deficient")


class NotInCertifiedSubgroup(UniwaringError):
    """Integral target sits outside the certified finite-index subgroup."""

    def __init__(self, level, residue, modulus):
        self.level = level
        self.residue = residue
        self.modulus = modulus
        super().__init__(
            f"level {level}: residue {residue} mod {modulus} obstructs decomposition"
        )


class BadPrime(UniwaringError):
    """Prime collides with a coefficient denominator or is otherwise unusable."""


class CapExceeded(UniwaringError):
    """Finite quotient larger than the configured enumeration cap."""
