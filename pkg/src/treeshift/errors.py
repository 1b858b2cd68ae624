"""Exception hierarchy for the treeshift package."""


class TreeShiftError(Exception):
    """Base class for all treeshift errors."""


class SchemaError(TreeShiftError):
    """A document does not match the expected JSON schema."""


class NotPrefixFree(TreeShiftError):
    """A candidate prefix code contains a word that prefixes another."""


class Incomplete(TreeShiftError):
    """A prefix-free set does not cover all sufficiently long words."""


class ContainsEmptyWord(TreeShiftError):
    """A prefix code may not contain the empty word."""


class WordOutsideSupport(TreeShiftError):
    """A word argument lies outside the pattern's support."""


class SupportTooShallow(TreeShiftError):
    """A pattern does not contain the full tree down to the requested depth."""


class AlphabetMismatch(TreeShiftError):
    """A pattern uses symbols outside the shift's alphabet."""


class UnknownSymbol(SchemaError):
    """A document references a symbol not declared in the alphabet."""


class NonBinaryMatrixEntry(SchemaError):
    """A transition matrix contains an entry other than 0 or 1."""


class NonPrefixClosedForbiddenPattern(SchemaError):
    """A forbidden pattern's support is not prefix-closed."""


class EmptyRecodedAlphabet(TreeShiftError):
    """Higher-block recoding produced no admissible symbols (the shift is empty)."""


class HeightTooSmall(TreeShiftError):
    """A block is too short for the requested window."""


class InadmissibleInput(TreeShiftError):
    """An input pattern is not locally admissible in the given shift."""


class NotLocallyAdmissible(InadmissibleInput):
    """Alias used by pattern extension."""


class OutsideEssentialCore(TreeShiftError):
    """A pattern label is a symbol deleted by the essential-core fixed point."""


class LimitExceeded(TreeShiftError):
    """An enumeration cap was hit; downstream verdicts become UNKNOWN."""


class CapExceeded(LimitExceeded):
    """Exact counting cap for sofic images."""


class EmptyShift(TreeShiftError):
    """The operation is undefined on an empty shift."""


class DegenerateSingleton(TreeShiftError):
    """Every block count is 1; the entropy estimate is pinned to 0."""


class PreconditionNotVerified(TreeShiftError):
    """A report was requested whose precondition verdict is not VERIFIED."""


class NotBinaryArity(TreeShiftError):
    """The binary-tree aperiodicity certificate was asked of a d > 2 shift."""
