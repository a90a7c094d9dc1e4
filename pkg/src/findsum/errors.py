"""Exception hierarchy. Every stage error derives from :class:`FindsumError`."""


class FindsumError(Exception):
    pass


# ingest
class UnreadableInput(FindsumError):
    pass


class NoItemsFound(FindsumError):
    pass


# corpus
class NoMdaItem(FindsumError):
    pass


class EmptyTargets(FindsumError):
    pass


class InsufficientCompanies(FindsumError):
    pass


# select_text
class ConstraintUnsatisfiable(FindsumError):
    pass


# select_tuple
class DimensionMismatch(FindsumError):
    pass


class DegenerateData(FindsumError):
    pass


# summarize
class GeneratorFailure(FindsumError):
    """A generator process failed, timed out or replied with garbage.

    ``slot`` names the summary segment being produced when known;
    ``partial`` carries whatever segments did complete.
    """

    def __init__(self, message, slot=None, partial=None):
        super().__init__(message)
        self.slot = slot
        self.partial = partial


# cli
class ConfigError(FindsumError):
    pass
