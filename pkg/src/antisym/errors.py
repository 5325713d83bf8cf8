class AntisymError(Exception):
    """Base class for library errors."""


class DomainError(AntisymError, ValueError):
    """An argument lies outside the domain of an operation."""


class InputError(AntisymError, ValueError):
    """Malformed or inconsistent user input."""


class ResourceError(AntisymError):
    """A request exceeds a configured exhaustive-search bound."""


class SoundnessError(AntisymError):
    """A construction produced something its correctness argument rules out."""
