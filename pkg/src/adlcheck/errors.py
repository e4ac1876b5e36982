"""Exception hierarchy shared by every stage of the pipeline."""


class AdlCheckError(Exception):
    """Base class for all errors raised by adlcheck."""


class EventError(AdlCheckError):
    pass


class UnknownSensorId(EventError):
    pass


class BadState(EventError):
    pass


class BadTimestamp(EventError):
    pass


class ConfigError(AdlCheckError):
    pass


class DuplicateModelName(ConfigError):
    pass


class UnknownRoom(ConfigError):
    pass


class UnknownGroupMember(ConfigError):
    pass


class DisconnectedLayout(ConfigError):
    pass


class InvalidInterval(AdlCheckError):
    pass


class UnknownGroup(AdlCheckError):
    pass


class PropertySyntaxError(AdlCheckError):
    """Raised by the property parser; carries the offending character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnresolvedAtom(AdlCheckError):
    pass


# Parser-side name for the same failure.
UnknownAtom = UnresolvedAtom


class NotViolated(AdlCheckError):
    pass


class InvalidScript(AdlCheckError):
    pass


class PipelineBug(AdlCheckError):
    """An internal invariant was broken; indicates a bug upstream, not bad input."""
