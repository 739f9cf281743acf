class ColoringError(Exception):
    code = 'coloring-error'


class InvalidConfig(ColoringError):
    code = 'invalid-config'


class UpdateRejected(ColoringError):
    """An update that fails validation. Raised before any state changes."""
    code = 'rejected-update'

    def __init__(self, event, message):
        self.event = event
        super().__init__(f"{message}: {event}")


class InvalidEdge(UpdateRejected):
    code = 'invalid-edge'


class DuplicateEdge(UpdateRejected):
    code = 'duplicate-edge'


class MissingEdge(UpdateRejected):
    code = 'missing-edge'


class DegreeCapExceeded(UpdateRejected):
    code = 'degree-cap-exceeded'


class StructuralCorruption(ColoringError):
    """Internal bookkeeping went inconsistent; the run cannot continue."""
    code = 'structural-corruption'


class StreamParseError(ColoringError):
    code = 'parse-error'

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class HeaderMissing(StreamParseError):
    code = 'header-missing'


class StreamEventError(ColoringError):
    code = 'stream-event'

    def __init__(self, index, cause):
        self.index = index
        self.cause = cause
        super().__init__(f"event {index}: [{cause.code}] {cause}")
