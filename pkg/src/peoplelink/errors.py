"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for every error this package raises on purpose."""


class NotUtf8Error(PipelineError):
    """Input bytes are not valid UTF-8."""


class MissingDocHeaderError(PipelineError):
    """Gold file does not start with a well-formed ``#doc <title>`` header."""


class LineError(PipelineError):
    """Error tied to a 1-based line number of the input file."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class WrongColumnCountError(LineError):
    """A gold data line does not have exactly four tab-separated fields."""


class IllegalFlagError(LineError):
    """A flag field holds something other than "Y"/"", or the flags contradict."""


class LinkWithoutMentionError(LineError):
    """A gold row carries a link but is not flagged as a mention."""


class InvariantViolationError(PipelineError):
    """A value to be serialized or used violates its documented invariants."""


class MalformedXmlError(PipelineError):
    """Profile input is not well-formed XML of the expected shape."""


class MissingRequiredFieldError(PipelineError):
    """A required profile element is absent or empty."""

    def __init__(self, field: str):
        super().__init__(f"missing required field: {field}")
        self.field = field


class MalformedStandoffError(PipelineError):
    """Standoff annotation JSON does not match the expected structure."""


class SpanOutOfRangeError(PipelineError):
    """A standoff span does not index into the associated document."""

    def __init__(self, span, token_count: int):
        super().__init__(f"span {span!r} outside document of {token_count} tokens")
        self.span = tuple(span)
        self.token_count = token_count


class ClientUnavailableError(PipelineError):
    """An online API backend kept failing after all retries."""


class CacheCorruptError(PipelineError):
    """A cache record failed its checksum or length check."""


class LengthMismatchError(PipelineError):
    """Prediction and gold row counts differ."""


class EmptyInputError(PipelineError):
    """An aggregate was requested over zero documents."""


class TokenMismatchError(PipelineError):
    """Two annotations of supposedly the same text disagree on a token."""

    def __init__(self, row: int, text_a: str, text_b: str):
        super().__init__(f"row {row}: token text differs: {text_a!r} vs {text_b!r}")
        self.row = row


class OverlapViolationError(PipelineError):
    """Spans that must be pairwise disjoint overlap."""


class FixedPointExceededError(PipelineError):
    """Rule widening failed to stabilize within the pass cap (internal error)."""
