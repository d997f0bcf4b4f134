"""Shared exception types for the toolkit."""


class GsnkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidStructure(GsnkitError):
    """A goal structure failed validation where a valid one is required."""

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(v.code for v in self.violations) or "unknown"
        super().__init__(f"structure is not valid: {summary}")


class MalformedPlaceholder(GsnkitError):
    """A statement contains an unmatched `{` or `}`."""


class EmptyText(GsnkitError):
    """A text tokenized to zero tokens where content is required."""


class MissingInput(GsnkitError):
    """A required prompt-building input was not supplied."""


class EmptyGroundTruth(GsnkitError):
    """Recall is undefined for an empty ground-truth set."""


class BackendUnavailable(GsnkitError):
    """The configured generation backend could not be reached."""


class BackendRefusal(GsnkitError):
    """The generation backend replied with a textual refusal."""

    def __init__(self, reply: str):
        self.reply = reply
        super().__init__("backend refused the request")


class ReplyUnparseable(GsnkitError):
    """No line of the backend reply parsed under the prose grammar."""

    def __init__(self, reply: str):
        self.reply = reply
        super().__init__("backend reply contained no parseable prose")


class StoreUnwritable(GsnkitError):
    """The project store location cannot be written."""


class NotFound(GsnkitError):
    """A project or revision does not exist in the store."""


class CorruptStore(GsnkitError):
    """Stored content does not match its recorded content hash."""
