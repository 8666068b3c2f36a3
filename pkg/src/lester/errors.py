"""Shared exception types."""


class LesterError(Exception):
    """Base class for all library errors."""


class ParseError(LesterError):
    """Malformed manifest, palette, or landmarks file."""


class SequenceError(LesterError):
    """Frame sequence is empty, has gaps, or mixed dimensions."""


class MaskValidationError(LesterError):
    """Mask pixels disagree with the declared label table."""


class RenderError(LesterError):
    """Rendering cannot proceed (e.g. a label has no palette color)."""


class PipelineValidationError(LesterError):
    """Pre-flight validation failed; carries one diagnostic per problem."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class PipelineError(LesterError):
    """A stage failed while processing a frame."""

    def __init__(self, frame: int, stage: str, message: str):
        self.frame = frame
        self.stage = stage
        super().__init__(f"frame {frame}: {stage}: {message}")
