"""Exception hierarchy for the whole package.

Each error family carries the process exit code the CLI maps it to:
3 for I/O, 4 for data validation, 5 for numeric failures.
"""


class FcgsError(Exception):
    exit_code = 1


# --- I/O family (exit 3) ---

class IoError(FcgsError):
    exit_code = 3


class FetchError(IoError):
    pass


# --- data validation family (exit 4) ---

class ValidationError(FcgsError):
    exit_code = 4


class EmptyInput(ValidationError):
    pass


class InvalidCharacter(ValidationError):
    def __init__(self, char: str, position: int, record: str = ""):
        where = f" in record '{record}'" if record else ""
        super().__init__(f"invalid character {char!r} at position {position}{where}")
        self.char = char
        self.position = position
        self.record = record


class EmptyRecord(ValidationError):
    def __init__(self, record_id: str):
        super().__init__(f"FASTA record '{record_id}' has no sequence")
        self.record_id = record_id


class ParseError(ValidationError):
    def __init__(self, message: str, line: int = 0):
        suffix = f" (line {line})" if line else ""
        super().__init__(message + suffix)
        self.line = line


class InvalidInterval(ParseError):
    pass


class OverlapError(ParseError):
    pass


class RangeError(ValidationError):
    pass


class AmbiguousBase(ValidationError):
    pass


class OrderMismatch(ValidationError):
    pass


class OrderTooLarge(ValidationError):
    pass


class SequenceTooShort(ValidationError):
    pass


class EmptyWindow(ValidationError):
    pass


class LabelNotFound(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


# --- numeric family (exit 5) ---

class NumericError(FcgsError):
    exit_code = 5


class EmptyTrajectory(NumericError):
    pass


class NoValidWords(NumericError):
    pass


class EmptySignal(NumericError):
    pass


class InvalidScale(NumericError):
    pass


class EmptyBand(NumericError):
    pass


class StageError(FcgsError):
    """Pipeline stage failure; keeps the underlying error's exit code."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
