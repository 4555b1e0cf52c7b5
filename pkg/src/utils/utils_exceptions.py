class InvalidArgument(Exception):
    """Invalid argument."""


class MissingInputFile(InvalidArgument):
    """A configured input file doesn't exist."""

    def __init__(self, path, field_name: str | None = None):
        self.path = path
        self.field_name = field_name
        name = f" ({field_name})" if field_name else ""
        super().__init__(f"Input file {path}{name} doesn't exist.")


class InvalidDataException(Exception):
    """Data is invalid."""


class LineError(InvalidDataException):
    """Data file error which knows the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class CorpusParseError(LineError):
    pass


class DuplicateDocumentId(LineError):
    pass


class QuerySyntaxError(InvalidDataException):
    """Query doesn't follow the grammar. position is a character offset into the query."""

    def __init__(self, message: str, position: int, line: int | None = None):
        self.position = position
        self.line = line
        prefix = f"line {line}, " if line is not None else ""
        super().__init__(f"{prefix}position {position}: {message}")


class OntologyParseError(LineError):
    pass


class UnknownParent(LineError):
    pass


class CycleDetected(InvalidDataException):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__(f"Concept hierarchy has a cycle: {' -> '.join(cycle)}")


class DegreeOutOfRange(LineError):
    pass


class UnknownReference(LineError):
    """Relation or instance references an undeclared name."""


class MissingPolarityTerm(LineError):
    """Polarity datatype leaves out one of the five polarity terms."""


class UnknownConcept(InvalidDataException):
    pass


class UnknownTerm(InvalidDataException):
    pass


class LexiconParseError(LineError):
    pass


class ScoreSumViolation(LineError):
    pass


class RuleParseError(LineError):
    pass


class WeightsParseError(LineError):
    pass


class InvalidMembershipFunction(ValueError):
    """Membership function parameters are invalid (unordered or degenerate)."""


class InvalidNgramSize(ValueError):
    pass


class ValueOutOfRange(ValueError):
    pass


class UndefinedMetric(ArithmeticError):
    """Metric denominator is zero."""


class MissingGoldLabels(InvalidDataException):
    pass


class InconsistentFacts(InvalidDataException):
    pass


class RuleConflict(Exception):
    """Two rules derived different objects for one functional (predicate, subject)."""

    def __init__(self, conflicts: list[tuple[str, str]]):
        self.conflicts = conflicts
        pairs = ", ".join(f"{a} vs {b}" for a, b in conflicts)
        super().__init__(f"Conflicting rule derivations: {pairs}")


class ReplicationFailure(Exception):
    pass


class StageError(Exception):
    """Wraps an error raised while the pipeline was in a named stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
