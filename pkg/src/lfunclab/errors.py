"""Exception hierarchy shared by all modules.

Every error that can surface at the command line carries an ``exit_code``
matching the CLI contract: 2 data integrity, 3 capacity, 4 evaluator
failure, 64 usage.
"""


class LabError(Exception):
    exit_code = 4


class UsageError(LabError):
    exit_code = 64


class DomainError(UsageError):
    """Input outside an operation's documented domain."""


class PoleError(DomainError):
    """Evaluation requested at a pole of the gamma factor."""


class OutOfRangeError(DomainError):
    """Index beyond the tabulated eigenvalue range."""


class DataIntegrityError(LabError):
    exit_code = 2


class ParseError(DataIntegrityError):
    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class MultiplicativityError(DataIntegrityError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DegenerateRunError(DataIntegrityError):
    """Sample run rejected (excluded measure too large, etc.)."""


class CapacityError(LabError):
    exit_code = 3

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class EvaluatorError(LabError):
    exit_code = 4


class UnderSampledError(EvaluatorError):
    """Not enough unflagged records for the requested statistic."""


class AlignmentError(EvaluatorError):
    """Record sets of a multi-form run do not line up."""
