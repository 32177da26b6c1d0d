"""Exception hierarchy. Each family carries the CLI exit code it maps to."""


class CutredError(Exception):
    exit_code = 1


class ParseError(CutredError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class WellFormednessError(CutredError):
    exit_code = 3


class OpenTerm(WellFormednessError):
    pass


class OpenFormula(WellFormednessError):
    pass


class UnboundedQuantifier(WellFormednessError):
    pass


class BadConnective(WellFormednessError):
    pass


class OpenSubstitutionTerm(WellFormednessError):
    pass


class PreconditionFailed(WellFormednessError):
    """A search recipe or parameter bullet does not hold; `bullet` names it."""

    def __init__(self, bullet, detail=""):
        self.bullet = bullet
        super().__init__(f"precondition '{bullet}' failed" + (f": {detail}" if detail else ""))


class InvariantViolation(CutredError):
    exit_code = 4


class NoTrueLiteral(InvariantViolation):
    pass


class AxiomAmongSolutions(InvariantViolation):
    pass


class NoFalseChild(InvariantViolation):
    pass


class StepBudgetExceeded(InvariantViolation):
    pass


class RankViolation(InvariantViolation):
    pass


class WidthExceeded(InvariantViolation):
    pass


class ResourceCap(CutredError):
    exit_code = 5
