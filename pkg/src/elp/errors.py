"""Exception hierarchy shared by every module of the package."""


class ElpError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class ParseError(ElpError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownIdentifier(ParseError):
    pass


class ResourceBoundExceeded(ElpError):
    """The prover hit its node budget; this is not a truth value."""


class NotApplicable(ElpError):
    """Truth was requested for a formula that is not applicable at the state."""


class InvalidModel(ElpError):
    pass


class ActualEliminated(ElpError):
    """The actual (state, event) pair does not survive a product update."""


class IllFormed(ElpError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "ill-formed term")


class VariableNotFree(ElpError):
    pass


class NotATree(ElpError):
    pass


class NotS5(ElpError):
    pass


class CapExceeded(ElpError):
    pass


class UniverseTooSmall(ElpError):
    pass


class SynthesisError(ElpError):
    """An internal invariant of the synthesis construction failed."""


class HoleBisimilarityWarning(UserWarning):
    """Agent-bisimilarity between open arguments could not be settled exactly."""
