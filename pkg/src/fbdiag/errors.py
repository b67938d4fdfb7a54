"""Exception hierarchy shared by every subpackage."""


class FbDiagError(Exception):
    """Base class for all errors raised by fbdiag."""


class ParseError(FbDiagError):
    """Syntax error in a descriptor or algorithm source, with a position."""

    def __init__(self, message, line=0, col=0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DescriptorError(FbDiagError):
    """A descriptor failed validation; ``diagnostics`` holds every finding."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class EvalError(FbDiagError):
    pass


class DivisionByZero(EvalError):
    pass


class ValueTypeError(EvalError):
    pass


# runtime


class RuntimeFault(FbDiagError):
    pass


class MissingBuiltin(RuntimeFault):
    pass


class UnknownPort(RuntimeFault):
    pass


class PastTimestamp(RuntimeFault):
    pass


class EmptyQueue(RuntimeFault):
    pass


class EccLivelock(RuntimeFault):
    def __init__(self, instance, bound):
        super().__init__(f"{instance}: more than {bound} ECC transitions in one invocation")
        self.instance = instance
        self.bound = bound


# plant


class UnknownTarget(FbDiagError):
    pass


# fde


class FdeError(FbDiagError):
    pass


class UnknownDp(FdeError):
    pass


class AlreadyRewired(FdeError):
    pass


class UnknownGate(FdeError):
    pass


class GateNotIsolated(FdeError):
    pass


class InsufficientSamples(FdeError):
    pass


class PlanMissing(FdeError):
    pass
