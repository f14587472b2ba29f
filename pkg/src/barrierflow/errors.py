"""Exception types raised across the package."""


class BarrierFlowError(Exception):
    """Base class for every error raised by this package."""


# slope specification
class NotIrrational(BarrierFlowError, ValueError):
    pass


class EmptyIsolation(BarrierFlowError, ValueError):
    pass


# surfaces and instances
class InstanceError(BarrierFlowError, ValueError):
    pass


class NotAPermutation(InstanceError):
    pass


class DisconnectedSurface(InstanceError):
    pass


class StreetMismatch(InstanceError):
    pass


class LengthMismatch(InstanceError):
    pass


class NonRationalEndpoints(InstanceError):
    pass


class DenominatorMismatch(InstanceError):
    pass


class SchemaError(BarrierFlowError, ValueError):
    """Malformed configuration; ``path`` names the offending field."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"field {path}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


# iteration limits
class CapExceeded(BarrierFlowError, RuntimeError):
    pass


class IterationCapExceeded(CapExceeded):
    def __init__(self, cap, message=None):
        self.cap = cap
        super().__init__(message or f"step cap {cap} reached before every piece returned")


class RoundCapExceeded(CapExceeded):
    def __init__(self, cap, message=None):
        self.cap = cap
        super().__init__(message or f"extension process still running after {cap} rounds")


class IntervalExplosion(CapExceeded):
    def __init__(self, cap, partial):
        self.cap = cap
        self.partial = partial
        super().__init__(f"interval count exceeded {cap} after {len(partial) - 1} levels")


# floating point oracle
class BarrierEndpointHit(BarrierFlowError, ArithmeticError):
    pass


# regions
class NonCanonical(BarrierFlowError, ValueError):
    pass


class LayoutError(BarrierFlowError, ValueError):
    pass


# ergodic analysis
class EndpointsNotInOrbit(BarrierFlowError, ValueError):
    pass


# constructions
class WeakConvergentGrowth(BarrierFlowError, ValueError):
    """q_{k+1} does not exceed sqrt(n) * q_k, so the small-attractor bound is unavailable."""


class PigeonholeFailed(BarrierFlowError, RuntimeError):
    pass


class VerificationFailed(BarrierFlowError, AssertionError):
    pass
