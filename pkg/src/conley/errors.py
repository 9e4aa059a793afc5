"""Error taxonomy shared by all modules.

Every failure mode gets its own class so callers (and the CLI exit-code
logic) can distinguish user errors, coarse-grid failures and internal
consistency bugs.
"""

class ConleyError(Exception):
    pass

# user / input errors
class FieldMismatch(ConleyError):
    pass

class OutOfDomain(ConleyError):
    pass

class NotSubcomplex(ConleyError):
    pass

# precondition failures on algebraic data
class NotInvariant(ConleyError):
    pass

class NotInvertible(ConleyError):
    pass

class NotEquivariant(ConleyError):
    pass

class NotExact(ConleyError):
    pass

class NotChainMap(ConleyError):
    pass

# discretization too coarse / search bounds exhausted
class TightnessFailure(ConleyError):
    pass

class NoLagFound(ConleyError):
    pass

class NotAdmissibleWithinBounds(ConleyError):
    pass

class AlgebraicInverseFailure(ConleyError):
    pass

class DecompositionFailure(ConleyError):
    pass

class ComponentsNotSeparable(ConleyError):
    pass

# internal bug signals (theorems that must hold failed combinatorially)
class InternalInconsistency(ConleyError):
    pass

class ExactnessViolation(ConleyError):
    pass

class ConjugacyViolation(ConleyError):
    pass

class SelectorLeak(ConleyError):
    pass

class CrossValidationFailure(ConleyError):
    pass
