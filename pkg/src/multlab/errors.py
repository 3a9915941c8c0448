"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented exit statuses without a lookup table.
"""


class MultlabError(Exception):
    exit_code = 1
    precondition = ""


class InputError(MultlabError, ValueError):
    """Malformed input: bad polynomial text, unknown variable, bad problem file."""

    exit_code = 2


class PolynomialSyntaxError(InputError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
            if text:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class BackendMismatch(InputError):
    """Two operands live over different coefficient fields."""


class DimensionMismatch(InputError):
    pass


class MemoryLimitError(InputError):
    """Requested truncation would exceed the configured size budget."""


class NotAtOrigin(InputError):
    precondition = "both curves must pass through the origin"


class CommonComponent(InputError):
    precondition = "f and g must not share a component through the origin"


class RestrictionViolated(InputError):
    """A check was requested outside the hypotheses under which it is verified."""

    precondition = "the quotient identity is verified only when a_1 is a nonzerodivisor on M"


class NonStabilizing(MultlabError, ArithmeticError):
    """A length kept changing up to the truncation ceiling (ideal not primary to the maximal ideal)."""

    exit_code = 3
    precondition = "the ideal must be primary to the maximal ideal on M"


class NotSystemOfParameters(NonStabilizing):
    precondition = "a must be a system of parameters of M (M/aM of finite length, len(a) = dim M)"


class InsufficientRange(NonStabilizing):
    """No difference row of a Hilbert-Samuel table became constant in the scanned range."""


class NonConstant(NonStabilizing):
    precondition = "the colon length is constant only for large n"


class CeilingReached(NonStabilizing):
    """An element appears to lie in every tested power of the ideal."""

    precondition = "the element must be nonzero in M"


class PropertyViolation(MultlabError, AssertionError):
    """A proven identity or inequality failed: an implementation bug or a counterexample."""

    exit_code = 4
    precondition = "identities proven for all inputs must hold"


class NegativeChi(PropertyViolation):
    precondition = "the stabilised Euler characteristic is expected to be non-negative"


class HypothesisFailure(InputError):
    """A probed hypothesis (e.g. regularity of initial forms) does not hold."""

    precondition = "a_1*, ..., a_(d-1)* must form a G_M(q)-regular sequence"
