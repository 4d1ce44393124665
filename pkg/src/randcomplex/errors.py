"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed simplex, complex, cochain or parameter set."""


class InvalidAtThisN(ValueError):
    """Parameters are admissible in form but give a bad value at this n."""


class SearchSpaceTooLarge(RuntimeError):
    """An exhaustive search would exceed its configured budget."""


class GuardExceeded(RuntimeError):
    """A size guard (memory or per-event work) was hit."""


class Infeasible(ArithmeticError):
    """No admissible solution exists for the requested rescaling."""
