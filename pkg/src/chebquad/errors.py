"""Root of the package's exceptions. Specific errors live next to the code that raises them."""


class ChebQuadError(Exception):
    """Root of every numeric failure raised by the package. The CLI maps it to exit code 3."""


class PreconditionError(ChebQuadError):
    """Invalid arguments to a numerical operation."""
