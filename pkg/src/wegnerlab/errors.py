"""Exception types raised by wegnerlab."""


class WegnerLabError(Exception):
    """Base class for all package errors."""


class InvalidGeometry(WegnerLabError, ValueError):
    """Box sizes or index sets are inconsistent (e.g. ``l <= R``)."""


class SymbolVanishes(WegnerLabError):
    """The symbol of a coefficient field has (numerically) a zero on the torus.

    This means the main hypothesis of the Wegner bound fails for the model.
    """


class NoConvergence(WegnerLabError):
    """Grid refinement hit its cap before reaching the requested tolerance."""


class SingularCirculant(WegnerLabError):
    """A circulant matrix has an eigenvalue below the invertibility floor."""


class InvalidInterval(WegnerLabError, ValueError):
    """An energy interval with ``E1 > E2``."""


class QuadratureFailure(WegnerLabError):
    """Adaptive quadrature could not reach the requested error bound."""


class ConfigError(WegnerLabError, ValueError):
    """Malformed configuration or coefficient file."""
