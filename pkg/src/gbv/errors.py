"""Exception taxonomy shared across the package.

Three failure classes matter to callers: bad parameters (ValidationError),
work that exceeds a configured table or memory budget (CapacityError), and
malformed on-disk caches (CacheFormatError).  The CLI maps these to distinct
exit codes; library code raises them directly.
"""


class GbvError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(GbvError):
    """Parameters are malformed or inconsistent (bad spec string, bad range)."""


class CapacityError(GbvError):
    """The request exceeds a sieve limit or a configured size budget."""


class UnsupportedModulusError(ValidationError):
    """Character machinery got a modulus outside the odd squarefree family."""


class CacheFormatError(GbvError):
    """An on-disk sieve cache failed its magic/limit/length verification."""
