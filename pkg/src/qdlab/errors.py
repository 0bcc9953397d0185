"""Exception types shared across the package.

All subclass ValueError so generic input validation can be caught uniformly;
the CLI maps them onto its exit codes.
"""


class ResourceLimitError(ValueError):
    """Requested problem size exceeds the supported desk-scale limits."""


class NoDiscriminationError(ValueError):
    """The hypotheses are identical; no measurement can separate them."""


class UnsupportedModelError(ValueError):
    """The (strategy, noise) combination has no implemented closed form."""
