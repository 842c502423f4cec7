"""Exception types raised by tiered_deploy."""


class TieredDeployError(Exception):
    """Base class for all package errors."""


class ZeroMass(TieredDeployError, ValueError):
    """The density integrates to zero over the discretization grid."""


class InconsistentPartition(TieredDeployError, ValueError):
    """A partition does not match the grid or deployment it is used with."""


class InvalidArgs(TieredDeployError, ValueError):
    """Arguments violate an operation's preconditions."""


class TooLarge(TieredDeployError, ValueError):
    """An exhaustive enumeration would exceed its size guard."""


class ConfigError(TieredDeployError, ValueError):
    """An experiment configuration is malformed."""
