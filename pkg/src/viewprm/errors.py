"""Exception types shared across the package.

Everything raised on a domain failure derives from PlanningError so the CLI
can map it to a nonzero exit code without enumerating causes.
"""


class PlanningError(Exception):
    """Base class for all domain errors."""


class InvalidConfigurationError(PlanningError):
    """A configuration violates joint limits or is otherwise malformed."""


class SceneError(PlanningError):
    """A scene description failed validation; the message names the field."""


class PerceptionError(PlanningError):
    """Perception model or dataset failure (unknown class, empty data, ...)."""


class SamplingError(PlanningError):
    """A sampler exhausted its retry budget."""


class RoadmapError(PlanningError):
    """Roadmap construction or query attachment failed."""


class NoPathError(PlanningError):
    """Graph search could not reach any goal node."""

    def __init__(self, message: str, expanded_nodes: int = 0):
        super().__init__(message)
        self.expanded_nodes = expanded_nodes


class FileFormatError(PlanningError):
    """A serialized artifact could not be parsed or has a bad version."""
