from __future__ import annotations


class ClusterCoopError(Exception):
    stage = "engine"

    def __init__(self, message: str, stage: str | None = None) -> None:
        super().__init__(message)
        if stage is not None:
            self.stage = stage


class ParameterError(ClusterCoopError, ValueError):
    stage = "parameters"


class DomainError(ClusterCoopError, ValueError):
    stage = "theory"


class DegenerateRealizationError(ClusterCoopError):
    stage = "topology"


class RealizationRejectedError(ClusterCoopError):
    stage = "topology"


class EstimationError(ClusterCoopError):
    stage = "estimation"


class NumericalError(ClusterCoopError):
    stage = "quadrature"


class ConfigValidationError(ClusterCoopError, ValueError):
    stage = "config"

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message
