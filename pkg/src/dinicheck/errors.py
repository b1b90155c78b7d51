"""Exception hierarchy shared by every stage of the analysis."""

from __future__ import annotations


class DinicheckError(Exception):
    """Base class; ``stage`` names the pipeline step that failed."""

    stage = "analysis"


class ExpressionSyntaxError(DinicheckError, ValueError):
    stage = "parse"

    def __init__(self, message: str, position: int, expected: str = ""):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownIdentifierError(ExpressionSyntaxError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", position)


class DomainError(DinicheckError, ArithmeticError):
    """Evaluation left the real domain (sqrt of negative, log of non-positive, ...)."""

    stage = "eval"

    def __init__(self, message: str, position: int = -1, x: float | None = None, n: int | None = None):
        self.reason = message
        self.position = position
        self.x = x
        self.n = n
        parts = [message]
        if position >= 0:
            parts.append(f"at position {position}")
        if x is not None:
            parts.append(f"x={x!r}")
        if n is not None:
            parts.append(f"n={n}")
        super().__init__(" ".join(parts))


class MetricError(DinicheckError, ValueError):
    stage = "metric"


class CriteriaError(DinicheckError, ValueError):
    stage = "criteria"


class ClassificationError(DinicheckError):
    """A stage of ``classify`` failed; ``partial`` holds whatever was computed."""

    def __init__(self, stage: str, cause: Exception, partial: dict):
        self.stage = stage
        self.cause = cause
        self.partial = partial
        super().__init__(f"[{stage}] {cause}")


class ConfigError(DinicheckError, ValueError):
    stage = "config"
