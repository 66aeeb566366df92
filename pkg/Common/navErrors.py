"""
Exceptions raised by the navigation library.

Geometry and shape errors subclass ValueError, map/control failures that
come out of an iteration subclass RuntimeError, so callers that only know
the builtin types still catch them.
"""

from __future__ import annotations
from typing import Optional


class StarnavError(Exception):
    """Base class for every error raised by starnav."""


# =============================================================================
# Geometry
# =============================================================================
class GeometryError(StarnavError, ValueError):
    pass


class EmptyIntersection(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class SelfIntersection(GeometryError):
    pass


# =============================================================================
# Obstacle shapes
# =============================================================================
class ShapeError(StarnavError, ValueError):
    pass


class NotSimplePolygon(ShapeError):
    pass


class TreeConstructionError(ShapeError):
    pass


class CenterOutside(ShapeError):
    pass


class NearVertex(ShapeError):
    pass


# =============================================================================
# Map between layers
# =============================================================================
class AtStarCenter(StarnavError, ValueError):
    pass


class NoConvergence(StarnavError, RuntimeError):
    pass


# =============================================================================
# Control
# =============================================================================
class ControlError(StarnavError, RuntimeError):
    pass


class EmptyLocalFreespace(ControlError):
    pass


class DegenerateLine(ControlError):
    pass


# =============================================================================
# Scenario files
# =============================================================================
class ScenarioError(StarnavError, ValueError):
    """Malformed or invalid scenario document.

    lineno is the 1-based line of the offending text when the parser knows it.
    """

    def __init__(self, message: str, path: Optional[str] = None,
                 lineno: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.path = path
        self.lineno = lineno

    def __str__(self) -> str:
        where = self.path or '<scenario>'
        if self.lineno is not None:
            where = f'{where}:{self.lineno}'
        return f'{where}: {self.message}'


class AssumptionViolation(StarnavError):
    """A world that fails preflight validation; carries the report."""

    def __init__(self, report):
        super().__init__('scenario violates the navigation assumptions')
        self.report = report
