# init_settings.py

# -----------------------------------------------------------------------------
#                               starnav
# Reactive navigation among familiar star-shaped and unknown convex obstacles
# -----------------------------------------------------------------------------
#
# Default parameters of the controller, the simulator and the batch
# experiments. Scenario files may override any field through their "params"
# section; command-line flags override the scenario.
# -----------------------------------------------------------------------------

from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict

from Common.navErrors import ScenarioError


@dataclass
class ValidationSettings:
    # Lower bound required of the sampled star condition
    # (x - x*) . grad beta over each epsilon-band
    deltaMin: float = 1e-3

    # Rays per star and levels of beta between 0 and eps used to sample bands
    bandAngles: int = 2000
    bandLevels: int = 5


@dataclass
class Settings:
    # =========================================================================
    # Controller
    # =========================================================================
    # Gain of the model-layer law v = -k (y - P(x_d))
    k: float = 0.4                  # [1/s]

    # Virtual sensing range used to build the local freespace, as a fraction
    # of the sensor range R. Must stay below 1.
    virtualRangeFactor: float = 0.8

    # Sides of the polygon approximating the seed disk of the local freespace
    nLfSides: int = 64

    # =========================================================================
    # Obstacle shapes
    # =========================================================================
    # Exponent of the R-function conjunction/disjunction (even, >= 2)
    p: int = 20

    # Radius of the model disk as a fraction of the distance from the star
    # center to the polygon boundary
    rhoScale: float = 0.9

    # Derivatives are refused closer than this to a polygon vertex
    vertexGuard: float = 1e-7       # [m]

    # =========================================================================
    # Integration
    # =========================================================================
    dtMax: float = 0.1              # [s]

    # 'rk4' - fixed step classical Runge-Kutta
    # 'rk45' - adaptive Dormand-Prince over each control step
    integrator: str = 'rk4'

    # Displacement cap per step, in both the mapped and the model layer:
    # dt = min(dtMax, stepLength / |command|, stepLength / |D_x h command|)
    stepLength: float = 0.1         # [m]

    # A step that fails near a vertex or star center, leaves the freespace
    # or raises V by more than lyapunovSlack is retried with dt halved
    maxDtHalvings: int = 10
    lyapunovSlack: float = 1e-10    # [m^2]

    tMax: float = 300.0             # [s]
    goalTol: float = 0.05           # [m]

    # A run is Stalled once |command| < stallSpeed for stallTime, or once V
    # has dropped by less than stallDecrease over the last stallWindow
    stallSpeed: float = 1e-7        # [m/s]
    stallTime: float = 1.0          # [s]
    stallWindow: float = 10.0       # [s]
    stallDecrease: float = 1e-4     # [m^2]

    # =========================================================================
    # Sensing
    # =========================================================================
    nRays: int = 360

    # =========================================================================
    # Preflight validation
    # =========================================================================
    validation: ValidationSettings = field(default_factory=ValidationSettings)

    # =========================================================================
    # Grid experiments
    # =========================================================================
    # Minimum clearance of sampled start positions
    gridClearance: float = 0.05     # [m]

    # Number of worker processes; 1 runs the starts serially
    gridWorkers: int = 1

    seed: int = 0

    def __post_init__(self):
        self.check()

    def check(self):
        """Raises ValueError on parameters the navigation law cannot use."""
        if not self.k > 0.0:
            raise ValueError(f'k must be positive, got {self.k}')
        if self.p < 2 or self.p % 2:
            raise ValueError(f'p must be even and >= 2, got {self.p}')
        if not self.dtMax > 0.0:
            raise ValueError(f'dtMax must be positive, got {self.dtMax}')
        if not 0.0 < self.virtualRangeFactor < 1.0:
            raise ValueError('virtualRangeFactor must lie in (0, 1)')
        if self.integrator not in ('rk4', 'rk45'):
            raise ValueError(f"integrator must be 'rk4' or 'rk45', got {self.integrator!r}")
        if self.nRays < 3 or self.nLfSides < 3:
            raise ValueError('nRays and nLfSides must be at least 3')
        if self.maxDtHalvings < 0 or self.lyapunovSlack < 0.0:
            raise ValueError('maxDtHalvings and lyapunovSlack must be non-negative')
        if not (self.stallTime > 0.0 and self.stallWindow > 0.0):
            raise ValueError('stallTime and stallWindow must be positive')

    def with_overrides(self, overrides: Dict[str, Any]) -> 'Settings':
        """
        Copy of the settings with some fields replaced.

        Inputs:
            overrides   - mapping of field name to value; the keys of
                          ValidationSettings are accepted at top level too
        Outputs:
            settings    - new, checked Settings
        """
        top = {f.name for f in fields(self)}
        nested = {f.name for f in fields(ValidationSettings)}
        changes, val_changes = {}, {}
        for key, value in (overrides or {}).items():
            if key in nested:
                val_changes[key] = value
            elif key in top and key != 'validation':
                changes[key] = value
            else:
                raise ScenarioError(f'unknown parameter {key!r}')
        if val_changes:
            changes['validation'] = replace(self.validation, **val_changes)
        return replace(self, **changes)


def init_settings() -> Settings:
    """
    Initializes and returns a Settings object with default values.

    Returns:
        settings (Settings): controller and simulator settings.
    """
    return Settings()
