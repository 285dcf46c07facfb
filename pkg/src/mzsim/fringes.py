"""Far-field screen patterns for the two-point annihilation-photon setup.

Intensities are expressed in single-source units: one point source
alone illuminates every screen position at intensity 1, two incoherent
sources give a flat 2, and two mutually coherent sources oscillate
between 0 and 4 with period ``wavelength * screen_distance /
source_separation``.  The model is the textbook small-angle two-source
interference pattern with equal amplitudes; polarization, pair
correlations and source kinematics are out of scope.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, StructureError

__all__ = [
    "FAR_FIELD_RATIO",
    "FringeGeometry",
    "FringeProfile",
    "coherent_intensity",
    "coherent_pattern",
    "incoherent_pattern",
    "calibration_patterns",
]

# screen_distance must exceed source_separation by this factor so the
# small-angle approximation stays below 1e-3 of a fringe period over a
# +-50-fringe window
FAR_FIELD_RATIO = 100.0


@dataclass(frozen=True)
class FringeGeometry:
    """Two-source screen geometry and the sampling window on the plate."""

    source_separation: float
    wavelength: float
    screen_distance: float
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        for name in ("source_separation", "wavelength", "screen_distance"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be > 0, got {value}")
        if self.n_points < 2:
            raise DomainError(f"n_points must be >= 2, got {self.n_points}")
        if not self.x_min < self.x_max:
            raise DomainError(
                f"x_min must be < x_max, got [{self.x_min}, {self.x_max}]"
            )
        if self.screen_distance < FAR_FIELD_RATIO * self.source_separation:
            raise GeometryError(
                "far-field model requires screen_distance >= "
                f"{FAR_FIELD_RATIO:g} * source_separation"
            )

    @property
    def fringe_period(self) -> float:
        """Screen spacing between adjacent coherent maxima."""
        return self.wavelength * self.screen_distance / self.source_separation

    def positions(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


@dataclass(frozen=True, eq=False)
class FringeProfile:
    """Sampled screen intensity in single-source units."""

    positions: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        inten = np.asarray(self.intensity, dtype=float)
        if pos.ndim != 1 or pos.shape != inten.shape:
            raise StructureError("positions and intensity must be matching 1-d arrays")
        if not np.all(np.isfinite(inten)) or np.any(inten < 0):
            raise DomainError("intensity must be finite and >= 0 everywhere")
        pos.flags.writeable = False
        inten.flags.writeable = False
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "intensity", inten)


def coherent_intensity(g: FringeGeometry, x) -> np.ndarray:
    """Coherent two-source intensity at screen coordinate ``x``.

    ``4 * cos^2(pi * s * x / (wavelength * L))``: maxima of 4 at integer
    multiples of the fringe period, zeros halfway between.
    """
    phase = np.pi * g.source_separation * np.asarray(x, dtype=float) / (
        g.wavelength * g.screen_distance
    )
    return 4.0 * np.cos(phase) ** 2


def coherent_pattern(g: FringeGeometry) -> FringeProfile:
    """Pattern left when the two sources emit in superposition (fringes)."""
    x = g.positions()
    return FringeProfile(x, coherent_intensity(g, x))


def incoherent_pattern(g: FringeGeometry) -> FringeProfile:
    """Pattern left when each photon comes from one definite source.

    Probabilities add instead of amplitudes, so two unit point sources
    give a flat intensity of 2 regardless of their separation.
    """
    x = g.positions()
    return FringeProfile(x, np.full(g.n_points, 2.0))


def calibration_patterns(g: FringeGeometry) -> list[FringeProfile]:
    """The four single-source exposures used to calibrate the plate.

    Replacing each beam splitter by a mirror or removing it forces a
    classical trajectory, so each configuration lights up exactly one
    annihilation point; over the four configurations each source is hit
    twice.  Each profile is a flat 1, their sum on one plate is a flat
    4, and half of that sum reproduces :func:`incoherent_pattern`.
    """
    x = g.positions()
    return [FringeProfile(x, np.ones(g.n_points)) for _ in range(4)]
