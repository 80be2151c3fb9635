"""Twisted (Bessel) light: beam fields, hydrogen photoexcitation amplitudes and radiation forces."""
from .mathcore import (
    LYMAN_ALPHA_K,
    SPEED_OF_LIGHT,
    DomainError,
    InvalidQuantumNumbers,
    QuadratureError,
    QuadratureSpec,
)
from .beam import BeamParams, ComplexVec3, FieldSample
from .photoexcite import AmplitudeRecord, AtomConfig, AtomicOrbital, DeltaLocalized, LzEigenstate
from .forces import DiskGeometry, ForceBreakdown, ParticleResponse

__version__ = "0.1.0"
