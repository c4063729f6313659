"""Unified direct + probe-cached indirect lighting renderer and benchmark CLI."""

__version__ = "0.1.0"

from .core_math import Rng, geometry_term, split_geometry_term, octa_encode, octa_decode
from .scene import Material, Scene, Hit, SurfaceSample
from .probes import ProbeVolume
from .resampling import Candidate, Reservoir
from .integrator import RenderMode
from .film import Film, mape, read_pfm, write_pfm

__all__ = [
    "Rng", "geometry_term", "split_geometry_term", "octa_encode", "octa_decode",
    "Material", "Scene", "Hit", "SurfaceSample", "ProbeVolume",
    "Candidate", "Reservoir", "RenderMode", "Film", "mape", "read_pfm", "write_pfm",
]
