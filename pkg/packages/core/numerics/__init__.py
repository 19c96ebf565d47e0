from .perron import PerronPair, perron_pair, spectral_radius
from .linsolve import solve_dense
from .simplex import as_frequency, exponentiated_step

__all__ = [
    "PerronPair",
    "perron_pair",
    "spectral_radius",
    "solve_dense",
    "as_frequency",
    "exponentiated_step",
]
