"""Exact construction and verification of the star product on semisimple coadjoint orbits."""

from .enveloping import centralizer_split, chevalley_constants, normalize_root_vectors
from .rootsys import build_root_system
from .shapovalov import compute_B

__version__ = "0.1.0"

__all__ = [
    "build_root_system",
    "centralizer_split",
    "chevalley_constants",
    "compute_B",
    "normalize_root_vectors",
    "setup_split",
]


def setup_split(series: str, rank: int, lam, normalize: bool = True):
    """Root system, Chevalley algebra and (normalized) split for lambda given on the h_i."""
    rs = build_root_system(series, rank)
    alg = chevalley_constants(rs)
    split = centralizer_split(alg, lam)
    return normalize_root_vectors(split) if normalize else split
