"""Level-zero path crystals: root operators, tensor products, local energies,
degree functions and one-dimensional sums, all in exact arithmetic."""

from .cartan import AffineCartanDatum, DominantWeight, datum_for
from .crystal import CrystalGraph, generate, psi, r_matrix, tensor_graph
from .energy import degree_table, energy_D, energy_D_ext, local_energy, verify_main
from .laurent import LaurentPolynomial
from .onedsum import kostka_foulkes_paths, one_dim_sum, path_degree_sum
from .paths import ClPath, straight

__all__ = [
    "AffineCartanDatum",
    "ClPath",
    "CrystalGraph",
    "DominantWeight",
    "LaurentPolynomial",
    "datum_for",
    "degree_table",
    "energy_D",
    "energy_D_ext",
    "generate",
    "kostka_foulkes_paths",
    "local_energy",
    "one_dim_sum",
    "path_degree_sum",
    "psi",
    "r_matrix",
    "straight",
    "tensor_graph",
    "verify_main",
]
