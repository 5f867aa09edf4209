from .grid import PhaseGrid, PhasePoint, GridFunction
from .transforms import (integrate, pair_bilinear, pair_sesquilinear, norm, fourier_ordinary,
                         fourier_symplectic, fourier_symplectic_tilde, reflect, conjugate,
                         translate, modulate, sup_distance, l2_distance, boundary_mass)
