from .polynomial import (PolyQP, MultiIndex, poly_star, moyal_bracket, poisson_bracket,
                         derivative_hat, star_ordered, weyl_left, weyl_right, format_poly)
from .gaussian import GaussPoly, gauss_star, hermite_operator, vacuum_expectation
from .distribution import Distribution, dist_star, dist_convolve
from .parser import Operand, parse_expression
