"""Operands given on the command line: an expression, or a grid/coefficient file"""
import logging
from pathlib import Path

from ..basis import synthesize
from ..errors import BackendMismatchError
from ..phasegrid import GridFunction, PhaseGrid
from ..phasegrid.grid import BINARY_MAGIC, CSV_HEADER
from ..seqspace import COEFF_CSV_HEADER, CoeffMatrix, matrix_star
from ..stargrid import twisted_product
from ..symbolic import Distribution, Operand, dist_star, parse_expression, poly_star

logger = logging.getLogger(__name__)

FILE_SUFFIXES = ('.csv', '.bin')

def load_function(filename):
    """GridFunction or CoeffMatrix, told apart by the file's header"""
    path = Path(filename)
    with open(path, 'rb') as file:
        head = file.read(len(BINARY_MAGIC))
    try:
        if head == BINARY_MAGIC:
            return GridFunction.from_binary(path)
        with open(path, 'r') as file:
            header = file.readline().strip()
        if header == CSV_HEADER:
            return GridFunction.from_csv(path)
        if header == COEFF_CSV_HEADER:
            return CoeffMatrix.from_csv(path)
    except ValueError as e:
        raise OSError(f'{filename}: malformed contents ({e})') from e
    raise OSError(f'{filename}: unrecognized header {header!r}')

def resolve_operand(text: str) -> Operand:
    if Path(text).suffix in FILE_SUFFIXES:
        value = load_function(text)
        logger.info(f'Loaded {value!r} from {text}')
        kind = 'coeffs' if isinstance(value, CoeffMatrix) else 'grid'
        return Operand(kind, value, text)
    return parse_expression(text)

def star_poly(a: Operand, b: Operand):
    if a.kind != 'poly' or b.kind != 'poly':
        raise BackendMismatchError(
            f'The poly backend needs two polynomials (got {a.kind} and {b.kind})')
    return poly_star(a.value, b.value)

def star_matrix(a: Operand, b: Operand, order: int, grid: PhaseGrid) -> CoeffMatrix:
    """Product of coefficient matrices; a polynomial acts through its ladder words"""
    if a.kind == 'poly' and b.kind == 'poly':
        raise BackendMismatchError('Two polynomials have no basis coefficients; use --backend poly')
    if a.kind == 'poly':
        return dist_star(Distribution.poly(a.value), b.to_coeffs(order, grid), 'left')
    if b.kind == 'poly':
        return dist_star(Distribution.poly(b.value), a.to_coeffs(order, grid), 'right')
    return matrix_star(a.to_coeffs(order, grid), b.to_coeffs(order, grid))

def grid_samples(x: Operand, grid: PhaseGrid, order: int) -> GridFunction:
    if x.kind == 'coeffs':
        return synthesize(x.to_coeffs(max(order, x.value.order)), grid)
    return x.sample(grid)

def star_grid(a: Operand, b: Operand, grid: PhaseGrid, order: int, path: str = 'switch'):
    if a.kind == 'poly' and b.kind == 'poly':
        raise BackendMismatchError('Two polynomials cannot be multiplied on a grid; '
                                   'use --backend poly')
    if a.kind == 'poly':
        return dist_star(Distribution.poly(a.value), grid_samples(b, grid, order), 'left', order)
    if b.kind == 'poly':
        return dist_star(Distribution.poly(b.value), grid_samples(a, grid, order), 'right', order)
    return twisted_product(grid_samples(a, grid, order), grid_samples(b, grid, order), path)
