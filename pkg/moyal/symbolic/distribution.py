"""The distributions 1, delta and polynomials acting on functions by the twisted product

    1 x f = f x 1 = f
    delta x f = F~f        f x delta = Ff
    P x f                  ladder words of P applied to the coefficients of f

A sampled function can also stand in for T; that case is plain quadrature.
"""
from dataclasses import dataclass

from ..basis import BasisSpec, analyze
from ..phasegrid import GridFunction, fourier_symplectic, fourier_symplectic_tilde
from ..seqspace import CoeffMatrix, fourier, matrix_star
from ..stargrid import twisted_product
from .polynomial import PolyQP, weyl_left, weyl_right

DISTRIBUTION_KINDS = ('one', 'delta', 'poly', 'sampled')
SIDES = ('left', 'right')

@dataclass(frozen=True)
class Distribution:
    kind: str
    payload: object = None

    def __post_init__(self):
        if self.kind not in DISTRIBUTION_KINDS:
            raise ValueError(f'Unknown distribution kind {self.kind!r}')
        expected = {'one': type(None), 'delta': type(None), 'poly': PolyQP, 'sampled': GridFunction}
        if not isinstance(self.payload, expected[self.kind]):
            raise ValueError(f'{self.kind!r} distribution cannot carry {type(self.payload).__name__}')

    @classmethod
    def one(cls):
        return cls('one')

    @classmethod
    def delta(cls):
        return cls('delta')

    @classmethod
    def poly(cls, P: PolyQP):
        return cls('poly', P)

    @classmethod
    def sampled(cls, f: GridFunction):
        return cls('sampled', f)

def _check_side(side):
    if side not in SIDES:
        raise ValueError(f'Unknown side {side!r}; expected one of {SIDES}')

def _poly_on_coeffs(P: PolyQP, c: CoeffMatrix, side: str) -> CoeffMatrix:
    # ladder words raise indices by at most deg P, so the padded product is exact
    padded = c.pad(c.order + P.degree)
    return weyl_left(P, padded) if side == 'left' else weyl_right(P, padded)

def dist_star(T: Distribution, f, side: str = 'left', order: int = None):
    """T x f (side='left') or f x T (side='right')

    f is a GridFunction or a CoeffMatrix. On coefficients every kind except
    'sampled' is exact, and a polynomial result keeps order + deg P so no raised
    index is lost. On a grid, a polynomial acts on the `order` x `order` basis
    coefficients of f (by default the largest order the grid extent contains) and
    the result is resampled. OrderMismatchError is raised when those coefficients
    do not reproduce f.
    """
    _check_side(side)
    if isinstance(f, CoeffMatrix):
        if T.kind == 'one':
            return f
        if T.kind == 'delta':
            return fourier(f, 'symplectic_tilde' if side == 'left' else 'symplectic')
        if T.kind == 'poly':
            return _poly_on_coeffs(T.payload, f, side)
        t = analyze(T.payload, BasisSpec(f.order, T.payload.grid))
        return matrix_star(t, f) if side == 'left' else matrix_star(f, t)

    if T.kind == 'one':
        return f
    if T.kind == 'delta':
        return fourier_symplectic_tilde(f) if side == 'left' else fourier_symplectic(f)
    if T.kind == 'poly':
        if side == 'left':
            return weyl_left(T.payload, f, order)
        return weyl_right(T.payload, f, order)
    if side == 'left':
        return twisted_product(T.payload, f)
    return twisted_product(f, T.payload)

def dist_convolve(T: Distribution, f, side: str = 'left', order: int = None):
    """T o f = T x F~f (side='left') or f o T = Ff x T (side='right')"""
    _check_side(side)
    if isinstance(f, CoeffMatrix):
        moved = fourier(f, 'symplectic_tilde' if side == 'left' else 'symplectic')
    else:
        moved = fourier_symplectic_tilde(f) if side == 'left' else fourier_symplectic(f)
    return dist_star(T, moved, side, order)
