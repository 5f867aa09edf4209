"""Twisted convolution and twisted product of grid functions by quadrature

Both operations are rectangle-rule discretizations on the periodic grid:

    (f o g)(u) = integral f(u - t) g(t) exp(-i u'Jt) dt
    f x g      = (F f) o g            ("switch" path)

Node differences u - t are taken modulo the grid, which is exact as long as the
operands vanish on the boundary ring.
"""
import logging

import numpy as np

from .phasegrid import GridFunction, PhasePoint
from .phasegrid import fourier_symplectic, fourier_symplectic_tilde, translate, modulate

logger = logging.getLogger(__name__)

CONVOLUTION_METHODS = ('fft', 'direct')
PRODUCT_PATHS = ('switch', 'switch_right', 'direct')

def _row_chunks(M, chunk_size):
    for start in range(0, M, chunk_size):
        yield np.arange(start, min(start + chunk_size, M))

def twisted_convolution(f: GridFunction,
                        g: GridFunction,
                        method: str = 'fft',
                        chunk_size: int = 16) -> GridFunction:
    """Twisted convolution f o g

    method:
        'fft': each output row is a circular FFT convolution along p (O(M^3 log M))
        'direct': plain quadrature, O(M^4); kept as an oracle for small grids
    """
    f._check_grid(g)
    if method not in CONVOLUTION_METHODS:
        raise ValueError(f'Unknown convolution method {method!r}; expected {CONVOLUTION_METHODS}')
    grid = f.grid
    M, h, x = grid.M, grid.h, grid.nodes
    # fs[i] = f at node offset i * h from the origin
    fs = np.fft.ifftshift(f.values)
    E = np.exp(1j * np.outer(x, x))
    result = np.empty(grid.shape, dtype=complex)
    j = np.arange(M)

    if method == 'fft':
        FS = np.fft.fft(fs, axis=1)
        for rows in _row_chunks(M, chunk_size):
            # G[r, j, k] = g[j, k] exp(-i x_a x_k) for output row a = rows[r]
            G = g.values[None, :, :] * np.conj(E[rows])[:, None, :]
            shifted = FS[(rows[:, None] - j[None, :]) % M]
            inner = np.fft.ifft(shifted * np.fft.fft(G, axis=2), axis=2)
            result[rows] = np.einsum('jb,rjb->rb', E, inner)
            logger.debug(f'twisted_convolution: rows {rows[0]}..{rows[-1]} of {M}')
    else:
        k = np.arange(M)
        for a in range(M):
            G = g.values * np.conj(E[a])[None, :]
            F_rows = fs[(a - j) % M]
            for b in range(M):
                window = F_rows[:, (b - k) % M]
                result[a, b] = E[b] @ np.einsum('jk,jk->j', window, G)
    return GridFunction(grid, result * h * h / (2 * np.pi))

def _direct_product(f: GridFunction, g: GridFunction) -> GridFunction:
    # (f x g)(u) = integral F~f(w - u) g(w) exp(i w'Ju) dw
    grid = f.grid
    M, h, x = grid.M, grid.h, grid.nodes
    Ft = np.fft.ifftshift(fourier_symplectic_tilde(f).values)
    E = np.exp(1j * np.outer(x, x))
    idx = np.arange(M)
    result = np.empty(grid.shape, dtype=complex)
    for a in range(M):
        # phase exp(i (x_j x_b - x_k x_a)) split into E[j, b] and conj(E[a, k])
        weighted = g.values * np.conj(E[a])[None, :]
        rows = Ft[(idx - a) % M]
        for b in range(M):
            window = rows[:, (idx - b) % M]
            result[a, b] = np.sum(window * weighted * E[:, b][:, None])
    return GridFunction(grid, result * h * h / (2 * np.pi))

def twisted_product(f: GridFunction, g: GridFunction, path: str = 'switch') -> GridFunction:
    """Twisted product f x g

    path:
        'switch': F f o g (default)
        'switch_right': f o F~ g
        'direct': the single-integral form, sharing no transform-then-convolve code
    """
    f._check_grid(g)
    if path == 'switch':
        return twisted_convolution(fourier_symplectic(f), g)
    elif path == 'switch_right':
        return twisted_convolution(f, fourier_symplectic_tilde(g))
    elif path == 'direct':
        return _direct_product(f, g)
    raise ValueError(f'Unknown product path {path!r}; expected one of {PRODUCT_PATHS}')

def twisted_translate(f: GridFunction, v: PhasePoint) -> GridFunction:
    """eps_v tau_v f: translate by v, then modulate by v"""
    return modulate(translate(f, v), v)
