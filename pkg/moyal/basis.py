"""The twisted Hermite basis f_mn on a phase-space grid

For m >= n, with q + ip = rho e^(i alpha),

    f_mn = 2 (-1)^n sqrt(n!/m!) e^(-i alpha (m-n)) rho^(m-n) L_n^(m-n)(rho^2) e^(-rho^2/2)

and f_mn = conj(f_nm) for m < n. The f_mn are orthonormal under <.|.> and are
matrix units for the twisted product.
"""
import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from . import specfun
from .errors import GridMismatchError, IndexMismatchError, OrderMismatchError
from .phasegrid import GridFunction, PhaseGrid, l2_distance
from .seqspace import CoeffMatrix

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class BasisIndex:
    m: int
    n: int

    def __post_init__(self):
        assert self.m >= 0 and self.n >= 0, f'Basis indices must be non-negative ({self})'

@dataclass(frozen=True)
class BasisSpec:
    """Truncation order M_b (indices 0..M_b-1) together with the sampling grid"""
    max_order: int
    grid: PhaseGrid

    def __post_init__(self):
        assert self.max_order >= 1
        if self.grid.L < self.envelope_extent(self.max_order):
            warnings.warn(
                f'Grid extent L={self.grid.L} is below the envelope containment bound '
                f'{self.envelope_extent(self.max_order):.2f} for order {self.max_order}; '
                f'high-order basis functions are not negligible at the boundary',
                RuntimeWarning)

    @staticmethod
    def envelope_extent(max_order: int) -> float:
        return 2 * np.sqrt(2 * max_order + 1) + 4

    @staticmethod
    def order_within_extent(L: float) -> int:
        """Largest M_b whose envelope extent fits in L (at least 1)"""
        if L <= BasisSpec.envelope_extent(1):
            return 1
        return int((((L - 4) / 2)**2 - 1) // 2)

def _lower_triangle(max_order: int, grid: PhaseGrid):
    """Yield (m, n, samples of f_mn) for every m >= n below max_order

    Each diagonal d = m - n shares one Laguerre recurrence pass over n.
    """
    rho, alpha = grid.polar()
    rho2 = rho**2
    with np.errstate(divide='ignore'):
        log_rho = np.log(rho)
    for d in range(max_order):
        n_count = max_order - d
        laguerre = specfun.laguerre_seq(n_count - 1, d, rho2)
        envelope = -rho2 / 2 + (d * log_rho if d else 0)
        phase = np.exp(-1j * d * alpha)
        for n in range(n_count):
            m = n + d
            log_mag = 0.5 * specfun.log_factorial_ratio(m, n) + envelope
            yield m, n, 2 * (-1)**n * np.exp(log_mag) * phase * laguerre[n]

def basis_fn(idx: BasisIndex, grid: PhaseGrid) -> GridFunction:
    m, n = idx.m, idx.n
    if m < n:
        return basis_fn(BasisIndex(n, m), grid).conjugate()
    rho, alpha = grid.polar()
    rho2 = rho**2
    log_mag = 0.5 * specfun.log_factorial_ratio(m, n) - rho2 / 2
    if m > n:
        with np.errstate(divide='ignore'):
            log_mag = log_mag + (m - n) * np.log(rho)
    values = (2 * (-1)**n * np.exp(log_mag) * np.exp(-1j * (m - n) * alpha) *
              specfun.laguerre(n, m - n, rho2))
    return GridFunction(grid, values)

def analyze(f: GridFunction, spec: BasisSpec) -> CoeffMatrix:
    """c_mn = <f_mn|f> for m, n < M_b"""
    if f.grid != spec.grid:
        raise GridMismatchError(f'Grid mismatch: {f.grid} vs {spec.grid}')
    h = spec.grid.h
    weight = h * h / (2 * np.pi) / 2
    coeffs = np.zeros((spec.max_order, spec.max_order), dtype=complex)
    samples = f.values
    for m, n, f_mn in _lower_triangle(spec.max_order, spec.grid):
        coeffs[m, n] = weight * np.vdot(f_mn, samples)
        if m != n:
            # f_nm = conj(f_mn)
            coeffs[n, m] = weight * np.sum(f_mn * samples)
    logger.debug(f'analyze: {spec.max_order}x{spec.max_order} coefficients on {spec.grid}')
    return CoeffMatrix(coeffs)

def synthesize(c: CoeffMatrix, grid: PhaseGrid) -> GridFunction:
    """sum_{m,n} c_mn f_mn sampled on grid"""
    values = np.zeros(grid.shape, dtype=complex)
    entries = c.entries
    for m, n, f_mn in _lower_triangle(c.order, grid):
        if entries[m, n] != 0:
            values += entries[m, n] * f_mn
        if m != n and entries[n, m] != 0:
            values += entries[n, m] * np.conj(f_mn)
    return GridFunction(grid, values)

def analyze_complete(f: GridFunction, max_order: int = None, rtol: float = 1e-4) -> CoeffMatrix:
    """analyze(f), refusing to drop weight above the truncation

    Without max_order the order is the largest one the grid extent contains. Raises
    OrderMismatchError when synthesize(analyze(f)) misses f by more than rtol in
    relative L2 norm.
    """
    if max_order is None:
        max_order = BasisSpec.order_within_extent(f.grid.L)
    c = analyze(f, BasisSpec(max_order, f.grid))
    residual = l2_distance(synthesize(c, f.grid), f, relative=True)
    if residual > rtol:
        raise OrderMismatchError(
            f'Function on {f.grid} is not reproduced by {max_order}x{max_order} coefficients '
            f'(relative residual {residual:.2e}); raise M_b or L')
    logger.debug(f'analyze_complete: order {max_order}, relative residual {residual:.2e}')
    return c

def gram(spec: BasisSpec) -> np.ndarray:
    """Gram matrix <f_mn|f_kl> of the sampled basis, flattened row index m * M_b + n"""
    N = spec.max_order
    stack = np.empty((N * N, spec.grid.M**2), dtype=complex)
    for m, n, f_mn in _lower_triangle(N, spec.grid):
        stack[m * N + n] = f_mn.ravel()
        stack[n * N + m] = np.conj(f_mn).ravel()
    h = spec.grid.h
    return (stack.conj() @ stack.T) * h * h / (2 * np.pi) / 2

# ------------------------------------------------------------
# Hermite tensor basis
# ------------------------------------------------------------

def hermite_tensor(k: int, l: int, grid: PhaseGrid) -> GridFunction:
    """(q, p) -> h_k(q) h_l(p)"""
    x = grid.nodes
    return GridFunction(grid, np.outer(specfun.hermite_fn(k, x), specfun.hermite_fn(l, x)))

def basis_change_coeff(m: int, n: int, k: int, l: int) -> complex:
    """c_mn^kl = <h_k (x) h_l | f_mn>, so that f_mn = sum_{k+l=m+n} c_mn^kl h_k (x) h_l

    c_mn^kl = 2^((m-n)/2) i^(2m+l) C(m+n, l)^(1/2) C(m+n, m)^(-1/2) P_m^(l-m, k-m)(0)
    """
    if m + n != k + l:
        raise IndexMismatchError(f'Need m + n == k + l (got {m}+{n} vs {k}+{l})')
    N = m + n
    magnitude = (2.0**((m - n) / 2) * np.sqrt(comb(N, l, exact=True) / comb(N, m, exact=True)) *
                 specfun.jacobi_at_zero(m, l - m, k - m))
    return complex(1j**((2 * m + l) % 4) * magnitude)

def basis_change_matrix(N: int) -> np.ndarray:
    """Unitary block U[m, k] = c_(m, N-m)^(k, N-k) on the anti-diagonal m + n = N"""
    return np.array([[basis_change_coeff(m, N - m, k, N - k) for k in range(N + 1)]
                     for m in range(N + 1)])

def hermite_expansion(m: int, n: int):
    """Nonzero terms ((k, l), c) of f_mn = sum c h_k (x) h_l"""
    N = m + n
    terms = [((k, N - k), basis_change_coeff(m, n, k, N - k)) for k in range(N + 1)]
    return [(kl, c) for kl, c in terms if abs(c) > 0]
