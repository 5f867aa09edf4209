"""Measure, pairings and Fourier transforms on a PhaseGrid

The measure is du = (2 pi)^-1 d^2u, so integrals are rectangle-rule sums scaled
by h^2 / (2 pi). The ordinary transform is

    (Ff)(u) = integral f(t) exp(-i t.u) dt

and the symplectic transforms read it back at Ju = (p, -q) and -Ju.
"""
from functools import lru_cache

import numpy as np

from .grid import GridFunction, PhaseGrid, PhasePoint

def _check_same_grid(f: GridFunction, g: GridFunction):
    f._check_grid(g)

def integrate(f: GridFunction) -> complex:
    h = f.grid.h
    return complex(f.values.sum() * h * h / (2 * np.pi))

def pair_bilinear(f: GridFunction, g: GridFunction) -> complex:
    """<f, g> = integral f g du (no conjugation)"""
    _check_same_grid(f, g)
    return integrate(f * g)

def pair_sesquilinear(f: GridFunction, g: GridFunction) -> complex:
    """<f|g> = (1/2) integral conj(f) g du"""
    _check_same_grid(f, g)
    return integrate(f.conjugate() * g) / 2

def norm(f: GridFunction) -> float:
    return float(np.sqrt(max(pair_sesquilinear(f, f).real, 0.0)))

@lru_cache(maxsize=8)
def _fourier_matrix(grid: PhaseGrid) -> np.ndarray:
    # W[a, j] = h / sqrt(2 pi) exp(-i x_a x_j); symmetric, so F f = W f W
    x = grid.nodes
    return grid.h / np.sqrt(2 * np.pi) * np.exp(-1j * np.outer(x, x))

def fourier_ordinary(f: GridFunction) -> GridFunction:
    """Matrix Fourier transform evaluated back on the input nodes

    A plain FFT only lands on the same nodes when h^2 = 2 pi / M, so the
    separable transform is applied as two dense products (O(M^3)).
    """
    W = _fourier_matrix(f.grid)
    return GridFunction(f.grid, W @ f.values @ W)

def fourier_symplectic(f: GridFunction) -> GridFunction:
    """F f(u) = (Ff)(Ju) with J(q, p) = (p, -q)"""
    G = fourier_ordinary(f).values
    return GridFunction(f.grid, G.T[f.grid.negated_indices(), :])

def fourier_symplectic_tilde(f: GridFunction) -> GridFunction:
    """F~ f(u) = (Ff)(-Ju)"""
    G = fourier_ordinary(f).values
    return GridFunction(f.grid, G.T[:, f.grid.negated_indices()])

def reflect(f: GridFunction) -> GridFunction:
    """f-check(u) = f(-u), an exact node permutation"""
    neg = f.grid.negated_indices()
    return GridFunction(f.grid, f.values[np.ix_(neg, neg)])

def conjugate(f: GridFunction) -> GridFunction:
    return f.conjugate()

def translate(f: GridFunction, s: PhasePoint) -> GridFunction:
    """(tau_s f)(u) = f(u - s), a cyclic shift; s must lie on grid nodes"""
    n_q, n_p = f.grid.steps(s)
    return GridFunction(f.grid, np.roll(f.values, (n_q, n_p), axis=(0, 1)))

def modulate(f: GridFunction, s: PhasePoint) -> GridFunction:
    """(eps_s f)(u) = exp(i s'Ju) f(u) with s'Ju = s_q p - s_p q"""
    Q, P = f.grid.mesh()
    return GridFunction(f.grid, np.exp(1j * (s.q * P - s.p * Q)) * f.values)

# ------------------------------------------------------------
# Diagnostics
# ------------------------------------------------------------

def sup_distance(f: GridFunction, g: GridFunction, radius: float = None) -> float:
    """max |f - g|, optionally restricted to the disc |u| <= radius"""
    _check_same_grid(f, g)
    diff = np.abs(f.values - g.values)
    if radius is not None:
        diff = diff[f.grid.bulk_mask(radius)]
    return float(diff.max())

def l2_distance(f: GridFunction, g: GridFunction, relative: bool = False) -> float:
    distance = norm(f - g)
    if relative:
        scale = norm(g)
        return distance / scale if scale > 0 else distance
    return distance

def boundary_mass(f: GridFunction) -> float:
    """Largest |f| on the outer ring of nodes"""
    v = np.abs(f.values)
    return float(max(v[0, :].max(), v[-1, :].max(), v[:, 0].max(), v[:, -1].max()))
