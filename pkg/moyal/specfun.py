"""Special functions behind the twisted Hermite basis.

Everything here is vectorized over ``x`` and returns a float for scalar input.
"""
import numpy as np
from scipy.special import comb, factorial

from .errors import DomainError

def _as_output(out):
    return out if np.ndim(out) else float(out)

def laguerre(n: int, k: int, x):
    """Associated Laguerre polynomial L_n^k(x)

    Evaluated with the upward three-term recurrence in n,
        (j+1) L_{j+1} = (2j + k + 1 - x) L_j - (j + k) L_{j-1},
    which is stable for x >= 0.
    """
    assert n >= 0 and k >= 0, f'Expected n, k >= 0 (got n={n}, k={k})'
    x = np.asarray(x, dtype=float)
    L_prev = np.ones_like(x)
    if n == 0:
        return _as_output(L_prev)
    L = (k + 1) - x
    for j in range(1, n):
        L, L_prev = ((2 * j + k + 1 - x) * L - (j + k) * L_prev) / (j + 1), L
    return _as_output(L)

def laguerre_seq(n_max: int, k: int, x) -> np.ndarray:
    """All of L_0^k(x), ..., L_{n_max}^k(x), stacked along a new leading axis"""
    assert n_max >= 0 and k >= 0
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, ) + x.shape)
    out[0] = 1
    if n_max >= 1:
        out[1] = (k + 1) - x
    for j in range(1, n_max):
        out[j + 1] = ((2 * j + k + 1 - x) * out[j] - (j + k) * out[j - 1]) / (j + 1)
    return out

def laguerre_coeff_sum(n: int, k: int, x):
    """L_n^k(x) from its explicit coefficients; only meant for small n"""
    x = np.asarray(x, dtype=float)
    terms = [(-1)**j * comb(n + k, n - j, exact=True) / factorial(j, exact=True) * x**j
             for j in range(n + 1)]
    return _as_output(sum(terms))

def log_factorial_ratio(m: int, n: int) -> float:
    """ln(n!) - ln(m!)

    Summed directly over the logs between the two arguments, which keeps full
    relative precision when m and n are large and close together.
    """
    assert m >= 0 and n >= 0
    lo, hi = sorted((m, n))
    total = float(np.log(np.arange(lo + 1, hi + 1, dtype=float)).sum())
    return total if n >= m else -total

def hermite_fn(k: int, x):
    """Hermite function h_k(x) = (2^(k-1) k!)^(-1/2) H_k(x) exp(-x^2/2)

    With this normalization the h_k are orthogonal under (2 pi)^(-1/2) dx with
    squared norm sqrt(2), and h_0 (x) h_0 equals the Gaussian f_0.
    """
    assert k >= 0
    return _as_output(hermite_fn_seq(k, x)[k])

def hermite_fn_seq(k_max: int, x) -> np.ndarray:
    """h_0(x), ..., h_{k_max}(x) from the scaled recurrence

    phi_{j+1} = x sqrt(2/(j+1)) phi_j - sqrt(j/(j+1)) phi_{j-1}, with h_j = sqrt(2) phi_j.
    """
    x = np.asarray(x, dtype=float)
    phi = np.empty((k_max + 1, ) + x.shape)
    phi[0] = np.exp(-x**2 / 2)
    if k_max >= 1:
        phi[1] = np.sqrt(2) * x * phi[0]
    for j in range(1, k_max):
        phi[j + 1] = x * np.sqrt(2 / (j + 1)) * phi[j] - np.sqrt(j / (j + 1)) * phi[j - 1]
    return np.sqrt(2) * phi

def jacobi_at_zero(m: int, alpha: int, beta: int) -> float:
    """Jacobi polynomial P_m^(alpha, beta) evaluated at 0

    Uses the terminating sum
        P_m(0) = 2^-m sum_s (-1)^s C(m + alpha, m - s) C(m + beta, s)
    with exact integer binomials. The sum is only valid when both m + alpha and
    m + beta are non-negative.
    """
    if m < 0:
        raise DomainError(f'Jacobi degree must be non-negative (got {m})')
    if int(alpha) != alpha or int(beta) != beta:
        raise DomainError(f'Expected integer parameters (got alpha={alpha}, beta={beta})')
    top_a, top_b = m + int(alpha), m + int(beta)
    if top_a < 0 or top_b < 0:
        raise DomainError(
            f'Finite sum undefined for m={m}, alpha={alpha}, beta={beta}')
    total = sum((-1)**s * comb(top_a, m - s, exact=True) * comb(top_b, s, exact=True)
                for s in range(m + 1))
    return total / 2**m
