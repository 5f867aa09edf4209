"""Coefficient matrices of the twisted Hermite expansion and their algebra

A CoeffMatrix c of order N stands for the function sum_{m,n<N} c_mn f_mn. Under
the twisted product the f_mn are matrix units, so products of truncations are
plain matrix products and are exact on the truncated span.
"""
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from .errors import AdmissibilityError, OrderMismatchError

COEFF_CSV_HEADER = 'm,n,re,im'
FOURIER_KINDS = ('ordinary', 'symplectic', 'symplectic_tilde')

@dataclass(frozen=True)
class StWeights:
    s: float
    t: float

class CoeffMatrix:
    def __init__(self, entries, description: str = ''):
        entries = np.array(entries, dtype=complex)
        assert entries.ndim == 2 and entries.shape[0] == entries.shape[1], \
            f'Expected a square coefficient array (got shape {entries.shape})'
        assert np.all(np.isfinite(entries)), 'Coefficients must be finite'
        entries.flags.writeable = False
        self._entries = entries
        self.description = description

    def __getitem__(self, key):
        return self._entries[key]

    def __setitem__(self, key, value):
        raise NotImplementedError(
            f'Assigning into a {self.__class__.__name__} instance is not supported')

    def __repr__(self):
        return f'{self.__class__.__name__}(order={self.order})'

    @property
    def order(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def shape(self):
        return self._entries.shape

    # ------------------------------------------------------------
    # Alternate constructors
    # ------------------------------------------------------------

    @classmethod
    def zeros(cls, order: int):
        return cls(np.zeros((order, order)))

    @classmethod
    def unit(cls, order: int, m: int, n: int):
        """E_mn, the coefficients of f_mn"""
        entries = np.zeros((order, order))
        entries[m, n] = 1
        return cls(entries, description=f'f[{m},{n}]')

    @classmethod
    def identity(cls, order: int):
        """Truncation of the constant function 1 = sum f_nn"""
        return cls(np.eye(order), description='1')

    @classmethod
    def delta(cls, order: int):
        """Truncation of the Dirac delta, diag((-1)^m)"""
        return cls(np.diag((-1.0)**np.arange(order)), description='delta')

    # ------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------

    def _check_order(self, other):
        if self.order != other.order:
            raise OrderMismatchError(f'Order mismatch: {self.order} vs {other.order}')

    def __add__(self, other):
        self._check_order(other)
        return CoeffMatrix(self._entries + other._entries)

    def __sub__(self, other):
        self._check_order(other)
        return CoeffMatrix(self._entries - other._entries)

    def __neg__(self):
        return CoeffMatrix(-self._entries)

    def __mul__(self, scalar):
        return CoeffMatrix(self._entries * scalar)

    __rmul__ = __mul__

    def adjoint(self):
        """Coefficients of f*, since f_mn* = f_nm"""
        return CoeffMatrix(self._entries.conj().T)

    def pad(self, order: int):
        """Embed into a larger order with zeros"""
        assert order >= self.order
        entries = np.zeros((order, order), dtype=complex)
        entries[:self.order, :self.order] = self._entries
        return CoeffMatrix(entries, self.description)

    def truncate(self, order: int):
        return CoeffMatrix(self._entries[:order, :order], self.description)

    def max_abs(self) -> float:
        return float(np.abs(self._entries).max()) if self.order else 0.0

    def edge_mass(self) -> float:
        """Largest |c_mn| in the last row and column, a truncation diagnostic"""
        last = self.order - 1
        return float(max(np.abs(self._entries[last, :]).max(),
                         np.abs(self._entries[:, last]).max()))

    # ------------------------------------------------------------
    # Ladder actions
    # ------------------------------------------------------------

    def a_star(self):
        """a x f: lowers the left index, a x f_mn = sqrt(2m) f_(m-1)n"""
        return CoeffMatrix(ladder(self.order) @ self._entries)

    def abar_star(self):
        """abar x f: raises the left index"""
        return CoeffMatrix(ladder(self.order).T @ self._entries)

    def star_a(self):
        """f x a: raises the right index, f_mn x a = sqrt(2(n+1)) f_m(n+1)"""
        return CoeffMatrix(self._entries @ ladder(self.order))

    def star_abar(self):
        """f x abar: lowers the right index"""
        return CoeffMatrix(self._entries @ ladder(self.order).T)

    # ------------------------------------------------------------
    # I/O
    # ------------------------------------------------------------

    def save_csv(self, filename):
        """Sparse rows `m,n,re,im` for nonzero entries, plus a JSON sidecar"""
        m, n = np.nonzero(self._entries)
        values = self._entries[m, n]
        table = np.stack([m, n, values.real, values.imag], axis=1)
        with open(filename, 'w') as file:
            file.write(COEFF_CSV_HEADER + '\n')
            for row in table:
                file.write(f'{int(row[0])},{int(row[1])},{row[2]:.17g},{row[3]:.17g}\n')
        with open(_sidecar_path(filename), 'w') as file:
            json.dump({'order': self.order, 'description': self.description}, file, indent=2,
                      sort_keys=True)
            file.write('\n')

    @classmethod
    def from_csv(cls, filename, order: int = None):
        table = np.loadtxt(filename, delimiter=',', skiprows=1, ndmin=2)
        description = ''
        sidecar = _sidecar_path(filename)
        if sidecar.exists():
            with open(sidecar, 'r') as file:
                metadata = json.load(file)
            order = metadata.get('order') if order is None else order
            description = metadata.get('description', '')
        if order is None:
            order = int(table[:, :2].max()) + 1 if len(table) else 1
        if len(table) and (table[:, :2].min() < 0 or table[:, :2].max() >= order):
            raise ValueError(f'{filename} has indices outside order {order}')
        entries = np.zeros((order, order), dtype=complex)
        for m, n, re, im in table:
            entries[int(m), int(n)] = re + 1j * im
        return cls(entries, description)

    # ------------------------------------------------------------
    # Rendering
    # ------------------------------------------------------------

    def plot(self, blocking=True):
        plt.imshow(np.abs(self._entries), cmap='magma')
        plt.xlabel('n')
        plt.ylabel('m')
        if blocking:
            plt.show()

def _sidecar_path(filename) -> Path:
    return Path(filename).with_suffix('.json')

def ladder(order: int) -> np.ndarray:
    """Lambda with Lambda[k, k+1] = sqrt(2(k+1))"""
    return np.diag(np.sqrt(2.0 * np.arange(1, order)), k=1)

# ------------------------------------------------------------
# Products
# ------------------------------------------------------------

def matrix_star(a: CoeffMatrix, b: CoeffMatrix) -> CoeffMatrix:
    a._check_order(b)
    return CoeffMatrix(a.entries @ b.entries)

def matrix_twisted_convolution(a: CoeffMatrix, b: CoeffMatrix) -> CoeffMatrix:
    """(a o b)_mn = sum_k (-1)^k a_mk b_kn, i.e. a D b with D the delta matrix"""
    a._check_order(b)
    signs = (-1.0)**np.arange(a.order)
    return CoeffMatrix((a.entries * signs[None, :]) @ b.entries)

def fourier(c: CoeffMatrix, kind: str = 'ordinary') -> CoeffMatrix:
    """Diagonal action of the Fourier transforms on coefficients

    kind:
        'ordinary': c_mn -> (-i)^(m+n) c_mn
        'symplectic': c_mn -> (-1)^n c_mn
        'symplectic_tilde': c_mn -> (-1)^m c_mn
    """
    m, n = np.indices(c.shape)
    if kind == 'ordinary':
        phase = (-1j)**(m + n)
    elif kind == 'symplectic':
        phase = (-1.0)**n
    elif kind == 'symplectic_tilde':
        phase = (-1.0)**m
    else:
        raise ValueError(f'Unknown Fourier kind {kind!r}; expected one of {FOURIER_KINDS}')
    return CoeffMatrix(c.entries * phase)

def reflect(c: CoeffMatrix) -> CoeffMatrix:
    """Coefficients of f(-u): (-1)^(m+n) c_mn"""
    m, n = np.indices(c.shape)
    return CoeffMatrix(c.entries * (-1.0)**(m + n))

def pair_bilinear(d: CoeffMatrix, c: CoeffMatrix) -> complex:
    """<f, g> = 2 Tr(d c), since the integral of f_mn is 2 delta_mn"""
    d._check_order(c)
    return complex(2 * np.einsum('mn,nm->', d.entries, c.entries))

def pair_sesquilinear(d: CoeffMatrix, c: CoeffMatrix) -> complex:
    d._check_order(c)
    return complex(np.vdot(d.entries, c.entries))

# ------------------------------------------------------------
# Norms
# ------------------------------------------------------------

def _odd_weights(order: int) -> np.ndarray:
    return 2.0 * np.arange(order) + 1

def rk_norm(c: CoeffMatrix, k: int) -> float:
    """r_k(c) = [sum (2m+1)^2k (2n+1)^2k |c_mn|^2]^(1/2) over stored entries"""
    w = _odd_weights(c.order)**(2 * k)
    return float(np.sqrt(np.sum(np.outer(w, w) * np.abs(c.entries)**2)))

def st_norm(c: CoeffMatrix, w: StWeights) -> float:
    """||c||_{s,t} = [sum (2m+1)^s (2n+1)^t |c_mn|^2]^(1/2)"""
    odd = _odd_weights(c.order)
    return float(np.sqrt(np.sum(np.outer(odd**w.s, odd**w.t) * np.abs(c.entries)**2)))

def apply_A(c: CoeffMatrix) -> CoeffMatrix:
    """A f = H x f x H, diagonal with eigenvalue (2m+1)(2n+1)"""
    odd = _odd_weights(c.order)
    return CoeffMatrix(np.outer(odd, odd) * c.entries)

def hs_sum_partial(K: int) -> float:
    """sum_{m,n<K} (2m+1)^-2 (2n+1)^-2, which tends to (pi^2/8)^2"""
    assert K >= 1
    return float(np.sum(_odd_weights(K)**-2.0)**2)

# ------------------------------------------------------------
# Factorization and Banach-algebra bounds
# ------------------------------------------------------------

def howe_factorize(c: CoeffMatrix):
    """Split c = b d with d diagonal

    d_m = (sup{|c_jr| : r >= m})^(1/2) is nonincreasing, b_mn = c_mn / d_n, and
    b_mn = 0 wherever d_n = 0 (the whole column of c vanishes there).
    """
    column_max = np.abs(c.entries).max(axis=0)
    d = np.sqrt(np.maximum.accumulate(column_max[::-1])[::-1])
    safe = np.where(d > 0, d, 1.0)
    b = np.where(d[None, :] > 0, c.entries / safe[None, :], 0)
    return CoeffMatrix(b), CoeffMatrix(np.diag(d))

def _check_admissible(wf: StWeights, wg: StWeights):
    if wf.t + wg.s < 0:
        raise AdmissibilityError(f'Need t + q >= 0 (got t={wf.t}, q={wg.s})')

def star_in_Gst(f: CoeffMatrix, g: CoeffMatrix, wf: StWeights, wg: StWeights, slack=1e-12):
    """Product f x g with the check ||f x g||_{s,r} <= ||f||_{s,t} ||g||_{q,r}

    wf = (s, t) and wg = (q, r); requires t + q >= 0.
    Returns (product, bound_ok).
    """
    _check_admissible(wf, wg)
    product = matrix_star(f, g)
    lhs = st_norm(product, StWeights(wf.s, wg.t))
    rhs = st_norm(f, wf) * st_norm(g, wg)
    return product, bool(lhs <= rhs * (1 + slack))

def convolve_in_Gst(f: CoeffMatrix, g: CoeffMatrix, wf: StWeights, wg: StWeights, slack=1e-12):
    """Same bound for the twisted convolution; the delta matrix is an isometric diagonal"""
    _check_admissible(wf, wg)
    product = matrix_twisted_convolution(f, g)
    lhs = st_norm(product, StWeights(wf.s, wg.t))
    rhs = st_norm(f, wf) * st_norm(g, wg)
    return product, bool(lhs <= rhs * (1 + slack))
