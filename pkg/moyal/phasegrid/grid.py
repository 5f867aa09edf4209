import logging
from dataclasses import dataclass
from typing import Callable

import matplotlib.pyplot as plt
import numpy as np

from ..errors import GridMismatchError, OffGridError

logger = logging.getLogger(__name__)

BINARY_MAGIC = b'MOYAL1'
CSV_HEADER = 'q,p,re,im'

@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self):
        assert np.isfinite(self.q) and np.isfinite(self.p), 'PhasePoint must be finite'

    def __neg__(self):
        return PhasePoint(-self.q, -self.p)

    def __add__(self, other):
        return PhasePoint(self.q + other.q, self.p + other.p)

    def symplectic(self, other) -> float:
        """The pairing u'Jv = u_q v_p - u_p v_q"""
        return self.q * other.p - self.p * other.q

@dataclass(frozen=True)
class PhaseGrid:
    """Uniform square grid on [-L, L)^2 with M nodes per axis

    Nodes are u_jk = (-L + j h, -L + k h) with h = 2L/M. The grid is treated as a
    torus, so -L and +L are identified.
    """
    L: float
    M: int

    def __post_init__(self):
        assert self.L > 0, f'Grid extent must be positive (got {self.L})'
        assert self.M >= 2 and (self.M & (self.M - 1)) == 0, \
            f'Grid size must be an even power of two (got {self.M})'

    @property
    def h(self) -> float:
        return 2 * self.L / self.M

    @property
    def nodes(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.M)

    @property
    def shape(self):
        return (self.M, self.M)

    def mesh(self):
        """(Q, P) coordinate arrays indexed (j, k)"""
        return np.meshgrid(self.nodes, self.nodes, indexing='ij')

    def polar(self):
        """(rho, alpha) of q + ip = rho e^(i alpha) at every node; alpha = 0 at the origin"""
        Q, P = self.mesh()
        return np.hypot(Q, P), np.arctan2(P, Q)

    def negated_indices(self) -> np.ndarray:
        """Index permutation j -> neg(j) with x_neg(j) = -x_j on the torus"""
        return (self.M - np.arange(self.M)) % self.M

    def steps(self, s: PhasePoint):
        """Number of grid steps (n_q, n_p) in the shift s; rejects off-grid shifts"""
        steps = np.array([s.q, s.p]) / self.h
        rounded = np.round(steps)
        if not np.allclose(steps, rounded, rtol=0, atol=1e-9):
            raise OffGridError(f'Shift ({s.q}, {s.p}) is not a multiple of h={self.h}')
        return int(rounded[0]), int(rounded[1])

    def index_of(self, u: PhasePoint):
        n_q, n_p = self.steps(u + PhasePoint(self.L, self.L))
        return n_q % self.M, n_p % self.M

    def bulk_mask(self, radius: float) -> np.ndarray:
        Q, P = self.mesh()
        return np.hypot(Q, P) <= radius

def _grid_from_file(filename, L: float, M: int) -> PhaseGrid:
    if not (L > 0 and M >= 2 and (M & (M - 1)) == 0):
        raise ValueError(f'{filename} describes no valid grid (L={L}, M={M})')
    return PhaseGrid(L=L, M=M)

class GridFunction:
    """Complex samples of a phase-space function on a PhaseGrid

    Instances are immutable: the sample array is stored read-only and every
    operation returns a new GridFunction.
    """
    def __init__(self, grid: PhaseGrid, values):
        values = np.array(values, dtype=complex)
        assert values.shape == grid.shape, \
            f'Expected samples of shape {grid.shape} (got {values.shape})'
        assert np.all(np.isfinite(values)), 'GridFunction samples must be finite'
        values.flags.writeable = False
        self.grid = grid
        self._values = values

    def __getitem__(self, key):
        return self._values[key]

    def __setitem__(self, key, value):
        raise NotImplementedError(
            f'Assigning into a {self.__class__.__name__} instance is not supported')

    def __delitem__(self, _):
        raise NotImplementedError(
            f'Deleting items from a {self.__class__.__name__} instance is not supported')

    def __repr__(self):
        return f'{self.__class__.__name__}(L={self.grid.L}, M={self.grid.M})'

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self):
        return self._values.shape

    def value_at(self, u: PhasePoint) -> complex:
        return complex(self._values[self.grid.index_of(u)])

    # ------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------

    def _check_grid(self, other):
        if self.grid != other.grid:
            raise GridMismatchError(f'Grid mismatch: {self.grid} vs {other.grid}')

    def _wrap(self, values):
        return GridFunction(self.grid, values)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check_grid(other)
            return self._wrap(self._values + other._values)
        return self._wrap(self._values + other)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self._values)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check_grid(other)
            return self._wrap(self._values * other._values)
        return self._wrap(self._values * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._wrap(self._values / scalar)

    def conjugate(self):
        return self._wrap(np.conj(self._values))

    # ------------------------------------------------------------
    # Alternate constructors
    # ------------------------------------------------------------

    @classmethod
    def zeros(cls, grid: PhaseGrid):
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def ones(cls, grid: PhaseGrid):
        return cls(grid, np.ones(grid.shape))

    @classmethod
    def sample(cls, grid: PhaseGrid, fn: Callable):
        """Evaluate a vectorized fn(q, p) at every node"""
        Q, P = grid.mesh()
        return cls(grid, np.broadcast_to(fn(Q, P), grid.shape))

    # ------------------------------------------------------------
    # I/O
    # ------------------------------------------------------------

    def save_csv(self, filename):
        """Write rows `q,p,re,im`, row-major in j then k"""
        Q, P = self.grid.mesh()
        table = np.stack([Q.ravel(), P.ravel(), self._values.real.ravel(),
                          self._values.imag.ravel()], axis=1)
        np.savetxt(filename, table, fmt='%.17g', delimiter=',', header=CSV_HEADER, comments='')

    @classmethod
    def from_csv(cls, filename):
        try:
            table = np.loadtxt(filename, delimiter=',', skiprows=1, ndmin=2)
        except IOError as e:
            logger.error(f'Grid file not found: {filename}')
            raise e
        M = int(round(np.sqrt(len(table))))
        if M * M != len(table):
            raise ValueError(f'{filename} does not hold a square grid')
        grid = _grid_from_file(filename, float(-table[0, 0]), M)
        Q, P = grid.mesh()
        if not (np.allclose(table[:, 0], Q.ravel()) and np.allclose(table[:, 1], P.ravel())):
            raise ValueError(f'Node coordinates in {filename} do not form a PhaseGrid')
        values = (table[:, 2] + 1j * table[:, 3]).reshape(grid.shape)
        return cls(grid, values)

    def save_binary(self, filename):
        """Magic bytes, M as <i8, L as <f8, then interleaved (re, im) <f8 samples"""
        samples = np.stack([self._values.real, self._values.imag], axis=-1)
        with open(filename, 'wb') as file:
            file.write(BINARY_MAGIC)
            file.write(np.array([self.grid.M], dtype='<i8').tobytes())
            file.write(np.array([self.grid.L], dtype='<f8').tobytes())
            file.write(samples.astype('<f8').tobytes())

    @classmethod
    def from_binary(cls, filename):
        try:
            with open(filename, 'rb') as file:
                payload = file.read()
        except IOError as e:
            logger.error(f'Grid file not found: {filename}')
            raise e
        if not payload.startswith(BINARY_MAGIC):
            raise ValueError(f'{filename} is not a moyal binary grid')
        offset = len(BINARY_MAGIC)
        M = int(np.frombuffer(payload, dtype='<i8', count=1, offset=offset)[0])
        L = float(np.frombuffer(payload, dtype='<f8', count=1, offset=offset + 8)[0])
        grid = _grid_from_file(filename, L, M)
        samples = np.frombuffer(payload, dtype='<f8', offset=offset + 16).reshape(M, M, 2)
        return cls(grid, samples[..., 0] + 1j * samples[..., 1])

    # ------------------------------------------------------------
    # Rendering
    # ------------------------------------------------------------

    def plot(self, part='abs', blocking=True):
        image = {
            'abs': np.abs,
            'real': np.real,
            'imag': np.imag,
        }[part](self._values)
        L = self.grid.L
        # rows are q, so transpose to put q on the horizontal axis
        plt.imshow(image.T, origin='lower', extent=(-L, L, -L, L))
        plt.xlabel('q')
        plt.ylabel('p')
        if blocking:
            plt.show()
