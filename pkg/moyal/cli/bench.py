"""Timing sweeps for `moyal bench`

The inputs are displaced and squeezed Gaussians, Schwartz functions outside any
finite span of the basis, so the matrix backend's error falls with M_b.
"""
import logging
import time

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..basis import BasisSpec, analyze, synthesize
from ..phasegrid import GridFunction, PhaseGrid, l2_distance
from ..seqspace import matrix_star
from ..stargrid import twisted_product
from .config import JobSpec

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ['backend', 'param', 'seconds', 'l2_error']
DEFAULT_VALUES = {'M': [64, 128, 256], 'M_b': [8, 16, 32]}

def schwartz_pair(grid: PhaseGrid):
    f = GridFunction.sample(grid, lambda q, p: 2 * np.exp(-((q - 1)**2 + p**2) / 2))
    g = GridFunction.sample(grid, lambda q, p: np.exp(-(q**2 / 1.5 + 1.5 * (p - 0.5)**2) / 2))
    return f, g

def _best_time(fn, repeat: int):
    best, value = np.inf, None
    for _ in range(repeat):
        start = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - start)
    return best, value

def _matrix_product(f, g, order: int):
    spec = BasisSpec(order, f.grid)
    return matrix_star(analyze(f, spec), analyze(g, spec))

def sweep_grid(job: JobSpec, values, repeat: int):
    """Grid backend over M; error against the matrix backend at order M_b on the same grid"""
    rows = []
    for M in tqdm(values, desc='bench M'):
        f, g = schwartz_pair(PhaseGrid(job.L, M))
        seconds, product = _best_time(lambda: twisted_product(f, g), repeat)
        reference = synthesize(_matrix_product(f, g, job.M_b), f.grid)
        rows.append(('grid', f'M={M}', seconds, l2_distance(product, reference, relative=True)))
        logger.debug(f'M={M}: {seconds:.3g}s')
    return rows

def sweep_matrix(job: JobSpec, values, repeat: int):
    """Matrix backend over M_b; error against the grid backend on the job grid"""
    f, g = schwartz_pair(PhaseGrid(job.L, job.M))
    reference = twisted_product(f, g)
    rows = []
    for order in tqdm(values, desc='bench M_b'):
        spec = BasisSpec(order, f.grid)
        a, b = analyze(f, spec), analyze(g, spec)
        seconds, product = _best_time(lambda: matrix_star(a, b), repeat)
        error = l2_distance(synthesize(product, f.grid), reference, relative=True)
        rows.append(('matrix', f'M_b={order}', seconds, error))
        logger.debug(f'M_b={order}: {seconds:.3g}s')
    return rows

def sweep(job: JobSpec, parameter: str, values=None, repeat: int = 3) -> pd.DataFrame:
    values = DEFAULT_VALUES[parameter] if values is None else values
    if parameter == 'M':
        rows = sweep_grid(job, values, repeat)
    else:
        rows = sweep_matrix(job, values, repeat)
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)
