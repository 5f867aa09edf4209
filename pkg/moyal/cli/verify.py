"""Identity checks run by `moyal verify`

Each check returns one or more CheckResult rows: the largest measured error
against a named tolerance from the job profile (times --tolerance-scale).
Exact checks report an error of 0 or 1 (holds / fails).
"""
import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
import sympy
from scipy.special import erfc
from tqdm import tqdm

from ..basis import (BasisIndex, BasisSpec, basis_change_coeff, basis_fn, gram, hermite_tensor,
                     synthesize)
from ..phasegrid import (GridFunction, PhaseGrid, PhasePoint, integrate, l2_distance,
                         pair_sesquilinear, sup_distance)
from ..seqspace import (CoeffMatrix, StWeights, hs_sum_partial, howe_factorize, matrix_star,
                        star_in_Gst)
from ..stargrid import twisted_product, twisted_translate
from ..symbolic import (Distribution, GaussPoly, PolyQP, dist_star, moyal_bracket, poisson_bracket,
                        poly_star, weyl_left, weyl_right)
from ..symbolic.polynomial import p_sym, q_sym
from .config import JobSpec

logger = logging.getLogger(__name__)

MATRIX_UNIT_ORDER = 7
EXACT_EIGEN_INDEX = 12
FOURIER_INDEX = 8
ORTHONORMAL_INDEX = 10
BASIS_CHANGE_DEGREE = 6
BANACH_WEIGHTS = [
    (StWeights(0, 0), StWeights(0, 0)),
    (StWeights(1, 1), StWeights(-1, 2)),
    (StWeights(2, -1), StWeights(1, 0)),
]

@dataclass
class CheckResult:
    name: str
    error: float
    tolerance: float
    detail: str = ''
    seconds: float = 0.0
    passed: bool = field(init=False)

    def __post_init__(self):
        self.error = float(self.error)
        self.passed = bool(self.error <= self.tolerance)

    def to_dict(self):
        return asdict(self)

def _exact(name, holds: bool, detail=''):
    # exact identities pass with tolerance 0
    return CheckResult(name, 0.0 if holds else 1.0, 0.0, detail)

def _basis_samples(N: int, grid: PhaseGrid) -> dict:
    return {(m, n): basis_fn(BasisIndex(m, n), grid) for m in range(N) for n in range(N)}

def _window(grid: PhaseGrid, width: float = 0.75) -> GridFunction:
    """Radial flat-top window, 1 inside 2L/3 and erfc-tapered outside"""
    rho, _ = grid.polar()
    return GridFunction(grid, erfc((rho - 2 * grid.L / 3) / width) / 2)

def _random_gauss_poly(rng, degree: int) -> GaussPoly:
    terms = 0
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            terms += int(rng.integers(-2, 3)) * q_sym**i * p_sym**j
    return GaussPoly.from_poly(PolyQP(terms if terms != 0 else 1))

# ------------------------------------------------------------
# Checks
# ------------------------------------------------------------

def check_matrix_units(job: JobSpec, rng):
    N = MATRIX_UNIT_ORDER
    worst = 0.0
    for m in range(N):
        for n in range(N):
            for k in range(N):
                for l in range(N):
                    product = matrix_star(CoeffMatrix.unit(N, m, n), CoeffMatrix.unit(N, k, l))
                    expected = CoeffMatrix.unit(N, m, l) * float(n == k)
                    worst = max(worst, (product - expected).max_abs())
    results = [CheckResult('matrix-units[matrix]', worst, job.tolerance('matrix-units-matrix'),
                           f'indices < {N}')]

    # f_mn x (sum r_kl f_kl) = sum_l r_nl f_ml covers every (k, l) per product
    grid = PhaseGrid(job.L_units, job.M)
    N = job.max_index + 1
    f = _basis_samples(N, grid)
    r = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    r /= np.abs(r).max()
    mixture = sum((f[k, l] * r[k, l] for k in range(N) for l in range(N)), GridFunction.zeros(grid))
    worst = 0.0
    for m, n in tqdm(sorted(f), desc='matrix-units', leave=False):
        expected = sum((f[m, l] * r[n, l] for l in range(N)), GridFunction.zeros(grid))
        worst = max(worst, sup_distance(twisted_product(f[m, n], mixture), expected))
    results.append(CheckResult('matrix-units[grid]', worst, job.tolerance('matrix-units-grid'),
                               f'indices <= {job.max_index}, L={grid.L}, M={grid.M}'))
    return results

def check_orthonormality(job: JobSpec, rng):
    N = ORTHONORMAL_INDEX + 1
    spec = BasisSpec(N, PhaseGrid(job.L_ortho, job.M))
    error = np.abs(gram(spec) - np.eye(N * N)).max()
    return [CheckResult('orthonormality', error, job.tolerance('orthonormality'),
                        f'indices <= {N - 1}, L={spec.grid.L}, M={spec.grid.M}')]

def check_gaussian_integral(job: JobSpec, rng):
    f0 = basis_fn(BasisIndex(0, 0), PhaseGrid(job.L, job.M))
    error = max(abs(integrate(f0) - 2), abs(pair_sesquilinear(f0, f0) - 1))
    return [CheckResult('gaussian-integral', error, job.tolerance('gaussian-integral'))]

def check_eigenrelations(job: JobSpec, rng):
    H = PolyQP.H()
    holds = True
    for m in range(EXACT_EIGEN_INDEX + 1):
        for n in range(EXACT_EIGEN_INDEX + 1):
            x = GaussPoly.matrix_unit(m, n)
            holds &= weyl_left(H, x) == x * (2 * m + 1)
            holds &= weyl_right(H, x) == x * (2 * n + 1)
    results = [_exact('eigenrelations[exact]', holds, f'm, n <= {EXACT_EIGEN_INDEX}')]

    grid = PhaseGrid(job.L_wide, job.M_wide)
    H_windowed = H.sample(grid) * _window(grid)
    bulk = grid.L / 2
    N = min(job.max_index, 4) + 1
    worst = 0.0
    for (m, n), f_mn in tqdm(sorted(_basis_samples(N, grid).items()), desc='eigenrelations',
                             leave=False):
        left = twisted_product(H_windowed, f_mn)
        right = twisted_product(f_mn, H_windowed)
        worst = max(worst, sup_distance(left, f_mn * (2 * m + 1), radius=bulk),
                    sup_distance(right, f_mn * (2 * n + 1), radius=bulk))
    results.append(CheckResult('eigenrelations[grid]', worst, job.tolerance('eigenrelations-grid'),
                               f'm, n < {N}, |u| <= {bulk}'))
    return results

def check_fourier_eigenbasis(job: JobSpec, rng):
    from ..phasegrid import fourier_ordinary, fourier_symplectic, fourier_symplectic_tilde
    grid = PhaseGrid(job.L_wide, job.M_wide)
    worst = 0.0
    for (m, n), f_mn in _basis_samples(FOURIER_INDEX + 1, grid).items():
        worst = max(worst, sup_distance(fourier_ordinary(f_mn), f_mn * (-1j)**(m + n)),
                    sup_distance(fourier_symplectic(f_mn), f_mn * (-1)**n),
                    sup_distance(fourier_symplectic_tilde(f_mn), f_mn * (-1)**m))
    return [CheckResult('fourier-eigenbasis', worst, job.tolerance('fourier-eigenbasis'),
                        f'indices <= {FOURIER_INDEX}, L={grid.L}')]

def check_ccr(job: JobSpec, rng):
    a, abar, H = PolyQP.a(), PolyQP.abar(), PolyQP.H()
    holds = (poly_star(a, abar) - poly_star(abar, a) == 2 and poly_star(abar, a) == H - 1
             and poly_star(a, abar) == H + 1)
    return [_exact('ccr', holds)]

def check_tracial(job: JobSpec, rng, pairs: int = 20):
    grid = PhaseGrid(job.L, job.M)
    integral, cyclic = 0.0, 0.0
    for _ in tqdm(range(pairs), desc='tracial', leave=False):
        f = _random_gauss_poly(rng, 2).sample(grid)
        g = _random_gauss_poly(rng, 2).sample(grid)
        fg = integrate(twisted_product(f, g))
        gf = integrate(twisted_product(g, f))
        integral = max(integral, abs(fg - integrate(f * g)))
        cyclic = max(cyclic, abs(fg - gf))
    return [
        CheckResult('tracial[integral]', integral, job.tolerance('tracial-integral'),
                    f'{pairs} pairs'),
        CheckResult('tracial[cyclic]', cyclic, job.tolerance('tracial-cyclic'), f'{pairs} pairs'),
    ]

def check_banach(job: JobSpec, rng, trials: int = 200, order: int = 8):
    violations = 0
    for t in range(trials):
        wf, wg = BANACH_WEIGHTS[t % len(BANACH_WEIGHTS)]
        f = CoeffMatrix(rng.normal(size=(order, order)) + 1j * rng.normal(size=(order, order)))
        g = CoeffMatrix(rng.normal(size=(order, order)) + 1j * rng.normal(size=(order, order)))
        _, bound_ok = star_in_Gst(f, g, wf, wg, slack=job.tolerance('banach'))
        violations += not bound_ok
    return [CheckResult('banach', violations, 0, f'{violations} violations in {trials} trials')]

def check_backend_agreement(job: JobSpec, rng, order: int = 32):
    grid = PhaseGrid(job.L_wide, job.M_wide)
    x, y = _random_gauss_poly(rng, 4), _random_gauss_poly(rng, 4)
    on_grid = twisted_product(x.sample(grid), y.sample(grid))
    on_matrix = synthesize(matrix_star(x.to_coeffs(order), y.to_coeffs(order)), grid)
    error = l2_distance(on_grid, on_matrix, relative=True)
    return [CheckResult('backend-agreement', error, job.tolerance('backend-agreement'),
                        f'M_b={order}, L={grid.L}, M={grid.M}')]

def check_hs_sum(job: JobSpec, rng):
    partial = [hs_sum_partial(K) for K in range(1, 101)]
    monotone = bool(np.all(np.diff(partial) > 0))
    error = abs(partial[-1] - (np.pi**2 / 8)**2)
    return [
        CheckResult('hs-sum', error, job.tolerance('hs-sum'), 'K=100'),
        _exact('hs-sum[monotone]', monotone),
    ]

def check_basis_change(job: JobSpec, rng):
    grid = PhaseGrid(job.L, job.M)
    projection, unitarity = 0.0, 0.0
    for N in range(BASIS_CHANGE_DEGREE + 1):
        tensors = [hermite_tensor(k, N - k, grid) for k in range(N + 1)]
        for m in range(N + 1):
            f_mn = basis_fn(BasisIndex(m, N - m), grid)
            row = [basis_change_coeff(m, N - m, k, N - k) for k in range(N + 1)]
            numeric = [pair_sesquilinear(h_kl, f_mn) for h_kl in tensors]
            projection = max(projection, np.abs(np.subtract(row, numeric)).max())
            unitarity = max(unitarity, abs(np.sum(np.abs(row)**2) - 1))
    tol = job.tolerance('basis-change')
    return [
        CheckResult('basis-change[projection]', projection, tol, f'm + n <= {BASIS_CHANGE_DEGREE}'),
        CheckResult('basis-change[unitary]', unitarity, tol),
    ]

def check_howe(job: JobSpec, rng, trials: int = 50, order: int = 12):
    decay = np.exp(-np.add.outer(np.arange(order), np.arange(order)) / 2)
    residual, structure = 0.0, True
    for _ in range(trials):
        c = CoeffMatrix(decay * (rng.normal(size=(order, order)) + 1j * rng.normal(size=(order, order))))
        b, d = howe_factorize(c)
        diagonal = np.diag(d.entries).real
        residual = max(residual, (matrix_star(b, d) - c).max_abs() / c.max_abs())
        structure &= bool(np.all(np.diff(diagonal) <= 0))
        structure &= bool(np.all(np.abs(b.entries) <= diagonal[None, :] * (1 + 1e-12)))
    return [
        CheckResult('howe', residual, job.tolerance('howe'), f'{trials} truncations'),
        _exact('howe[structure]', structure, 'd nonincreasing, |b_mn| <= d_n'),
    ]

def check_moyal_bracket(job: JobSpec, rng):
    q, p = PolyQP.q(), PolyQP.p()
    holds = moyal_bracket(q * q, p * p) == q * p * 8 * sympy.I
    monomials = [PolyQP(q_sym**i * p_sym**j) for i in range(3) for j in range(3 - i)]
    for S in monomials:
        for T in monomials:
            bracket = moyal_bracket(S, T)
            holds &= bracket == poisson_bracket(S, T) * 2 * sympy.I
            holds &= bracket == poly_star(S, T) - poly_star(T, S)
    return [_exact('moyal-bracket', holds, 'all monomial pairs of degree <= 2')]

def check_fourier_cross(job: JobSpec, rng):
    N = job.max_index + 1
    delta = Distribution.delta()
    holds = True
    for m in range(N):
        for n in range(N):
            unit = CoeffMatrix.unit(N, m, n)
            holds &= (dist_star(delta, unit, 'left') - unit * (-1)**m).max_abs() == 0
            holds &= (dist_star(delta, unit, 'right') - unit * (-1)**n).max_abs() == 0
    grid = PhaseGrid(job.L_units, job.M)
    worst = 0.0
    for (m, n), f_mn in _basis_samples(N, grid).items():
        worst = max(worst, sup_distance(dist_star(delta, f_mn, 'left'), f_mn * (-1)**m),
                    sup_distance(dist_star(delta, f_mn, 'right'), f_mn * (-1)**n))
    return [
        _exact('fourier-cross[matrix]', holds),
        CheckResult('fourier-cross[grid]', worst, job.tolerance('fourier-cross-grid'),
                    f'indices <= {job.max_index}, L={grid.L}'),
    ]

def check_twisted_translation(job: JobSpec, rng):
    grid = PhaseGrid(job.L, job.M)
    f0 = basis_fn(BasisIndex(0, 0), grid)
    g = _random_gauss_poly(rng, 2).sample(grid)
    reach = int(grid.L / 4 / grid.h / np.sqrt(2))
    shifts = [PhasePoint(k * grid.h, l * grid.h) for k, l in ((reach, 0), (0, -reach), (reach, reach))]
    worst = 0.0
    product = twisted_product(f0, g)
    for v in shifts:
        lhs = twisted_translate(product, v)
        rhs = twisted_product(f0, twisted_translate(g, v))
        # roll wraps the far tail around; compare away from the wrapped ring
        worst = max(worst, sup_distance(lhs, rhs, radius=grid.L / 2))
    return [CheckResult('twisted-translation', worst, job.tolerance('twisted-translation'),
                        f'{len(shifts)} grid-aligned shifts, |v| <= L/4, |u| <= L/2')]

CHECKS = {
    'matrix-units': check_matrix_units,
    'orthonormality': check_orthonormality,
    'gaussian-integral': check_gaussian_integral,
    'eigenrelations': check_eigenrelations,
    'fourier-eigenbasis': check_fourier_eigenbasis,
    'ccr': check_ccr,
    'tracial': check_tracial,
    'banach': check_banach,
    'backend-agreement': check_backend_agreement,
    'hs-sum': check_hs_sum,
    'basis-change': check_basis_change,
    'howe': check_howe,
    'moyal-bracket': check_moyal_bracket,
    'fourier-cross': check_fourier_cross,
    'twisted-translation': check_twisted_translation,
}

def run_checks(job: JobSpec, only=None) -> list:
    names = list(CHECKS) if only is None else [name for name in CHECKS if name in only]
    results = []
    for name in tqdm(names, desc='verify'):
        # a fresh generator per check keeps results independent of --only
        rng = np.random.default_rng([job.seed, list(CHECKS).index(name)])
        start = time.perf_counter()
        rows = CHECKS[name](job, rng)
        elapsed = time.perf_counter() - start
        for row in rows:
            row.seconds = elapsed / len(rows)
            logger.info(f'{row.name}: error {row.error:.3g} (tolerance {row.tolerance:.3g})')
        results.extend(rows)
    return results

def to_frame(results) -> pd.DataFrame:
    table = pd.DataFrame([r.to_dict() for r in results])
    table['status'] = np.where(table['passed'], 'pass', 'FAIL')
    return table[['name', 'status', 'error', 'tolerance', 'seconds', 'detail']]
