import pytest

import matplotlib.pyplot as plt
import numpy as np

from moyal.basis import BasisIndex, basis_fn
from moyal.errors import GridMismatchError, OffGridError
from moyal.phasegrid import (GridFunction, PhaseGrid, PhasePoint, boundary_mass, conjugate,
                             fourier_ordinary, fourier_symplectic, fourier_symplectic_tilde,
                             integrate, l2_distance, modulate, norm, pair_bilinear,
                             pair_sesquilinear, reflect, sup_distance, translate)

@pytest.fixture
def grid():
    return PhaseGrid(L=8.0, M=128)

@pytest.fixture
def f0(grid):
    return basis_fn(BasisIndex(0, 0), grid)

def gaussian_poly(grid, rng):
    """Random quadratic polynomial times a displaced Gaussian"""
    c = rng.normal(size=6) + 1j * rng.normal(size=6)

    def fn(q, p):
        poly = c[0] + c[1] * q + c[2] * p + c[3] * q * q + c[4] * q * p + c[5] * p * p
        return poly * np.exp(-((q - 0.5)**2 + (p + 0.25)**2) / 2)

    return GridFunction.sample(grid, fn)

def test_grid_geometry(grid):
    assert grid.h == pytest.approx(0.125)
    assert grid.nodes[0] == -8.0
    assert grid.nodes[-1] == pytest.approx(8.0 - grid.h)
    assert grid.shape == (128, 128)
    assert grid.index_of(PhasePoint(0.0, 0.0)) == (64, 64)
    assert grid.nodes[grid.negated_indices()][1:] == pytest.approx(-grid.nodes[1:])

def test_grid_rejects_bad_sizes():
    with pytest.raises(AssertionError):
        PhaseGrid(L=8.0, M=100)
    with pytest.raises(AssertionError):
        PhaseGrid(L=-1.0, M=64)

def test_grid_function_is_read_only(f0):
    with pytest.raises(NotImplementedError):
        f0[0, 0] = 1
    with pytest.raises(ValueError):
        f0.values[0, 0] = 1

def test_integrate_zero_and_gaussians():
    grid = PhaseGrid(L=8.0, M=256)
    assert integrate(GridFunction.zeros(grid)) == 0
    assert integrate(basis_fn(BasisIndex(0, 0), grid)) == pytest.approx(2, abs=1e-10)
    gauss = GridFunction.sample(grid, lambda q, p: np.exp(-(q**2 + p**2) / 2))
    assert integrate(gauss) == pytest.approx(1, abs=1e-10)

def test_pairings(grid, f0):
    assert pair_bilinear(f0, GridFunction.ones(grid)) == pytest.approx(2, abs=1e-10)
    assert pair_bilinear(f0, GridFunction.zeros(grid)) == 0
    odd = GridFunction.sample(grid, lambda q, p: q * np.exp(-(q**2 + p**2) / 2))
    assert abs(pair_bilinear(odd, f0)) < 1e-12
    assert pair_sesquilinear(f0, f0) == pytest.approx(1, abs=1e-10)
    assert norm(GridFunction.zeros(grid)) == 0

def test_orthogonality_of_f00_and_f11():
    grid = PhaseGrid(L=10.0, M=256)
    f00, f11 = basis_fn(BasisIndex(0, 0), grid), basis_fn(BasisIndex(1, 1), grid)
    assert abs(pair_sesquilinear(f00, f11)) < 1e-8

def test_pairing_grid_mismatch(f0):
    other = GridFunction.zeros(PhaseGrid(L=8.0, M=64))
    with pytest.raises(GridMismatchError):
        pair_bilinear(f0, other)
    with pytest.raises(GridMismatchError):
        f0 + other

def test_gaussian_is_fixed_by_every_transform(f0):
    for transform in (fourier_ordinary, fourier_symplectic, fourier_symplectic_tilde):
        assert sup_distance(transform(f0), f0) < 1e-8

@pytest.mark.parametrize('m,n', [(1, 1), (0, 1), (1, 0), (2, 1)])
def test_fourier_eigenvalues(grid, m, n):
    f = basis_fn(BasisIndex(m, n), grid)
    assert sup_distance(fourier_ordinary(f), f * (-1j)**(m + n)) < 1e-7
    assert sup_distance(fourier_symplectic(f), f * (-1)**n) < 1e-7
    assert sup_distance(fourier_symplectic_tilde(f), f * (-1)**m) < 1e-7

def test_symplectic_transforms_are_involutions(grid, rng):
    f = gaussian_poly(grid, rng)
    assert sup_distance(fourier_symplectic(fourier_symplectic(f)), f) < 1e-9
    assert sup_distance(fourier_symplectic_tilde(fourier_symplectic_tilde(f)), f) < 1e-9

def test_transform_conjugation_parity_and_duality(grid, rng):
    f, g = gaussian_poly(grid, rng), gaussian_poly(grid, rng)
    Ff = fourier_symplectic(f)
    assert sup_distance(conjugate(Ff), fourier_symplectic_tilde(conjugate(f))) < 1e-10
    assert sup_distance(fourier_symplectic_tilde(f), reflect(Ff)) < 1e-10
    lhs = pair_bilinear(Ff, g)
    rhs = pair_bilinear(f, fourier_symplectic_tilde(g))
    assert lhs == pytest.approx(rhs, abs=1e-9)

def test_parseval(grid, rng):
    f = gaussian_poly(grid, rng)
    assert norm(fourier_ordinary(f)) == pytest.approx(norm(f), abs=1e-10)

def test_translate(grid, f0):
    assert sup_distance(translate(f0, PhasePoint(0.0, 0.0)), f0) == 0
    shifted = translate(f0, PhasePoint(1.0, 0.0))
    assert shifted.value_at(PhasePoint(1.0, 0.0)) == pytest.approx(2)
    s = PhasePoint(3 * grid.h, -5 * grid.h)
    assert np.array_equal(translate(translate(f0, s), -s).values, f0.values)

def test_translate_rejects_off_grid_shift(f0):
    with pytest.raises(OffGridError):
        translate(f0, PhasePoint(0.01, 0.0))

def test_modulate(grid, f0, rng):
    f = gaussian_poly(grid, rng)
    assert sup_distance(modulate(f, PhasePoint(0.0, 0.0)), f) == 0
    origin = PhasePoint(0.0, 0.0)
    assert modulate(f, PhasePoint(1.3, -0.7)).value_at(origin) == pytest.approx(f.value_at(origin))

def test_transform_table(grid, f0):
    s = PhasePoint(16 * grid.h, 0.0)
    assert sup_distance(fourier_symplectic(translate(f0, s)), modulate(fourier_symplectic(f0),
                                                                        -s)) < 1e-7
    assert sup_distance(fourier_symplectic(modulate(f0, s)), translate(fourier_symplectic(f0),
                                                                        -s)) < 1e-7

def test_diagnostics(grid, f0):
    assert boundary_mass(f0) < 1e-12
    assert boundary_mass(GridFunction.ones(grid)) == 1
    assert l2_distance(f0, f0) == 0
    assert l2_distance(f0 * 2, f0, relative=True) == pytest.approx(1)
    assert sup_distance(f0 * 3, f0, radius=0.01) == pytest.approx(4)

def test_csv_round_trip(tmp_path, rng):
    grid = PhaseGrid(L=4.0, M=16)
    f = gaussian_poly(grid, rng)
    filename = tmp_path / 'f.csv'
    f.save_csv(filename)
    with open(filename, 'r') as file:
        assert file.readline().strip() == 'q,p,re,im'
    loaded = GridFunction.from_csv(filename)
    assert loaded.grid == grid
    assert np.array_equal(loaded.values, f.values)

def test_binary_round_trip(tmp_path, rng):
    grid = PhaseGrid(L=4.0, M=16)
    f = gaussian_poly(grid, rng)
    filename = tmp_path / 'f.bin'
    f.save_binary(filename)
    with open(filename, 'rb') as file:
        assert file.read(6) == b'MOYAL1'
    loaded = GridFunction.from_binary(filename)
    assert loaded.grid == grid
    assert np.array_equal(loaded.values, f.values)

def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        GridFunction.from_csv(tmp_path / 'missing.csv')

def test_malformed_grid_file(tmp_path):
    filename = tmp_path / 'rows.csv'
    f = GridFunction.sample(PhaseGrid(L=4.0, M=8), lambda q, p: q + 1j * p)
    f.save_csv(filename)
    lines = filename.read_text().splitlines()
    filename.write_text('\n'.join(lines[:-3]) + '\n')
    with pytest.raises(ValueError):
        GridFunction.from_csv(filename)

def test_plot_draws_on_current_axes():
    plt.switch_backend('Agg')
    f = GridFunction.sample(PhaseGrid(L=4.0, M=16), lambda q, p: np.exp(-(q**2 + p**2)))
    f.plot(part='real', blocking=False)
    assert plt.gca().images[-1].get_array().shape == (16, 16)
    plt.close('all')
