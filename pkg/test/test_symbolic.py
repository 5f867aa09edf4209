import pytest

import numpy as np
import sympy

from moyal.basis import BasisIndex, basis_fn
from moyal.errors import BackendMismatchError, OrderMismatchError, ParseError
from moyal.phasegrid import (GridFunction, PhaseGrid, fourier_symplectic,
                             fourier_symplectic_tilde, sup_distance)
from moyal.seqspace import CoeffMatrix, fourier
from moyal.symbolic import (Distribution, GaussPoly, MultiIndex, PolyQP, derivative_hat,
                            dist_convolve, dist_star, format_poly, gauss_star, hermite_operator,
                            moyal_bracket, parse_expression, poisson_bracket, poly_star,
                            star_ordered, vacuum_expectation, weyl_left, weyl_right)
from moyal.symbolic.polynomial import p_sym, q_sym

I = sympy.I
q, p = PolyQP.q(), PolyQP.p()

@pytest.fixture
def grid():
    return PhaseGrid(L=12.0, M=128)

def random_poly(rng, degree=2):
    expr = 0
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            re, im = rng.integers(-2, 3, size=2)
            expr += (int(re) + int(im) * I) * q_sym**i * p_sym**j
    return PolyQP(expr)

# ------------------------------------------------------------
# Polynomials
# ------------------------------------------------------------

def test_canonical_commutation():
    assert poly_star(q, p) == PolyQP(q_sym * p_sym + I)
    assert poly_star(p, q) == PolyQP(q_sym * p_sym - I)
    assert moyal_bracket(q, p) == PolyQP(2 * I)

def test_constants_are_central(rng):
    P = random_poly(rng)
    assert poly_star(PolyQP.one(), P) == P
    assert poly_star(P, PolyQP(3)) == P * 3

def test_hamiltonian_square():
    H = PolyQP.H()
    assert poly_star(H, H) == PolyQP(((q_sym**2 + p_sym**2) / 2)**2 - 1)

def test_ladder_commutator():
    a, abar = PolyQP.a(), PolyQP.abar()
    assert poly_star(a, abar) - poly_star(abar, a) == PolyQP(2)
    assert poly_star(abar, a) + PolyQP.one() == PolyQP.H()

def test_moyal_bracket_examples():
    assert moyal_bracket(q * q, p * p) == PolyQP(8 * I * q_sym * p_sym)
    cubic = moyal_bracket(PolyQP(q_sym**3), PolyQP(p_sym**3))
    assert cubic == PolyQP(18 * I * q_sym**2 * p_sym**2 - 12 * I)
    assert poly_star(PolyQP(q_sym**3), PolyQP(p_sym**3)) == PolyQP(
        q_sym**3 * p_sym**3 + 9 * I * q_sym**2 * p_sym**2 - 18 * q_sym * p_sym - 6 * I)

def test_moyal_bracket_is_poisson_up_to_degree_two(rng):
    for _ in range(5):
        P, Q = random_poly(rng), random_poly(rng)
        assert moyal_bracket(P, Q) == poisson_bracket(P, Q) * (2 * I)
        assert moyal_bracket(P, Q) == poly_star(P, Q) - poly_star(Q, P)

def test_poisson_bracket():
    assert poisson_bracket(q, p) == PolyQP(1)
    assert poisson_bracket(PolyQP.H(), q) == PolyQP(-p_sym)

def test_derivative_hat():
    P = PolyQP(q_sym**2 * p_sym)
    assert derivative_hat(P, MultiIndex(1, 0)) == PolyQP(q_sym**2)
    assert derivative_hat(P, MultiIndex(0, 1)) == PolyQP(-2 * q_sym * p_sym)
    assert derivative_hat(P, MultiIndex(0, 0)) == P
    assert len(MultiIndex.of_order(3)) == 4
    assert MultiIndex(2, 3).factorial == 12

def test_associativity_and_involution(rng):
    for _ in range(3):
        P, Q, R = (random_poly(rng) for _ in range(3))
        assert poly_star(poly_star(P, Q), R) == poly_star(P, poly_star(Q, R))
        assert poly_star(P, Q).conjugate() == poly_star(Q.conjugate(), P.conjugate())

def test_bracket_is_a_derivation(rng):
    P, Q, R = (random_poly(rng) for _ in range(3))
    lhs = moyal_bracket(P, poly_star(Q, R))
    rhs = poly_star(moyal_bracket(P, Q), R) + poly_star(Q, moyal_bracket(P, R))
    assert lhs == rhs

def test_star_ordering():
    assert star_ordered(PolyQP.H()) == {(1, 1): 1, (0, 0): 1}
    assert star_ordered(PolyQP.one()) == {(0, 0): 1}

def test_weyl_actions_reproduce_poly_star(rng):
    P, Q = random_poly(rng), random_poly(rng)
    assert weyl_left(P, Q) == poly_star(P, Q)
    assert weyl_right(Q, P) == poly_star(P, Q)

def test_format_poly():
    assert format_poly(poly_star(q, p)) == 'q*p + 1i'
    assert format_poly(PolyQP(0)) == '0'
    assert format_poly(PolyQP(3 - q_sym**2 / 2)) == '-0.5*q^2 + 3'
    assert format_poly(PolyQP((1 + 2 * I) * p_sym)) == '(1+2i)*p'

# ------------------------------------------------------------
# Gaussian elements
# ------------------------------------------------------------

def test_gaussian_is_idempotent():
    f0 = GaussPoly.vacuum()
    assert gauss_star(f0, f0) == f0

@pytest.mark.parametrize('m,n', [(0, 0), (1, 2), (3, 1), (4, 4)])
def test_unnormalized_ladder_relations(m, n):
    g = GaussPoly.matrix_unit(m, n)
    assert g.abar_star() == GaussPoly.matrix_unit(m + 1, n)
    assert g.star_a() == GaussPoly.matrix_unit(m, n + 1)
    if m:
        assert g.a_star() == GaussPoly.matrix_unit(m - 1, n) * (2 * m)
    else:
        assert g.a_star().is_zero
    if n:
        assert g.star_abar() == GaussPoly.matrix_unit(m, n - 1) * (2 * n)
    else:
        assert g.star_abar().is_zero

@pytest.mark.parametrize('m,n', [(0, 0), (2, 1), (3, 5)])
def test_hermite_operator_eigenvalues(m, n):
    g = GaussPoly.matrix_unit(m, n)
    assert hermite_operator(g) == g * (2 * (m + n + 1))

def test_normalized_matrix_units():
    f01, f10 = GaussPoly.basis(0, 1), GaussPoly.basis(1, 0)
    assert gauss_star(f01, f10) == GaussPoly.vacuum()
    assert gauss_star(f01, f01).is_zero
    assert gauss_star(GaussPoly.matrix_unit(2, 1), GaussPoly.matrix_unit(1, 3)) == \
        GaussPoly.matrix_unit(2, 3) * 2

@pytest.mark.parametrize('m,n', [(0, 0), (1, 1), (2, 2), (1, 2), (3, 0)])
def test_vacuum_expectation(m, n):
    expected = 2**n * sympy.factorial(n) if m == n else 0
    assert vacuum_expectation(m, n) == expected

def test_units_round_trip():
    units = {(0, 0): 1, (2, 1): I, (1, 3): -3}
    assert GaussPoly.from_units(units).to_units() == units

def test_to_coeffs():
    c = GaussPoly.basis(2, 1).to_coeffs(4)
    assert np.allclose(c.entries, CoeffMatrix.unit(4, 2, 1).entries)
    assert np.allclose(GaussPoly.from_poly(PolyQP.one()).to_coeffs(2).entries,
                       CoeffMatrix.unit(2, 0, 0).entries)
    with pytest.raises(OrderMismatchError):
        GaussPoly.basis(2, 1).to_coeffs(2)

@pytest.mark.parametrize('m,n', [(1, 0), (2, 1), (0, 3)])
def test_gauss_samples_match_basis_functions(grid, m, n):
    sampled = GaussPoly.basis(m, n).sample(grid)
    assert sup_distance(sampled, basis_fn(BasisIndex(m, n), grid)) < 1e-10

def test_gauss_conjugate():
    assert GaussPoly.basis(2, 1).conjugate() == GaussPoly.basis(1, 2)

# ------------------------------------------------------------
# Distributions
# ------------------------------------------------------------

def test_distribution_validation():
    with pytest.raises(ValueError):
        Distribution('bogus')
    with pytest.raises(ValueError):
        Distribution('poly')
    with pytest.raises(ValueError):
        dist_star(Distribution.one(), CoeffMatrix.identity(2), side='up')

def test_one_and_delta_on_coefficients():
    rng = np.random.default_rng(1)
    c = CoeffMatrix(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    assert dist_star(Distribution.one(), c) is c
    assert np.allclose(dist_star(Distribution.delta(), c).entries,
                       fourier(c, 'symplectic_tilde').entries)
    assert np.allclose(dist_star(Distribution.delta(), c, side='right').entries,
                       fourier(c, 'symplectic').entries)
    # delta is the unit of twisted convolution
    assert np.allclose(dist_convolve(Distribution.delta(), c).entries, c.entries)
    assert np.allclose(dist_convolve(Distribution.delta(), c, side='right').entries, c.entries)

def test_polynomial_on_coefficients():
    H = Distribution.poly(PolyQP.H())
    left = dist_star(H, CoeffMatrix.unit(4, 1, 2))
    assert left.order == 6
    assert np.allclose(left.entries, 3 * CoeffMatrix.unit(6, 1, 2).entries)
    right = dist_star(H, CoeffMatrix.unit(4, 1, 2), side='right')
    assert np.allclose(right.entries, 5 * CoeffMatrix.unit(6, 1, 2).entries)
    raised = dist_star(Distribution.poly(q), CoeffMatrix.unit(3, 0, 0))
    assert np.allclose(raised.entries, CoeffMatrix.unit(4, 1, 0).entries)

def test_distributions_on_grid(grid):
    f11 = basis_fn(BasisIndex(1, 1), grid)
    Hf = dist_star(Distribution.poly(PolyQP.H()), f11, order=6)
    assert sup_distance(Hf, f11 * 3) < 1e-8
    assert dist_star(Distribution.one(), f11) is f11
    f21 = basis_fn(BasisIndex(2, 1), grid)
    assert np.array_equal(dist_star(Distribution.delta(), f21).values,
                          fourier_symplectic_tilde(f21).values)
    assert np.array_equal(dist_star(Distribution.delta(), f21, side='right').values,
                          fourier_symplectic(f21).values)

def test_polynomial_on_grid_uses_grid_order(grid):
    H = Distribution.poly(PolyQP.H())
    f12 = basis_fn(BasisIndex(1, 2), grid)
    assert sup_distance(dist_star(H, f12), f12 * 3) < 1e-7
    assert sup_distance(dist_star(H, f12, side='right'), f12 * 5) < 1e-7

def test_polynomial_on_grid_rejects_truncated_function(grid):
    H = Distribution.poly(PolyQP.H())
    f90 = basis_fn(BasisIndex(9, 0), grid)
    with pytest.raises(OrderMismatchError):
        dist_star(H, f90)
    with pytest.raises(OrderMismatchError):
        dist_star(H, f90, side='right', order=6)

def test_weyl_on_grid_functions(grid):
    H = PolyQP.H()
    f11 = basis_fn(BasisIndex(1, 1), grid)
    assert sup_distance(weyl_left(H, f11), f11 * 3) < 1e-7
    f21 = basis_fn(BasisIndex(2, 1), grid)
    assert sup_distance(weyl_left(H, f21, max_order=6), f21 * 5) < 1e-7
    assert sup_distance(weyl_right(H, f21, max_order=6), f21 * 3) < 1e-7
    with pytest.raises(OrderMismatchError):
        weyl_left(H, f21, max_order=2)

def test_sampled_distribution(grid):
    f0 = Distribution.sampled(basis_fn(BasisIndex(0, 0), grid))
    product = dist_star(f0, CoeffMatrix.unit(4, 0, 2))
    assert np.abs(product.entries - CoeffMatrix.unit(4, 0, 2).entries).max() < 1e-8
    assert np.abs(dist_star(f0, CoeffMatrix.unit(4, 1, 0)).entries).max() < 1e-8

# ------------------------------------------------------------
# Expressions
# ------------------------------------------------------------

def test_parse_polynomials():
    operand = parse_expression('q*p + 2i')
    assert operand.kind == 'poly'
    assert operand.value == PolyQP(q_sym * p_sym + 2 * I)
    assert parse_expression('H').value == PolyQP.H()
    assert parse_expression('a*abar').value == PolyQP.H()
    assert parse_expression('3*q^2 - i*p').value == PolyQP(3 * q_sym**2 - I * p_sym)
    assert parse_expression('0.5*q').value == PolyQP(q_sym / 2)

def test_parse_basis_combinations():
    operand = parse_expression('f[1,0]')
    assert operand.kind == 'gauss'
    assert operand.value == GaussPoly.basis(1, 0)
    assert operand.expandable
    mixed = parse_expression('f[0,1] + 2*q*f[1,1]')
    assert mixed.kind == 'gauss'
    expected = GaussPoly.basis(0, 1) + GaussPoly(
        GaussPoly.basis(1, 1).poly * PolyQP(2 * q_sym).to_ladder())
    assert mixed.value == expected

def test_parse_sampled(grid):
    operand = parse_expression('gauss(2)*q')
    assert operand.kind == 'sampled'
    assert not operand.expandable
    expected = GridFunction.sample(grid, lambda Q, P: Q * np.exp(-(Q**2 + P**2) / 8))
    assert sup_distance(operand.sample(grid), expected) < 1e-14
    squared = parse_expression('f[0,0]^2')
    assert squared.kind == 'sampled'
    f0 = basis_fn(BasisIndex(0, 0), grid)
    assert sup_distance(squared.sample(grid), f0 * f0) < 1e-12

@pytest.mark.parametrize('text', ['q +', 'x*q', 'sin(q)', '1/q', 'gauss(1, 2)'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_expression(text)

def test_operand_backend_limits(grid):
    with pytest.raises(BackendMismatchError):
        parse_expression('q').to_coeffs(4)
    with pytest.raises(BackendMismatchError):
        parse_expression('gauss(1)').to_coeffs(4)
    c = parse_expression('gauss(1)').to_coeffs(4, grid)
    assert np.abs(c.entries - CoeffMatrix.unit(4, 0, 0).entries / 2).max() < 1e-8
