"""Polynomials in (abar, a) times the Gaussian f_0 = 2 exp(-H)

The span of these elements is exactly the span of the twisted Hermite basis, and
the one-sided ladder actions close on it:

    a x (g f_0) = (dg/dabar) f_0          (g f_0) x a    = (2a g - dg/dabar) f_0
    abar x (g f_0) = (2abar g - dg/da) f_0   (g f_0) x abar = (dg/da) f_0
"""
import numpy as np
import sympy

from ..errors import OrderMismatchError
from ..seqspace import CoeffMatrix
from .polynomial import PolyQP, a_sym, abar_sym

class GaussPoly:
    """g(abar, a) f_0 with exact sympy coefficients"""
    def __init__(self, expr=1):
        if isinstance(expr, GaussPoly):
            expr = expr._poly
        self._poly = sympy.Poly(expr, abar_sym, a_sym)

    # ------------------------------------------------------------
    # Alternate constructors
    # ------------------------------------------------------------

    @classmethod
    def vacuum(cls):
        """f_0 itself"""
        return cls(1)

    @classmethod
    def matrix_unit(cls, m: int, n: int):
        """g_mn = abar^m x f_0 x a^n = sum_k (-1)^k C(m,k) C(n,k) k! 2^(m+n-k) abar^(m-k) a^(n-k) f_0

        Integer coefficients; g_mn x g_kl = delta_nk 2^n n! g_ml.
        """
        assert m >= 0 and n >= 0
        terms = {(m - k, n - k): (-1)**k * sympy.binomial(m, k) * sympy.binomial(n, k) *
                 sympy.factorial(k) * 2**(m + n - k)
                 for k in range(min(m, n) + 1)}
        return cls(sympy.Poly.from_dict(terms, abar_sym, a_sym))

    @classmethod
    def basis(cls, m: int, n: int, normalized: bool = True):
        """f_mn = (2^(m+n) m! n!)^(-1/2) g_mn"""
        unit = cls.matrix_unit(m, n)
        if not normalized:
            return unit
        return unit * (1 / _unit_norm(m, n))

    @classmethod
    def from_poly(cls, P: PolyQP):
        """P(q, p) f_0"""
        return cls(P.to_ladder())

    @classmethod
    def from_units(cls, units: dict):
        """sum x_mn g_mn"""
        total = sympy.Poly(0, abar_sym, a_sym)
        for (m, n), x in sorted(units.items()):
            total = total + cls.matrix_unit(m, n)._poly * sympy.Poly(x, abar_sym, a_sym)
        return cls(total)

    # ------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, GaussPoly):
            return other._poly
        return sympy.Poly(sympy.sympify(other), abar_sym, a_sym)

    def __add__(self, other):
        return GaussPoly(self._poly + self._lift(other))

    def __sub__(self, other):
        return GaussPoly(self._poly - self._lift(other))

    def __neg__(self):
        return GaussPoly(-self._poly)

    def __mul__(self, scalar):
        """Scaling by a number; use the star operations for products of elements"""
        return GaussPoly(self._poly * self._lift(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        return (self._poly - other._poly).is_zero

    def __hash__(self):
        return hash(self._poly)

    def __repr__(self):
        return f'GaussPoly(({self._poly.as_expr()}) f0)'

    @property
    def poly(self) -> sympy.Poly:
        return self._poly

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    def conjugate(self):
        """conj(a) = abar, so monomials swap and coefficients conjugate"""
        terms = {(j, i): sympy.conjugate(c) for (i, j), c in self._poly.terms()}
        return GaussPoly(sympy.Poly.from_dict(terms or {(0, 0): 0}, abar_sym, a_sym))

    def as_qp_expr(self):
        """The polynomial factor g written in (q, p)"""
        return PolyQP.from_ladder(self._poly.as_expr()).as_expr()

    # ------------------------------------------------------------
    # Ladder actions
    # ------------------------------------------------------------

    def _d_a(self):
        return self._poly.diff(a_sym)

    def _d_abar(self):
        return self._poly.diff(abar_sym)

    def a_star(self):
        return GaussPoly(self._d_abar())

    def abar_star(self):
        return GaussPoly(2 * sympy.Poly(abar_sym, abar_sym, a_sym) * self._poly - self._d_a())

    def star_a(self):
        return GaussPoly(2 * sympy.Poly(a_sym, abar_sym, a_sym) * self._poly - self._d_abar())

    def star_abar(self):
        return GaussPoly(self._d_a())

    # ------------------------------------------------------------
    # Matrix-unit coordinates
    # ------------------------------------------------------------

    def to_units(self) -> dict:
        """{(m, n): x_mn} with self = sum x_mn g_mn

        Triangular: g_mn = 2^(m+n) abar^m a^n plus terms of lower degree in both
        variables, so leading monomials are peeled off from the top total degree down.
        """
        remainder = self._poly
        units = {}
        while not remainder.is_zero:
            (m, n), c = max(remainder.terms(), key=lambda term: (sum(term[0]), term[0]))
            x = sympy.expand(c / 2**(m + n))
            units[(m, n)] = units.get((m, n), 0) + x
            remainder = remainder - GaussPoly.matrix_unit(m, n)._poly * sympy.Poly(
                x, abar_sym, a_sym)
        return units

    def to_coeffs(self, order: int) -> CoeffMatrix:
        """Numeric coefficients c_mn in the normalized basis f_mn"""
        entries = np.zeros((order, order), dtype=complex)
        for (m, n), x in self.to_units().items():
            if m >= order or n >= order:
                raise OrderMismatchError(f'Element reaches f[{m},{n}], beyond order {order}')
            entries[m, n] = complex(sympy.N(x * _unit_norm(m, n), 30))
        return CoeffMatrix(entries)

    def sample(self, grid):
        from ..phasegrid import GridFunction
        fn = sympy.lambdify((abar_sym, a_sym), self._poly.as_expr(), 'numpy')

        def evaluate(Q, P):
            A = (Q + 1j * P) / np.sqrt(2)
            return fn(np.conj(A), A) * 2 * np.exp(-(Q**2 + P**2) / 2)

        return GridFunction.sample(grid, evaluate)

def _unit_norm(m: int, n: int):
    """||g_mn|| = sqrt(2^(m+n) m! n!)"""
    return sympy.sqrt(2**(m + n) * sympy.factorial(m) * sympy.factorial(n))

def gauss_star(x: GaussPoly, y: GaussPoly) -> GaussPoly:
    """x x y through matrix-unit coordinates: (sum x_mn g_mn) x (sum y_kl g_kl)"""
    X, Y = x.to_units(), y.to_units()
    Z = {}
    for (m, n), x_mn in X.items():
        for (k, l), y_kl in Y.items():
            if n == k:
                Z[(m, l)] = Z.get((m, l), 0) + x_mn * y_kl * 2**n * sympy.factorial(n)
    return GaussPoly.from_units({key: sympy.expand(value) for key, value in Z.items()})

def hermite_operator(x: GaussPoly) -> GaussPoly:
    """(u^2 - Laplacian) x = 2 (g + a dg/da + abar dg/dabar - d^2 g/da dabar) f_0"""
    g = x.poly
    a_poly = sympy.Poly(a_sym, abar_sym, a_sym)
    abar_poly = sympy.Poly(abar_sym, abar_sym, a_sym)
    result = g + a_poly * g.diff(a_sym) + abar_poly * g.diff(abar_sym) - g.diff(a_sym).diff(abar_sym)
    return GaussPoly(2 * result)

def vacuum_expectation(m: int, n: int):
    """Coefficient c with f_0 x a^n x abar^m x f_0 = c f_0 (equals delta_mn 2^n n!)"""
    y = GaussPoly.vacuum()
    for _ in range(n):
        y = y.star_a()
    for _ in range(m):
        y = y.star_abar()
    z = gauss_star(y, GaussPoly.vacuum())
    assert z.poly.total_degree() <= 0 or z.is_zero, 'Expected a multiple of f_0'
    return z.poly.coeff_monomial(1)
