"""Operand expressions

Grammar (case sensitive):

    f[m,n]          normalized basis function f_mn
    q  p            phase-space coordinates
    H  a  abar      (q^2+p^2)/2, (q+ip)/sqrt2, (q-ip)/sqrt2
    gauss(s)        exp(-(q^2+p^2) / (2 s^2))
    3  0.5  2i  i   real and imaginary literals
    + - * / ^ ( )

Examples: `3*q^2*p - 2i*H + a*abar`, `f[0,1] + 2*q*f[1,1]`, `gauss(2)*q`.

A polynomial in (q, p) parses to PolyQP; a polynomial combination of basis
functions (linear in the f[m,n]) parses to GaussPoly; anything else is kept as a
sampled-only callable of (q, p).
"""
import re
from dataclasses import dataclass

import sympy
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import parse_expr, rationalize, standard_transformations

from ..errors import BackendMismatchError, ParseError
from ..seqspace import CoeffMatrix
from .gaussian import GaussPoly
from .polynomial import PolyQP, p_sym, q_sym

OPERAND_KINDS = ('poly', 'gauss', 'sampled', 'grid', 'coeffs')

_BASIS_PATTERN = re.compile(r'f\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]')
_IMAGINARY_PATTERN = re.compile(r'(\d+\.\d*|\.\d+|\d+)i\b')
_BARE_I_PATTERN = re.compile(r'\bi\b')

_gauss = sympy.Function('gauss')
_TRANSFORMATIONS = standard_transformations + (rationalize, )
_GLOBALS = {
    'Integer': sympy.Integer,
    'Float': sympy.Float,
    'Rational': sympy.Rational,
    'Symbol': sympy.Symbol,
    'Function': sympy.Function,
    'I': sympy.I,
}

@dataclass(frozen=True)
class Operand:
    """A star-product operand

    kind:
        'poly': value is a PolyQP
        'gauss': value is a GaussPoly
        'sampled': value is a vectorized callable of (q, p)
        'grid': value is a GridFunction (loaded from a file)
        'coeffs': value is a CoeffMatrix (loaded from a file)
    """
    kind: str
    value: object
    text: str = ''

    def __post_init__(self):
        assert self.kind in OPERAND_KINDS, f'Unknown operand kind {self.kind!r}'

    @property
    def expandable(self) -> bool:
        """True if the operand has basis coefficients without reference to a grid"""
        return self.kind in ('gauss', 'coeffs')

    def sample(self, grid):
        from ..phasegrid import GridFunction
        if self.kind in ('poly', 'gauss'):
            return self.value.sample(grid)
        if self.kind == 'sampled':
            return GridFunction.sample(grid, self.value)
        if self.kind == 'grid':
            if self.value.grid != grid:
                raise BackendMismatchError(f'{self.text or "operand"} lives on {self.value.grid}, '
                                           f'not {grid}')
            return self.value
        raise BackendMismatchError(f'Coefficient operand {self.text!r} cannot be sampled '
                                   f'without choosing a basis order; use the matrix backend')

    def to_coeffs(self, order: int, grid=None) -> CoeffMatrix:
        """Coefficients of order `order`; grid-only operands are analyzed on `grid`"""
        if self.kind == 'gauss':
            return self.value.to_coeffs(order)
        if self.kind == 'coeffs':
            if self.value.order > order:
                return self.value.truncate(order)
            return self.value.pad(order)
        if self.kind == 'poly':
            raise BackendMismatchError(f'Polynomial {self.text!r} has no basis coefficients')
        from ..basis import BasisSpec, analyze
        if self.kind == 'grid':
            return analyze(self.value, BasisSpec(order, self.value.grid))
        if grid is None:
            raise BackendMismatchError(f'{self.text!r} needs a grid to be expanded')
        return analyze(self.sample(grid), BasisSpec(order, grid))

def _rewrite(text: str):
    """Grammar sugar to sympy syntax; returns (source, basis symbols by name)"""
    basis = {}

    def basis_symbol(match):
        name = f'f_{int(match.group(1))}_{int(match.group(2))}'
        basis[name] = sympy.Symbol(name)
        return name

    source = _BASIS_PATTERN.sub(basis_symbol, text)
    source = _IMAGINARY_PATTERN.sub(r'(\1*I)', source)
    source = _BARE_I_PATTERN.sub('I', source)
    source = source.replace('^', '**')
    return source, basis

def _basis_index(symbol):
    _, m, n = symbol.name.split('_')
    return int(m), int(n)

def _as_sampled(expr, basis_symbols):
    radius2 = q_sym**2 + p_sym**2
    substitutions = {}
    for symbol in basis_symbols:
        m, n = _basis_index(symbol)
        substitutions[symbol] = GaussPoly.basis(m, n).as_qp_expr() * 2 * sympy.exp(-radius2 / 2)
    expr = expr.subs(substitutions)
    expr = expr.replace(_gauss, lambda s: sympy.exp(-radius2 / (2 * s**2)))
    return sympy.lambdify((q_sym, p_sym), expr, 'numpy')

def _as_gauss(expr, basis_symbols):
    # linear in the basis symbols with polynomial coefficients, no free polynomial part
    try:
        poly = sympy.Poly(expr, *basis_symbols)
    except sympy.PolynomialError:
        return None
    if poly.total_degree() > 1 or poly.coeff_monomial(1) != 0:
        return None
    total = GaussPoly(0)
    for monom, coeff in poly.terms():
        if not coeff.is_polynomial(q_sym, p_sym):
            return None
        symbol = basis_symbols[monom.index(1)]
        factor = PolyQP(sympy.expand(coeff)).to_ladder()
        total = total + GaussPoly(GaussPoly.basis(*_basis_index(symbol)).poly * factor)
    return total

def parse_expression(text: str) -> Operand:
    source, basis = _rewrite(text)
    local_dict = {
        'q': q_sym,
        'p': p_sym,
        'H': (q_sym**2 + p_sym**2) / 2,
        'a': (q_sym + sympy.I * p_sym) / sympy.sqrt(2),
        'abar': (q_sym - sympy.I * p_sym) / sympy.sqrt(2),
        'gauss': _gauss,
        **basis,
    }
    try:
        expr = parse_expr(source, local_dict=local_dict, global_dict=dict(_GLOBALS),
                          transformations=_TRANSFORMATIONS)
        expr = sympy.sympify(expr)
    except Exception as e:
        raise ParseError(f'Cannot parse {text!r}: {e}') from e

    allowed = {q_sym, p_sym, *basis.values()}
    unknown = sorted(str(s) for s in expr.free_symbols - allowed)
    if unknown:
        raise ParseError(f'Unknown names in {text!r}: {", ".join(unknown)}')
    for call in expr.atoms(AppliedUndef):
        if call.func != _gauss or len(call.args) != 1:
            raise ParseError(f'Unknown function {call} in {text!r}')

    basis_symbols = sorted(expr.free_symbols & set(basis.values()), key=lambda s: s.name)
    has_gauss = bool(expr.atoms(AppliedUndef))
    if not basis_symbols and not has_gauss:
        if not expr.is_polynomial(q_sym, p_sym):
            raise ParseError(f'{text!r} is neither a polynomial nor a decaying function')
        return Operand('poly', PolyQP(sympy.expand(expr)), text)
    if not has_gauss:
        element = _as_gauss(sympy.expand(expr), basis_symbols)
        if element is not None:
            return Operand('gauss', element, text)
    return Operand('sampled', _as_sampled(expr, basis_symbols), text)
