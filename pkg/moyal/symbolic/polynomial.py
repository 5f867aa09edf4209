"""Exact polynomials in (q, p) under the finite Moyal expansion

    S x T = sum_alpha (i^|alpha| / alpha!) (d^alpha S)(dhat^alpha T)

with d^alpha = d_q^a1 d_p^a2 and dhat^alpha = d_p^a1 (-d_q)^a2. For polynomials the
series stops at the smaller of the two total degrees.
"""
from dataclasses import dataclass

import sympy

from ..basis import analyze_complete, synthesize
from ..phasegrid import GridFunction
from ..seqspace import CoeffMatrix

q_sym, p_sym = sympy.symbols('q p', real=True)
abar_sym, a_sym = sympy.symbols('abar a')

SQRT2 = sympy.sqrt(2)

@dataclass(frozen=True)
class MultiIndex:
    alpha1: int
    alpha2: int

    def __post_init__(self):
        assert self.alpha1 >= 0 and self.alpha2 >= 0, f'Negative multi-index {self}'

    @property
    def order(self) -> int:
        return self.alpha1 + self.alpha2

    @property
    def factorial(self) -> int:
        return sympy.factorial(self.alpha1) * sympy.factorial(self.alpha2)

    @classmethod
    def of_order(cls, r: int):
        return [cls(a1, r - a1) for a1 in range(r + 1)]

class PolyQP:
    def __init__(self, expr=0):
        if isinstance(expr, PolyQP):
            expr = expr._poly
        self._poly = sympy.Poly(expr, q_sym, p_sym)

    # ------------------------------------------------------------
    # Generators
    # ------------------------------------------------------------

    @classmethod
    def q(cls):
        return cls(q_sym)

    @classmethod
    def p(cls):
        return cls(p_sym)

    @classmethod
    def one(cls):
        return cls(1)

    @classmethod
    def H(cls):
        """Harmonic oscillator H = (q^2 + p^2)/2"""
        return cls((q_sym**2 + p_sym**2) / 2)

    @classmethod
    def a(cls):
        return cls((q_sym + sympy.I * p_sym) / SQRT2)

    @classmethod
    def abar(cls):
        return cls((q_sym - sympy.I * p_sym) / SQRT2)

    @classmethod
    def from_ladder(cls, expr):
        """Rewrite a polynomial in (abar, a) through a = (q+ip)/sqrt2, abar = (q-ip)/sqrt2"""
        expr = sympy.sympify(expr).subs({
            a_sym: (q_sym + sympy.I * p_sym) / SQRT2,
            abar_sym: (q_sym - sympy.I * p_sym) / SQRT2,
        }, simultaneous=True)
        return cls(sympy.expand(expr))

    # ------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, PolyQP):
            return other._poly
        return sympy.Poly(sympy.sympify(other), q_sym, p_sym)

    def __add__(self, other):
        return PolyQP(self._poly + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PolyQP(self._poly - self._lift(other))

    def __rsub__(self, other):
        return PolyQP(self._lift(other) - self._poly)

    def __neg__(self):
        return PolyQP(-self._poly)

    def __mul__(self, other):
        """Pointwise product"""
        return PolyQP(self._poly * self._lift(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return (self._poly - self._lift(other)).is_zero
        except (sympy.PolynomialError, sympy.SympifyError):
            return False

    def __hash__(self):
        return hash(self._poly)

    def __repr__(self):
        return f'PolyQP({format_poly(self)})'

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def degree(self) -> int:
        return 0 if self._poly.is_zero else int(self._poly.total_degree())

    def as_expr(self):
        return self._poly.as_expr()

    def terms(self) -> dict:
        """{(q-degree, p-degree): complex coefficient}"""
        return {monom: complex(coeff) for monom, coeff in self._poly.terms()}

    def conjugate(self):
        return PolyQP(sympy.expand(sympy.conjugate(self.as_expr())))

    def diff(self, q_times: int = 0, p_times: int = 0):
        poly = self._poly
        if q_times:
            poly = poly.diff((q_sym, q_times))
        if p_times:
            poly = poly.diff((p_sym, p_times))
        return PolyQP(poly)

    def to_ladder(self) -> sympy.Poly:
        """The same function as a polynomial in (abar, a)"""
        expr = self.as_expr().subs({
            q_sym: (a_sym + abar_sym) / SQRT2,
            p_sym: -sympy.I * (a_sym - abar_sym) / SQRT2,
        }, simultaneous=True)
        return sympy.Poly(sympy.expand(expr), abar_sym, a_sym)

    def sample(self, grid):
        from ..phasegrid import GridFunction
        fn = sympy.lambdify((q_sym, p_sym), self.as_expr(), 'numpy')
        return GridFunction.sample(grid, fn)

    # ------------------------------------------------------------
    # Ladder actions, so a PolyQP can be the target of weyl_left/right
    # ------------------------------------------------------------

    def a_star(self):
        return poly_star(PolyQP.a(), self)

    def abar_star(self):
        return poly_star(PolyQP.abar(), self)

    def star_a(self):
        return poly_star(self, PolyQP.a())

    def star_abar(self):
        return poly_star(self, PolyQP.abar())

def derivative_hat(P: PolyQP, alpha: MultiIndex) -> PolyQP:
    """dhat^alpha P = d_p^a1 (-d_q)^a2 P"""
    return P.diff(q_times=alpha.alpha2, p_times=alpha.alpha1) * (-1)**alpha.alpha2

def _moyal_term(P: PolyQP, Q: PolyQP, alpha: MultiIndex) -> PolyQP:
    # (1/alpha!) (d^alpha P)(dhat^alpha Q), without the i^|alpha| factor
    left = P.diff(q_times=alpha.alpha1, p_times=alpha.alpha2)
    return left * derivative_hat(Q, alpha) * sympy.Rational(1, alpha.factorial)

def _moyal_order(P: PolyQP, Q: PolyQP, r: int) -> PolyQP:
    total = PolyQP(0)
    for alpha in MultiIndex.of_order(r):
        total = total + _moyal_term(P, Q, alpha)
    return total

def poly_star(P: PolyQP, Q: PolyQP) -> PolyQP:
    """Twisted product of polynomials via the (finite) Moyal expansion"""
    order = min(P.degree, Q.degree)
    result = PolyQP(0)
    for r in range(order + 1):
        result = result + _moyal_order(P, Q, r) * sympy.I**r
    assert _moyal_order(P, Q, order + 1).is_zero, 'Moyal series did not terminate'
    return result

def moyal_bracket(P: PolyQP, Q: PolyQP) -> PolyQP:
    """P x Q - Q x P = 2i sum_k (-1)^k sum_{|alpha|=2k+1} (1/alpha!) d^alpha P dhat^alpha Q"""
    order = min(P.degree, Q.degree)
    result = PolyQP(0)
    for k, r in enumerate(range(1, order + 1, 2)):
        result = result + _moyal_order(P, Q, r) * (-1)**k
    return result * (2 * sympy.I)

def poisson_bracket(P: PolyQP, Q: PolyQP) -> PolyQP:
    """d_q P d_p Q - d_p P d_q Q"""
    return P.diff(q_times=1) * Q.diff(p_times=1) - P.diff(p_times=1) * Q.diff(q_times=1)

def star_ordered(P: PolyQP) -> dict:
    """Coefficients d_ij with P = sum d_ij abar^(x i) x a^(x j)

    Uses abar^i a^j (pointwise) = sum_r r! C(i, r) C(j, r) abar^(x (i-r)) x a^(x (j-r)).
    """
    words = {}
    for (i, j), coeff in P.to_ladder().terms():
        for r in range(min(i, j) + 1):
            weight = sympy.factorial(r) * sympy.binomial(i, r) * sympy.binomial(j, r)
            key = (i - r, j - r)
            words[key] = sympy.expand(words.get(key, 0) + coeff * weight)
    return {key: value for key, value in words.items() if value != 0}

def _scale(x, coeff):
    if isinstance(x, CoeffMatrix):
        return x * complex(coeff)
    return x * coeff

def _apply_word(x, i: int, j: int, side: str):
    if side == 'left':
        # abar^i x a^j x (x): a first, then abar
        for _ in range(j):
            x = x.a_star()
        for _ in range(i):
            x = x.abar_star()
    else:
        # (x) x abar^i x a^j: abar first, then a
        for _ in range(i):
            x = x.star_abar()
        for _ in range(j):
            x = x.star_a()
    return x

def _weyl(P: PolyQP, x, side: str, max_order: int = None):
    if isinstance(x, GridFunction):
        # coefficient round trip; raised indices need deg P extra rows and columns
        c = analyze_complete(x, max_order)
        return synthesize(_weyl(P, c.pad(c.order + P.degree), side), x.grid)
    total = None
    for (i, j), coeff in sorted(star_ordered(P).items()):
        term = _scale(_apply_word(x, i, j, side), coeff)
        total = term if total is None else total + term
    return total if total is not None else _scale(x, 0)

def weyl_left(P: PolyQP, x, max_order: int = None):
    """P x (x) through the ladder actions of x

    x may be a PolyQP, a GaussPoly or a CoeffMatrix (pad it by deg P first so the
    raised indices stay inside the truncation). A GridFunction is analyzed at
    max_order, acted on and resampled; analyze_complete raises OrderMismatchError
    if that order does not reproduce it.
    """
    return _weyl(P, x, 'left', max_order)

def weyl_right(P: PolyQP, x, max_order: int = None):
    """(x) x P, the mirror of weyl_left"""
    return _weyl(P, x, 'right', max_order)

def format_poly(P: PolyQP) -> str:
    """Deterministic text form, e.g. `q*p + 1i`"""
    pieces = []
    for (i, j), coeff in P._poly.terms():
        c = complex(coeff)
        monomial = '*'.join(
            f'{name}^{power}' if power > 1 else name
            for name, power in (('q', i), ('p', j)) if power > 0)
        sign, text = _format_coeff(c, bare=bool(monomial))
        if monomial:
            body = f'{text}*{monomial}' if text else monomial
        else:
            body = text
        pieces.append((sign, body))
    if not pieces:
        return '0'
    first_sign, first_body = pieces[0]
    out = ('-' if first_sign < 0 else '') + first_body
    for sign, body in pieces[1:]:
        out += (' - ' if sign < 0 else ' + ') + body
    return out

def _format_number(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return f'{x:.17g}'

def _format_coeff(c: complex, bare: bool):
    """(sign, text) for a coefficient; text is '' for a unit coefficient on a monomial"""
    re, im = c.real, c.imag
    if im == 0:
        sign = -1 if re < 0 else 1
        text = _format_number(abs(re))
        return sign, ('' if bare and text == '1' else text)
    if re == 0:
        sign = -1 if im < 0 else 1
        return sign, f'{_format_number(abs(im))}i'
    imag = f'+{_format_number(im)}' if im > 0 else f'-{_format_number(-im)}'
    return 1, f'({_format_number(re)}{imag}i)'
