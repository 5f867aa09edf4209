class GridMismatchError(ValueError):
    """Operands live on different phase-space grids"""

class OffGridError(ValueError):
    """A shift that does not land on grid nodes"""

class OrderMismatchError(ValueError):
    """Coefficient matrices of different truncation orders"""

class IndexMismatchError(ValueError):
    """Basis-change indices outside a single anti-diagonal (m + n != k + l)"""

class DomainError(ValueError):
    """Special-function parameters outside the finite-sum representation"""

class AdmissibilityError(ValueError):
    """Weights (s, t), (q, r) with t + q < 0"""

class ParseError(ValueError):
    """Expression text that the operand grammar cannot read"""

class BackendMismatchError(ValueError):
    """A backend asked to combine operands it cannot represent"""
