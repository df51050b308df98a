"""Exact experiments with quadratic Dirichlet L-functions over F_q[T]."""

__version__ = "0.1.0"

from .errors import BudgetError, DomainError, NumericError  # noqa: E402
from .poly import Polynomial, PrimeField, enumerate_monic, is_squarefree  # noqa: E402
from .qvalue import QuadraticValue  # noqa: E402
from .family import FamilySpec  # noqa: E402
from .characters import QuadraticCharacter, chi_D, jacobi_symbol  # noqa: E402
from .lfunction import LPolynomial, central_value, l_coefficients  # noqa: E402
from .moments import family_moment, holder_chain, prime_moment  # noqa: E402

__all__ = [
    "BudgetError",
    "DomainError",
    "FamilySpec",
    "LPolynomial",
    "NumericError",
    "Polynomial",
    "PrimeField",
    "QuadraticCharacter",
    "QuadraticValue",
    "central_value",
    "chi_D",
    "enumerate_monic",
    "family_moment",
    "holder_chain",
    "is_squarefree",
    "jacobi_symbol",
    "l_coefficients",
    "prime_moment",
]
