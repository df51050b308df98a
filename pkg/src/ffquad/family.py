"""The hyperelliptic family H_{2g+1,q}: monic square-free D of degree 2g+1."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DEFAULT_BUDGET, DomainError, check_budget
from .poly import Polynomial, check_modulus, is_squarefree_tuple, monic_tuple


@dataclass(frozen=True)
class FamilySpec:
    q: int
    g: int

    def __post_init__(self):
        check_modulus(self.q)
        if not isinstance(self.g, int) or self.g < 0:
            raise DomainError(f"genus must be a non-negative integer, got {self.g!r}")

    @property
    def degree(self):
        return 2 * self.g + 1

    @property
    def norm(self):
        """|D| = q^(2g+1), constant over the family."""
        return self.q**self.degree

    @property
    def size(self):
        """Number of monic square-free polynomials of degree 2g+1."""
        n = self.degree
        return self.q if n == 1 else self.q**n - self.q ** (n - 1)

    @property
    def rank_count(self):
        return self.q**self.degree


def family_ranks(fam, start=0, stop=None, budget=DEFAULT_BUDGET):
    """Yield MonicIndex ranks of family members within [start, stop)."""
    q, n = fam.q, fam.degree
    stop = fam.rank_count if stop is None else min(stop, fam.rank_count)
    check_budget(fam.rank_count, budget, f"family H_(2g+1,q) with q={q}, g={fam.g}")
    for r in range(start, stop):
        if is_squarefree_tuple(monic_tuple(q, n, r), q):
            yield r


def family_members(fam, start=0, stop=None, budget=DEFAULT_BUDGET):
    for r in family_ranks(fam, start, stop, budget):
        yield Polynomial._raw(fam.q, monic_tuple(fam.q, fam.degree, r))


def partition(total, parts):
    """Split [0, total) into `parts` contiguous near-equal rank ranges."""
    parts = max(1, min(parts, total)) if total else 1
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out
