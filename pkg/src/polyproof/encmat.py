"""Upper-triangular 2x2 matrices over a pluggable coefficient ring.

Only the entries (1,1), (1,2) and (2,2) are stored, as ``a``, ``b`` and
``d``; the (2,1) entry is zero by construction and cannot be falsified.
The same matrix type serves two rings: exact polynomials (``SymbolicRing``)
and a prime field under a fixed variable assignment (``FieldRing``).

The elementary matrix of a variable v is A(v) = [[x_v, 1], [0, 1]].
Products of elementary matrices embed sequences of variables faithfully:
the sequence can be recovered from the product, which
``factor_elementary_product`` does constructively by peeling candidate
left factors with exact division and backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Mapping

from .ffield import FieldElem, PrimeField, ZeroInverse
from .mpoly import MPoly, MissingAssignment, NotDivisible, VarId


class NotAProduct(Exception):
    """The matrix is not a product of elementary matrices."""


@dataclass(frozen=True)
class EncMatrix:
    a: Any
    b: Any
    d: Any

    def __add__(self, other: "EncMatrix") -> "EncMatrix":
        return EncMatrix(self.a + other.a, self.b + other.b, self.d + other.d)

    def __sub__(self, other: "EncMatrix") -> "EncMatrix":
        return EncMatrix(self.a - other.a, self.b - other.b, self.d - other.d)

    def __mul__(self, other: "EncMatrix") -> "EncMatrix":
        # [[a1,b1],[0,d1]] @ [[a2,b2],[0,d2]]; multiplication is non-commutative.
        return EncMatrix(
            self.a * other.a,
            self.a * other.b + self.b * other.d,
            self.d * other.d,
        )


class SymbolicRing:
    """Coefficients are exact integer polynomials."""

    kind = "symbolic"

    def var(self, v: VarId) -> MPoly:
        return MPoly.var(v)

    def zero(self) -> MPoly:
        return MPoly.zero()

    def one(self) -> MPoly:
        return MPoly.one()

    def div_by_var(self, x: MPoly, v: VarId) -> MPoly:
        return x.div_exact_by_var(v)


class FieldRing:
    """Coefficients are field elements under a fixed variable assignment."""

    kind = "field"

    def __init__(self, field: PrimeField, values: Mapping[VarId, FieldElem]):
        self.field = field
        self.values = values

    def var(self, v: VarId) -> FieldElem:
        try:
            return self.values[v]
        except KeyError:
            raise MissingAssignment(v) from None

    def zero(self) -> FieldElem:
        return self.field.zero

    def one(self) -> FieldElem:
        return self.field.one

    def div_by_var(self, x: FieldElem, v: VarId) -> FieldElem:
        val = self.var(v)
        if val.value == 0:
            raise ZeroInverse(f"variable {v} evaluates to 0")
        return x * val.inv()


def elem(v: VarId, ring) -> EncMatrix:
    """The elementary matrix A(v) = [[x_v, 1], [0, 1]] over the given ring."""
    return EncMatrix(ring.var(v), ring.one(), ring.one())


def identity(ring) -> EncMatrix:
    return EncMatrix(ring.one(), ring.zero(), ring.one())


def zero_matrix(ring) -> EncMatrix:
    return EncMatrix(ring.zero(), ring.zero(), ring.zero())


def elem_inv_mul(v: VarId, m: EncMatrix, ring) -> EncMatrix:
    """Left-multiply by A(v)^-1, staying inside the coefficient ring.

    A(v)^-1 = (1/x_v) * [[1, -1], [0, x_v]], so the result is
    (a / x_v, (b - d) / x_v, d).  In the symbolic ring the divisions are
    exact or raise NotDivisible, which signals a malformed step.
    """
    return EncMatrix(
        ring.div_by_var(m.a, v),
        ring.div_by_var(m.b - m.d, v),
        m.d,
    )


def product_of(vars_seq, ring) -> EncMatrix:
    """A(v1) A(v2) ... A(vn); the identity for the empty sequence."""
    result = identity(ring)
    for v in vars_seq:
        result = result * elem(v, ring)
    return result


def factor_elementary_product(m: EncMatrix) -> List[VarId]:
    """Recover the unique sequence s with m == A(s[0]) ... A(s[-1]).

    The (1,1) entry of a product is the plain monomial of its variables,
    which fixes the multiset of factors but not their order; candidates
    for the first factor are tried in turn and at most one of them can
    lead to a complete factorization.
    """
    if not isinstance(m.a, MPoly):
        raise TypeError("factorization works on symbolic matrices")
    ring = SymbolicRing()
    one = ring.one()
    zero = ring.zero()
    if m.d != one:
        raise NotAProduct("(2,2) entry of an elementary product is 1")

    def rec(cur: EncMatrix) -> List[VarId]:
        if cur.a == one:
            if cur.b == zero:
                return []
            raise NotAProduct("identity candidate has nonzero (1,2) entry")
        single = cur.a.single_monomial()
        if single is None or single[1] != 1:
            raise NotAProduct("(1,1) entry is not a monic monomial")
        mono, _ = single
        for v, _exp in mono:
            try:
                rest = elem_inv_mul(v, cur, ring)
            except NotDivisible:
                continue
            try:
                return [v] + rec(rest)
            except NotAProduct:
                continue
        raise NotAProduct("no elementary left factor divides the matrix")

    return rec(m)
