"""Dense univariate polynomials over F_q, hyper-derivatives and linear algebra.

Coefficients are field labels (see :mod:`paleyclique.ffield`), index = degree.
The zero polynomial has an empty coefficient tuple.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .digits import binom_mod_p
from .errors import DimensionMismatch, FieldMismatch, ZeroPolynomial
from .ffield import Field


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, field: Field, degree: int, coeff: int = 1) -> "Poly":
        return cls(field, [0] * degree + [coeff])

    @classmethod
    def linear_power(cls, field: Field, c: int, t: int) -> "Poly":
        """(x - c)^t, expanded with Lucas binomials."""
        F = field
        minus_c = F.neg(c)
        out = [0] * (t + 1)
        power = 1
        for k in range(t + 1):
            b = binom_mod_p(t, k, F.p)
            if b:
                out[t - k] = F.scale_int(power, b)
            power = F.mul(power, minus_c)
            if power == 0:
                break
        return cls(F, out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        return f"Poly(F_{self.field.q}, {list(self.coeffs)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def _same(self, other: "Poly") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Poly") -> "Poly":
        self._same(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(F, [F.add(x, b[i]) if i < len(b) else x for i, x in enumerate(a)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(x) for x in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._same(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def __call__(self, x: int) -> int:
        """Horner evaluation at the label x."""
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def compose_shift(self, c: int) -> "Poly":
        """f(x - c)."""
        F = self.field
        result = Poly(F)
        lin = Poly(F, [F.neg(c), 1])
        for a in reversed(self.coeffs):
            result = result * lin + Poly(F, [a])
        return result

    def divmod_linear(self, c: int) -> tuple["Poly", int]:
        """Synthetic division by (x - c): returns (quotient, remainder)."""
        F = self.field
        if not self.coeffs:
            return Poly(F), 0
        acc = 0
        quot = []
        for a in reversed(self.coeffs):
            acc = F.add(F.mul(acc, c), a)
            quot.append(acc)
        rem = quot.pop()
        return Poly(F, reversed(quot)), rem


def poly_add(f: Poly, g: Poly) -> Poly:
    return f + g


def poly_mul(f: Poly, g: Poly) -> Poly:
    return f * g


def poly_eval(f: Poly, x: int) -> int:
    return f(x)


def hyper_derivative(f: Poly, n: int) -> Poly:
    """E^(n) f = sum_j binom(j, n) a_j x^(j - n), binomials reduced mod p."""
    F = f.field
    out = []
    for j in range(n, len(f.coeffs)):
        a = f.coeffs[j]
        out.append(F.scale_int(a, binom_mod_p(j, n, F.p)) if a else 0)
    return Poly(F, out)


def hyper_derivative_at(f: Poly, n: int, c: int) -> int:
    """E^(n) f evaluated at c without building the derivative polynomial."""
    F = f.field
    acc = 0
    for j in range(len(f.coeffs) - 1, n - 1, -1):
        a = f.coeffs[j]
        term = F.scale_int(a, binom_mod_p(j, n, F.p)) if a else 0
        acc = F.add(F.mul(acc, c), term)
    return acc


def root_multiplicity(f: Poly, c: int) -> int:
    """Largest t with (x - c)^t dividing f."""
    if f.is_zero():
        raise ZeroPolynomial("multiplicity is undefined for the zero polynomial")
    t = 0
    while True:
        quot, rem = f.divmod_linear(c)
        if rem != 0:
            return t
        f = quot
        t += 1


def multiplicity_at_least_via_hyper(f: Poly, c: int, m: int) -> bool:
    """True iff E^(k) f (c) = 0 for every k < m."""
    if f.is_zero():
        raise ZeroPolynomial("multiplicity is undefined for the zero polynomial")
    return all(hyper_derivative_at(f, k, c) == 0 for k in range(m))


# --- matrices ----------------------------------------------------------------

class Matrix:
    """Rectangular matrix of field labels."""

    __slots__ = ("field", "rows", "ncols")

    def __init__(self, field: Field, rows: Sequence[Sequence[int]], ncols: int | None = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise DimensionMismatch("rows have different lengths")
        self.ncols = widths.pop() if widths else (ncols or 0)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def __repr__(self) -> str:
        return f"Matrix(F_{self.field.q}, {self.rows})"

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def apply(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(x)} for {self.ncols} columns")
        F = self.field
        out = []
        for row in self.rows:
            acc = 0
            for a, b in zip(row, x):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out


def row_reduce(field: Field, rows: list[list[int]], ncols: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row-echelon form over the first
    ``ncols`` columns; returns the pivot columns."""
    F = field
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [F.sub(x, F.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(A: Matrix) -> int:
    rows = A.to_list()
    return len(row_reduce(A.field, rows, A.ncols))


def pivot_columns(A: Matrix) -> list[int]:
    """Indices of a maximal independent set of columns (first-found order)."""
    rows = A.to_list()
    return row_reduce(A.field, rows, A.ncols)


def gaussian_solve(A: Matrix, b: Sequence[int]) -> list[int] | None:
    """One solution of A x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is unique exactly when A
    has full column rank.
    """
    nrows, ncols = A.shape
    if len(b) != nrows:
        raise DimensionMismatch(f"rhs of length {len(b)} for {nrows} rows")
    aug = [row + [bi] for row, bi in zip(A.to_list(), b)]
    pivots = row_reduce(A.field, aug, ncols)
    for row in aug[len(pivots):]:
        if row[ncols]:
            return None
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][ncols]
    return x


def vandermonde(field: Field, nodes: Sequence[int], powers: Iterable[int]) -> Matrix:
    """Matrix with rows (node^l for node in nodes) for each l in ``powers``."""
    return Matrix(field, [[field.pow(a, l) for a in nodes] for l in powers], ncols=len(nodes))
