"""Finite fields F_{p^r} as quotients F_p[x]/(m(x)).

Elements are handled internally as integer labels: the coefficient vector
``(c_0, ..., c_{r-1})`` of an element (little-endian in powers of the
generator x) maps to ``sum(c_i * p**i)``.  Label 0 is the zero element and
label 1 is the identity, so the labelling restricts to the usual residues
when r == 1.

:class:`Field` does all arithmetic on labels; :class:`FieldElem` is a thin
immutable wrapper with operator overloading for interactive use.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .errors import DivisionByZero, FieldMismatch, LabelOutOfRange, NotPrime, Overflow

Q_LIMIT = 1 << 63
# log/exp tables are built lazily for extension fields up to this size
TABLE_LIMIT = 1 << 20


# --- polynomials over F_p as little-endian int lists ------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic-or-not polynomial m."""
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), m, p)
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Test a monic polynomial over F_p for irreducibility.

    A degree-r polynomial is irreducible iff it has no factor of degree
    k <= r/2, i.e. gcd(f, x^{p^k} - x) = 1 for each such k.
    """
    f = _trim(list(poly))
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    xpk = [0, 1]
    for _ in range(1, r // 2 + 1):
        xpk = _ppowmod(xpk, p, f, p)
        diff = list(xpk) + [0] * max(0, 2 - len(xpk))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _trim(diff), p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r over F_p.

    Coefficients are compared from x^{r-1} down to x^0; the result is
    returned little-endian with the leading 1 included.
    """
    for high_first in itertools.product(range(p), repeat=r):
        poly = tuple(reversed(high_first)) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial exists for every degree")


# --- the field ---------------------------------------------------------------

class Field:
    """F_{p^r} with an explicit monic irreducible modulus."""

    def __init__(self, p: int, r: int = 1, modulus: Sequence[int] | None = None):
        p, r = int(p), int(r)
        if p < 3 or not isprime(p):
            raise NotPrime(f"{p} is not an odd prime")
        if p >= 1 << 31:
            raise Overflow(f"p = {p} does not fit in 31 bits")
        if r < 1:
            raise ValueError("extension degree must be >= 1")
        q = p**r
        if q >= Q_LIMIT:
            raise Overflow(f"q = {p}^{r} does not fit below 2^63")
        self.p, self.r, self.q = p, r, q
        if modulus is None:
            modulus = smallest_irreducible(p, r)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is not monic irreducible of degree {r}")
        self.modulus = modulus
        self.half = (q - 1) // 2
        self._exp: list[int] | None = None
        self._log: list[int] | None = None

    # -- identity / serialisation --

    def __repr__(self) -> str:
        return f"Field(p={self.p}, r={self.r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.r, self.modulus) == (
            other.p, other.r, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.modulus))

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "q": self.q, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "Field":
        field = cls(d["p"], d["r"], d["modulus"])
        if field.q != d.get("q", field.q):
            raise ValueError("inconsistent q in field description")
        return field

    # -- labels --

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise LabelOutOfRange(f"label {a} not in [0, {self.q})")
        return a

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.r):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_digits(self, coeffs: Iterable[int]) -> int:
        label = 0
        for c in reversed(list(coeffs)):
            label = label * self.p + c % self.p
        return label

    def elem(self, label: int) -> "FieldElem":
        return FieldElem(self, self.check(int(label)))

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic on labels --

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.r == 1:
            return (a + b) % p
        out, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.r == 1:
            return -a % p
        out, scale = 0, 1
        while a:
            a, d = divmod(a, p)
            out += (-d % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale_int(self, a: int, k: int) -> int:
        """Multiply a by the integer k viewed in the prime subfield."""
        p = self.p
        k %= p
        if k == 0 or a == 0:
            return 0
        if k == 1:
            return a
        if self.r == 1:
            return a * k % p
        out, scale = 0, 1
        while a:
            a, d = divmod(a, p)
            out += (d * k % p) * scale
            scale *= p
        return out

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _pmul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(_pmod(prod, self.modulus, self.p))

    def _tables(self) -> bool:
        if self._log is not None:
            return True
        if self.q > TABLE_LIMIT:
            return False
        order = self.q - 1
        cofactors = [order // ell for ell in factorint(order)]
        for g in range(2, self.q):
            if all(self._slow_pow(g, c) != 1 for c in cofactors):
                break
        exp = [0] * order
        log = [0] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        self._exp, self._log = exp, log
        return True

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None or self._tables():
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._slow_mul(a, b)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            e >>= 1
            if e:
                a = self._slow_mul(a, a)
        return result

    def pow(self, a: int, e: int) -> int:
        """a**e with the convention 0**0 == 1."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.r == 1:
            return pow(a, e, self.p)
        if self._log is not None or self._tables():
            return self._exp[self._log[a] * e % (self.q - 1)]
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- quadratic residues --

    def is_qr(self, a: int) -> bool:
        """Euler's criterion; zero is not a residue."""
        return a != 0 and self.pow(a, self.half) == 1

    @functools.cached_property
    def qr_labels(self) -> frozenset[int]:
        """Nonzero squares, found by squaring every nonzero element."""
        return frozenset(self.mul(y, y) for y in range(1, self.q))

    def non_residue(self) -> int:
        """Smallest-label quadratic non-residue."""
        for a in range(2, self.q):
            if not self.is_qr(a):
                return a
        raise AssertionError("odd fields always have non-residues")


@functools.lru_cache(maxsize=None)
def build_field(p: int, r: int = 1) -> Field:
    """Canonical F_{p^r}: modulus is the lex-smallest monic irreducible."""
    return Field(p, r)


class FieldElem:
    """Immutable element of a :class:`Field`."""

    __slots__ = ("field", "label")

    def __init__(self, field: Field, label: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.label))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            return other.label
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _wrap(self, label: int) -> "FieldElem":
        return FieldElem(self.field, label)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.label, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.label, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.label))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.label, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.label, b))

    def __neg__(self):
        return self._wrap(self.field.neg(self.label))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.label, int(e)))

    def inverse(self) -> "FieldElem":
        return self._wrap(self.field.inv(self.label))

    def is_square(self) -> bool:
        return self.field.is_qr(self.label)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.field == other.field and self.label == other.label
        if isinstance(other, int):
            return self.label == other % self.field.p if self.field.r == 1 else self.label == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.label))

    def __bool__(self) -> bool:
        return self.label != 0

    def __int__(self) -> int:
        return self.label

    def __repr__(self) -> str:
        return f"FieldElem({self.label} in F_{self.field.q})"


# --- functional surface ------------------------------------------------------

def field_arith(op: str, a: FieldElem, b: FieldElem | None = None) -> FieldElem:
    """Apply ``add``, ``sub``, ``mul`` or ``neg`` to elements of one field."""
    if op == "neg":
        return -a
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def field_inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def field_pow(a: FieldElem, e: int) -> FieldElem:
    return a**e


def label_of(a: FieldElem) -> int:
    return a.label


def elem_of(field: Field, label: int) -> FieldElem:
    return field.elem(label)


def is_quadratic_residue(a: FieldElem) -> bool:
    return a.is_square()


def quadratic_residue_set(field: Field) -> frozenset[int]:
    return field.qr_labels


def field_for_q(q: int) -> Field:
    """Canonical field of order q (q must be an odd prime power)."""
    from .digits import prime_power

    p, r = prime_power(q)
    return build_field(p, r)
