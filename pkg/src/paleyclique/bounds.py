"""Integer-exact upper bounds on the clique number of P_q.

Each real-valued bound is evaluated through the integer inequality its proof
establishes; the value reported is the largest integer satisfying it.  No
floating point enters any asserted value.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt

from sympy import isprime

from .digits import prime_power
from .errors import BadCongruence, BadForm, NotPrime


def _need_1mod4(q: int) -> None:
    if q % 4 != 1:
        raise BadCongruence(f"q = {q} is not 1 mod 4")


def _largest_quadratic(c: int, rhs: int) -> int:
    """Largest N >= 1 with (N - 1)(N - c) <= rhs, for c >= 0 and rhs >= 0."""
    # root of N^2 - (c+1) N + (c - rhs) = 0
    N = (c + 1 + isqrt((c - 1) ** 2 + 4 * rhs)) // 2
    while (N - 1) * (N - c) > rhs:
        N -= 1
    while N * (N + 1 - c) <= rhs:
        N += 1
    return N


def trivial_bound(q: int) -> int:
    _need_1mod4(q)
    return (q + 1) // 2


def sqrt_bound(q: int) -> int:
    _need_1mod4(q)
    return isqrt(q)


def hp_bound(p: int) -> int:
    """Largest N with N(N-1) <= (p-1)/2, i.e. 2N(N-1) <= p - 1."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    _need_1mod4(p)
    return _largest_quadratic(0, (p - 1) // 2)


def ceil_sqrt_half(p: int) -> int:
    """Smallest c with 2c^2 >= p."""
    if p < 1:
        raise ValueError("p must be positive")
    c = isqrt(p // 2)
    while 2 * c * c < p:
        c += 1
    return c


def _odd_power(q: int) -> tuple[int, int]:
    p, r = prime_power(q)
    if r % 2 == 0 or p % 4 != 1:
        raise BadForm(f"q = {q} is not an odd power of a prime p = 1 mod 4")
    return p, (r - 1) // 2


def brm_bound(q: int) -> int:
    """Largest w with w^2 + w - 1 <= q (isqrt(q) even) or w^2 + 2w - 2 <= q (odd)."""
    _odd_power(q)
    if isqrt(q) % 2 == 0:
        w = isqrt(q + 1)
        while w * w + w - 1 > q:
            w -= 1
        while (w + 1) ** 2 + (w + 1) - 1 <= q:
            w += 1
    else:
        w = isqrt(q + 3) - 1  # (w+1)^2 <= q + 3
        while w * w + 2 * w - 2 > q:
            w -= 1
        while (w + 1) ** 2 + 2 * (w + 1) - 2 <= q:
            w += 1
    return w


def main_quadratic_branch(p: int, s: int) -> int:
    """Largest N with (N-1)(N - (p^s - 1)/2) <= (q-1)/2, q = p^(2s+1).

    At s = 0 this is N(N-1) <= (p-1)/2, the Hanson-Petridis inequality.
    """
    q = p ** (2 * s + 1)
    return _largest_quadratic((p**s - 1) // 2, (q - 1) // 2)


def main_ceil_branch(p: int, s: int) -> int:
    return p**s * ceil_sqrt_half(p)


def main_bound(p: int, s: int) -> int:
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 4 != 1:
        raise BadCongruence(f"p = {p} is not 1 mod 4")
    if s < 0:
        raise ValueError("s must be non-negative")
    if p ** (2 * s + 1) >= 1 << 63:
        raise BadForm("q does not fit below 2^63")
    return min(main_ceil_branch(p, s), main_quadratic_branch(p, s))


def _sqrt_upper(x: Fraction, denom_bits: int = 32) -> Fraction:
    scale = 1 << denom_bits
    num = x.numerator * scale * scale
    root = isqrt(num // x.denominator)
    while root * root * x.denominator < num:
        root += 1
    return Fraction(root, scale)


def main_closed_form_display(p: int, s: int) -> Fraction:
    """Upper rounding of sqrt(q/2) + (p^s+1)/4 + sqrt(2p)/32 * p^(s-1).

    Display only: nothing asserted depends on this value.
    """
    q = p ** (2 * s + 1)
    return (_sqrt_upper(Fraction(q, 2)) + Fraction(p**s + 1, 4)
            + _sqrt_upper(Fraction(2 * p)) / 32 * Fraction(p) ** (s - 1))


@dataclass
class BoundEntry:
    name: str
    value: int
    inequality: str
    detail: dict = dc_field(default_factory=dict)


@dataclass
class BoundReport:
    q: int
    p: int
    r: int
    entries: list[BoundEntry]
    omega_exact: int | None = None
    omega_source: str | None = None

    def as_dict(self) -> dict[str, int]:
        out = {e.name: e.value for e in self.entries}
        if self.omega_exact is not None:
            out["omega"] = self.omega_exact
        return out

    def __getitem__(self, name: str) -> int:
        return self.as_dict()[name]

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "r": self.r,
                "entries": [{"name": e.name, "value": e.value, "inequality": e.inequality,
                             **({"detail": e.detail} if e.detail else {})}
                            for e in self.entries],
                "omega_exact": self.omega_exact, "omega_source": self.omega_source}

    def csv_rows(self) -> list[list]:
        omega = "" if self.omega_exact is None else self.omega_exact
        rows = [[self.q, self.p, self.r, e.name, e.value, e.inequality, omega]
                for e in self.entries]
        if self.omega_exact is not None:
            rows.append([self.q, self.p, self.r, "omega", self.omega_exact,
                         f"exact ({self.omega_source})", omega])
        return rows


CSV_COLUMNS = ["q", "p", "r", "bound_name", "value", "inequality", "omega_exact"]


def reports_to_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        w.writerows(rep.csv_rows())
    return buf.getvalue()


def reports_to_json(reports: list[BoundReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, ensure_ascii=False)


def bounds_table(q: int, omega: int | None = None, omega_source: str = "exact search") -> BoundReport:
    _need_1mod4(q)
    p, r = prime_power(q)
    entries = [
        BoundEntry("trivial", trivial_bound(q), "w <= (q+1)/2"),
        BoundEntry("sqrt", sqrt_bound(q), "w^2 <= q"),
    ]
    if r == 1:
        entries.append(BoundEntry("hp", hp_bound(p), "2w(w-1) <= p-1"))
    if r % 2 == 1:
        brm_ineq = "w^2+w-1 <= q" if isqrt(q) % 2 == 0 else "w^2+2w-2 <= q"
        entries.append(BoundEntry("brm", brm_bound(q), brm_ineq))
        s = (r - 1) // 2
        ceil_b, quad_b = main_ceil_branch(p, s), main_quadratic_branch(p, s)
        closed = main_closed_form_display(p, s)
        entries.append(BoundEntry(
            "main", min(ceil_b, quad_b),
            f"min(p^s*ceil(sqrt(p/2)), max w: (w-1)(w-(p^s-1)/2) <= (q-1)/2), s={s}",
            {"ceil_branch": ceil_b, "quadratic_branch": quad_b,
             "closed_form_display_only": float(closed)}))
    return BoundReport(q, p, r, entries, omega, omega_source if omega is not None else None)
