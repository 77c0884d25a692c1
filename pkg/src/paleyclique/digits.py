"""Base-p digits, Lucas's theorem and the digit constructions built on it.

Digit vectors are little-endian throughout: ``to_base_p(68, 5)`` is
``[3, 3, 2]`` since 68 = 2*25 + 3*5 + 3.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from sympy import isprime

from .errors import BadBase, BadForm, NotPrime, OutOfWindow


@dataclass(frozen=True)
class BasePDigits:
    p: int
    digits: tuple[int, ...]

    @property
    def value(self) -> int:
        return from_base_p(self.digits, self.p)

    def __getitem__(self, j: int) -> int:
        return self.digits[j] if j < len(self.digits) else 0

    def __len__(self) -> int:
        return len(self.digits)

    def high_first(self) -> tuple[int, ...]:
        """Digits in the (d_k, ..., d_0)_p reading order."""
        return tuple(reversed(self.digits))


def to_base_p(n: int, p: int) -> BasePDigits:
    if p < 2:
        raise BadBase(f"base must be >= 2, got {p}")
    if n < 0:
        raise ValueError("n must be non-negative")
    out = []
    while True:
        n, d = divmod(n, p)
        out.append(d)
        if not n:
            break
    return BasePDigits(p, tuple(out))


def from_base_p(digits, p: int) -> int:
    if p < 2:
        raise BadBase(f"base must be >= 2, got {p}")
    value = 0
    for d in reversed(list(digits)):
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range for base {p}")
        value = value * p + d
    return value


def digits_high_first(n: int, p: int, width: int) -> tuple[int, ...]:
    """Exactly ``width`` digits, most significant first."""
    d = to_base_p(n, p)
    return tuple(d[j] for j in reversed(range(width)))


@functools.lru_cache(maxsize=64)
def _factorials(p: int) -> tuple[list[int], list[int]]:
    fact = [1] * p
    for i in range(1, p):
        fact[i] = fact[i - 1] * i % p
    inv_fact = [1] * p
    inv_fact[p - 1] = pow(fact[p - 1], p - 2, p)
    for i in range(p - 1, 0, -1):
        inv_fact[i - 1] = inv_fact[i] * i % p
    return fact, inv_fact


@functools.lru_cache(maxsize=None)
def _checked_prime(p: int) -> bool:
    return isprime(p)


def _small_binom(m: int, k: int, p: int) -> int:
    # 0 <= k <= m < p
    if p <= 1 << 16:
        fact, inv_fact = _factorials(p)
        return fact[m] * inv_fact[k] % p * inv_fact[m - k] % p
    k = min(k, m - k)
    num = den = 1
    for i in range(k):
        num = num * (m - i) % p
        den = den * (i + 1) % p
    return num * pow(den, p - 2, p) % p


def binom_mod_p(m: int, n: int, p: int) -> int:
    """binom(m, n) mod p by Lucas's theorem (digitwise product)."""
    if not _checked_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 0 or n < 0:
        raise ValueError("binomial arguments must be non-negative")
    if n > m:
        return 0
    result = 1
    while n:
        m, mj = divmod(m, p)
        n, nj = divmod(n, p)
        if nj > mj:
            return 0
        result = result * _small_binom(mj, nj, p) % p
    return result


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, r) with q = p**r, or raise BadForm."""
    from sympy import perfect_power

    if q < 2:
        raise BadForm(f"{q} is not a prime power")
    if isprime(q):
        return q, 1
    pp = perfect_power(q)
    if pp:
        base, e = int(pp[0]), int(pp[1])
        if isprime(base):
            return base, e
        inner_p, inner_r = prime_power(base)
        return inner_p, inner_r * e
    raise BadForm(f"{q} is not a prime power")


def _check_q(q: int, p: int) -> int:
    qp, r = prime_power(q)
    if qp != p:
        raise BadForm(f"{q} is not a power of {p}")
    return r


def hp_hypothesis_holds(n: int, q: int, p: int) -> bool:
    """binom(n - 1 + (q-1)/2, (q-1)/2) is nonzero mod p."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_q(q, p)
    half = (q - 1) // 2
    return binom_mod_p(n - 1 + half, half, p) != 0


def _leading_window(p: int) -> tuple[int, int]:
    from math import isqrt

    return isqrt((p - 1) // 2), isqrt(p)


def _check_window(N: int, p: int, s: int) -> BasePDigits:
    if p % 4 != 1 or not _checked_prime(p):
        raise BadForm(f"p = {p} must be a prime congruent to 1 mod 4")
    digits = to_base_p(N - 1, p) if N >= 1 else None
    if digits is None or len(digits) != s + 1:
        raise OutOfWindow(f"N - 1 = {N - 1} must have exactly {s + 1} base-{p} digits")
    lo, hi = _leading_window(p)
    lead = digits[s]
    if not lo <= lead <= hi:
        raise OutOfWindow(
            f"leading digit {lead} of N - 1 outside [{lo}, {hi}]; "
            "the binomial argument needs it inside the clique-size window")
    return digits


def select_n_cubic(N: int, p: int) -> int:
    """Choose n for q = p^3 with n <= N <= n + (p-1)/2.

    Writing N - 1 = (A, B)_p, take n - 1 = (A, min((p-1)/2, B))_p.
    """
    digits = _check_window(N, p, 1)
    A, B = digits[1], digits[0]
    return A * p + min((p - 1) // 2, B) + 1


def select_n_general(N: int, p: int, s: int) -> int:
    """Choose n for q = p^(2s+1), s >= 2, with n <= N <= n + (p^s-1)/2."""
    if s < 2:
        raise ValueError("select_n_general needs s >= 2; use select_n_cubic for s = 1")
    if p < 5:
        raise BadForm("p must be at least 5")
    digits = _check_window(N, p, s)
    h = (p - 1) // 2
    z = list(digits.digits)  # little-endian, length s + 1
    if z[s - 1] <= h:
        # keep the top two digits; lower digits become the largest value <= them with all digits <= h
        low = z[: s - 1]
        for j in reversed(range(s - 1)):
            if low[j] > h:
                for i in range(j + 1):
                    low[i] = h
                break
        new = low + [z[s - 1], z[s]]
    else:
        new = [h] * s + [z[s]]
    return from_base_p(new, p) + 1


def compute_L(n: int, q: int, p: int) -> frozenset[int]:
    """All l in [0, n-1] with binom(e, k) * binom(n-1-k, l) != 0 mod p for some k,
    where e = n - 1 + (q-1)/2 and k ranges over [0, n-1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e = n - 1 + (q - 1) // 2
    found: set[int] = set()
    for k in range(n):
        if binom_mod_p(e, k, p) == 0:
            continue
        top = n - 1 - k
        for l in range(top + 1):
            if l not in found and binom_mod_p(top, l, p) != 0:
                found.add(l)
    return frozenset(found)


def compute_M(n: int, q: int, p: int) -> frozenset[int]:
    """All m in [n, (q-1)/2] with binom(n - 1 + (q-1)/2, m) != 0 mod p."""
    half = (q - 1) // 2
    e = n - 1 + half
    return frozenset(m for m in range(n, half + 1) if binom_mod_p(e, m, p) != 0)


# --- the special shape of n used by the variant system ------------------------

def special_n(z_s: int, z_s1: int, p: int, s: int) -> int:
    """n with n - 1 = (z_s, z_{s-1}, h, ..., h, h+1)_p where h = (p-1)/2."""
    if s < 2:
        raise ValueError("the shape needs s >= 2")
    h = (p - 1) // 2
    little = [h + 1] + [h] * (s - 2) + [z_s1, z_s]
    return from_base_p(little, p) + 1


def is_special_form(n: int, p: int, s: int) -> bool:
    """True iff n - 1 = (z_s, z_{s-1}, h, ..., h, h+1)_p with z_{s-1} > h + 1
    and z_s inside the leading-digit window."""
    if s < 2 or n < 1:
        return False
    h = (p - 1) // 2
    d = to_base_p(n - 1, p)
    if len(d) != s + 1:
        return False
    lo, hi = _leading_window(p)
    if not lo <= d[s] <= hi or d[s - 1] <= h + 1:
        return False
    return d[0] == h + 1 and all(d[j] == h for j in range(1, s - 1))


def special_form_candidates(p: int, s: int) -> list[int]:
    """Every n of the special shape, in increasing order."""
    lo, hi = _leading_window(p)
    h = (p - 1) // 2
    return [special_n(zs, z1, p, s)
            for zs in range(max(lo, 1), hi + 1) for z1 in range(h + 2, p)]


def M_by_digits(n: int, q: int, p: int, s: int, literal: bool = False) -> frozenset[int]:
    """Digit description of M for n of the special shape.

    Adding (q-1)/2 to n - 1 gives (h, ..., h, z'_s, z'_{s-1}, 0, ..., 0)_p with
    z'_s = z_s + h + 1 and z'_{s-1} = z_{s-1} - h, so by Lucas m is in M iff
    m = (c_{2s}, ..., c_s, c_{s-1}, 0, ..., 0)_p lies in [n, (q-1)/2] with
    c_j <= h for s < j <= 2s, c_s <= z'_s and c_{s-1} <= z'_{s-1}.

    ``literal=True`` instead caps c_s at h as well; that set is in general a
    proper subset of M.  Both forms need the addition not to carry out of
    position s.
    """
    if not is_special_form(n, p, s):
        raise BadForm(f"n = {n} does not have the special shape for p={p}, s={s}")
    h = (p - 1) // 2
    d = to_base_p(n - 1, p)
    zs_prime = d[s] + h + 1
    z1_prime = d[s - 1] - h
    if zs_prime > p - 1:
        raise BadForm("top digit carries; the digit description does not apply")
    cap_s = h if literal else zs_prime
    half = (q - 1) // 2
    out = set()
    for m in range(0, half + 1, p ** (s - 1)):
        md = to_base_p(m, p)
        if (m >= n and md[s] <= cap_s and md[s - 1] <= z1_prime
                and all(md[j] <= h for j in range(s + 1, 2 * s + 1))):
            out.add(m)
    return frozenset(out)
