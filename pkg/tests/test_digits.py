import pytest
from hypothesis import given, settings, strategies as st

from paleyclique.digits import (M_by_digits, binom_mod_p, compute_L, compute_M, from_base_p,
                                hp_hypothesis_holds, is_special_form, prime_power,
                                special_form_candidates, select_n_cubic, select_n_general,
                                to_base_p)
from paleyclique.errors import BadBase, BadForm, NotPrime, OutOfWindow


def pascal_mod(limit, p):
    rows = [[1]]
    for m in range(1, limit + 1):
        prev = rows[-1]
        rows.append([1] + [(prev[k - 1] + prev[k]) % p for k in range(1, m)] + [1])
    return rows


def carries(a, b, p):
    count = carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = int(s >= p)
        count += carry
        a, b = a // p, b // p
    return count


def test_to_base_p():
    assert to_base_p(68, 5).digits == (3, 3, 2)
    assert to_base_p(62, 5).high_first() == (2, 2, 2)
    assert to_base_p(0, 13).digits == (0,)
    with pytest.raises(BadBase):
        to_base_p(5, 1)


@given(st.integers(0, 10**12), st.integers(2, 100))
def test_base_p_round_trip(n, p):
    assert from_base_p(to_base_p(n, p).digits, p) == n


def test_binom_examples():
    assert binom_mod_p(7, 2, 5) == 1
    assert binom_mod_p(68, 62, 5) == 4
    assert binom_mod_p(1000, 0, 13) == 1
    assert binom_mod_p(3, 5, 13) == 0
    with pytest.raises(NotPrime):
        binom_mod_p(5, 2, 4)


@pytest.mark.parametrize("p", [5, 13, 17])
def test_lucas_matches_pascal(p):
    rows = pascal_mod(300, p)
    for m in range(301):
        for n in range(m + 1):
            assert binom_mod_p(m, n, p) == rows[m][n]


@pytest.mark.parametrize("p", [5, 13])
def test_kummer_carries(p):
    for m in range(400):
        for n in range(m + 1):
            assert (binom_mod_p(m, n, p) == 0) == (carries(n, m - n, p) > 0)


def test_large_prime_binomial():
    from math import comb
    p = 2**31 - 1
    assert binom_mod_p(p + 5, 3, p) == comb(5, 3) % p
    assert binom_mod_p(10**6, 17, 1000003) == comb(10**6, 17) % 1000003


def test_prime_power():
    assert prime_power(125) == (5, 3)
    assert prime_power(13) == (13, 1)
    assert prime_power(3**4) == (3, 4)
    assert prime_power(2**6) == (2, 6)
    with pytest.raises(BadForm):
        prime_power(36)


def test_hp_hypothesis():
    assert hp_hypothesis_holds(3, 13, 13)
    assert hp_hypothesis_holds(7, 125, 5)
    for p in (5, 13, 17, 29, 101):
        # n - 1 + (p-1)/2 reaches p exactly at n = (p+3)/2
        assert all(hp_hypothesis_holds(n, p, p) for n in range(2, (p + 1) // 2 + 1))
        assert not hp_hypothesis_holds((p + 3) // 2, p, p)


def test_select_n_cubic_examples():
    assert select_n_cubic(49, 13) == 46
    assert select_n_cubic(3 * 13 + 2 + 1, 13) == 3 * 13 + 2 + 1
    # (3, 1)_5 has leading digit above floor(sqrt(5)); there binom(78, 62) = 0 mod 5
    with pytest.raises(OutOfWindow):
        select_n_cubic(17, 5)
    with pytest.raises(OutOfWindow):
        select_n_cubic(5, 5)


def test_select_n_general_examples():
    assert select_n_general(60, 5, 2) == 58   # (2,1,4) -> (2,1,2)
    assert select_n_general(71, 5, 2) == 63   # (2,4,0) -> (2,2,2)
    with pytest.raises(OutOfWindow):
        select_n_general(10, 5, 2)


def _admissible(p, s):
    from math import isqrt
    lo, hi = isqrt((p - 1) // 2), isqrt(p)
    return [N for N in range(p**s + 1, p ** (s + 1) + 1) if lo <= to_base_p(N - 1, p)[s] <= hi]


@pytest.mark.parametrize("p, s", [(5, 1), (13, 1), (17, 1), (5, 2), (13, 2), (17, 2)])
def test_select_n_postconditions_exhaustive(p, s):
    q = p ** (2 * s + 1)
    window = (p**s - 1) // 2
    for N in _admissible(p, s):
        n = select_n_cubic(N, p) if s == 1 else select_n_general(N, p, s)
        assert n <= N <= n + window
        assert hp_hypothesis_holds(n, q, p)


def test_compute_L_examples():
    assert compute_L(3, 13, 13) == {0, 1, 2}
    assert compute_L(7, 125, 5) == set(range(7))
    for q, p in [(13, 13), (125, 5), (3125, 5)]:
        assert compute_L(1, q, p) == {0}


def test_compute_M_examples():
    M = compute_M(7, 125, 5)
    assert 7 in M and 24 not in M
    assert all(7 <= m <= 62 for m in M)


def test_special_shape():
    assert special_form_candidates(5, 2) == [49, 74]
    assert is_special_form(49, 5, 2)
    assert not is_special_form(48, 5, 2)
    cands13 = special_form_candidates(13, 2)
    assert all(is_special_form(n, 13, 2) for n in cands13)
    assert all(to_base_p(n - 1, 13)[0] == 7 and to_base_p(n - 1, 13)[1] > 7 for n in cands13)


@pytest.mark.parametrize("p, s", [(5, 2), (13, 2)])
def test_L_digit_lemma(p, s):
    q = p ** (2 * s + 1)
    h = (p - 1) // 2
    for n in special_form_candidates(p, s):
        for l in compute_L(n, q, p):
            d = to_base_p(l, p)
            assert d[0] <= h + 1
            assert all(d[j] <= h for j in range(1, s - 1))


@pytest.mark.parametrize("p, q", [(5, 5**5), (13, 13**5)])
def test_L_smaller_than_n(p, q):
    # the missing exponent (p+3)/2 only lies below n once n >= (p+5)/2
    for n in range((p + 5) // 2, 201):
        if (n - 1) % p == (p + 1) // 2:
            L = compute_L(n, q, p)
            assert len(L) < n
            assert (p + 3) // 2 not in L


@pytest.mark.parametrize("p, q", [(5, 5**5), (13, 13**5)])
def test_L_full_at_smallest_n(p, q):
    n = (p + 3) // 2
    assert compute_L(n, q, p) == set(range(n))


def test_M_digit_description():
    q = 5**5
    n = 49
    M = compute_M(n, q, 5)
    assert M_by_digits(n, q, 5, 2) == M
    literal = M_by_digits(n, q, 5, 2, literal=True)
    assert literal < M
    assert 75 in M and 75 not in literal   # 75 = (0,0,3,0,0)_5
    with pytest.raises(BadForm):
        M_by_digits(74, q, 5, 2)  # top digit carries


def test_M_digit_description_p13():
    q = 13**5
    for n in special_form_candidates(13, 2)[:4]:
        assert M_by_digits(n, q, 13, 2) == compute_M(n, q, 13)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 5000), st.integers(0, 5000), st.sampled_from([3, 5, 7, 13]))
def test_binom_zero_iff_digit_exceeds(m, n, p):
    dm, dn = to_base_p(m, p), to_base_p(n, p)
    exceeds = any(dn[j] > dm[j] for j in range(max(len(dm), len(dn))))
    assert (binom_mod_p(m, n, p) == 0) == exceeds


@pytest.mark.parametrize("p, q", [(13, 13), (5, 125), (5, 3125), (13, 13**3)])
def test_zero_in_L(p, q):
    # k = 0 contributes binom(e, 0) binom(n-1, 0) = 1, so 0 is always present
    assert all(0 in compute_L(n, q, p) for n in range(1, 120))
