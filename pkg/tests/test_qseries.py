import gzip
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from automobius.errors import ArgumentError, DataError
from automobius.qseries import (
    EIGENFORMS,
    EigenformSpec,
    IntSeries,
    SeriesFactory,
    delta_expansion,
    divisor_sigma_table,
    eigenform_coeffs,
    eisenstein,
    load_series,
    multiply,
    save_series,
)


# -- independent oracles: schoolbook products and trial-division sigma

def naive_mul(a, b, N):
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return out


def naive_sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def naive_delta(N):
    # q * prod_{n <= N} (1 - q^n)^24 by repeated multiplication by (1 - q^n)
    c = [1] + [0] * N
    for n in range(1, N + 1):
        for _ in range(24):
            for i in range(N, n - 1, -1):
                c[i] -= c[i - n]
    return [0] + c[:N]


def naive_eisenstein(k, N):
    f = {4: 240, 6: -504}[k]
    return [1] + [f * naive_sigma(k - 1, n) for n in range(1, N + 1)]


NAIVE_N = 40


@pytest.fixture(scope="module")
def naive_forms():
    d, e4, e6 = naive_delta(NAIVE_N), naive_eisenstein(4, NAIVE_N), naive_eisenstein(6, NAIVE_N)
    base = {"Delta": d, "E4": e4, "E6": e6}
    out = {}
    for fid, spec in EIGENFORMS.items():
        acc = [1] + [0] * NAIVE_N
        for r in spec.recipe:
            acc = naive_mul(acc, base[r], NAIVE_N)
        out[fid] = acc
    return out


def test_delta_small_cases():
    assert delta_expansion(1).coeffs == (0, 1)
    d = delta_expansion(3)
    assert d[2] == -24 and d[3] == 252


def test_delta_known_tau_values():
    # tau(1..10)
    tau = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
    assert list(delta_expansion(10).coeffs[1:]) == tau


def test_delta_matches_naive_product():
    assert list(delta_expansion(NAIVE_N).coeffs) == naive_delta(NAIVE_N)


def test_delta_rejects_bad_N():
    with pytest.raises(ArgumentError):
        delta_expansion(0)


def test_ramanujan_congruence_small():
    d = delta_expansion(600)
    assert all((d[n] - naive_sigma(11, n)) % 691 == 0 for n in range(1, 601))


def test_eisenstein_examples():
    assert eisenstein(4, 2).coeffs == (1, 240, 2160)
    assert eisenstein(6, 1).coeffs == (1, -504)
    assert eisenstein(4, 0).coeffs == (1,)
    with pytest.raises(ArgumentError):
        eisenstein(8, 3)


def test_divisor_sigma_against_trial_division():
    for k in (0, 1, 3, 5, 11):
        table = divisor_sigma_table(k, 120)
        assert [table[n] for n in range(1, 121)] == [naive_sigma(k, n) for n in range(1, 121)]


def test_multiply_examples():
    one_one = IntSeries([1, 1])
    assert multiply(one_one, one_one).coeffs == (1, 2)
    d2, e2 = delta_expansion(2), eisenstein(4, 2)
    assert multiply(d2, e2)[2] == -24 + 240
    s = IntSeries([3, -1, 4, 1, -5])
    assert multiply(s, IntSeries([1])).coeffs == (3,)
    assert multiply(s, IntSeries([1, 0, 0, 0, 0])) == s


coeff_lists = st.lists(st.integers(-(10 ** 30), 10 ** 30), min_size=1, max_size=90)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists)
def test_multiply_matches_schoolbook(a, b):
    N = min(len(a), len(b)) - 1
    got = multiply(IntSeries(a), IntSeries(b))
    assert list(got.coeffs) == naive_mul(a, b, N)


@settings(max_examples=40, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_multiply_commutative_associative(a, b, c):
    A, B, C = IntSeries(a), IntSeries(b), IntSeries(c)
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)


def test_multiply_large_signed_kronecker():
    # long enough to take the packed path, with mixed signs and zeros
    a = [((-1) ** n) * (n * n * 7919 % 10007) for n in range(300)]
    b = [0 if n % 5 == 0 else (n ** 3) * (-1) ** (n // 3) for n in range(300)]
    assert list(multiply(IntSeries(a), IntSeries(b)).coeffs) == naive_mul(a, b, 299)


def test_eigenforms_match_naive_construction(naive_forms):
    f = SeriesFactory(NAIVE_N)
    for fid, spec in EIGENFORMS.items():
        assert list(f.form(spec).coeffs) == naive_forms[fid], fid


def test_eigenform_known_second_coefficients():
    # a(2) of the normalized level-one eigenforms of weight 12..26
    expected = {"f12": -24, "f16": 216, "f18": -528, "f20": 456, "f22": -288, "f26": -48}
    for fid, a2 in expected.items():
        c = eigenform_coeffs(fid, 2)
        assert c[1] == 1 and c[2] == a2, fid


def test_eigenform_f16_head():
    assert eigenform_coeffs("f16", 5).coeffs == (0, 1, 216, -3348, 13888, 52110)


def test_hecke_multiplicativity_and_recursion_exact():
    N = 3000
    fac = SeriesFactory(N)
    for fid, spec in EIGENFORMS.items():
        a, k = fac.form(spec), spec.weight
        for m in range(2, 55):
            for n in range(2, 55):
                if m * n <= N and math.gcd(m, n) == 1:
                    assert a[m * n] == a[m] * a[n], (fid, m, n)
        for p in (2, 3, 5, 7, 11, 13):
            prev, cur, q = 1, a[p], p
            while q * p <= N:
                assert a[q * p] == a[p] * cur - p ** (k - 1) * prev, (fid, p, q * p)
                prev, cur, q = cur, a[q * p], q * p


def test_spec_weight_checked():
    with pytest.raises(ArgumentError):
        EigenformSpec("bad", 14, ("E4", "Delta"))
    with pytest.raises(ArgumentError):
        eigenform_coeffs("f14", 3)


def test_series_cache_roundtrip(tmp_path):
    s = eigenform_coeffs("f22", 50)
    path = tmp_path / "f22.txt.gz"
    save_series(s, path, "f22")
    assert load_series(path) == s


def test_series_cache_rejects_corruption(tmp_path):
    path = tmp_path / "bad.txt.gz"
    with gzip.open(path, "wt") as fh:
        fh.write("# f12 N=3\n0 0\n1 1\n3 252\n")
    with pytest.raises(DataError):
        load_series(path)
